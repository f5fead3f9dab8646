// Line-delimited scenario records (one JSON object per line).
//
// Record layout (field names are stable; see README for a full example):
//
//   id        string
//   header    { agents:[..], rooms:[..], containers:[{id, room}], objects:[..],
//               attributes:[..],
//               initial:{ agent_room:{agent:room}, object_loc:{object:container},
//                         attributes:[{object, attribute, value}] } }
//   events    [ {kind, t?, ...} ]  kinds: enter/leave{agent,room}, move{mover?,object,to},
//             state_set{object,attribute,value,cause_visible?}, utter{speaker,scope,listeners?,claim},
//             goal_decl{agent,goal}, act{agent,action}
//   question  { kind_hint?, text, target_path:[..], subject:{object?,agent?,attribute?},
//               options:[{label, claim|action|intent}], gold? }
//   meta      { benchmark, question_type, belief_order?, visibility }
#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>  // nlohmann/json, vendored

#include "event_model.hpp"
#include "metrics.hpp"

namespace mindtrace {

namespace detail {

using nlohmann::json;

struct Reader {
    std::size_t line;

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        throw ParseError(line, field, what);
    }

    const json& member(const json& obj, const char* key, const std::string& path) const {
        if (!obj.is_object()) fail(path, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing field");
        return *it;
    }

    const json* optional_member(const json& obj, const char* key) const {
        auto it = obj.find(key);
        return (it == obj.end() || it->is_null()) ? nullptr : &*it;
    }

    std::string str(const json& obj, const char* key, const std::string& path) const {
        const auto& v = member(obj, key, path);
        std::string field = path.empty() ? key : path + "." + key;
        if (!v.is_string()) fail(field, "expected a string");
        auto s = v.get<std::string>();
        if (s.empty()) fail(field, "empty token");
        return s;
    }

    std::optional<std::string> opt_str(const json& obj, const char* key, const std::string& path) const {
        if (!optional_member(obj, key)) return std::nullopt;
        return str(obj, key, path);
    }

    std::vector<std::string> str_list(const json& v, const std::string& field) const {
        if (!v.is_array()) fail(field, "expected an array");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string() || v[i].get<std::string>().empty())
                fail(field + "[" + std::to_string(i) + "]", "expected a non-empty string");
            out.push_back(v[i].get<std::string>());
        }
        return out;
    }

    Goal goal(const json& v, const std::string& path) const {
        Goal g;
        auto kind = str(v, "kind", path);
        if (kind == "fetch") g.kind = GoalKind::fetch;
        else if (kind == "use") g.kind = GoalKind::use;
        else if (kind == "locate") g.kind = GoalKind::locate;
        else if (kind == "task") g.kind = GoalKind::task;
        else fail(path + ".kind", "unknown goal kind '" + kind + "'");
        g.target = str(v, g.kind == GoalKind::task ? "label" : "object", path);
        if (auto* r = optional_member(v, "requires")) {
            auto rp = path + ".requires";
            g.requirement = Requirement{str(*r, "object", rp), str(*r, "attribute", rp), str(*r, "value", rp)};
        }
        return g;
    }

    Claim claim(const json& v, const std::string& path) const {
        auto type = str(v, "type", path);
        if (type == "at") return AtClaim{str(v, "object", path), str(v, "container", path)};
        if (type == "goal_of") return GoalClaim{str(v, "agent", path), goal(member(v, "goal", path), path + ".goal")};
        if (type == "attr")
            return AttrClaim{str(v, "object", path), str(v, "attribute", path), str(v, "value", path)};
        fail(path + ".type", "unknown claim type '" + type + "'");
    }

    Action action(const json& v, const std::string& path) const {
        auto kind = str(v, "kind", path);
        if (kind == "search") return Action::search(str(v, "container", path));
        if (kind == "exploit") return Action::exploit(str(v, "object", path), str(v, "container", path));
        if (kind == "proceed") return Action::proceed(str(v, "label", path));
        if (kind == "avoid") return Action::avoid(str(v, "object", path));
        if (kind == "communicate") return Action::communicate(claim(member(v, "claim", path), path + ".claim"));
        if (kind == "none") return Action::none();
        fail(path + ".kind", "unknown action kind '" + kind + "'");
    }

    Intent intent(const std::string& s, const std::string& field) const {
        if (s == "helping") return Intent::helping;
        if (s == "hindering") return Intent::hindering;
        fail(field, "unknown intent '" + s + "'");
    }

    EventBody event(const json& v, const std::string& path) const {
        auto kind = str(v, "kind", path);
        if (kind == "enter") return Enter{str(v, "agent", path), str(v, "room", path)};
        if (kind == "leave") return Leave{str(v, "agent", path), str(v, "room", path)};
        if (kind == "move") return Move{opt_str(v, "mover", path), str(v, "object", path), str(v, "to", path)};
        if (kind == "state_set") {
            StateSet s{str(v, "object", path), str(v, "attribute", path), str(v, "value", path), true};
            if (auto* cv = optional_member(v, "cause_visible")) {
                if (!cv->is_boolean()) fail(path + ".cause_visible", "expected a boolean");
                s.cause_visible = cv->get<bool>();
            }
            return s;
        }
        if (kind == "utter") {
            Utter u;
            u.speaker = str(v, "speaker", path);
            auto scope = str(v, "scope", path);
            if (scope == "private") u.is_private = true;
            else if (scope != "public") fail(path + ".scope", "expected 'public' or 'private'");
            if (u.is_private) u.listeners = str_list(member(v, "listeners", path), path + ".listeners");
            u.claim = claim(member(v, "claim", path), path + ".claim");
            return u;
        }
        if (kind == "goal_decl") return GoalDecl{str(v, "agent", path), goal(member(v, "goal", path), path + ".goal")};
        if (kind == "act") return Act{str(v, "agent", path), action(member(v, "action", path), path + ".action")};
        fail(path + ".kind", "unknown event kind '" + kind + "'");
    }
};

inline json write_goal(const Goal& g) {
    json j = {{"kind", to_string(g.kind)}};
    j[g.kind == GoalKind::task ? "label" : "object"] = g.target;
    if (g.requirement)
        j["requires"] = {{"object", g.requirement->object},
                         {"attribute", g.requirement->attribute},
                         {"value", g.requirement->value}};
    return j;
}

inline json write_claim(const Claim& c) {
    return std::visit(
        [](const auto& b) -> json {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, AtClaim>)
                return {{"type", "at"}, {"object", b.object}, {"container", b.container}};
            else if constexpr (std::is_same_v<T, GoalClaim>)
                return {{"type", "goal_of"}, {"agent", b.agent}, {"goal", write_goal(b.goal)}};
            else
                return {{"type", "attr"}, {"object", b.object}, {"attribute", b.attribute}, {"value", b.value}};
        },
        c);
}

inline json write_action(const Action& a) {
    json j = {{"kind", to_string(a.kind)}};
    switch (a.kind) {
        case ActionKind::search: j["container"] = a.container; break;
        case ActionKind::exploit: j["object"] = a.object; j["container"] = a.container; break;
        case ActionKind::proceed: j["label"] = a.label; break;
        case ActionKind::avoid: j["object"] = a.object; break;
        case ActionKind::communicate: j["claim"] = write_claim(*a.claim); break;
        case ActionKind::none: break;
    }
    return j;
}

inline json write_event(const Event& e) {
    json j = std::visit(
        [](const auto& b) -> json {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Enter>)
                return {{"kind", "enter"}, {"agent", b.agent}, {"room", b.room}};
            else if constexpr (std::is_same_v<T, Leave>)
                return {{"kind", "leave"}, {"agent", b.agent}, {"room", b.room}};
            else if constexpr (std::is_same_v<T, Move>) {
                json m = {{"kind", "move"}, {"object", b.object}, {"to", b.to}};
                if (b.mover) m["mover"] = *b.mover;
                return m;
            } else if constexpr (std::is_same_v<T, StateSet>)
                return {{"kind", "state_set"}, {"object", b.object}, {"attribute", b.attribute},
                        {"value", b.value}, {"cause_visible", b.cause_visible}};
            else if constexpr (std::is_same_v<T, Utter>) {
                json u = {{"kind", "utter"}, {"speaker", b.speaker},
                          {"scope", b.is_private ? "private" : "public"}, {"claim", write_claim(b.claim)}};
                if (b.is_private) u["listeners"] = b.listeners;
                return u;
            } else if constexpr (std::is_same_v<T, GoalDecl>)
                return {{"kind", "goal_decl"}, {"agent", b.agent}, {"goal", write_goal(b.goal)}};
            else
                return {{"kind", "act"}, {"agent", b.agent}, {"action", write_action(b.action)}};
        },
        e.body);
    j["t"] = e.time;
    return j;
}

inline void require(bool ok, const char* what, const std::string& id) {
    if (!ok) throw SchemaError(what, id);
}

inline void validate_goal(const Declarations& d, const Goal& g) {
    if (g.has_object()) require(d.has_object(g.target), "undeclared object", g.target);
    if (g.requirement) {
        require(d.has_object(g.requirement->object), "undeclared object", g.requirement->object);
        require(d.has_attribute(g.requirement->attribute), "undeclared attribute", g.requirement->attribute);
    }
}

inline void validate_claim(const Declarations& d, const Claim& c) {
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, AtClaim>) {
                require(d.has_object(b.object), "undeclared object", b.object);
                require(d.has_container(b.container), "undeclared container", b.container);
            } else if constexpr (std::is_same_v<T, GoalClaim>) {
                require(d.has_agent(b.agent), "undeclared agent", b.agent);
                validate_goal(d, b.goal);
            } else {
                require(d.has_object(b.object), "undeclared object", b.object);
                require(d.has_attribute(b.attribute), "undeclared attribute", b.attribute);
            }
        },
        c);
}

inline void validate_action(const Declarations& d, const Action& a) {
    if (a.kind == ActionKind::search || a.kind == ActionKind::exploit)
        require(d.has_container(a.container), "undeclared container", a.container);
    if (a.kind == ActionKind::exploit || a.kind == ActionKind::avoid)
        require(d.has_object(a.object), "undeclared object", a.object);
    if (a.kind == ActionKind::communicate) validate_claim(d, *a.claim);
}

inline void validate_event(const Declarations& d, const Event& e) {
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Enter> || std::is_same_v<T, Leave>) {
                require(d.has_agent(b.agent), "undeclared agent", b.agent);
                require(d.has_room(b.room), "undeclared room", b.room);
            } else if constexpr (std::is_same_v<T, Move>) {
                if (b.mover) require(d.has_agent(*b.mover), "undeclared agent", *b.mover);
                require(d.has_object(b.object), "undeclared object", b.object);
                require(d.has_container(b.to), "undeclared container", b.to);
            } else if constexpr (std::is_same_v<T, StateSet>) {
                require(d.has_object(b.object), "undeclared object", b.object);
                require(d.has_attribute(b.attribute), "undeclared attribute", b.attribute);
            } else if constexpr (std::is_same_v<T, Utter>) {
                require(d.has_agent(b.speaker), "undeclared agent", b.speaker);
                if (b.is_private) {
                    require(!b.listeners.empty(), "private utterance with no listeners from", b.speaker);
                    for (const auto& l : b.listeners) require(d.has_agent(l), "undeclared agent", l);
                }
                validate_claim(d, b.claim);
            } else if constexpr (std::is_same_v<T, GoalDecl>) {
                require(d.has_agent(b.agent), "undeclared agent", b.agent);
                validate_goal(d, b.goal);
            } else {
                require(d.has_agent(b.agent), "undeclared agent", b.agent);
                validate_action(d, b.action);
            }
        },
        e.body);
}

inline void require_unique(const std::vector<std::string>& ids, const char* kind) {
    std::set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second) throw SchemaError(std::string("duplicate ") + kind, id);
}

}  // namespace detail

/// Validates declarations, references, option labels and the state fold.
inline void validate_scenario(const Scenario& s) {
    using namespace detail;
    const auto& d = s.decl;
    require_unique(d.agents, "agent");
    require_unique(d.rooms, "room");
    require_unique(d.containers, "container");
    require_unique(d.objects, "object");
    require_unique(d.attributes, "attribute");

    for (const auto& [agent, room] : s.initial.agent_room) {
        require(d.has_agent(agent), "undeclared agent", agent);
        require(d.has_room(room), "undeclared room", room);
    }
    for (const auto& [container, room] : s.initial.container_room) {
        require(d.has_container(container), "undeclared container", container);
        require(d.has_room(room), "undeclared room", room);
    }
    for (const auto& [object, container] : s.initial.object_loc) {
        require(d.has_object(object), "undeclared object", object);
        require(d.has_container(container), "undeclared container", container);
    }
    for (const auto& [key, value] : s.initial.attributes) {
        require(d.has_object(key.first), "undeclared object", key.first);
        require(d.has_attribute(key.second), "undeclared attribute", key.second);
    }
    check_world_invariants(s.initial);

    for (const auto& e : s.events) validate_event(d, e);

    const auto& q = s.question;
    for (const auto& a : q.target_path) require(d.has_agent(a), "undeclared agent", a);
    if (q.subject.object) require(d.has_object(*q.subject.object), "undeclared object", *q.subject.object);
    if (q.subject.agent) require(d.has_agent(*q.subject.agent), "undeclared agent", *q.subject.agent);
    if (q.subject.attribute)
        require(d.has_attribute(*q.subject.attribute), "undeclared attribute", *q.subject.attribute);
    if (q.options.size() < 2) throw SchemaError("fewer than two options in question", s.id);
    std::set<std::string> labels;
    for (const auto& o : q.options) {
        require(labels.insert(o.label).second, "duplicate option label", o.label);
        if (auto* c = std::get_if<Claim>(&o.payload)) validate_claim(d, *c);
        else if (auto* a = std::get_if<Action>(&o.payload)) validate_action(d, *a);
        else if (auto* i = std::get_if<IntentClaim>(&o.payload)) {
            require(d.has_agent(i->speaker), "undeclared agent", i->speaker);
            require(d.has_agent(i->listener), "undeclared agent", i->listener);
        }
    }
    if (q.gold) require(labels.count(*q.gold) == 1, "gold label is not an option", *q.gold);

    WorldState state = s.initial;
    for (const auto& e : s.events) {
        state = apply_event(state, e);
        check_world_invariants(state);
    }
}

/// Parses one record line. Event times are normalized to 1..T in story order.
inline Scenario parse_scenario(std::string_view record, std::size_t line = 1) {
    using detail::json;
    detail::Reader r{line};
    json root;
    try {
        root = json::parse(record);
    } catch (const json::parse_error& e) {
        throw ParseError(line, "<record>", std::string("invalid JSON at byte ") + std::to_string(e.byte));
    }
    if (!root.is_object()) r.fail("<record>", "expected an object");

    Scenario s;
    s.id = r.str(root, "id", "");

    const auto& header = r.member(root, "header", "");
    auto& d = s.decl;
    d.agents = r.str_list(r.member(header, "agents", "header"), "header.agents");
    d.rooms = r.str_list(r.member(header, "rooms", "header"), "header.rooms");
    d.objects = r.str_list(r.member(header, "objects", "header"), "header.objects");
    if (auto* attrs = r.optional_member(header, "attributes"))
        d.attributes = r.str_list(*attrs, "header.attributes");

    const auto& containers = r.member(header, "containers", "header");
    if (!containers.is_array()) r.fail("header.containers", "expected an array");
    for (std::size_t i = 0; i < containers.size(); ++i) {
        auto path = "header.containers[" + std::to_string(i) + "]";
        d.containers.push_back(r.str(containers[i], "id", path));
        if (auto room = r.opt_str(containers[i], "room", path)) s.initial.container_room[d.containers.back()] = *room;
    }

    const auto& init = r.member(header, "initial", "header");
    auto read_map = [&](const char* key, auto& out) {
        auto* m = r.optional_member(init, key);
        if (!m) return;
        auto path = std::string("header.initial.") + key;
        if (!m->is_object()) r.fail(path, "expected an object");
        for (const auto& [k, v] : m->items()) {
            if (!v.is_string() || v.template get<std::string>().empty()) r.fail(path + "." + k, "expected a non-empty string");
            out[k] = v.template get<std::string>();
        }
    };
    read_map("agent_room", s.initial.agent_room);
    read_map("object_loc", s.initial.object_loc);
    if (auto* attrs = r.optional_member(init, "attributes")) {
        if (!attrs->is_array()) r.fail("header.initial.attributes", "expected an array");
        for (std::size_t i = 0; i < attrs->size(); ++i) {
            auto path = "header.initial.attributes[" + std::to_string(i) + "]";
            const auto& a = (*attrs)[i];
            s.initial.attributes[{r.str(a, "object", path), r.str(a, "attribute", path)}] = r.str(a, "value", path);
        }
    }

    const auto& events = r.member(root, "events", "");
    if (!events.is_array()) r.fail("events", "expected an array");
    std::vector<std::pair<double, EventBody>> timed;
    std::size_t with_time = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        auto path = "events[" + std::to_string(i) + "]";
        double t = static_cast<double>(i);
        if (auto* tv = r.optional_member(events[i], "t")) {
            if (!tv->is_number()) r.fail(path + ".t", "expected a number");
            t = tv->get<double>();
            ++with_time;
        }
        timed.emplace_back(t, r.event(events[i], path));
    }
    if (with_time != 0 && with_time != events.size())
        r.fail("events", "either every event carries 't' or none does");
    std::stable_sort(timed.begin(), timed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < timed.size(); ++i) s.events.push_back({i + 1, std::move(timed[i].second)});

    const auto& q = r.member(root, "question", "");
    s.question.kind_hint = r.opt_str(q, "kind_hint", "question");
    if (auto* text = r.optional_member(q, "text")) {
        if (!text->is_string()) r.fail("question.text", "expected a string");
        s.question.text = text->get<std::string>();
    }
    s.question.target_path = r.str_list(r.member(q, "target_path", "question"), "question.target_path");
    if (auto* subj = r.optional_member(q, "subject")) {
        s.question.subject.object = r.opt_str(*subj, "object", "question.subject");
        s.question.subject.agent = r.opt_str(*subj, "agent", "question.subject");
        s.question.subject.attribute = r.opt_str(*subj, "attribute", "question.subject");
    }
    const auto& options = r.member(q, "options", "question");
    if (!options.is_array()) r.fail("question.options", "expected an array");
    for (std::size_t i = 0; i < options.size(); ++i) {
        auto path = "question.options[" + std::to_string(i) + "]";
        const auto& o = options[i];
        Option opt;
        opt.label = r.str(o, "label", path);
        if (auto* c = r.optional_member(o, "claim")) opt.payload = r.claim(*c, path + ".claim");
        else if (auto* a = r.optional_member(o, "action")) opt.payload = r.action(*a, path + ".action");
        else if (auto* in = r.optional_member(o, "intent")) {
            auto ip = path + ".intent";
            opt.payload = IntentClaim{r.str(*in, "speaker", ip), r.str(*in, "listener", ip),
                                      r.intent(r.str(*in, "intent", ip), ip + ".intent")};
        } else r.fail(path, "option needs one of 'claim', 'action', 'intent'");
        s.question.options.push_back(std::move(opt));
    }
    s.question.gold = r.opt_str(q, "gold", "question");

    if (auto* meta = r.optional_member(root, "meta")) {
        if (!meta->is_object()) r.fail("meta", "expected an object");
        for (const auto& [k, v] : meta->items())
            if (k != "benchmark" && k != "question_type" && k != "belief_order" && k != "visibility")
                r.fail("meta." + k, "unknown meta field");
        s.meta.benchmark = r.opt_str(*meta, "benchmark", "meta").value_or("");
        s.meta.question_type = r.opt_str(*meta, "question_type", "meta").value_or("");
        s.meta.visibility = r.opt_str(*meta, "visibility", "meta").value_or("");
        if (auto* bo = r.optional_member(*meta, "belief_order")) {
            if (!bo->is_number_unsigned()) r.fail("meta.belief_order", "expected a non-negative integer");
            s.meta.belief_order = bo->get<std::size_t>();
        }
    }

    validate_scenario(s);
    return s;
}

/// Writes one record line; normalized times are emitted as 't'.
inline std::string serialize_scenario(const Scenario& s) {
    using detail::json;
    json containers = json::array();
    for (const auto& c : s.decl.containers) {
        json cj = {{"id", c}};
        if (auto room = s.initial.room_of_container(c)) cj["room"] = *room;
        containers.push_back(cj);
    }
    json attrs = json::array();
    for (const auto& [key, value] : s.initial.attributes)
        attrs.push_back({{"object", key.first}, {"attribute", key.second}, {"value", value}});
    json initial = {{"agent_room", s.initial.agent_room},
                    {"object_loc", s.initial.object_loc},
                    {"attributes", attrs}};
    json header = {{"agents", s.decl.agents},       {"rooms", s.decl.rooms},
                   {"containers", containers},      {"objects", s.decl.objects},
                   {"attributes", s.decl.attributes}, {"initial", initial}};

    json events = json::array();
    for (const auto& e : s.events) events.push_back(detail::write_event(e));

    const auto& q = s.question;
    json options = json::array();
    for (const auto& o : q.options) {
        json oj = {{"label", o.label}};
        if (auto* c = std::get_if<Claim>(&o.payload)) oj["claim"] = detail::write_claim(*c);
        else if (auto* a = std::get_if<Action>(&o.payload)) oj["action"] = detail::write_action(*a);
        else {
            const auto& i = std::get<IntentClaim>(o.payload);
            oj["intent"] = {{"speaker", i.speaker}, {"listener", i.listener}, {"intent", to_string(i.intent)}};
        }
        options.push_back(oj);
    }
    json subject = json::object();
    if (q.subject.object) subject["object"] = *q.subject.object;
    if (q.subject.agent) subject["agent"] = *q.subject.agent;
    if (q.subject.attribute) subject["attribute"] = *q.subject.attribute;
    json question = {{"text", q.text}, {"target_path", q.target_path}, {"subject", subject}, {"options", options}};
    if (q.kind_hint) question["kind_hint"] = *q.kind_hint;
    if (q.gold) question["gold"] = *q.gold;

    json meta = {{"benchmark", s.meta.benchmark},
                 {"question_type", s.meta.question_type},
                 {"visibility", s.meta.visibility}};
    if (s.meta.belief_order) meta["belief_order"] = *s.meta.belief_order;

    json root = {{"id", s.id}, {"header", header}, {"events", events}, {"question", question}, {"meta", meta}};
    return root.dump();
}

/// One line of a record file: either a parsed scenario or the error that rejected it.
struct RecordLine {
    std::size_t line = 0;
    std::string raw;
    std::optional<Scenario> scenario;
    std::string error;
};

/// Reads every non-blank line of a record file. Per-line failures are kept, not thrown.
inline std::vector<RecordLine> read_record_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open record file: " + path);
    std::vector<RecordLine> out;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        RecordLine rec{line, text, std::nullopt, {}};
        try {
            rec.scenario = parse_scenario(text, line);
        } catch (const Error& e) {
            rec.error = e.what();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

/// One audit log line: {id, harness_answer, harness_correct, decision, override_answer?, override_correct?}.
inline AuditLogRecord parse_audit_record(std::string_view line) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("audit record is not a JSON object");
    AuditLogRecord r;
    try {
        r.id = j.at("id").get<std::string>();
        r.harness_answer = j.at("harness_answer").get<std::string>();
        r.harness_correct = j.at("harness_correct").get<bool>();
        auto d = j.at("decision").get<std::string>();
        if (d == "accept") r.decision = AuditDecision::accept;
        else if (d == "reject") r.decision = AuditDecision::reject;
        else if (d == "abstain") r.decision = AuditDecision::abstain;
        else throw Error("unknown audit decision '" + d + "'");
        if (j.contains("override_answer") && !j["override_answer"].is_null())
            r.override_answer = j["override_answer"].get<std::string>();
        if (j.contains("override_correct") && !j["override_correct"].is_null())
            r.override_correct = j["override_correct"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("audit record: ") + e.what());
    }
    return r;
}

}  // namespace mindtrace
