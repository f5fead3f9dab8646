// Brute-force ground truth: per-path replay of the whole story.
//
// Every belief path is recomputed from scratch by walking the event list and keeping
// only the events that all of the path's agents perceived. Nothing here calls into the
// perspective engine; the audience of each event is derived from an independent replay
// of who stands where.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "event_model.hpp"

namespace mindtrace::oracle {

using Path = std::vector<AgentId>;

struct PathTable {
    std::map<ObjectId, ContainerId> locations;
    std::map<std::pair<ObjectId, AttributeId>, std::string> attributes;
    std::map<AgentId, Goal> goals;
    bool operator==(const PathTable&) const = default;
};

struct GroundTruth {
    std::size_t max_order = 1;
    std::vector<std::map<Path, PathTable>> tables;          // index t: after event t (0 = initial)
    std::vector<std::map<ObjectId, ContainerId>> reality;   // index t: after event t
    std::optional<std::string> gold;

    const std::map<Path, PathTable>& final_tables() const { return tables.back(); }
    const std::map<ObjectId, ContainerId>& final_reality() const { return reality.back(); }
};

struct OracleOptions {
    bool distractor_scope = true;  // ignore content about entities the question never mentions
    bool nested = true;            // nested paths updated by joint perception
    bool communication = true;     // heard claims update hearers
};

/// Who perceives each event, indexed by event position, plus the placement before it.
struct Replay {
    std::vector<std::set<AgentId>> audience;
    std::vector<std::map<AgentId, RoomId>> presence;  // before each event
    std::vector<std::map<ObjectId, ContainerId>> placement;  // after each event (index 0 = initial)
};

inline Replay replay(const Scenario& s) {
    Replay r;
    std::map<AgentId, RoomId> where = s.initial.agent_room;
    std::map<ObjectId, ContainerId> loc = s.initial.object_loc;
    const auto& room_of = s.initial.container_room;
    auto room_for = [&](const ContainerId& c) -> std::string {
        auto it = room_of.find(c);
        return it == room_of.end() ? std::string() : it->second;
    };
    auto everyone_in = [&](const std::string& room, std::set<AgentId>& out) {
        if (room.empty()) return;
        for (const auto& [a, rm] : where)
            if (rm == room) out.insert(a);
    };
    auto room_of_agent = [&](const AgentId& a) -> std::string {
        auto it = where.find(a);
        return it == where.end() ? std::string() : it->second;
    };

    r.placement.push_back(loc);
    for (const auto& e : s.events) {
        std::set<AgentId> who;
        if (auto* b = std::get_if<Enter>(&e.body)) {
            who.insert(b->agent);
            everyone_in(b->room, who);
        } else if (auto* b = std::get_if<Leave>(&e.body)) {
            who.insert(b->agent);
            everyone_in(b->room, who);
        } else if (auto* b = std::get_if<Move>(&e.body)) {
            everyone_in(room_for(b->to), who);
        } else if (auto* b = std::get_if<StateSet>(&e.body)) {
            if (b->cause_visible && loc.count(b->object)) everyone_in(room_for(loc[b->object]), who);
        } else if (auto* b = std::get_if<Utter>(&e.body)) {
            who.insert(b->speaker);
            if (b->is_private) who.insert(b->listeners.begin(), b->listeners.end());
            else everyone_in(room_of_agent(b->speaker), who);
        } else if (auto* b = std::get_if<GoalDecl>(&e.body)) {
            who.insert(b->agent);
            everyone_in(room_of_agent(b->agent), who);
        } else if (auto* b = std::get_if<Act>(&e.body)) {
            who.insert(b->agent);
            everyone_in(room_of_agent(b->agent), who);
        }
        r.audience.push_back(std::move(who));
        r.presence.push_back(where);

        if (auto* b = std::get_if<Enter>(&e.body)) where[b->agent] = b->room;
        else if (auto* b = std::get_if<Leave>(&e.body)) where.erase(b->agent);
        else if (auto* b = std::get_if<Move>(&e.body)) loc[b->object] = b->to;
        r.placement.push_back(loc);
    }
    return r;
}

/// All agent sequences of length 1..max_order with no agent following itself.
inline std::vector<Path> all_paths(const std::vector<AgentId>& agents, std::size_t max_order) {
    std::vector<Path> out;
    std::vector<Path> layer;
    for (const auto& a : agents) layer.push_back({a});
    for (std::size_t len = 1; len <= max_order && !layer.empty(); ++len) {
        out.insert(out.end(), layer.begin(), layer.end());
        std::vector<Path> next;
        for (const auto& p : layer)
            for (const auto& a : agents)
                if (a != p.back()) {
                    auto q = p;
                    q.push_back(a);
                    next.push_back(std::move(q));
                }
        layer = std::move(next);
    }
    return out;
}

inline GroundTruth oracle_beliefs(const Scenario& s, std::size_t max_order, const OracleOptions& opt = {}) {
    max_order = std::max<std::size_t>(max_order, 1);
    const Replay rp = replay(s);
    const std::size_t T = s.events.size();
    const auto scope = question_scope(s.question);

    GroundTruth gt;
    gt.max_order = max_order;
    gt.tables.resize(T + 1);
    gt.reality = rp.placement;

    for (const Path& path : all_paths(s.decl.agents, max_order)) {
        PathTable table;
        bool nested = path.size() > 1;
        if (!nested || opt.nested) {
            for (const auto& [object, container] : s.initial.object_loc) {
                auto room = s.initial.container_room.find(container);
                if (room == s.initial.container_room.end()) continue;
                bool together = true;
                for (const auto& a : path) {
                    auto at = s.initial.agent_room.find(a);
                    together = together && at != s.initial.agent_room.end() && at->second == room->second;
                }
                if (!together) continue;
                table.locations[object] = container;
                for (const auto& [key, value] : s.initial.attributes)
                    if (key.first == object) table.attributes[key] = value;
            }
        }
        gt.tables[0][path] = table;

        for (std::size_t i = 0; i < T; ++i) {
            const Event& e = s.events[i];
            bool seen_by_all = true;
            for (const auto& a : path) seen_by_all = seen_by_all && rp.audience[i].count(a);
            bool relevant = !opt.distractor_scope || scope.count(event_subject(e));
            if (seen_by_all && relevant && (!nested || opt.nested)) {
                if (auto* m = std::get_if<Move>(&e.body)) {
                    table.locations[m->object] = m->to;
                } else if (auto* st = std::get_if<StateSet>(&e.body)) {
                    table.attributes[{st->object, st->attribute}] = st->value;
                } else if (auto* d = std::get_if<GoalDecl>(&e.body)) {
                    table.goals[d->agent] = d->goal;
                } else if (auto* u = std::get_if<Utter>(&e.body)) {
                    bool own_words = path.size() == 1 && path[0] == u->speaker;
                    if (opt.communication && !own_words) {
                        if (auto* c = std::get_if<AtClaim>(&u->claim)) table.locations[c->object] = c->container;
                        if (auto* c = std::get_if<AttrClaim>(&u->claim))
                            table.attributes[{c->object, c->attribute}] = c->value;
                        if (auto* c = std::get_if<GoalClaim>(&u->claim)) table.goals[c->agent] = c->goal;
                    }
                }
            }
            gt.tables[i + 1][path] = table;
        }
    }
    return gt;
}

namespace detail {

inline std::optional<std::string> unique_label(const Question& q, const auto& accept) {
    std::optional<std::string> found;
    for (const auto& o : q.options) {
        if (!accept(o.payload)) continue;
        if (found) return std::nullopt;
        found = o.label;
    }
    return found;
}

inline std::optional<ContainerId> claimed_container(const OptionPayload& p, const ObjectId& object) {
    if (auto* c = std::get_if<Claim>(&p))
        if (auto* at = std::get_if<AtClaim>(c); at && at->object == object) return at->container;
    return std::nullopt;
}

inline std::optional<ObjectId> asked_object(const Question& q) {
    if (q.subject.object) return q.subject.object;
    for (const auto& o : q.options)
        if (auto* c = std::get_if<Claim>(&o.payload))
            if (auto* at = std::get_if<AtClaim>(c)) return at->object;
    return std::nullopt;
}

}  // namespace detail

/// Answers the question straight from the tables; nullopt marks it undecidable.
inline std::optional<std::string> oracle_answer(const Scenario& s, const GroundTruth& gt) {
    const Question& q = s.question;
    const std::string hint = q.kind_hint.value_or("");
    const auto object = detail::asked_object(q);
    const Path path = q.target_path;

    auto table_at = [&](std::size_t t, const Path& p) -> const PathTable* {
        auto it = gt.tables.at(t).find(p);
        return it == gt.tables.at(t).end() ? nullptr : &it->second;
    };
    auto pick_container = [&](const ContainerId& c) {
        return detail::unique_label(q, [&](const OptionPayload& p) { return detail::claimed_container(p, *object) == c; });
    };

    if (hint == "reality") {
        if (!object) return std::nullopt;
        auto it = gt.final_reality().find(*object);
        if (it == gt.final_reality().end()) return std::nullopt;
        return pick_container(it->second);
    }

    if (hint == "belief" || hint == "memory") {
        if (path.empty() || path.size() > gt.max_order) return std::nullopt;
        if (hint == "memory") {
            if (!object) return std::nullopt;
            for (std::size_t t = 0; t < gt.tables.size(); ++t) {
                const auto* tb = table_at(t, path);
                if (!tb) return std::nullopt;
                if (auto it = tb->locations.find(*object); it != tb->locations.end()) return pick_container(it->second);
            }
            return std::nullopt;
        }
        const auto* tb = table_at(gt.tables.size() - 1, path);
        if (!tb) return std::nullopt;
        return detail::unique_label(q, [&](const OptionPayload& p) {
            auto* c = std::get_if<Claim>(&p);
            if (!c) return false;
            if (auto* at = std::get_if<AtClaim>(c)) {
                auto it = tb->locations.find(at->object);
                return it != tb->locations.end() && it->second == at->container;
            }
            if (auto* a = std::get_if<AttrClaim>(c)) {
                auto it = tb->attributes.find({a->object, a->attribute});
                return it != tb->attributes.end() && it->second == a->value;
            }
            auto& g = std::get<GoalClaim>(*c);
            auto it = tb->goals.find(g.agent);
            return it != tb->goals.end() && it->second == g.goal;
        });
    }

    if (hint == "belief_of_goal") {
        if (path.empty() || path.size() > 2 || path.size() > gt.max_order) return std::nullopt;
        const auto* tb = table_at(gt.tables.size() - 1, path);
        if (!tb) return std::nullopt;
        return detail::unique_label(q, [&](const OptionPayload& p) {
            auto* c = std::get_if<Claim>(&p);
            auto* g = c ? std::get_if<GoalClaim>(c) : nullptr;
            if (!g) return false;
            auto it = tb->goals.find(g->agent);
            return it != tb->goals.end() && it->second == g->goal;
        });
    }

    if (hint == "search" || hint == "action") {
        if (path.size() != 1) return std::nullopt;
        const AgentId& who = path[0];
        std::optional<Goal> goal;
        for (const auto& e : s.events)
            if (auto* d = std::get_if<GoalDecl>(&e.body); d && d->agent == who) goal = d->goal;
        if (!goal && object) goal = Goal{GoalKind::locate, *object, std::nullopt};
        if (!goal) return std::nullopt;
        const auto* own = table_at(gt.tables.size() - 1, path);

        // What the agent will do, from its own table only.
        std::optional<Action> next;
        auto believed_at = [&](const ObjectId& o) -> std::optional<ContainerId> {
            auto it = own->locations.find(o);
            if (it == own->locations.end()) return std::nullopt;
            return it->second;
        };
        std::optional<std::string> req_state;
        if (goal->requirement) {
            auto it = own->attributes.find({goal->requirement->object, goal->requirement->attribute});
            if (it != own->attributes.end()) req_state = it->second;
        }
        if (goal->requirement && req_state && *req_state != goal->requirement->value) {
            next = Action::avoid(goal->requirement->object);
        } else if (goal->kind == GoalKind::task) {
            if (!goal->requirement || req_state) next = Action::proceed(goal->target);
        } else if (auto c = believed_at(goal->target)) {
            next = goal->kind == GoalKind::locate ? Action::search(*c) : Action::exploit(goal->target, *c);
        }
        if (!next) return std::nullopt;

        return detail::unique_label(q, [&](const OptionPayload& p) {
            std::optional<Action> a;
            if (auto* x = std::get_if<Action>(&p)) a = *x;
            else if (auto* c = std::get_if<Claim>(&p))
                if (auto* at = std::get_if<AtClaim>(c)) a = Action::search(at->container);
            if (!a) return false;
            bool next_looks = next->kind == ActionKind::search || next->kind == ActionKind::exploit;
            bool a_looks = a->kind == ActionKind::search || a->kind == ActionKind::exploit;
            if (next_looks && a_looks) return next->container == a->container;
            return *next == *a;
        });
    }

    if (hint == "goal") {
        if (path.size() != 1) return std::nullopt;
        const AgentId& who = q.subject.agent.value_or(path[0]);
        std::vector<std::pair<std::string, Goal>> alive;
        for (const auto& o : q.options) {
            auto* c = std::get_if<Claim>(&o.payload);
            auto* g = c ? std::get_if<GoalClaim>(c) : nullptr;
            if (g && g->agent == who) alive.emplace_back(o.label, g->goal);
        }
        // Acts of the agent in story order; a search followed by another act is abandoned.
        std::vector<std::size_t> act_times;
        std::optional<Goal> declared;
        std::set<ObjectId> exploited;
        for (const auto& e : s.events) {
            if (auto* a = std::get_if<Act>(&e.body); a && a->agent == who && a->action.kind != ActionKind::none)
                act_times.push_back(e.time);
            if (auto* d = std::get_if<GoalDecl>(&e.body); d && d->agent == who) declared = d->goal;
        }
        bool evidence = declared.has_value();
        std::set<std::string> dropped;
        for (std::size_t i = 0; i < act_times.size(); ++i) {
            const auto& act = std::get<Act>(s.events[act_times[i] - 1].body).action;
            if (act.kind == ActionKind::exploit) {
                exploited.insert(act.object);
                evidence = true;
            }
            if (act.kind != ActionKind::search || i + 1 == act_times.size()) continue;
            const auto* own = table_at(act_times[i], path);
            for (const auto& [label, g] : alive) {
                if (g.kind == GoalKind::task) continue;
                auto it = own->locations.find(g.target);
                if (it != own->locations.end() && it->second == act.container) {
                    dropped.insert(label);
                    evidence = true;
                }
            }
        }
        if (!evidence) return std::nullopt;
        std::vector<std::string> left;
        for (const auto& [label, g] : alive) {
            if (dropped.count(label)) continue;
            if (!exploited.empty() && (g.kind == GoalKind::task || !exploited.count(g.target))) continue;
            if (declared && !(g == *declared)) continue;
            left.push_back(label);
        }
        if (left.size() != 1) return std::nullopt;
        return left.front();
    }

    if (hint == "social_goal" || hint == "social_goal_least") {
        const IntentClaim* who = nullptr;
        for (const auto& o : q.options)
            if (auto* i = std::get_if<IntentClaim>(&o.payload)) {
                who = i;
                break;
            }
        if (!who) return std::nullopt;
        const Replay rp = replay(s);
        std::optional<Intent> reading;
        for (std::size_t i = 0; i < s.events.size(); ++i) {
            auto* u = std::get_if<Utter>(&s.events[i].body);
            if (!u || u->speaker != who->speaker || who->listener == who->speaker) continue;
            auto* at = std::get_if<AtClaim>(&u->claim);
            if (!at || !rp.audience[i].count(who->listener)) continue;
            const auto* mine = table_at(i, Path{who->speaker});
            auto it = mine->locations.find(at->object);
            if (it == mine->locations.end()) reading = Intent::undetermined;
            else reading = it->second == at->container ? Intent::helping : Intent::hindering;
        }
        if (!reading || *reading == Intent::undetermined) return std::nullopt;
        bool least = hint == "social_goal_least";
        return detail::unique_label(q, [&](const OptionPayload& p) {
            auto* i = std::get_if<IntentClaim>(&p);
            if (!i || i->speaker != who->speaker || i->listener != who->listener) return false;
            return least ? i->intent != *reading : i->intent == *reading;
        });
    }

    return std::nullopt;
}

}  // namespace mindtrace::oracle
