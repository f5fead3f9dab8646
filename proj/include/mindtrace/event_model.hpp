// Canonical story representation: entities, events, world state, questions.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mindtrace {

using AgentId = std::string;
using RoomId = std::string;
using ContainerId = std::string;
using ObjectId = std::string;
using AttributeId = std::string;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed record text. Carries the record line and the offending field path.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
          line_(line), field_(std::move(field)) {}
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// A well-formed record that violates a declaration invariant.
class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::string id)
        : Error(what + " '" + id + "'"), id_(std::move(id)) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class StateError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Goals, claims, actions

enum class GoalKind { fetch, use, locate, task };

struct Requirement {
    ObjectId object;
    AttributeId attribute;
    std::string value;
    auto operator<=>(const Requirement&) const = default;
};

/// `target` is the object for fetch/use/locate and the task label for task.
struct Goal {
    GoalKind kind = GoalKind::fetch;
    std::string target;
    std::optional<Requirement> requirement;
    auto operator<=>(const Goal&) const = default;

    bool has_object() const noexcept { return kind != GoalKind::task; }
};

struct AtClaim {
    ObjectId object;
    ContainerId container;
    auto operator<=>(const AtClaim&) const = default;
};

struct GoalClaim {
    AgentId agent;
    Goal goal;
    auto operator<=>(const GoalClaim&) const = default;
};

struct AttrClaim {
    ObjectId object;
    AttributeId attribute;
    std::string value;
    auto operator<=>(const AttrClaim&) const = default;
};

using Claim = std::variant<AtClaim, GoalClaim, AttrClaim>;

enum class ActionKind { search, exploit, proceed, avoid, communicate, none };

/// Flat action record; only the fields relevant to `kind` are meaningful.
struct Action {
    ActionKind kind = ActionKind::none;
    ContainerId container;
    ObjectId object;
    std::string label;
    std::optional<Claim> claim;

    bool operator==(const Action&) const = default;

    static Action search(ContainerId c) { return {ActionKind::search, std::move(c), {}, {}, {}}; }
    static Action exploit(ObjectId o, ContainerId c) {
        return {ActionKind::exploit, std::move(c), std::move(o), {}, {}};
    }
    static Action proceed(std::string label) { return {ActionKind::proceed, {}, {}, std::move(label), {}}; }
    static Action avoid(ObjectId o) { return {ActionKind::avoid, {}, std::move(o), {}, {}}; }
    static Action communicate(Claim c) { return {ActionKind::communicate, {}, {}, {}, std::move(c)}; }
    static Action none() { return {}; }
};

enum class Intent { helping, hindering, undetermined };

struct IntentClaim {
    AgentId speaker;
    AgentId listener;
    Intent intent = Intent::helping;
    bool operator==(const IntentClaim&) const = default;
};

// ---------------------------------------------------------------------------
// Events

struct Enter {
    AgentId agent;
    RoomId room;
    bool operator==(const Enter&) const = default;
};

struct Leave {
    AgentId agent;
    RoomId room;
    bool operator==(const Leave&) const = default;
};

struct Move {
    std::optional<AgentId> mover;
    ObjectId object;
    ContainerId to;
    bool operator==(const Move&) const = default;
};

struct StateSet {
    ObjectId object;
    AttributeId attribute;
    std::string value;
    bool cause_visible = true;
    bool operator==(const StateSet&) const = default;
};

struct Utter {
    AgentId speaker;
    bool is_private = false;
    std::vector<AgentId> listeners;  // private scope only
    Claim claim;
    bool operator==(const Utter&) const = default;
};

struct GoalDecl {
    AgentId agent;
    Goal goal;
    bool operator==(const GoalDecl&) const = default;
};

struct Act {
    AgentId agent;
    Action action;
    bool operator==(const Act&) const = default;
};

using EventBody = std::variant<Enter, Leave, Move, StateSet, Utter, GoalDecl, Act>;

struct Event {
    std::size_t time = 0;  // 1..T after normalization
    EventBody body;
    bool operator==(const Event&) const = default;
};

// ---------------------------------------------------------------------------
// World state

struct HeardEntry {
    std::size_t time = 0;
    Utter utterance;
    std::vector<AgentId> listeners;  // realized listener set, speaker excluded
    bool operator==(const HeardEntry&) const = default;
};

struct WorldState {
    std::map<AgentId, RoomId> agent_room;  // absent: agent is off-scene
    std::map<ObjectId, ContainerId> object_loc;
    std::map<ContainerId, RoomId> container_room;
    std::map<std::pair<ObjectId, AttributeId>, std::string> attributes;
    std::vector<HeardEntry> heard_log;

    bool operator==(const WorldState&) const = default;

    std::optional<RoomId> room_of_agent(const AgentId& a) const {
        if (auto it = agent_room.find(a); it != agent_room.end()) return it->second;
        return std::nullopt;
    }
    std::optional<RoomId> room_of_container(const ContainerId& c) const {
        if (auto it = container_room.find(c); it != container_room.end()) return it->second;
        return std::nullopt;
    }
    std::optional<ContainerId> location_of(const ObjectId& o) const {
        if (auto it = object_loc.find(o); it != object_loc.end()) return it->second;
        return std::nullopt;
    }
    std::optional<RoomId> room_of_object(const ObjectId& o) const {
        auto c = location_of(o);
        return c ? room_of_container(*c) : std::nullopt;
    }
    std::optional<std::string> attribute(const ObjectId& o, const AttributeId& a) const {
        if (auto it = attributes.find({o, a}); it != attributes.end()) return it->second;
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Scenario

struct Declarations {
    std::vector<AgentId> agents;
    std::vector<RoomId> rooms;
    std::vector<ContainerId> containers;
    std::vector<ObjectId> objects;
    std::vector<AttributeId> attributes;

    bool operator==(const Declarations&) const = default;

    static bool contains(const std::vector<std::string>& ids, std::string_view id) {
        return std::find(ids.begin(), ids.end(), id) != ids.end();
    }
    bool has_agent(std::string_view id) const { return contains(agents, id); }
    bool has_room(std::string_view id) const { return contains(rooms, id); }
    bool has_container(std::string_view id) const { return contains(containers, id); }
    bool has_object(std::string_view id) const { return contains(objects, id); }
    bool has_attribute(std::string_view id) const { return contains(attributes, id); }
};

using OptionPayload = std::variant<Claim, Action, IntentClaim>;

struct Option {
    std::string label;
    OptionPayload payload;
    bool operator==(const Option&) const = default;
};

/// What the question is about. Used for the distractor scope and goal implication.
struct Subject {
    std::optional<ObjectId> object;
    std::optional<AgentId> agent;
    std::optional<AttributeId> attribute;
    bool operator==(const Subject&) const = default;
};

struct Question {
    std::optional<std::string> kind_hint;
    std::string text;
    std::vector<AgentId> target_path;  // empty for reality queries
    Subject subject;
    std::vector<Option> options;
    std::optional<std::string> gold;  // scoring only

    bool operator==(const Question&) const = default;

    std::size_t belief_order() const noexcept { return target_path.size(); }

    const Option* find_option(std::string_view label) const {
        for (const auto& o : options)
            if (o.label == label) return &o;
        return nullptr;
    }
};

/// Diagnostic slicing variables. Holds no answer information.
struct Meta {
    std::string benchmark;
    std::string question_type;
    std::optional<std::size_t> belief_order;
    std::string visibility;
    bool operator==(const Meta&) const = default;
};

struct Scenario {
    std::string id;
    Declarations decl;
    WorldState initial;
    std::vector<Event> events;
    Question question;
    Meta meta;

    bool operator==(const Scenario&) const = default;

    std::size_t length() const noexcept { return events.size(); }
};

// ---------------------------------------------------------------------------
// Event helpers

inline const ObjectId* claim_object(const Claim& c) {
    if (auto* at = std::get_if<AtClaim>(&c)) return &at->object;
    if (auto* at = std::get_if<AttrClaim>(&c)) return &at->object;
    return nullptr;
}

/// The entity whose belief content an event can change (object or agent).
/// Presence changes and acts carry no content and report their actor.
inline std::string event_subject(const Event& e) {
    return std::visit(
        [](const auto& b) -> std::string {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Enter> || std::is_same_v<T, Leave> ||
                          std::is_same_v<T, GoalDecl> || std::is_same_v<T, Act>)
                return b.agent;
            else if constexpr (std::is_same_v<T, Move> || std::is_same_v<T, StateSet>)
                return b.object;
            else {
                if (auto* g = std::get_if<GoalClaim>(&b.claim)) return g->agent;
                return *claim_object(b.claim);
            }
        },
        e.body);
}

/// Realized listener set of an utterance in the state just before it is spoken.
inline std::vector<AgentId> realized_listeners(const Utter& u, const WorldState& state) {
    std::vector<AgentId> out;
    if (u.is_private) {
        for (const auto& l : u.listeners)
            if (l != u.speaker) out.push_back(l);
    } else if (auto room = state.room_of_agent(u.speaker)) {
        for (const auto& [agent, r] : state.agent_room)
            if (r == *room && agent != u.speaker) out.push_back(agent);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline bool is_search_phrasing(std::string_view text) {
    for (std::string_view cue : {"look for", "search", "will look", "look in", "go to find"})
        if (text.find(cue) != std::string_view::npos) return true;
    return false;
}

/// Objects and agents mentioned by the question, its subject and its options.
inline std::set<std::string> question_scope(const Question& q) {
    std::set<std::string> scope(q.target_path.begin(), q.target_path.end());
    if (q.subject.object) scope.insert(*q.subject.object);
    if (q.subject.agent) scope.insert(*q.subject.agent);
    auto add_goal = [&](const Goal& g) {
        if (g.has_object()) scope.insert(g.target);
        if (g.requirement) scope.insert(g.requirement->object);
    };
    auto add_claim = [&](const Claim& c) {
        if (auto* o = claim_object(c)) scope.insert(*o);
        if (auto* g = std::get_if<GoalClaim>(&c)) {
            scope.insert(g->agent);
            add_goal(g->goal);
        }
    };
    for (const auto& opt : q.options) {
        if (auto* c = std::get_if<Claim>(&opt.payload)) {
            add_claim(*c);
        } else if (auto* a = std::get_if<Action>(&opt.payload)) {
            if (!a->object.empty()) scope.insert(a->object);
            if (a->claim) add_claim(*a->claim);
        } else if (auto* i = std::get_if<IntentClaim>(&opt.payload)) {
            scope.insert(i->speaker);
            scope.insert(i->listener);
        }
    }
    return scope;
}

// ---------------------------------------------------------------------------
// Transition

/// Applies one story event to the objective world state.
inline WorldState apply_event(const WorldState& state, const Event& event) {
    WorldState next = state;
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Enter>) {
                next.agent_room[b.agent] = b.room;
            } else if constexpr (std::is_same_v<T, Leave>) {
                auto room = state.room_of_agent(b.agent);
                if (room != b.room)
                    throw StateError("agent '" + b.agent + "' cannot leave '" + b.room +
                                     "' without being there (t=" + std::to_string(event.time) + ")");
                next.agent_room.erase(b.agent);
            } else if constexpr (std::is_same_v<T, Move>) {
                if (!state.room_of_container(b.to))
                    throw StateError("move of '" + b.object + "' into container '" + b.to +
                                     "' that is in no room (t=" + std::to_string(event.time) + ")");
                next.object_loc[b.object] = b.to;
            } else if constexpr (std::is_same_v<T, StateSet>) {
                next.attributes[{b.object, b.attribute}] = b.value;
            } else if constexpr (std::is_same_v<T, Utter>) {
                next.heard_log.push_back({event.time, b, realized_listeners(b, state)});
            }
            // GoalDecl and Act are non-physical.
        },
        event.body);
    return next;
}

/// Checks the placement invariant: every placed object sits in a container that is in a room.
inline void check_world_invariants(const WorldState& state) {
    for (const auto& [object, container] : state.object_loc)
        if (!state.room_of_container(container))
            throw StateError("object '" + object + "' placed in container '" + container +
                             "' that is in no room");
}

inline std::string to_string(GoalKind k) {
    switch (k) {
        case GoalKind::fetch: return "fetch";
        case GoalKind::use: return "use";
        case GoalKind::locate: return "locate";
        case GoalKind::task: return "task";
    }
    return "?";
}

inline std::string to_string(ActionKind k) {
    switch (k) {
        case ActionKind::search: return "search";
        case ActionKind::exploit: return "exploit";
        case ActionKind::proceed: return "proceed";
        case ActionKind::avoid: return "avoid";
        case ActionKind::communicate: return "communicate";
        case ActionKind::none: return "none";
    }
    return "?";
}

inline std::string to_string(Intent i) {
    switch (i) {
        case Intent::helping: return "helping";
        case Intent::hindering: return "hindering";
        case Intent::undetermined: return "undetermined";
    }
    return "?";
}

inline std::string to_string(const Goal& g) {
    std::string s = to_string(g.kind) + "(" + g.target;
    if (g.requirement)
        s += " | " + g.requirement->object + "." + g.requirement->attribute + "=" + g.requirement->value;
    return s + ")";
}

inline std::string to_string(const Claim& c) {
    return std::visit(
        [](const auto& b) -> std::string {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, AtClaim>)
                return "at(" + b.object + "," + b.container + ")";
            else if constexpr (std::is_same_v<T, GoalClaim>)
                return "goal_of(" + b.agent + "," + to_string(b.goal) + ")";
            else
                return "attr(" + b.object + "," + b.attribute + "," + b.value + ")";
        },
        c);
}

inline std::string to_string(const Action& a) {
    switch (a.kind) {
        case ActionKind::search: return "search(" + a.container + ")";
        case ActionKind::exploit: return "exploit(" + a.object + "," + a.container + ")";
        case ActionKind::proceed: return "proceed(" + a.label + ")";
        case ActionKind::avoid: return "avoid(" + a.object + ")";
        case ActionKind::communicate: return "communicate(" + (a.claim ? to_string(*a.claim) : "") + ")";
        case ActionKind::none: return "none";
    }
    return "?";
}

inline std::string to_string(const Event& e) {
    return std::visit(
        [&](const auto& b) -> std::string {
            using T = std::decay_t<decltype(b)>;
            std::string t = "e" + std::to_string(e.time) + ":";
            if constexpr (std::is_same_v<T, Enter>)
                return t + "enter(" + b.agent + "," + b.room + ")";
            else if constexpr (std::is_same_v<T, Leave>)
                return t + "leave(" + b.agent + "," + b.room + ")";
            else if constexpr (std::is_same_v<T, Move>)
                return t + "move(" + b.mover.value_or("-") + "," + b.object + "," + b.to + ")";
            else if constexpr (std::is_same_v<T, StateSet>)
                return t + "state_set(" + b.object + "," + b.attribute + "," + b.value +
                       (b.cause_visible ? "" : ",hidden") + ")";
            else if constexpr (std::is_same_v<T, Utter>) {
                std::string scope = "public";
                if (b.is_private) {
                    scope = "private[";
                    for (std::size_t i = 0; i < b.listeners.size(); ++i)
                        scope += (i ? "," : "") + b.listeners[i];
                    scope += "]";
                }
                return t + "utter(" + b.speaker + "," + scope + "," + to_string(b.claim) + ")";
            } else if constexpr (std::is_same_v<T, GoalDecl>)
                return t + "goal_decl(" + b.agent + "," + to_string(b.goal) + ")";
            else
                return t + "act(" + b.agent + "," + to_string(b.action) + ")";
        },
        e.body);
}

}  // namespace mindtrace
