// Observation function and rule-guided belief updater over nested belief paths.
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "event_model.hpp"

namespace mindtrace {

// ---------------------------------------------------------------------------
// Rules

enum class Rule : std::uint8_t {
    observed_change_updates,  // R1
    unobserved_preserves,     // R2
    co_observation_nests,     // R3
    communication_scoped,     // R4
    action_from_belief,       // R5
    distractor_inert,         // R6
};

inline constexpr std::array<Rule, 6> kAllRules = {
    Rule::observed_change_updates, Rule::unobserved_preserves, Rule::co_observation_nests,
    Rule::communication_scoped,    Rule::action_from_belief,   Rule::distractor_inert,
};

inline std::string rule_id(Rule r) { return "R" + std::to_string(static_cast<int>(r) + 1); }

inline std::string rule_name(Rule r) {
    switch (r) {
        case Rule::observed_change_updates: return "observed-change-updates";
        case Rule::unobserved_preserves: return "unobserved-preserves";
        case Rule::co_observation_nests: return "co-observation-nests";
        case Rule::communication_scoped: return "communication-scoped";
        case Rule::action_from_belief: return "action-from-belief";
        case Rule::distractor_inert: return "distractor-inert";
    }
    return "?";
}

/// The fixed R1..R6 catalog with per-rule enable flags. R1 and R2 cannot be disabled.
class RuleSet {
public:
    RuleSet() { enabled_.fill(true); }

    RuleSet& disable(Rule r) {
        if (r == Rule::observed_change_updates || r == Rule::unobserved_preserves)
            throw ConfigError(rule_id(r) + " (" + rule_name(r) + ") cannot be disabled");
        enabled_[index(r)] = false;
        return *this;
    }
    RuleSet& enable(Rule r) {
        enabled_[index(r)] = true;
        return *this;
    }
    bool enabled(Rule r) const noexcept { return enabled_[index(r)]; }

    bool operator==(const RuleSet&) const = default;

private:
    static std::size_t index(Rule r) noexcept { return static_cast<std::size_t>(r); }
    std::array<bool, 6> enabled_{};
};

// ---------------------------------------------------------------------------
// Belief paths

/// Ordered agent chain: holder first, then the nested believers.
/// Immediate self-repetition collapses (u,u -> u).
class BeliefPath {
public:
    BeliefPath() = default;
    BeliefPath(std::initializer_list<AgentId> agents) : BeliefPath(std::vector<AgentId>(agents)) {}
    explicit BeliefPath(const std::vector<AgentId>& agents) {
        for (const auto& a : agents)
            if (agents_.empty() || agents_.back() != a) agents_.push_back(a);
    }

    const std::vector<AgentId>& agents() const noexcept { return agents_; }
    std::size_t size() const noexcept { return agents_.size(); }
    bool empty() const noexcept { return agents_.empty(); }
    const AgentId& holder() const { return agents_.front(); }
    const AgentId& last() const { return agents_.back(); }
    bool contains(const AgentId& a) const { return std::find(agents_.begin(), agents_.end(), a) != agents_.end(); }

    BeliefPath extended(const AgentId& a) const {
        auto v = agents_;
        v.push_back(a);
        return BeliefPath(v);
    }
    BeliefPath prefix() const {
        return BeliefPath(std::vector<AgentId>(agents_.begin(), agents_.end() - (agents_.empty() ? 0 : 1)));
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < agents_.size(); ++i) s += (i ? ">" : "") + agents_[i];
        return s.empty() ? "<world>" : s;
    }

    auto operator<=>(const BeliefPath&) const = default;

private:
    std::vector<AgentId> agents_;
};

/// Every path starting at `holder` with length <= max_order (min 1), in map order.
inline std::vector<BeliefPath> enumerate_paths(const AgentId& holder, std::span<const AgentId> agents,
                                               std::size_t max_order) {
    std::vector<BeliefPath> out;
    std::vector<BeliefPath> frontier{BeliefPath{holder}};
    while (!frontier.empty()) {
        std::vector<BeliefPath> next;
        for (const auto& p : frontier) {
            out.push_back(p);
            if (p.size() >= max_order) continue;
            for (const auto& a : agents)
                if (a != p.last()) next.push_back(p.extended(a));
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Belief contents

/// A believed value and the event time that set it (0 = initial co-presence).
template <class V>
struct Fact {
    V value;
    std::size_t since = 0;
    bool operator==(const Fact&) const = default;
};

/// What is believed along one path. Missing keys mean "unknown".
struct PartialWorld {
    std::map<ObjectId, Fact<ContainerId>> location;
    std::map<std::pair<ObjectId, AttributeId>, Fact<std::string>> attribute;
    std::map<AgentId, Fact<Goal>> goal;

    bool operator==(const PartialWorld&) const = default;

    const Fact<ContainerId>* location_of(const ObjectId& o) const {
        auto it = location.find(o);
        return it == location.end() ? nullptr : &it->second;
    }
    const Fact<std::string>* attribute_of(const ObjectId& o, const AttributeId& a) const {
        auto it = attribute.find({o, a});
        return it == attribute.end() ? nullptr : &it->second;
    }
    const Fact<Goal>* goal_of(const AgentId& a) const {
        auto it = goal.find(a);
        return it == goal.end() ? nullptr : &it->second;
    }
};

struct BeliefState {
    AgentId holder;
    std::map<BeliefPath, PartialWorld> entries;

    bool operator==(const BeliefState&) const = default;

    const PartialWorld* find(const BeliefPath& p) const {
        auto it = entries.find(p);
        return it == entries.end() ? nullptr : &it->second;
    }
    const PartialWorld& own() const { return entries.at(BeliefPath{holder}); }
};

struct ObservationRecord {
    std::size_t time = 0;
    AgentId observer;
    std::vector<Event> seen;
    bool operator==(const ObservationRecord&) const = default;

    bool contains(const Event& e) const { return std::find(seen.begin(), seen.end(), e) != seen.end(); }
};

/// Settings shared by every belief update of one trace.
struct BeliefConfig {
    RuleSet rules;
    std::size_t max_order = 1;
    std::size_t query_order = 0;  // belief order the trace must be able to answer
    std::optional<std::set<std::string>> scope;  // distractor scope; nullopt = everything relevant
};

// ---------------------------------------------------------------------------
// Visibility

/// Whether agent `a` perceives event `e`, given the state just before it applies.
inline bool perceives(const Event& e, const AgentId& a, const WorldState& pre) {
    const auto here = pre.room_of_agent(a);
    return std::visit(
        [&](const auto& b) -> bool {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Enter>) {
                return a == b.agent || here == b.room;
            } else if constexpr (std::is_same_v<T, Leave>) {
                return a == b.agent || here == b.room;
            } else if constexpr (std::is_same_v<T, Move>) {
                return here && here == pre.room_of_container(b.to);
            } else if constexpr (std::is_same_v<T, StateSet>) {
                return b.cause_visible && here && here == pre.room_of_object(b.object);
            } else if constexpr (std::is_same_v<T, Utter>) {
                if (a == b.speaker) return true;
                if (b.is_private) return std::find(b.listeners.begin(), b.listeners.end(), a) != b.listeners.end();
                return here && here == pre.room_of_agent(b.speaker);
            } else {
                return a == b.agent || (here && here == pre.room_of_agent(b.agent));
            }
        },
        e.body);
}

/// True iff every agent on the path perceives the event. For physical events this is
/// co-presence in the event's room; for utterances, membership in the audience.
inline bool visible_along_path(const Event& e, const BeliefPath& path, const WorldState& pre) {
    for (const auto& a : path.agents())
        if (!perceives(e, a, pre)) return false;
    return true;
}

/// Events of one step seen by `observer`. Presence is evaluated just before each event.
inline ObservationRecord observe(const WorldState& state, std::span<const Event> step_events,
                                 const AgentId& observer) {
    ObservationRecord rec{step_events.empty() ? 0 : step_events.front().time, observer, {}};
    WorldState cur = state;
    for (std::size_t i = 0; i < step_events.size(); ++i) {
        if (perceives(step_events[i], observer, cur)) rec.seen.push_back(step_events[i]);
        if (i + 1 < step_events.size()) cur = apply_event(cur, step_events[i]);
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Belief update

namespace detail {

inline bool in_scope(const BeliefConfig& cfg, const Event& e) {
    if (!cfg.rules.enabled(Rule::distractor_inert) || !cfg.scope) return true;
    return cfg.scope->count(event_subject(e)) != 0;
}

inline void apply_claim(PartialWorld& w, const Claim& c, std::size_t t) {
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, AtClaim>) w.location[b.object] = {b.container, t};
            else if constexpr (std::is_same_v<T, GoalClaim>) w.goal[b.agent] = {b.goal, t};
            else w.attribute[{b.object, b.attribute}] = {b.value, t};
        },
        c);
}

/// Folds one event's content into the world described along `path`.
inline void apply_content(PartialWorld& w, const BeliefPath& path, const Event& e, const RuleSet& rules) {
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Move>) {
                w.location[b.object] = {b.to, e.time};
            } else if constexpr (std::is_same_v<T, StateSet>) {
                w.attribute[{b.object, b.attribute}] = {b.value, e.time};
            } else if constexpr (std::is_same_v<T, Utter>) {
                if (!rules.enabled(Rule::communication_scoped)) return;
                // A speaker's own belief is not evidence from their own words.
                if (path.size() == 1 && path.holder() == b.speaker) return;
                apply_claim(w, b.claim, e.time);
            } else if constexpr (std::is_same_v<T, GoalDecl>) {
                w.goal[b.agent] = {b.goal, e.time};
            }
        },
        e.body);
}

}  // namespace detail

/// Initial mind of `holder`: every path is unknown except objects whose room holds all
/// agents of the path at t=0; those seed location and attribute beliefs.
inline BeliefState initial_belief(const AgentId& holder, std::span<const AgentId> agents,
                                  const WorldState& initial, const BeliefConfig& cfg) {
    BeliefState b{holder, {}};
    for (auto& path : enumerate_paths(holder, agents, std::max<std::size_t>(cfg.max_order, 1))) {
        PartialWorld w;
        if (path.size() == 1 || cfg.rules.enabled(Rule::co_observation_nests)) {
            for (const auto& [object, container] : initial.object_loc) {
                auto room = initial.room_of_container(container);
                bool all_here = room.has_value();
                for (const auto& a : path.agents()) all_here = all_here && initial.room_of_agent(a) == room;
                if (!all_here) continue;
                w.location[object] = {container, 0};
                for (const auto& [key, value] : initial.attributes)
                    if (key.first == object) w.attribute[key] = {value, 0};
            }
        }
        b.entries.emplace(std::move(path), std::move(w));
    }
    return b;
}

/// One application of the rule-guided update. Paths updated only by events visible along them.
inline BeliefState update_belief(const BeliefState& prev, const ObservationRecord& obs,
                                 std::span<const Event> step_events, const WorldState& state,
                                 const BeliefConfig& cfg) {
    if (cfg.max_order < cfg.query_order)
        throw ConfigError("max_order " + std::to_string(cfg.max_order) + " is below the question's belief order " +
                          std::to_string(cfg.query_order));
    if (prev.holder != obs.observer)
        throw ConfigError("observation of '" + obs.observer + "' applied to the mind of '" + prev.holder + "'");

    BeliefState next = prev;
    WorldState cur = state;
    for (std::size_t i = 0; i < step_events.size(); ++i) {
        const Event& e = step_events[i];
        if (detail::in_scope(cfg, e)) {
            for (auto& [path, world] : next.entries) {
                bool visible = path.size() == 1 ? obs.contains(e) : visible_along_path(e, path, cur);
                if (!visible) continue;  // R2
                if (path.size() > 1 && !cfg.rules.enabled(Rule::co_observation_nests)) continue;
                detail::apply_content(world, path, e, cfg.rules);
            }
        }
        if (i + 1 < step_events.size()) cur = apply_event(cur, e);
    }
    return next;
}

/// Tab-separated table of known entries: path, key, value, time that set it.
inline std::string dump_belief(const BeliefState& b, std::size_t time) {
    std::ostringstream out;
    out << "# belief holder=" << b.holder << " t=" << time << '\n';
    for (const auto& [path, w] : b.entries) {
        for (const auto& [o, f] : w.location) out << path.str() << "\tloc:" << o << '\t' << f.value << '\t' << f.since << '\n';
        for (const auto& [k, f] : w.attribute)
            out << path.str() << "\tattr:" << k.first << '.' << k.second << '\t' << f.value << '\t' << f.since << '\n';
        for (const auto& [a, f] : w.goal)
            out << path.str() << "\tgoal:" << a << '\t' << to_string(f.value) << '\t' << f.since << '\n';
    }
    return out.str();
}

}  // namespace mindtrace
