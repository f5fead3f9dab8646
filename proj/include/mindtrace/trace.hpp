// Per-step observe -> update belief -> decide action -> advance environment loop.
#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "event_model.hpp"
#include "perspective.hpp"

namespace mindtrace {

struct ResolvedGoal {
    Goal goal;
    std::optional<std::size_t> declared_at;  // nullopt: implied by the question
    bool operator==(const ResolvedGoal&) const = default;
};

struct TraceStep {
    std::size_t time = 0;
    WorldState env;  // E_t: state before this step's story event
    ObservationRecord obs;
    BeliefState belief;
    Action action;
    std::optional<ResolvedGoal> goal;
    bool operator==(const TraceStep&) const = default;
};

struct Trace {
    AgentId target;
    BeliefConfig config;
    WorldState initial_env;
    BeliefState initial_belief;
    std::optional<ResolvedGoal> initial_goal;
    std::vector<TraceStep> steps;
    WorldState final_env;

    bool operator==(const Trace&) const = default;

    /// Belief after step t; t = 0 is the initial mind.
    const BeliefState& belief_at(std::size_t t) const { return t == 0 ? initial_belief : steps.at(t - 1).belief; }
    const BeliefState& final_belief() const { return steps.empty() ? initial_belief : steps.back().belief; }
    const std::optional<ResolvedGoal>& final_goal() const { return steps.empty() ? initial_goal : steps.back().goal; }
    /// State before step t (t = T + 1 gives the final state).
    const WorldState& env_before(std::size_t t) const { return t > steps.size() ? final_env : steps.at(t - 1).env; }
};

/// Rule policy: act on believed location or precondition, never on the true state.
inline Action decide_action(const std::optional<Goal>& goal, const BeliefState& belief) {
    if (!goal) return Action::none();
    const PartialWorld& own = belief.own();

    if (goal->requirement) {
        const auto& req = *goal->requirement;
        if (const auto* f = own.attribute_of(req.object, req.attribute)) {
            if (f->value != req.value) return Action::avoid(req.object);
            if (goal->kind == GoalKind::task) return Action::proceed(goal->target);
        } else if (goal->kind == GoalKind::task) {
            return Action::none();
        }
    }
    switch (goal->kind) {
        case GoalKind::task:
            return Action::proceed(goal->target);
        case GoalKind::locate:
            if (const auto* f = own.location_of(goal->target)) return Action::search(f->value);
            return Action::none();
        case GoalKind::fetch:
        case GoalKind::use:
            if (const auto* f = own.location_of(goal->target)) return Action::exploit(goal->target, f->value);
            return Action::none();
    }
    return Action::none();
}

/// Goal implied by a search/action question about an object: locate that object.
inline std::optional<Goal> implied_goal(const Question& q, const AgentId& target) {
    if (q.target_path.empty() || q.target_path.front() != target || !q.subject.object) return std::nullopt;
    bool search = q.kind_hint == "search" || q.kind_hint == "action" || is_search_phrasing(q.text);
    for (const auto& o : q.options)
        if (auto* a = std::get_if<Action>(&o.payload))
            search = search || a->kind == ActionKind::search || a->kind == ActionKind::exploit;
    if (!search) return std::nullopt;
    return Goal{GoalKind::locate, *q.subject.object, std::nullopt};
}

/// Explicit declaration (latest at or before `time`) beats the question-implied goal.
inline std::optional<ResolvedGoal> resolve_goal(const Scenario& s, const AgentId& target, std::size_t time) {
    std::optional<ResolvedGoal> out;
    for (const auto& e : s.events) {
        if (e.time > time) break;
        if (auto* d = std::get_if<GoalDecl>(&e.body); d && d->agent == target) out = ResolvedGoal{d->goal, e.time};
    }
    if (out) return out;
    if (auto g = implied_goal(s.question, target)) return ResolvedGoal{*g, std::nullopt};
    return std::nullopt;
}

/// Builds the target's trace. Predicted actions are recorded but the environment
/// advances only through story events.
inline Trace build_trace(const Scenario& s, const AgentId& target, const BeliefConfig& cfg) {
    if (!s.decl.has_agent(target)) throw SchemaError("undeclared agent", target);
    if (cfg.max_order < cfg.query_order)
        throw ConfigError("max_order " + std::to_string(cfg.max_order) + " is below the question's belief order " +
                          std::to_string(cfg.query_order));

    auto act = [&](const std::optional<ResolvedGoal>& g, const BeliefState& b) {
        if (!cfg.rules.enabled(Rule::action_from_belief)) return Action::none();
        return decide_action(g ? std::optional<Goal>(g->goal) : std::nullopt, b);
    };

    Trace tr;
    tr.target = target;
    tr.config = cfg;
    tr.initial_env = s.initial;
    tr.initial_belief = initial_belief(target, s.decl.agents, s.initial, cfg);
    tr.initial_goal = resolve_goal(s, target, 0);
    tr.steps.reserve(s.events.size());

    WorldState env = s.initial;
    const BeliefState* prev = &tr.initial_belief;
    for (const auto& e : s.events) {
        std::span<const Event> step(&e, 1);
        TraceStep st;
        st.time = e.time;
        st.obs = observe(env, step, target);
        st.belief = update_belief(*prev, st.obs, step, env, cfg);
        st.goal = resolve_goal(s, target, e.time);
        st.action = act(st.goal, st.belief);
        WorldState next = apply_event(env, e);
        st.env = std::move(env);
        tr.steps.push_back(std::move(st));
        prev = &tr.steps.back().belief;
        env = std::move(next);
    }
    tr.final_env = std::move(env);
    return tr;
}

// ---------------------------------------------------------------------------
// Dumps

inline std::string describe_env(const WorldState& w) {
    std::ostringstream out;
    for (const auto& [a, r] : w.agent_room) out << "agent " << a << ' ' << r << '\n';
    for (const auto& [o, c] : w.object_loc) out << "object " << o << ' ' << c << '\n';
    for (const auto& [c, r] : w.container_room) out << "container " << c << ' ' << r << '\n';
    for (const auto& [k, v] : w.attributes) out << "attr " << k.first << '.' << k.second << ' ' << v << '\n';
    for (const auto& h : w.heard_log) {
        out << "heard " << h.time;
        for (const auto& l : h.listeners) out << ' ' << l;
        out << '\n';
    }
    return out.str();
}

/// FNV-1a 64-bit digest of the canonical environment text.
inline std::string env_digest(const WorldState& w) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : describe_env(w)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

inline void diff_worlds(std::ostream& out, const BeliefPath& p, const PartialWorld* before, const PartialWorld& after,
                        bool& first) {
    auto emit = [&](const std::string& key, const std::string& value) {
        out << (first ? "" : ";") << p.str() << ':' << key << '=' << value;
        first = false;
    };
    for (const auto& [o, f] : after.location)
        if (!before || before->location_of(o) == nullptr || *before->location_of(o) != f) emit("loc:" + o, f.value);
    for (const auto& [k, f] : after.attribute)
        if (!before || before->attribute_of(k.first, k.second) == nullptr ||
            *before->attribute_of(k.first, k.second) != f)
            emit("attr:" + k.first + "." + k.second, f.value);
    for (const auto& [a, f] : after.goal)
        if (!before || before->goal_of(a) == nullptr || *before->goal_of(a) != f) emit("goal:" + a, to_string(f.value));
}

}  // namespace detail

/// One line per step: time, env digest, seen event ids, changed belief entries, action.
inline std::string dump_trace(const Trace& tr) {
    std::ostringstream out;
    out << "# trace target=" << tr.target << " steps=" << tr.steps.size() << '\n';
    for (std::size_t i = 0; i < tr.steps.size(); ++i) {
        const auto& st = tr.steps[i];
        const BeliefState& before = tr.belief_at(i);
        out << st.time << '\t' << env_digest(st.env) << '\t';
        for (std::size_t k = 0; k < st.obs.seen.size(); ++k) out << (k ? "," : "") << 'e' << st.obs.seen[k].time;
        if (st.obs.seen.empty()) out << '-';
        out << '\t';
        bool first = true;
        for (const auto& [path, w] : st.belief.entries) detail::diff_worlds(out, path, before.find(path), w, first);
        if (first) out << '-';
        out << '\t' << to_string(st.action) << '\n';
    }
    out << "final\t" << env_digest(tr.final_env) << '\n';
    return out.str();
}

}  // namespace mindtrace
