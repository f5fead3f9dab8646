// Question -> trace query mapping, option-level consistency checks, answer selection.
#pragma once

#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "event_model.hpp"
#include "metrics.hpp"
#include "perspective.hpp"
#include "record_io.hpp"
#include "trace.hpp"

namespace mindtrace {

class ClassificationError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

enum class QueryType { reality, memory, belief, goal, action, social_intent, belief_of_goal };

inline std::string to_string(QueryType t) {
    switch (t) {
        case QueryType::reality: return "reality";
        case QueryType::memory: return "memory";
        case QueryType::belief: return "belief";
        case QueryType::goal: return "goal";
        case QueryType::action: return "action";
        case QueryType::social_intent: return "social_intent";
        case QueryType::belief_of_goal: return "belief_of_goal";
    }
    return "?";
}

struct QueryKind {
    QueryType type = QueryType::reality;
    BeliefPath path;                 // empty for reality
    std::optional<ObjectId> object;  // reality/memory/belief/action
    AgentId agent;                   // memory/goal/action: the agent; social: speaker; belief_of_goal: goal owner
    AgentId listener;                // social_intent only
    bool least_likely = false;

    /// The agent whose trace answers this query.
    AgentId trace_agent() const { return path.empty() ? agent : path.holder(); }
    bool operator==(const QueryKind&) const = default;
};

enum class Status { consistent, contradicted, undetermined };

enum class Reason {
    unobserved_knowledge,
    belief_mismatch,
    action_rule_violation,
    goal_mismatch,
    communication_access,
    reality_mismatch,
};

inline std::string to_string(Status s) {
    switch (s) {
        case Status::consistent: return "consistent";
        case Status::contradicted: return "contradicted";
        case Status::undetermined: return "undetermined";
    }
    return "?";
}

inline std::string to_string(Reason r) {
    switch (r) {
        case Reason::unobserved_knowledge: return "unobserved-knowledge";
        case Reason::belief_mismatch: return "belief-mismatch";
        case Reason::action_rule_violation: return "action-rule-violation";
        case Reason::goal_mismatch: return "goal-mismatch";
        case Reason::communication_access: return "communication-access";
        case Reason::reality_mismatch: return "reality-mismatch";
    }
    return "?";
}

/// One proof line. `step` indexes the trace (0 = initial state); when `cites_event`
/// is set the story event at that time is the cited evidence.
struct ProofStep {
    std::string label;
    std::size_t step = 0;
    bool cites_event = false;
    std::string rule;
    std::string conclusion;
    bool operator==(const ProofStep&) const = default;
};

struct Verdict {
    std::string label;
    Status status = Status::undetermined;
    std::optional<Reason> reason;
    std::optional<std::size_t> step;  // first trace step establishing the verdict
    std::string note;
    std::vector<ProofStep> proof;
    bool operator==(const Verdict&) const = default;
};

struct Answer {
    std::string chosen;
    std::vector<Verdict> verdicts;
    bool abstained = false;
    bool adapter_resolved = false;
    std::size_t effective_tokens = 0;
    std::vector<ProofStep> proof;
    std::string error;  // classification/configuration failure that forced abstention
    bool operator==(const Answer&) const = default;
};

// ---------------------------------------------------------------------------
// Classification

namespace detail {

inline bool contains_any(std::string_view text, std::initializer_list<std::string_view> cues) {
    for (auto c : cues)
        if (text.find(c) != std::string_view::npos) return true;
    return false;
}

inline std::optional<ObjectId> option_object(const Question& q) {
    if (q.subject.object) return q.subject.object;
    for (const auto& o : q.options) {
        if (auto* c = std::get_if<Claim>(&o.payload))
            if (auto* obj = claim_object(*c)) return *obj;
        if (auto* a = std::get_if<Action>(&o.payload))
            if (!a->object.empty()) return a->object;
    }
    return std::nullopt;
}

}  // namespace detail

/// Maps a question onto a trace query. Uses the hint when it names a known kind,
/// otherwise the target path length and the option shapes.
inline QueryKind classify_query(const Question& q) {
    QueryKind k;
    k.path = BeliefPath(q.target_path);
    k.object = detail::option_object(q);

    bool all_intent = !q.options.empty(), any_action = false, all_goal = !q.options.empty();
    for (const auto& o : q.options) {
        all_intent = all_intent && std::holds_alternative<IntentClaim>(o.payload);
        any_action = any_action || std::holds_alternative<Action>(o.payload);
        auto* c = std::get_if<Claim>(&o.payload);
        all_goal = all_goal && c && std::holds_alternative<GoalClaim>(*c);
    }
    auto goal_owner = [&]() -> AgentId {
        if (q.subject.agent) return *q.subject.agent;
        for (const auto& o : q.options)
            if (auto* c = std::get_if<Claim>(&o.payload))
                if (auto* g = std::get_if<GoalClaim>(c)) return g->agent;
        return k.path.empty() ? AgentId{} : k.path.last();
    };

    std::string hint = q.kind_hint.value_or("");
    if (hint == "search") hint = "action";
    if (hint == "social_goal" || hint == "social_goal_least" || hint == "social_intent") hint = "social";
    static const std::set<std::string> known = {"reality", "memory", "belief", "action", "goal", "belief_of_goal", "social"};
    if (!known.count(hint)) {
        if (all_intent) hint = "social";
        else if (k.path.empty()) hint = "reality";
        else if (any_action) hint = "action";
        else if (all_goal) hint = (k.path.size() == 1 && goal_owner() == k.path.holder()) ? "goal" : "belief_of_goal";
        else if (is_search_phrasing(q.text)) hint = "action";
        else if (detail::contains_any(q.text, {"beginning", "initially", "at first", "originally"})) hint = "memory";
        else hint = "belief";
    }

    if (hint == "reality") {
        k.type = QueryType::reality;
        k.path = BeliefPath{};
    } else if (hint == "social") {
        k.type = QueryType::social_intent;
        k.least_likely = q.kind_hint == "social_goal_least" || detail::contains_any(q.text, {"least likely", "least"});
        for (const auto& o : q.options)
            if (auto* i = std::get_if<IntentClaim>(&o.payload)) {
                k.agent = i->speaker;
                k.listener = i->listener;
                break;
            }
        if (k.agent.empty() && q.target_path.size() >= 2) {
            k.agent = q.target_path[0];
            k.listener = q.target_path[1];
        }
        if (k.agent.empty() || k.listener.empty())
            throw ClassificationError("social intent question without speaker and listener");
        k.path = BeliefPath{k.agent};
    } else {
        if (k.path.empty()) throw ClassificationError("'" + hint + "' question needs a target path");
        k.agent = k.path.holder();
        if (hint == "memory") {
            k.type = QueryType::memory;
        } else if (hint == "belief") {
            k.type = QueryType::belief;
        } else if (hint == "action") {
            k.type = QueryType::action;
        } else if (hint == "goal") {
            k.type = QueryType::goal;
            k.agent = goal_owner();
            if (k.path.size() != 1) throw ClassificationError("goal question needs a single-agent target path");
        } else {
            k.type = QueryType::belief_of_goal;
            if (k.path.size() > 2)
                throw ClassificationError("belief-of-goal nesting deeper than 2 is unsupported (path " + k.path.str() + ")");
            k.agent = goal_owner();
        }
        if ((k.type == QueryType::memory || k.type == QueryType::action) && k.path.size() != 1)
            throw ClassificationError(to_string(k.type) + " question needs a single-agent target path");
    }
    if ((k.type == QueryType::reality || k.type == QueryType::memory || k.type == QueryType::belief ||
         k.type == QueryType::action) &&
        !k.object)
        throw ClassificationError("cannot identify the queried object");
    return k;
}

// ---------------------------------------------------------------------------
// Social intent and goal inference

struct SocialReading {
    Intent intent = Intent::undetermined;
    std::size_t step = 0;  // time of the deciding utterance
};

/// Reads the speaker's last located claim heard by `listener`. Honest w.r.t. the
/// speaker's own belief: helping; contrary: hindering; no belief: undetermined.
inline SocialReading classify_social_intent(const Trace& trace, const AgentId& speaker, const AgentId& listener) {
    if (trace.target != speaker)
        throw PreconditionError("social intent needs the speaker's trace, got '" + trace.target + "'");
    std::optional<SocialReading> out;
    for (const auto& st : trace.steps) {
        for (const auto& e : st.obs.seen) {
            auto* u = std::get_if<Utter>(&e.body);
            if (!u || u->speaker != speaker) continue;
            auto* at = std::get_if<AtClaim>(&u->claim);
            if (!at) continue;
            auto heard = realized_listeners(*u, st.env);
            if (std::find(heard.begin(), heard.end(), listener) == heard.end()) continue;
            const auto* believed = st.belief.own().location_of(at->object);
            Intent i = !believed ? Intent::undetermined
                                 : (believed->value == at->container ? Intent::helping : Intent::hindering);
            out = SocialReading{i, e.time};
        }
    }
    if (!out)
        throw PreconditionError("no utterance from '" + speaker + "' about an object location was heard by '" +
                                listener + "'");
    return *out;
}

namespace detail {

struct GoalEvidence {
    std::map<std::size_t, std::size_t> eliminated_at;  // candidate index -> step
    std::optional<std::size_t> pinned_at;
    std::vector<bool> survives;
};

inline GoalEvidence weigh_goals(const Trace& trace, const std::vector<Goal>& candidates) {
    GoalEvidence ev;
    ev.survives.assign(candidates.size(), true);
    const AgentId& agent = trace.target;

    std::vector<std::pair<std::size_t, Action>> acts;
    std::optional<std::pair<std::size_t, Goal>> declared;
    for (const auto& st : trace.steps)
        for (const auto& e : st.obs.seen) {
            if (auto* a = std::get_if<Act>(&e.body); a && a->agent == agent && a->action.kind != ActionKind::none)
                acts.emplace_back(e.time, a->action);
            if (auto* d = std::get_if<GoalDecl>(&e.body); d && d->agent == agent) declared = {e.time, d->goal};
        }

    std::set<ObjectId> exploited;
    for (std::size_t i = 0; i < acts.size(); ++i) {
        const auto& [t, action] = acts[i];
        if (action.kind == ActionKind::exploit) {
            exploited.insert(action.object);
            ev.pinned_at = t;
        }
        bool abandoned = action.kind == ActionKind::search && i + 1 < acts.size();
        if (!abandoned) continue;
        const PartialWorld& own = trace.belief_at(t).own();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (!ev.survives[c] || !candidates[c].has_object()) continue;
            const auto* f = own.location_of(candidates[c].target);
            if (f && f->value == action.container) {
                ev.survives[c] = false;
                ev.eliminated_at[c] = t;
            }
        }
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (!ev.survives[c]) continue;
        bool ok = true;
        if (!exploited.empty()) ok = candidates[c].has_object() && exploited.count(candidates[c].target);
        if (declared) ok = ok && candidates[c] == declared->second;
        if (!ok) {
            ev.survives[c] = false;
            ev.eliminated_at[c] = declared ? std::max(declared->first, ev.pinned_at.value_or(0)) : *ev.pinned_at;
        }
    }
    if (declared) ev.pinned_at = std::max(ev.pinned_at.value_or(0), declared->first);
    return ev;
}

}  // namespace detail

/// Goals from `candidates` consistent with the target's search/exploit trajectory.
inline std::vector<Goal> infer_goal(const Trace& trace, const std::vector<Goal>& candidates) {
    if (candidates.empty()) throw PreconditionError("infer_goal needs at least one candidate");
    auto ev = detail::weigh_goals(trace, candidates);
    std::vector<Goal> out;
    for (std::size_t c = 0; c < candidates.size(); ++c)
        if (ev.survives[c]) out.push_back(candidates[c]);
    return out;
}

// ---------------------------------------------------------------------------
// Option checks

namespace detail {

/// Which rule justified a believed fact set at time `since` on `path`.
inline std::string rule_for(const Scenario& s, const BeliefPath& path, std::size_t since) {
    if (since > 0 && std::holds_alternative<Utter>(s.events.at(since - 1).body))
        return rule_id(Rule::communication_scoped);
    return path.size() > 1 ? rule_id(Rule::co_observation_nests) : rule_id(Rule::observed_change_updates);
}

enum class Source { none, visible, hidden_physical, hidden_message };

/// How a claimed value could have reached `path`: through a visible event, only through
/// hidden physical evidence, or only through a message the path never received.
/// `initial` is the initial world matching the value, seen or not by the path.
template <class Matches>
Source value_source(const Scenario& s, const Trace& tr, const BeliefPath& path, Matches&& matches,
                    Source initial = Source::none) {
    bool visible = initial == Source::visible, hidden_physical = initial == Source::hidden_physical,
         hidden_message = false;
    for (const auto& e : s.events) {
        if (!matches(e)) continue;
        if (visible_along_path(e, path, tr.env_before(e.time))) visible = true;
        else if (std::holds_alternative<Utter>(e.body)) hidden_message = true;
        else hidden_physical = true;
    }
    if (visible) return Source::visible;
    if (hidden_message) return Source::hidden_message;
    if (hidden_physical) return Source::hidden_physical;
    return Source::none;
}

inline bool declared_option(const Declarations& d, const OptionPayload& p) {
    try {
        if (auto* c = std::get_if<Claim>(&p)) validate_claim(d, *c);
        else if (auto* a = std::get_if<Action>(&p)) validate_action(d, *a);
        else {
            const auto& i = std::get<IntentClaim>(p);
            return d.has_agent(i.speaker) && d.has_agent(i.listener);
        }
    } catch (const SchemaError&) {
        return false;
    }
    return true;
}

inline Verdict make(const std::string& label, Status st, std::optional<Reason> r, std::optional<std::size_t> step,
                    std::string note) {
    return Verdict{label, st, r, step, std::move(note), {}};
}

}  // namespace detail

/// Checks one option against the trace. Contradictions carry a reason code and the
/// trace step that establishes them; cited events are always visible along the query path.
inline Verdict check_option(const Option& option, const Trace& tr, const QueryKind& q, const Scenario& s) {
    using detail::make;
    const std::string& label = option.label;

    if (!detail::declared_option(s.decl, option.payload)) {
        auto v = make(label, Status::contradicted, Reason::belief_mismatch, std::nullopt,
                      "option references an undeclared entity");
        v.proof.push_back({label, 0, false, "-", v.note});
        return v;
    }

    auto cite = [&](Verdict& v, std::size_t step, const std::string& rule, const std::string& conclusion) {
        v.proof.push_back({label, step, step > 0, rule, conclusion});
    };
    auto reason_from = [](detail::Source src) {
        if (src == detail::Source::hidden_message) return Reason::communication_access;
        if (src == detail::Source::hidden_physical) return Reason::unobserved_knowledge;
        return Reason::belief_mismatch;
    };

    const Claim* claim = std::get_if<Claim>(&option.payload);
    const Action* action = std::get_if<Action>(&option.payload);

    switch (q.type) {
        case QueryType::reality: {
            if (!claim) return make(label, Status::undetermined, std::nullopt, std::nullopt, "not a world claim");
            if (auto* at = std::get_if<AtClaim>(claim)) {
                auto loc = tr.final_env.location_of(at->object);
                std::size_t last = 0;
                for (const auto& e : s.events)
                    if (auto* m = std::get_if<Move>(&e.body); m && m->object == at->object) last = e.time;
                if (!loc) return make(label, Status::undetermined, std::nullopt, std::nullopt, "object is unplaced");
                auto v = *loc == at->container
                             ? make(label, Status::consistent, std::nullopt, last, "")
                             : make(label, Status::contradicted, Reason::reality_mismatch, last, "");
                cite(v, last, "reality", at->object + " is in " + *loc);
                return v;
            }
            if (auto* a = std::get_if<AttrClaim>(claim)) {
                auto val = tr.final_env.attribute(a->object, a->attribute);
                if (!val) return make(label, Status::undetermined, std::nullopt, std::nullopt, "attribute unset");
                auto v = *val == a->value ? make(label, Status::consistent, std::nullopt, std::nullopt, "")
                                          : make(label, Status::contradicted, Reason::reality_mismatch, std::nullopt, "");
                cite(v, 0, "reality", a->object + "." + a->attribute + " is " + *val);
                return v;
            }
            return make(label, Status::undetermined, std::nullopt, std::nullopt, "not a world claim");
        }

        case QueryType::memory:
        case QueryType::belief: {
            if (!claim) return make(label, Status::undetermined, std::nullopt, std::nullopt, "not a belief claim");
            const BeliefPath& path = q.path;
            if (auto* at = std::get_if<AtClaim>(claim)) {
                const Fact<ContainerId>* f = nullptr;
                if (q.type == QueryType::belief) {
                    const PartialWorld* w = tr.final_belief().find(path);
                    if (!w) throw ConfigError("trace does not cover path " + path.str());
                    f = w->location_of(at->object);
                } else {
                    for (std::size_t t = 0; t <= tr.steps.size() && !f; ++t)
                        f = tr.belief_at(t).find(path)->location_of(at->object);
                }
                auto matches = [&](const Event& e) {
                    if (auto* m = std::get_if<Move>(&e.body)) return m->object == at->object && m->to == at->container;
                    if (auto* u = std::get_if<Utter>(&e.body))
                        if (auto* c = std::get_if<AtClaim>(&u->claim)) return *c == *at;
                    return false;
                };
                std::string what = path.str() + " believes " + at->object;
                if (f && f->value == at->container) {
                    auto v = make(label, Status::consistent, std::nullopt, f->since, "");
                    cite(v, f->since, detail::rule_for(s, path, f->since),
                         what + (q.type == QueryType::memory ? " was first in " : " is in ") + f->value);
                    return v;
                }
                auto initial = detail::Source::none;
                if (tr.initial_env.location_of(at->object) == at->container) {
                    const auto* seeded = tr.initial_belief.find(path);
                    initial = seeded && seeded->location_of(at->object) ? detail::Source::visible
                                                                        : detail::Source::hidden_physical;
                }
                auto src = detail::value_source(s, tr, path, matches, initial);
                if (f) {
                    auto v = make(label, Status::contradicted, reason_from(src), f->since, "");
                    cite(v, f->since, detail::rule_for(s, path, f->since) + "," + rule_id(Rule::unobserved_preserves),
                         what + (q.type == QueryType::memory ? " was first in " : " is in ") + f->value);
                    return v;
                }
                if (src == detail::Source::hidden_message || src == detail::Source::hidden_physical) {
                    auto v = make(label, Status::contradicted, reason_from(src), 0, "");
                    cite(v, 0, rule_id(Rule::unobserved_preserves), what + " location was never observed");
                    return v;
                }
                return make(label, Status::undetermined, std::nullopt, std::nullopt, what + " location unknown");
            }
            if (auto* a = std::get_if<AttrClaim>(claim)) {
                const PartialWorld* w = tr.final_belief().find(path);
                if (!w) throw ConfigError("trace does not cover path " + path.str());
                const auto* f = w->attribute_of(a->object, a->attribute);
                std::string what = path.str() + " believes " + a->object + "." + a->attribute;
                if (!f) return make(label, Status::undetermined, std::nullopt, std::nullopt, what + " unknown");
                if (f->value == a->value) {
                    auto v = make(label, Status::consistent, std::nullopt, f->since, "");
                    cite(v, f->since, detail::rule_for(s, path, f->since), what + " is " + f->value);
                    return v;
                }
                auto matches = [&](const Event& e) {
                    if (auto* st = std::get_if<StateSet>(&e.body))
                        return st->object == a->object && st->attribute == a->attribute && st->value == a->value;
                    if (auto* u = std::get_if<Utter>(&e.body))
                        if (auto* c = std::get_if<AttrClaim>(&u->claim)) return *c == *a;
                    return false;
                };
                auto src = detail::value_source(s, tr, path, matches);
                auto v = make(label, Status::contradicted, reason_from(src), f->since, "");
                cite(v, f->since, detail::rule_for(s, path, f->since) + "," + rule_id(Rule::unobserved_preserves),
                     what + " is " + f->value);
                return v;
            }
            [[fallthrough]];
        }

        case QueryType::belief_of_goal: {
            auto* gc = claim ? std::get_if<GoalClaim>(claim) : nullptr;
            if (!gc) return make(label, Status::undetermined, std::nullopt, std::nullopt, "not a goal claim");
            const PartialWorld* w = tr.final_belief().find(q.path);
            if (!w) throw ConfigError("trace does not cover path " + q.path.str());
            const auto* f = w->goal_of(gc->agent);
            std::string what = q.path.str() + " believes goal of " + gc->agent;
            if (f && f->value == gc->goal) {
                auto v = make(label, Status::consistent, std::nullopt, f->since, "");
                cite(v, f->since, detail::rule_for(s, q.path, f->since), what + " is " + to_string(f->value));
                return v;
            }
            auto matches = [&](const Event& e) {
                if (auto* d = std::get_if<GoalDecl>(&e.body)) return d->agent == gc->agent && d->goal == gc->goal;
                if (auto* u = std::get_if<Utter>(&e.body))
                    if (auto* c = std::get_if<GoalClaim>(&u->claim)) return *c == *gc;
                return false;
            };
            auto src = detail::value_source(s, tr, q.path, matches);
            if (f) {
                auto v = make(label, Status::contradicted,
                              src == detail::Source::visible ? Reason::goal_mismatch : reason_from(src), f->since, "");
                cite(v, f->since, detail::rule_for(s, q.path, f->since), what + " is " + to_string(f->value));
                return v;
            }
            if (src == detail::Source::hidden_message || src == detail::Source::hidden_physical) {
                auto v = make(label, Status::contradicted, reason_from(src), 0, "");
                cite(v, 0, rule_id(Rule::unobserved_preserves), what + " was never accessible");
                return v;
            }
            return make(label, Status::undetermined, std::nullopt, std::nullopt, what + " unknown");
        }

        case QueryType::action: {
            Action claimed;
            if (action) claimed = *action;
            else if (auto* at = claim ? std::get_if<AtClaim>(claim) : nullptr) claimed = Action::search(at->container);
            else return make(label, Status::undetermined, std::nullopt, std::nullopt, "not an action claim");

            Action predicted = tr.steps.empty()
                                   ? (tr.config.rules.enabled(Rule::action_from_belief)
                                          ? decide_action(tr.initial_goal ? std::optional<Goal>(tr.initial_goal->goal)
                                                                          : std::nullopt,
                                                          tr.initial_belief)
                                          : Action::none())
                                   : tr.steps.back().action;
            if (predicted.kind == ActionKind::none)
                return make(label, Status::undetermined, std::nullopt, std::nullopt, "no action follows from goal and belief");

            auto looks_in = [](const Action& a) {
                return a.kind == ActionKind::search || a.kind == ActionKind::exploit;
            };
            bool same = looks_in(predicted) && looks_in(claimed) ? predicted.container == claimed.container
                                                                : predicted == claimed;
            std::size_t basis = 0;
            const PartialWorld& own = tr.final_belief().own();
            if (!predicted.object.empty())
                if (auto* f = own.location_of(predicted.object)) basis = f->since;
            if (looks_in(predicted) && q.object)
                if (auto* f = own.location_of(*q.object)) basis = f->since;
            const auto& goal = tr.final_goal();
            std::string why = "goal " + (goal ? to_string(goal->goal) : std::string("?")) + " with belief gives " +
                              to_string(predicted);
            auto v = same ? make(label, Status::consistent, std::nullopt, basis, "")
                          : make(label, Status::contradicted, Reason::action_rule_violation, basis, "");
            cite(v, basis, rule_id(Rule::action_from_belief), why);
            return v;
        }

        case QueryType::goal: {
            auto* gc = claim ? std::get_if<GoalClaim>(claim) : nullptr;
            if (!gc || gc->agent != q.agent)
                return make(label, Status::contradicted, Reason::goal_mismatch, std::nullopt, "goal of another agent");
            return make(label, Status::undetermined, std::nullopt, std::nullopt, "resolved by goal elimination");
        }

        case QueryType::social_intent:
            return make(label, Status::undetermined, std::nullopt, std::nullopt, "resolved by social reading");
    }
    return make(label, Status::undetermined, std::nullopt, std::nullopt, "");
}

namespace detail {

/// Goal questions are decided jointly over all candidates.
inline void check_goal_options(std::vector<Verdict>& verdicts, const std::vector<Option>& options, const Trace& tr,
                               const QueryKind& q) {
    std::vector<Goal> candidates;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (verdicts[i].status == Status::contradicted) continue;
        const auto& gc = std::get<GoalClaim>(std::get<Claim>(options[i].payload));
        candidates.push_back(gc.goal);
        index.push_back(i);
    }
    if (candidates.empty()) return;
    auto ev = weigh_goals(tr, candidates);
    bool any_evidence = !ev.eliminated_at.empty() || ev.pinned_at.has_value();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        Verdict& v = verdicts[index[c]];
        v.note.clear();
        if (!any_evidence) {
            v.status = Status::undetermined;
            v.note = "no search or exploit evidence";
            continue;
        }
        if (ev.survives[c]) {
            v.status = Status::consistent;
            v.step = ev.pinned_at.value_or(0);
            v.proof.push_back({v.label, *v.step, *v.step > 0, rule_id(Rule::action_from_belief),
                               q.agent + " trajectory is consistent with " + to_string(candidates[c])});
        } else {
            v.status = Status::contradicted;
            v.reason = Reason::goal_mismatch;
            v.step = ev.eliminated_at.at(c);
            v.proof.push_back({v.label, *v.step, *v.step > 0, rule_id(Rule::action_from_belief),
                               q.agent + " trajectory rules out " + to_string(candidates[c])});
        }
    }
}

inline void check_social_options(std::vector<Verdict>& verdicts, const std::vector<Option>& options, const Trace& tr,
                                 const QueryKind& q) {
    auto reading = classify_social_intent(tr, q.agent, q.listener);
    for (std::size_t i = 0; i < options.size(); ++i) {
        auto* ic = std::get_if<IntentClaim>(&options[i].payload);
        Verdict& v = verdicts[i];
        if (!ic) continue;
        v.note.clear();
        if (ic->speaker != q.agent || ic->listener != q.listener) {
            v.status = Status::contradicted;
            v.reason = Reason::communication_access;
            v.note = "no utterance between these agents";
            continue;
        }
        if (reading.intent == Intent::undetermined) {
            v.status = Status::undetermined;
            v.note = "speaker never observed the object";
            continue;
        }
        bool match = ic->intent == reading.intent;
        if (q.least_likely) match = !match;
        v.status = match ? Status::consistent : Status::contradicted;
        if (!match) v.reason = Reason::goal_mismatch;
        v.step = reading.step;
        v.proof.push_back({v.label, reading.step, true, rule_id(Rule::communication_scoped),
                           q.agent + " claim to " + q.listener + " reads as " + to_string(reading.intent) +
                               (q.least_likely ? " (least-likely inverts)" : "")});
    }
}

/// Count of an option's sub-facts supported by the trace: entities the target has seen
/// and facts believed along the query path at any step.
inline int support_score(const Option& o, const Trace& tr, const QueryKind& q) {
    std::set<std::string> seen;
    for (const auto& [obj, f] : tr.initial_belief.own().location) {
        seen.insert(obj);
        seen.insert(f.value);
    }
    for (const auto& st : tr.steps)
        for (const auto& e : st.obs.seen) {
            seen.insert(event_subject(e));
            if (auto* m = std::get_if<Move>(&e.body)) seen.insert(m->to);
            if (auto* u = std::get_if<Utter>(&e.body))
                if (auto* at = std::get_if<AtClaim>(&u->claim)) seen.insert(at->container);
        }
    BeliefPath path = q.path.empty() ? BeliefPath{tr.target} : q.path;
    auto believed = [&](const ObjectId& obj, const ContainerId& c) {
        for (std::size_t t = 0; t <= tr.steps.size(); ++t)
            if (const auto* w = tr.belief_at(t).find(path))
                if (const auto* f = w->location_of(obj); f && f->value == c) return true;
        return false;
    };
    int score = 0;
    if (auto* c = std::get_if<Claim>(&o.payload)) {
        if (auto* at = std::get_if<AtClaim>(c)) {
            score += seen.count(at->object) + seen.count(at->container) + believed(at->object, at->container);
        } else if (auto* a = std::get_if<AttrClaim>(c)) {
            score += seen.count(a->object) + seen.count(a->value);
        } else if (auto* g = std::get_if<GoalClaim>(c)) {
            score += seen.count(g->agent) + seen.count(g->goal.target);
        }
    } else if (auto* a = std::get_if<Action>(&o.payload)) {
        score += seen.count(a->container) + seen.count(a->object);
        if (q.object && !a->container.empty()) score += believed(*q.object, a->container);
    } else if (auto* i = std::get_if<IntentClaim>(&o.payload)) {
        score += seen.count(i->speaker) + seen.count(i->listener);
    }
    return score;
}

}  // namespace detail

/// Argmax-consistency selection with controlled abstention.
/// `support` ranks default options; empty means all options tie (first wins).
inline Answer select_answer(const std::vector<Verdict>& verdicts, const std::vector<Option>& options,
                            const std::vector<int>& support = {}) {
    if (verdicts.size() < 2 || verdicts.size() != options.size())
        throw PreconditionError("select_answer needs one verdict per option and at least two options");
    Answer a;
    a.verdicts = verdicts;
    std::vector<std::size_t> consistent, undetermined, all;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        all.push_back(i);
        if (verdicts[i].status == Status::consistent) consistent.push_back(i);
        if (verdicts[i].status == Status::undetermined) undetermined.push_back(i);
    }
    auto best = [&](const std::vector<std::size_t>& pool) {
        std::size_t pick = pool.front();
        for (auto i : pool)
            if (!support.empty() && support[i] > support[pick]) pick = i;
        return pick;
    };
    std::size_t pick;
    std::string why;
    if (consistent.size() == 1) {
        pick = consistent.front();
        why = "unique consistent option";
    } else if (consistent.size() > 1) {
        pick = best(consistent);
        a.abstained = true;
        why = "abstain: several consistent options, default by trace support";
    } else if (undetermined.size() == verdicts.size()) {
        pick = best(all);
        a.abstained = true;
        why = "abstain: no option decided, default by trace support";
    } else if (!undetermined.empty()) {
        pick = undetermined.front();
        a.abstained = true;
        why = "abstain: no consistent option, first undetermined";
    } else {
        pick = best(all);
        a.abstained = true;
        why = "abstain: every option contradicted, default by trace support";
    }
    a.chosen = options[pick].label;
    for (const auto& v : verdicts) a.proof.insert(a.proof.end(), v.proof.begin(), v.proof.end());
    a.proof.push_back({a.chosen, 0, false, "select", why});
    return a;
}

// ---------------------------------------------------------------------------
// Fallback adapters

struct AdapterChoice {
    std::string label;
    std::string prompt;    // rendered text sent to the solver, for the token proxy
    std::string response;  // rendered solver output
};

/// Extension point consulted only when the symbolic pipeline abstains.
class SolverAdapter {
public:
    virtual ~SolverAdapter() = default;
    virtual std::string name() const = 0;
    virtual AdapterChoice choose(const Scenario& scenario, const Trace* trace, const std::vector<Option>& options,
                                 const std::string& default_label) = 0;
};

/// Returns the default option unchanged.
class NullAdapter final : public SolverAdapter {
public:
    std::string name() const override { return "null"; }
    AdapterChoice choose(const Scenario&, const Trace*, const std::vector<Option>&,
                         const std::string& default_label) override {
        return {default_label, {}, {}};
    }
};

class AdapterRegistry {
public:
    using Factory = std::function<std::unique_ptr<SolverAdapter>()>;

    static AdapterRegistry with_builtins() {
        AdapterRegistry r;
        r.add("null", [] { return std::make_unique<NullAdapter>(); });
        return r;
    }
    void add(const std::string& name, Factory f) { factories_[name] = std::move(f); }
    bool has(const std::string& name) const { return factories_.count(name) != 0; }
    std::unique_ptr<SolverAdapter> create(const std::string& name) const {
        auto it = factories_.find(name);
        if (it == factories_.end()) throw ConfigError("no solver adapter registered as '" + name + "'");
        return it->second();
    }

private:
    std::map<std::string, Factory> factories_;
};

struct FallbackResult {
    std::string label;
    bool adapter_resolved = false;
    std::size_t effective_tokens = 0;
    std::string error;
};

/// Asks the adapter to resolve an abstention; any failure keeps the default.
inline FallbackResult resolve_fallback(SolverAdapter& adapter, const Scenario& scenario, const Trace* trace,
                                       const std::vector<Option>& options, const std::string& default_label) {
    FallbackResult r{default_label, false, 0, {}};
    try {
        auto choice = adapter.choose(scenario, trace, options, default_label);
        r.effective_tokens = count_tokens(choice.prompt) + count_tokens(choice.response);
        bool known = std::any_of(options.begin(), options.end(), [&](const Option& o) { return o.label == choice.label; });
        if (!known) throw Error("adapter returned unknown option '" + choice.label + "'");
        r.label = choice.label;
        r.adapter_resolved = true;
    } catch (const std::exception& e) {
        r.error = "adapter '" + adapter.name() + "' failed on " + scenario.id + ": " + e.what();
        std::clog << "[fallback] " << r.error << '\n';
    }
    return r;
}

// ---------------------------------------------------------------------------
// Whole-question proving

struct ProverConfig {
    RuleSet rules;
    std::optional<std::size_t> max_order;  // default: the question's belief order (min 1)
    bool distractor_scope = true;          // restrict updates to question entities (R6)
};

struct ProofResult {
    std::optional<QueryKind> query;
    std::optional<Trace> trace;
    Answer answer;
};

inline BeliefConfig belief_config_for(const Scenario& s, const QueryKind& q, const ProverConfig& cfg) {
    BeliefConfig bc;
    bc.rules = cfg.rules;
    bc.query_order = q.path.size();
    bc.max_order = cfg.max_order.value_or(std::max<std::size_t>(q.path.size(), 1));
    if (cfg.distractor_scope) bc.scope = question_scope(s.question);
    return bc;
}

/// Classifies, traces, checks every option and selects. Errors become abstentions.
inline ProofResult prove(const Scenario& s, const ProverConfig& cfg = {}) {
    ProofResult out;
    const auto& options = s.question.options;
    auto abstain = [&](const std::string& err) {
        std::vector<Verdict> vs;
        for (const auto& o : options) vs.push_back({o.label, Status::undetermined, std::nullopt, std::nullopt, err, {}});
        std::vector<int> support;
        if (out.trace && out.query)
            for (const auto& o : options) support.push_back(detail::support_score(o, *out.trace, *out.query));
        out.answer = select_answer(vs, options, support);
        out.answer.abstained = true;
        out.answer.error = err;
    };
    try {
        out.query = classify_query(s.question);
        const auto& q = *out.query;
        AgentId target = q.trace_agent();
        if (target.empty()) target = s.decl.agents.at(0);
        if (q.type == QueryType::social_intent &&
            std::none_of(s.events.begin(), s.events.end(),
                         [](const Event& e) { return std::holds_alternative<Utter>(e.body); }))
            throw ClassificationError("social intent question in a story without utterances");
        out.trace = build_trace(s, target, belief_config_for(s, q, cfg));

        std::vector<Verdict> verdicts;
        for (const auto& o : options) verdicts.push_back(check_option(o, *out.trace, q, s));
        if (q.type == QueryType::goal) detail::check_goal_options(verdicts, options, *out.trace, q);
        if (q.type == QueryType::social_intent) detail::check_social_options(verdicts, options, *out.trace, q);

        std::vector<int> support;
        for (const auto& o : options) support.push_back(detail::support_score(o, *out.trace, q));
        out.answer = select_answer(verdicts, options, support);
    } catch (const ClassificationError& e) {
        abstain(std::string("classification: ") + e.what());
    } catch (const PreconditionError& e) {
        abstain(std::string("precondition: ") + e.what());
    } catch (const ConfigError& e) {
        abstain(std::string("configuration: ") + e.what());
    }
    return out;
}

/// Every cited event is visible along the query path. Reality queries cite world state only.
inline bool proof_is_sound(const ProofResult& r, const Scenario& s) {
    if (!r.query || !r.trace || r.query->path.empty()) return true;
    for (const auto& p : r.answer.proof) {
        if (!p.cites_event) continue;
        if (!visible_along_path(s.events.at(p.step - 1), r.query->path, r.trace->env_before(p.step))) return false;
    }
    return true;
}

}  // namespace mindtrace
