// Seeded story generator with oracle-computed gold labels.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "event_model.hpp"
#include "oracle.hpp"
#include "record_io.hpp"

namespace mindtrace::synth {

class GenerationError : public Error {
public:
    using Error::Error;
};

enum class Regime { false_belief, nested, communication, goal_action };

inline constexpr std::array<Regime, 4> kAllRegimes = {Regime::false_belief, Regime::nested, Regime::communication,
                                                      Regime::goal_action};

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::false_belief: return "false_belief";
        case Regime::nested: return "nested";
        case Regime::communication: return "communication";
        case Regime::goal_action: return "goal_action";
    }
    return "?";
}

inline Regime parse_regime(std::string_view s) {
    for (auto r : kAllRegimes)
        if (to_string(r) == s) return r;
    throw GenerationError("unknown regime '" + std::string(s) + "'");
}

struct GenConfig {
    std::size_t n_agents = 3;
    std::size_t n_rooms = 2;
    std::size_t n_containers = 3;
    std::size_t n_objects = 2;
    std::size_t n_events = 10;
    std::size_t belief_order = 1;
    double communication_rate = 0.2;
    double deception_rate = 0.3;
    double distractor_rate = 0.2;
    Regime regime = Regime::false_belief;
    std::uint64_t seed = 0;
    std::optional<std::string> question_type;  // forces one of the regime's question types

    void validate() const {
        auto range = [](const char* name, std::size_t v, std::size_t lo, std::size_t hi) {
            if (v < lo || v > hi)
                throw GenerationError(std::string(name) + " = " + std::to_string(v) + " outside [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
        };
        range("n_agents", n_agents, 2, 5);
        range("n_rooms", n_rooms, 1, 4);
        range("n_containers", n_containers, 2, 6);
        range("n_objects", n_objects, 1, 4);
        range("n_events", n_events, 1, 30);
        range("belief_order", belief_order, 0, 4);
        if (belief_order > n_agents)
            throw GenerationError("belief_order " + std::to_string(belief_order) + " needs at least that many agents (have " +
                                  std::to_string(n_agents) + ")");
        for (auto [name, v] : {std::pair{"communication_rate", communication_rate},
                               std::pair{"deception_rate", deception_rate}, std::pair{"distractor_rate", distractor_rate}})
            if (!(v >= 0.0 && v <= 1.0)) throw GenerationError(std::string(name) + " must lie in [0, 1]");
    }
};

/// Question types each regime can produce.
inline std::vector<std::string> question_types(Regime r, std::size_t order, std::size_t n_objects) {
    if (order == 0) return {"reality"};
    switch (r) {
        case Regime::false_belief: return {"belief", "memory", "reality", "search"};
        case Regime::nested: return {"belief"};
        case Regime::communication: return {"belief", "social_goal", "social_goal_least"};
        case Regime::goal_action: {
            std::vector<std::string> t = {"search", "task"};
            if (n_objects >= 2) t.push_back("goal");
            if (order >= 2) t.push_back("belief_of_goal");
            return t;
        }
    }
    return {};
}

/// Portable draws on top of mt19937_64 (distribution classes differ across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(eng_() % n); }
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v.at(below(v.size())); }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 eng_;
};

/// A varied, feasible configuration derived from a seed alone.
inline GenConfig config_for_seed(std::uint64_t seed, Regime regime) {
    Rng r(seed ^ 0x9e3779b97f4a7c15ull);
    GenConfig c;
    c.seed = seed;
    c.regime = regime;
    c.belief_order = seed % 5;
    std::size_t min_agents = std::max<std::size_t>(2, c.belief_order);
    c.n_agents = min_agents + r.below(5 - min_agents + 1);
    c.n_rooms = 1 + r.below(4);
    c.n_containers = 2 + r.below(5);
    c.n_objects = 1 + r.below(4);
    c.n_events = 6 + r.below(25);
    c.communication_rate = 0.5 * r.unit();
    c.deception_rate = r.unit();
    c.distractor_rate = 0.5 * r.unit();
    return c;
}

struct Generated {
    Scenario scenario;
    oracle::GroundTruth truth;
    bool decidable() const { return scenario.question.gold.has_value(); }
};

namespace detail {

inline const std::vector<std::string> kAgents = {"Sally", "Anne", "Oliver", "Emma", "Jack"};
inline const std::vector<std::string> kRooms = {"kitchen", "hallway", "garden", "office"};
inline const std::vector<std::string> kContainers = {"basket", "box", "drawer", "cupboard", "suitcase", "bucket"};
inline const std::vector<std::string> kObjects = {"ball", "apple", "key", "hat"};
inline const std::vector<std::string> kTasks = {"cook", "paint", "repair"};
inline const std::string kState = "state";

inline std::string option_label(std::size_t i) { return std::string(1, static_cast<char>('A' + i)); }

class Builder {
public:
    explicit Builder(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

    Generated run() {
        cfg_.validate();
        auto types = question_types(cfg_.regime, cfg_.belief_order, cfg_.n_objects);
        if (cfg_.question_type) {
            if (std::find(types.begin(), types.end(), *cfg_.question_type) == types.end())
                throw GenerationError("question type '" + *cfg_.question_type + "' is not available for regime " +
                                      to_string(cfg_.regime) + " with this configuration");
            type_ = *cfg_.question_type;
        } else {
            type_ = rng_.pick(types);
        }
        setup_entities();
        plan();
        if (cfg_.n_events < forced_count_)
            throw GenerationError("n_events " + std::to_string(cfg_.n_events) + " is below the " +
                                  std::to_string(forced_count_) + " events a " + type_ + " story needs");
        s_.initial = world_;
        if (per_container_) {
            std::vector<OptionPayload> every;
            for (const auto& c : s_.decl.containers) every.push_back(per_container_(c));
            set_options(every);
        } else {
            set_options(fixed_options_);
        }
        scope_ = question_scope(s_.question);

        std::size_t free = cfg_.n_events - forced_count_;
        std::size_t before = rng_.below(free + 1);
        pad(before);
        forced_();
        frozen_.clear();
        pinned_.clear();
        pad(free - before);

        finish_question();
        validate_scenario(s_);
        return {s_, truth_};
    }

private:
    GenConfig cfg_;
    Rng rng_;
    Scenario s_;
    WorldState world_;
    std::string type_;
    AgentId actor_;             // holder of the question's path
    ObjectId object_;           // the object asked about
    RoomId home_;               // room of object_ at t = 0
    std::set<AgentId> frozen_;  // agents that may not enter or leave during the pre-phase
    std::set<ObjectId> pinned_; // objects that may not move during the pre-phase
    std::set<std::string> scope_;
    std::map<AgentId, std::map<ObjectId, ContainerId>> known_;  // rough first-order knowledge for honest talk
    std::size_t forced_count_ = 0;
    std::function<void()> forced_;
    std::function<OptionPayload(const ContainerId&)> per_container_;  // location-style options
    std::vector<OptionPayload> fixed_options_;
    oracle::GroundTruth truth_;

    // -- entities ---------------------------------------------------------

    void setup_entities() {
        auto& d = s_.decl;
        d.agents.assign(kAgents.begin(), kAgents.begin() + static_cast<long>(cfg_.n_agents));
        d.rooms.assign(kRooms.begin(), kRooms.begin() + static_cast<long>(cfg_.n_rooms));
        d.containers.assign(kContainers.begin(), kContainers.begin() + static_cast<long>(cfg_.n_containers));
        d.objects.assign(kObjects.begin(), kObjects.begin() + static_cast<long>(cfg_.n_objects));
        if (cfg_.regime == Regime::goal_action) d.attributes = {kState};

        std::size_t used = std::max<std::size_t>(1, std::min(cfg_.n_rooms, cfg_.n_containers / 2));
        for (std::size_t i = 0; i < d.containers.size(); ++i) world_.container_room[d.containers[i]] = d.rooms[i % used];
        for (const auto& o : d.objects) world_.object_loc[o] = rng_.pick(d.containers);
        for (const auto& a : d.agents) world_.agent_room[a] = rng_.pick(d.rooms);
        if (cfg_.regime == Regime::goal_action)
            for (const auto& o : d.objects) world_.attributes[{o, kState}] = rng_.chance(0.8) ? "usable" : "broken";

        object_ = rng_.pick(d.objects);
        home_ = world_.container_room.at(world_.object_loc.at(object_));
    }

    std::vector<ContainerId> containers_in(const RoomId& room) const {
        std::vector<ContainerId> out;
        for (const auto& c : s_.decl.containers)
            if (world_.container_room.at(c) == room) out.push_back(c);
        return out;
    }

    /// Distinct agents in random order.
    std::vector<AgentId> draw_agents(std::size_t n) {
        auto all = s_.decl.agents;
        rng_.shuffle(all);
        all.resize(n);
        return all;
    }

    void place_home(const std::vector<AgentId>& who) {
        for (const auto& a : who) {
            world_.agent_room[a] = home_;
            frozen_.insert(a);
        }
    }

    ContainerId other_container(const ObjectId& o) {
        const auto& here = world_.object_loc.at(o);
        std::vector<ContainerId> choices;
        for (const auto& c : containers_in(world_.container_room.at(here)))
            if (c != here) choices.push_back(c);
        return rng_.pick(choices);
    }

    // -- script -----------------------------------------------------------

    void plan() {
        Question& q = s_.question;
        q.subject.object = object_;
        auto at = [this](const ContainerId& c) -> OptionPayload { return Claim{AtClaim{object_, c}}; };
        const auto& o = object_;

        if (type_ == "reality") {
            auto cast = draw_agents(1);
            actor_ = cast[0];
            place_home(cast);
            q.kind_hint = "reality";
            q.subject.agent = actor_;
            q.text = "Where is the " + o + " really?";
            per_container_ = at;
            forced_count_ = 1;
            forced_ = [this] { push(Move{actor_, object_, other_container(object_)}); };
            return;
        }

        if (cfg_.regime == Regime::false_belief || cfg_.regime == Regime::nested) {
            std::size_t k = cfg_.regime == Regime::nested ? cfg_.belief_order : 1;
            auto path = draw_agents(k);
            AgentId mover;
            if (k >= 2) {
                mover = path[0];
            } else {
                auto others = s_.decl.agents;
                others.erase(std::find(others.begin(), others.end(), path[0]));
                mover = rng_.pick(others);
            }
            std::vector<AgentId> cast = path;
            cast.push_back(mover);
            place_home(cast);
            actor_ = path[0];
            q.target_path = path;
            q.subject.agent = actor_;
            forced_count_ = 2;
            forced_ = [this, leaver = path.back(), mover] {
                push(Leave{leaver, home_});
                push(Move{mover, object_, other_container(object_)});
            };
            if (type_ == "search") {
                q.kind_hint = "search";
                q.text = "Where will " + actor_ + " look for the " + o + "?";
                per_container_ = [](const ContainerId& c) -> OptionPayload { return Action::search(c); };
            } else if (type_ == "memory") {
                q.kind_hint = "memory";
                q.text = "Where did " + actor_ + " think the " + o + " was at the beginning?";
                per_container_ = at;
            } else {
                q.kind_hint = "belief";
                std::string text = "Where does ";
                for (std::size_t i = 0; i < path.size(); ++i)
                    text += path[i] + (i + 1 < path.size() ? " think " : "");
                q.text = text + " think the " + o + " is?";
                per_container_ = at;
            }
            return;
        }

        if (cfg_.regime == Regime::communication) {
            auto pair = draw_agents(2);
            AgentId speaker = pair[0], listener = pair[1];
            place_home({speaker});
            if (cfg_.n_rooms > 1 && rng_.chance(0.5)) {
                std::vector<RoomId> away;
                for (const auto& r : s_.decl.rooms)
                    if (r != home_) away.push_back(r);
                world_.agent_room[listener] = rng_.pick(away);
            }
            forced_count_ = 1;
            forced_ = [this, speaker, listener] {
                const auto& truth = world_.object_loc.at(object_);
                ContainerId said = rng_.chance(cfg_.deception_rate) ? other_container(object_) : truth;
                bool together = world_.room_of_agent(listener) == world_.room_of_agent(speaker);
                bool is_private = !together || rng_.chance(0.5);
                Utter u{speaker, is_private, {}, AtClaim{object_, said}};
                if (is_private) u.listeners = {listener};
                push(u);
            };
            if (type_ == "belief") {
                std::vector<AgentId> path;
                bool start_with_listener = cfg_.belief_order == 1 || rng_.chance(0.5);
                for (std::size_t i = 0; i < cfg_.belief_order; ++i)
                    path.push_back((i % 2 == 0) == start_with_listener ? listener : speaker);
                actor_ = path[0];
                q.kind_hint = "belief";
                q.target_path = path;
                q.subject.agent = actor_;
                std::string text = "Where does ";
                for (std::size_t i = 0; i < path.size(); ++i) text += path[i] + (i + 1 < path.size() ? " think " : "");
                q.text = text + " think the " + o + " is?";
                per_container_ = at;
            } else {
                actor_ = speaker;
                q.kind_hint = type_;
                q.target_path = {speaker};
                q.subject.agent = speaker;
                bool least = type_ == "social_goal_least";
                q.text = std::string(least ? "What is least likely the reason " : "Why did ") + speaker + " tell " +
                         listener + " where the " + o + " is?";
                fixed_options_ = {IntentClaim{speaker, listener, Intent::helping},
                                  IntentClaim{speaker, listener, Intent::hindering}};
            }
            return;
        }

        // goal_action
        if (type_ == "search") {
            auto cast = draw_agents(2);
            actor_ = cast[0];
            place_home(cast);
            q.kind_hint = "search";
            q.target_path = {actor_};
            q.subject.agent = actor_;
            q.text = "Where will " + actor_ + " look for the " + o + "?";
            per_container_ = [](const ContainerId& c) -> OptionPayload { return Action::search(c); };
            bool declare = rng_.chance(0.5), hide = rng_.chance(0.5);
            forced_count_ = (declare ? 1 : 0) + (hide ? 2 : 0);
            forced_ = [this, declare, hide, mover = cast[1]] {
                if (declare) push(GoalDecl{actor_, Goal{GoalKind::fetch, object_, std::nullopt}});
                if (hide) {
                    push(Leave{actor_, home_});
                    push(Move{mover, object_, other_container(object_)});
                }
            };
        } else if (type_ == "task") {
            auto cast = draw_agents(1);
            actor_ = cast[0];
            place_home(cast);
            pinned_.insert(object_);
            std::string task = rng_.pick(kTasks);
            q.kind_hint = "action";
            q.target_path = {actor_};
            q.subject.agent = actor_;
            q.text = "What will " + actor_ + " do next?";
            fixed_options_ = {Action::proceed(task), Action::avoid(object_)};
            forced_count_ = 2;
            forced_ = [this, task] {
                push(GoalDecl{actor_, Goal{GoalKind::task, task, Requirement{object_, kState, "usable"}}});
                auto now = world_.attribute(object_, kState).value_or("usable");
                push(StateSet{object_, kState, now == "usable" ? "broken" : "usable", rng_.chance(0.5)});
            };
        } else if (type_ == "goal") {
            auto cast = draw_agents(1);
            actor_ = cast[0];
            place_home(cast);
            // A second object in the same room, in a different container.
            std::vector<ObjectId> rest;
            for (const auto& x : s_.decl.objects)
                if (x != object_) rest.push_back(x);
            ObjectId decoy = rng_.pick(rest);
            auto here = containers_in(home_);
            std::vector<ContainerId> spare;
            for (const auto& c : here)
                if (c != world_.object_loc.at(object_)) spare.push_back(c);
            world_.object_loc[decoy] = rng_.pick(spare);
            pinned_ = {object_, decoy};
            q.kind_hint = "goal";
            q.target_path = {actor_};
            q.subject.agent = actor_;
            q.text = "What is " + actor_ + " trying to do?";
            bool grab = rng_.chance(0.5);
            fixed_options_ = {Claim{GoalClaim{actor_, Goal{GoalKind::fetch, object_, std::nullopt}}},
                              Claim{GoalClaim{actor_, Goal{GoalKind::fetch, decoy, std::nullopt}}}};
            if (grab)
                for (const auto& x : rest)
                    if (x != decoy) {
                        fixed_options_.push_back(Claim{GoalClaim{actor_, Goal{GoalKind::fetch, x, std::nullopt}}});
                        break;
                    }
            forced_count_ = 2;
            forced_ = [this, decoy, grab] {
                push(Act{actor_, Action::search(world_.object_loc.at(decoy))});
                const auto& c = world_.object_loc.at(object_);
                push(Act{actor_, grab ? Action::exploit(object_, c) : Action::search(c)});
            };
        } else {  // belief_of_goal
            auto cast = draw_agents(2);
            AgentId watcher = cast[0], owner = cast[1];
            actor_ = watcher;
            place_home(cast);
            Goal first{GoalKind::fetch, object_, std::nullopt}, second{GoalKind::use, object_, std::nullopt};
            if (rng_.chance(0.5)) std::swap(first, second);
            q.kind_hint = "belief_of_goal";
            q.target_path = {watcher, owner};
            q.subject.agent = owner;
            q.text = "What does " + watcher + " think " + owner + " wants to do?";
            fixed_options_ = {Claim{GoalClaim{owner, first}}, Claim{GoalClaim{owner, second}}};
            bool change = rng_.chance(0.5);
            forced_count_ = change ? 3 : 1;
            forced_ = [this, watcher, owner, first, second, change] {
                push(GoalDecl{owner, first});
                if (change) {
                    push(Leave{watcher, home_});
                    push(GoalDecl{owner, second});
                }
            };
        }
    }

    // -- events -----------------------------------------------------------

    void push(EventBody body) {
        Event e{s_.events.size() + 1, std::move(body)};
        if (auto* m = std::get_if<Move>(&e.body)) {
            auto room = world_.room_of_container(m->to);
            for (const auto& [a, r] : world_.agent_room)
                if (room == r) known_[a][m->object] = m->to;
        } else if (auto* u = std::get_if<Utter>(&e.body)) {
            if (auto* at = std::get_if<AtClaim>(&u->claim))
                for (const auto& l : realized_listeners(*u, world_)) known_[l][at->object] = at->container;
        }
        world_ = apply_event(world_, e);
        s_.events.push_back(std::move(e));
    }

    std::string subject_of(const EventBody& b) const { return event_subject(Event{0, b}); }

    void pad(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) pad_one();
    }

    void pad_one() {
        std::vector<EventBody> moves, leaves, enters, talk, changes;
        for (const auto& [o, c] : world_.object_loc) {
            if (pinned_.count(o)) continue;
            const auto& room = world_.container_room.at(c);
            for (const auto& [a, r] : world_.agent_room) {
                if (r != room) continue;
                for (const auto& to : containers_in(room))
                    if (to != c) moves.push_back(Move{a, o, to});
            }
        }
        for (const auto& a : s_.decl.agents) {
            if (frozen_.count(a)) continue;
            if (auto r = world_.room_of_agent(a)) leaves.push_back(Leave{a, *r});
            else
                for (const auto& r : s_.decl.rooms) enters.push_back(Enter{a, r});
        }
        if (rng_.chance(cfg_.communication_rate)) {
            bool lie = rng_.chance(cfg_.deception_rate);
            for (const auto& [a, r] : world_.agent_room)
                for (const auto& [o, c] : known_[a]) {
                    const auto& truth = world_.object_loc.at(o);
                    if (c != truth) continue;  // speakers only talk about what they know
                    std::vector<ContainerId> said;
                    if (!lie) said = {truth};
                    else
                        for (const auto& x : s_.decl.containers)
                            if (x != truth) said.push_back(x);
                    for (const auto& x : said) {
                        talk.push_back(Utter{a, false, {}, AtClaim{o, x}});
                        for (const auto& l : s_.decl.agents)
                            if (l != a) talk.push_back(Utter{a, true, {l}, AtClaim{o, x}});
                    }
                }
        }
        if (cfg_.regime == Regime::goal_action)
            for (const auto& o : s_.decl.objects) {
                if (pinned_.count(o)) continue;
                auto now = world_.attribute(o, kState).value_or("usable");
                changes.push_back(StateSet{o, kState, now == "usable" ? "broken" : "usable", rng_.chance(0.7)});
            }

        bool distract = rng_.chance(cfg_.distractor_rate);
        auto keep = [&](const std::vector<EventBody>& v, bool outside) {
            std::vector<EventBody> out;
            for (const auto& b : v)
                if ((scope_.count(subject_of(b)) == 0) == outside) out.push_back(b);
            return out;
        };
        struct Bucket {
            std::vector<EventBody> events;
            double weight;
        };
        auto buckets_for = [&](bool outside) {
            return std::vector<Bucket>{{keep(moves, outside), 4.0},
                                       {keep(leaves, outside), 1.5},
                                       {keep(enters, outside), 1.5},
                                       {keep(talk, outside), 3.0},
                                       {keep(changes, outside), 1.0}};
        };
        auto total = [](const std::vector<Bucket>& bs) {
            double w = 0;
            for (const auto& b : bs)
                if (!b.events.empty()) w += b.weight;
            return w;
        };
        auto buckets = buckets_for(distract);
        if (total(buckets) == 0 && distract) buckets = buckets_for(false);
        double w = total(buckets);
        if (w == 0) {
            push(Act{actor_, Action::none()});
            return;
        }
        double x = rng_.unit() * w;
        for (auto& b : buckets) {
            if (b.events.empty()) continue;
            if (x < b.weight) {
                push(b.events[rng_.below(b.events.size())]);
                return;
            }
            x -= b.weight;
        }
        for (auto it = buckets.rbegin(); it != buckets.rend(); ++it)
            if (!it->events.empty()) {
                push(it->events[rng_.below(it->events.size())]);
                return;
            }
    }

    // -- question ---------------------------------------------------------

    std::size_t oracle_order() const {
        return std::max<std::size_t>({1, cfg_.belief_order, s_.question.target_path.size()});
    }

    void set_options(const std::vector<OptionPayload>& payloads) {
        s_.question.options.clear();
        for (std::size_t i = 0; i < payloads.size(); ++i) s_.question.options.push_back({option_label(i), payloads[i]});
    }

    std::optional<ContainerId> container_of(const std::string& label) const {
        const Option* o = s_.question.find_option(label);
        if (auto* c = std::get_if<Claim>(&o->payload)) return std::get<AtClaim>(*c).container;
        return std::get<Action>(o->payload).container;
    }

    void finish_question() {
        Question& q = s_.question;
        truth_ = oracle::oracle_beliefs(s_, oracle_order());

        if (per_container_) {
            auto full = oracle::oracle_answer(s_, truth_);

            std::vector<ContainerId> picked;
            auto add = [&](const ContainerId& c) {
                if (std::find(picked.begin(), picked.end(), c) == picked.end()) picked.push_back(c);
            };
            if (full) add(*container_of(*full));
            add(truth_.final_reality().at(object_));
            add(s_.initial.object_loc.at(object_));
            auto rest = s_.decl.containers;
            rng_.shuffle(rest);
            for (const auto& c : rest) add(c);
            std::size_t want = 2 + rng_.below(std::min<std::size_t>(3, s_.decl.containers.size() - 1));
            picked.resize(std::min(want, picked.size()));
            rng_.shuffle(picked);
            std::vector<OptionPayload> payloads;
            for (const auto& c : picked) payloads.push_back(per_container_(c));
            set_options(payloads);
        } else {
            auto payloads = fixed_options_;
            rng_.shuffle(payloads);
            set_options(payloads);
        }
        q.gold = oracle::oracle_answer(s_, truth_);
        truth_.gold = q.gold;

        s_.id = "synth-" + to_string(cfg_.regime) + "-" + std::to_string(cfg_.seed);
        s_.meta.benchmark = "synth-" + to_string(cfg_.regime);
        s_.meta.question_type = type_;
        s_.meta.belief_order = q.target_path.size();
        s_.meta.visibility = visibility();
    }

    /// "hidden" when some content event about the question's object escaped the path.
    std::string visibility() const {
        const auto& path = s_.question.target_path;
        if (path.empty()) return "n/a";
        auto rp = oracle::replay(s_);
        bool any = false;
        for (std::size_t i = 0; i < s_.events.size(); ++i) {
            const auto& e = s_.events[i];
            bool content = std::holds_alternative<Move>(e.body) || std::holds_alternative<StateSet>(e.body) ||
                           std::holds_alternative<Utter>(e.body) || std::holds_alternative<GoalDecl>(e.body);
            if (!content || !scope_.count(event_subject(e))) continue;
            any = true;
            for (const auto& a : path)
                if (!rp.audience[i].count(a)) return "hidden";
        }
        return any ? "observed" : "n/a";
    }
};

}  // namespace detail

/// Builds one story; throws GenerationError for an infeasible configuration.
inline Generated generate(const GenConfig& cfg) { return detail::Builder(cfg).run(); }

/// Sidecar record: gold plus every path's final table.
inline nlohmann::json truth_to_json(const Scenario& s, const oracle::GroundTruth& gt) {
    nlohmann::json j;
    j["id"] = s.id;
    j["gold"] = gt.gold ? nlohmann::json(*gt.gold) : nlohmann::json(nullptr);
    j["max_order"] = gt.max_order;
    nlohmann::json tables = nlohmann::json::object();
    for (const auto& [path, table] : gt.final_tables()) {
        std::string key;
        for (std::size_t i = 0; i < path.size(); ++i) key += (i ? ">" : "") + path[i];
        nlohmann::json t;
        t["loc"] = table.locations;
        nlohmann::json attrs = nlohmann::json::object();
        for (const auto& [k, v] : table.attributes) attrs[k.first + "." + k.second] = v;
        t["attr"] = attrs;
        nlohmann::json goals = nlohmann::json::object();
        for (const auto& [a, g] : table.goals) goals[a] = to_string(g);
        t["goal"] = goals;
        tables[key] = t;
    }
    j["tables"] = tables;
    return j;
}

}  // namespace mindtrace::synth
