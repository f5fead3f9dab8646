#include <gtest/gtest.h>

#include "support.hpp"

using namespace mindtrace;

namespace {

/// Folds the whole story into `holder`'s mind.
BeliefState run(const Scenario& s, const AgentId& holder, const BeliefConfig& cfg) {
    BeliefState b = initial_belief(holder, s.decl.agents, s.initial, cfg);
    WorldState w = s.initial;
    for (const auto& e : s.events) {
        std::span<const Event> step(&e, 1);
        b = update_belief(b, observe(w, step, holder), step, w, cfg);
        w = apply_event(w, e);
    }
    return b;
}

BeliefConfig order(std::size_t k) {
    BeliefConfig c;
    c.max_order = k;
    return c;
}

}  // namespace

TEST(Observe, SameRoomSeesTheMove) {
    auto s = fixtures::sally_anne();
    auto obs = observe(s.initial, std::span(&s.events[1], 1), "Anne");
    ASSERT_EQ(obs.seen.size(), 1u);
    EXPECT_EQ(obs.seen[0], s.events[1]);
}

TEST(Observe, OtherRoomSeesNothing) {
    auto s = fixtures::sally_anne();
    auto after_leave = apply_event(s.initial, s.events[0]);
    EXPECT_TRUE(observe(after_leave, std::span(&s.events[1], 1), "Sally").seen.empty());
}

TEST(Observe, PrivateUtteranceToOthersIsUnseen) {
    WorldState w;
    w.agent_room = {{"A", "r"}, {"B", "r"}, {"C", "r"}};
    Event u{1, Utter{"A", true, {"B"}, AtClaim{"o", "c"}}};
    EXPECT_TRUE(observe(w, std::span(&u, 1), "C").seen.empty());
    EXPECT_EQ(observe(w, std::span(&u, 1), "B").seen.size(), 1u);
    EXPECT_EQ(observe(w, std::span(&u, 1), "A").seen.size(), 1u);
}

TEST(Observe, EnteringAgentSeesItsOwnEntrance) {
    WorldState w;
    w.agent_room = {{"B", "r"}};
    Event e{1, Enter{"A", "r"}};
    EXPECT_TRUE(perceives(e, "A", w));
    EXPECT_TRUE(perceives(e, "B", w));
}

TEST(Observe, HiddenStateChangeIsUnseen) {
    auto s = fixtures::sally_anne();
    s.decl.attributes = {"state"};
    Event hidden{1, StateSet{"ball", "state", "broken", false}};
    Event shown{1, StateSet{"ball", "state", "broken", true}};
    EXPECT_FALSE(perceives(hidden, "Anne", s.initial));
    EXPECT_TRUE(perceives(shown, "Anne", s.initial));
}

TEST(VisibleAlongPath, BothPresent) {
    auto s = fixtures::sally_anne();
    EXPECT_TRUE(visible_along_path(s.events[1], BeliefPath{"Anne", "Sally"}, s.initial));
}

TEST(VisibleAlongPath, DepartedSecondAgent) {
    auto s = fixtures::sally_anne();
    auto w = apply_event(s.initial, s.events[0]);
    EXPECT_FALSE(visible_along_path(s.events[1], BeliefPath{"Anne", "Sally"}, w));
}

TEST(VisibleAlongPath, SingleAgentMatchesObserve) {
    auto s = fixtures::sally_anne();
    WorldState w = s.initial;
    for (const auto& e : s.events) {
        for (const auto& a : s.decl.agents)
            EXPECT_EQ(visible_along_path(e, BeliefPath{a}, w), observe(w, std::span(&e, 1), a).contains(e));
        w = apply_event(w, e);
    }
    EXPECT_TRUE(visible_along_path(s.events[0], BeliefPath{}, s.initial));
}

TEST(UpdateBelief, SallyKeepsTheBasket) {
    auto s = fixtures::sally_anne();
    auto b = run(s, "Sally", order(1));
    ASSERT_NE(b.own().location_of("ball"), nullptr);
    EXPECT_EQ(b.own().location_of("ball")->value, "basket");
    EXPECT_EQ(b.own().location_of("ball")->since, 0u);
    auto anne = run(s, "Anne", order(1));
    EXPECT_EQ(anne.own().location_of("ball")->value, "box");
    EXPECT_EQ(anne.own().location_of("ball")->since, 2u);
}

TEST(UpdateBelief, EmptyObservationIsIdentity) {
    auto s = fixtures::sally_anne();
    auto cfg = order(2);
    auto b = initial_belief("Sally", s.decl.agents, s.initial, cfg);
    ObservationRecord none{1, "Sally", {}};
    EXPECT_EQ(update_belief(b, none, {}, s.initial, cfg), b);
}

TEST(UpdateBelief, NestedPathStopsAtTheDeparture) {
    // Both watch the first move; Sally leaves; the second move is Anne's alone.
    auto s = fixtures::sally_anne();
    s.decl.containers.push_back("drawer");
    s.initial.container_room["drawer"] = "kitchen";
    s.events = {{1, Move{"Anne", "ball", "drawer"}}, {2, Leave{"Sally", "kitchen"}}, {3, Move{"Anne", "ball", "box"}}};
    auto b = run(s, "Anne", order(2));
    EXPECT_EQ(b.own().location_of("ball")->value, "box");
    const auto* nested = b.find(BeliefPath{"Anne", "Sally"});
    ASSERT_NE(nested, nullptr);
    EXPECT_EQ(nested->location_of("ball")->value, "drawer");
    EXPECT_EQ(nested->location_of("ball")->since, 1u);

    auto truth = oracle::oracle_beliefs(s, 2);
    EXPECT_EQ(truth.final_tables().at({"Anne", "Sally"}).locations.at("ball"), "drawer");
}

TEST(UpdateBelief, PrivateClaimReachesOnlyTheListener) {
    auto s = fixtures::sally_anne();
    s.decl.agents.push_back("Max");
    s.initial.agent_room["Max"] = "kitchen";
    s.events.push_back({3, Utter{"Anne", true, {"Sally"}, AtClaim{"ball", "box"}}});
    EXPECT_EQ(run(s, "Sally", order(1)).own().location_of("ball")->value, "box");
    EXPECT_EQ(run(s, "Max", order(1)).own().location_of("ball")->value, "box");  // saw the move
    auto anne = run(s, "Anne", order(2));
    EXPECT_EQ(anne.find(BeliefPath{"Anne", "Sally"})->location_of("ball")->value, "box");
    EXPECT_EQ(anne.find(BeliefPath{"Anne", "Max"})->location_of("ball")->value, "box");
    EXPECT_EQ(anne.own().location_of("ball")->since, 2u);  // not from her own words
}

TEST(UpdateBelief, PublicClaimMissesTheAbsent) {
    auto s = fixtures::sally_anne();
    s.events.push_back({3, Utter{"Anne", false, {}, AtClaim{"ball", "box"}}});
    EXPECT_EQ(run(s, "Sally", order(1)).own().location_of("ball")->value, "basket");
}

TEST(Rules, CoreRulesCannotBeDisabled) {
    RuleSet r;
    EXPECT_THROW(r.disable(Rule::observed_change_updates), ConfigError);
    EXPECT_THROW(r.disable(Rule::unobserved_preserves), ConfigError);
    r.disable(Rule::communication_scoped);
    EXPECT_FALSE(r.enabled(Rule::communication_scoped));
    r.enable(Rule::communication_scoped);
    EXPECT_TRUE(r.enabled(Rule::communication_scoped));
    EXPECT_EQ(rule_id(Rule::distractor_inert), "R6");
}

TEST(Rules, WithoutCommunicationClaimsAreInert) {
    auto s = fixtures::sally_anne();
    s.events.push_back({3, Utter{"Anne", true, {"Sally"}, AtClaim{"ball", "box"}}});
    auto cfg = order(1);
    cfg.rules.disable(Rule::communication_scoped);
    EXPECT_EQ(run(s, "Sally", cfg).own().location_of("ball")->value, "basket");
}

TEST(Rules, WithoutNestingDeeperPathsStayEmpty) {
    auto s = fixtures::sally_anne();
    auto cfg = order(2);
    cfg.rules.disable(Rule::co_observation_nests);
    auto b = run(s, "Anne", cfg);
    EXPECT_EQ(b.find(BeliefPath{"Anne", "Sally"})->location_of("ball"), nullptr);
    EXPECT_NE(b.own().location_of("ball"), nullptr);
}

TEST(Rules, DistractorsOutsideTheScopeAreIgnored) {
    auto s = fixtures::sally_anne();
    s.decl.objects.push_back("key");
    s.initial.object_loc["key"] = "box";
    s.events.push_back({3, Move{"Anne", "key", "basket"}});
    auto cfg = order(1);
    cfg.scope = question_scope(s.question);
    EXPECT_EQ(run(s, "Anne", cfg).own().location_of("key")->value, "box");
    cfg.rules.disable(Rule::distractor_inert);
    EXPECT_EQ(run(s, "Anne", cfg).own().location_of("key")->value, "basket");
}

TEST(UpdateBelief, RejectsOrderAndHolderMismatch) {
    auto s = fixtures::sally_anne();
    auto cfg = order(1);
    auto b = initial_belief("Sally", s.decl.agents, s.initial, cfg);
    cfg.query_order = 2;
    EXPECT_THROW(update_belief(b, {1, "Sally", {}}, {}, s.initial, cfg), ConfigError);
    cfg.query_order = 0;
    EXPECT_THROW(update_belief(b, {1, "Anne", {}}, {}, s.initial, cfg), ConfigError);
}

TEST(BeliefPathTest, CollapsesRepeatsAndPrints) {
    BeliefPath p{"A", "A", "B"};
    EXPECT_EQ(p.size(), 2u);
    EXPECT_EQ(p.str(), "A>B");
    EXPECT_EQ(p.prefix(), BeliefPath{"A"});
    EXPECT_EQ(BeliefPath{}.str(), "<world>");
}

TEST(BeliefPathTest, EnumerationCountsMatch) {
    std::vector<AgentId> agents = {"A", "B", "C"};
    // 1 + 2 + 4 paths of length 1..3 from one holder.
    EXPECT_EQ(enumerate_paths("A", agents, 3).size(), 7u);
    EXPECT_EQ(enumerate_paths("A", agents, 0).size(), 1u);
}

TEST(Dump, ListsKnownEntries) {
    auto s = fixtures::sally_anne();
    auto text = dump_belief(run(s, "Anne", order(2)), 2);
    EXPECT_NE(text.find("Anne\tloc:ball\tbox\t2"), std::string::npos);
    EXPECT_NE(text.find("Anne>Sally\tloc:ball\tbasket\t0"), std::string::npos);
}
