#include <gtest/gtest.h>

#include "support.hpp"

using namespace mindtrace;

namespace {

BeliefState believing(const AgentId& holder, std::map<ObjectId, ContainerId> locs,
                      std::map<std::pair<ObjectId, AttributeId>, std::string> attrs = {}) {
    BeliefState b{holder, {}};
    PartialWorld w;
    for (const auto& [o, c] : locs) w.location[o] = {c, 1};
    for (const auto& [k, v] : attrs) w.attribute[k] = {v, 1};
    b.entries[BeliefPath{holder}] = w;
    return b;
}

Scenario search_question() {
    auto s = fixtures::sally_anne();
    s.question.kind_hint = "search";
    s.question.text = "Where will Sally look for the ball?";
    s.question.options = {{"A", Action::search("box")}, {"B", Action::search("basket")}};
    s.question.gold = "B";
    return s;
}

}  // namespace

TEST(DecideAction, FetchExploitsTheBelievedContainer) {
    auto a = decide_action(Goal{GoalKind::fetch, "ball", std::nullopt}, believing("S", {{"ball", "basket"}}));
    EXPECT_EQ(a, Action::exploit("ball", "basket"));
}

TEST(DecideAction, TaskProceedsWhenThePreconditionHolds) {
    Goal g{GoalKind::task, "cook", Requirement{"pan", "state", "usable"}};
    EXPECT_EQ(decide_action(g, believing("S", {}, {{{"pan", "state"}, "usable"}})), Action::proceed("cook"));
    EXPECT_EQ(decide_action(g, believing("S", {}, {{{"pan", "state"}, "broken"}})), Action::avoid("pan"));
    EXPECT_EQ(decide_action(g, believing("S", {})), Action::none());
}

TEST(DecideAction, UnknownBeliefNeverExploits) {
    auto b = believing("S", {});
    EXPECT_EQ(decide_action(Goal{GoalKind::fetch, "ball", std::nullopt}, b).kind, ActionKind::none);
    EXPECT_EQ(decide_action(Goal{GoalKind::locate, "ball", std::nullopt}, b).kind, ActionKind::none);
    EXPECT_EQ(decide_action(std::nullopt, b).kind, ActionKind::none);
}

TEST(DecideAction, LocateSearches) {
    EXPECT_EQ(decide_action(Goal{GoalKind::locate, "ball", std::nullopt}, believing("S", {{"ball", "box"}})),
              Action::search("box"));
}

TEST(BuildTrace, ZeroEvents) {
    auto s = fixtures::sally_anne();
    s.events.clear();
    auto tr = build_trace(s, "Sally", {});
    EXPECT_TRUE(tr.steps.empty());
    EXPECT_EQ(tr.final_env, s.initial);
    EXPECT_EQ(&tr.final_belief(), &tr.initial_belief);
}

TEST(BuildTrace, SallyAnneFinalStep) {
    auto s = search_question();
    auto tr = build_trace(s, "Sally", {});
    ASSERT_EQ(tr.steps.size(), 2u);
    EXPECT_EQ(tr.final_env.location_of("ball"), "box");
    EXPECT_EQ(tr.final_belief().own().location_of("ball")->value, "basket");
    EXPECT_EQ(tr.steps.back().action, Action::search("basket"));
    ASSERT_TRUE(tr.final_goal());
    EXPECT_FALSE(tr.final_goal()->declared_at);
    // Each step stores the state before its event.
    EXPECT_EQ(tr.steps[0].env, s.initial);
    EXPECT_EQ(tr.env_before(2).room_of_agent("Sally"), std::nullopt);
}

TEST(BuildTrace, PredictedActionsDoNotChangeTheWorld) {
    auto s = search_question();
    s.events.push_back({3, GoalDecl{"Sally", Goal{GoalKind::fetch, "ball", std::nullopt}}});
    auto tr = build_trace(s, "Sally", {});
    EXPECT_EQ(tr.steps.back().action, Action::exploit("ball", "basket"));
    EXPECT_EQ(tr.steps.back().goal->declared_at, 3u);
    WorldState w = s.initial;
    for (const auto& e : s.events) w = apply_event(w, e);
    EXPECT_EQ(tr.final_env, w);
}

TEST(BuildTrace, SecondOrderDivergesAfterExit) {
    auto s = fixtures::sally_anne();
    s.question.target_path = {"Anne", "Sally"};
    BeliefConfig cfg;
    cfg.max_order = 2;
    auto tr = build_trace(s, "Anne", cfg);
    const auto& first = tr.belief_at(1);
    EXPECT_EQ(*first.find(BeliefPath{"Anne", "Sally"}), *first.find(BeliefPath{"Anne"}));
    const auto& last = tr.final_belief();
    EXPECT_NE(*last.find(BeliefPath{"Anne", "Sally"}), *last.find(BeliefPath{"Anne"}));
    EXPECT_EQ(last.find(BeliefPath{"Anne", "Sally"})->location_of("ball")->value, "basket");
}

TEST(BuildTrace, RejectsUnknownTargetAndShallowOrder) {
    auto s = fixtures::sally_anne();
    EXPECT_THROW(build_trace(s, "Nobody", {}), SchemaError);
    BeliefConfig cfg;
    cfg.max_order = 1;
    cfg.query_order = 2;
    EXPECT_THROW(build_trace(s, "Anne", cfg), ConfigError);
}

TEST(BuildTrace, ActionRuleOffMeansNoAction) {
    auto s = search_question();
    BeliefConfig cfg;
    cfg.rules.disable(Rule::action_from_belief);
    auto tr = build_trace(s, "Sally", cfg);
    EXPECT_EQ(tr.steps.back().action.kind, ActionKind::none);
}

TEST(Goals, DeclarationBeatsTheImpliedGoal) {
    auto s = search_question();
    EXPECT_EQ(resolve_goal(s, "Sally", 2)->goal.kind, GoalKind::locate);
    s.events.push_back({3, GoalDecl{"Sally", Goal{GoalKind::use, "ball", std::nullopt}}});
    EXPECT_EQ(resolve_goal(s, "Sally", 2)->goal.kind, GoalKind::locate);
    EXPECT_EQ(resolve_goal(s, "Sally", 3)->goal.kind, GoalKind::use);
    EXPECT_FALSE(resolve_goal(fixtures::sally_anne(), "Sally", 2));
    EXPECT_FALSE(resolve_goal(s, "Anne", 3));
}

TEST(Dumps, TraceDumpIsStableAndReadable) {
    auto s = search_question();
    auto tr = build_trace(s, "Sally", {});
    auto text = dump_trace(tr);
    EXPECT_EQ(text, dump_trace(build_trace(s, "Sally", {})));
    EXPECT_NE(text.find("# trace target=Sally steps=2"), std::string::npos);
    EXPECT_NE(text.find("search(basket)"), std::string::npos);
    EXPECT_NE(env_digest(tr.initial_env), env_digest(tr.final_env));
    EXPECT_EQ(env_digest(tr.initial_env).size(), 16u);
}
