#include <gtest/gtest.h>

#include "support.hpp"

using namespace mindtrace;

namespace {

QueryKind kind_of(const Scenario& s) { return classify_query(s.question); }

Trace trace_for(const Scenario& s) {
    auto q = kind_of(s);
    auto holder = q.trace_agent().empty() ? s.decl.agents.at(0) : q.trace_agent();  // reality: any holder
    return build_trace(s, holder, belief_config_for(s, q, {}));
}

Verdict verdict(const Scenario& s, const std::string& label) {
    auto q = kind_of(s);
    return check_option(*s.question.find_option(label), trace_for(s), q, s);
}

Verdict make(Status st) { return {"", st, std::nullopt, std::nullopt, "", {}}; }

std::vector<Option> two() { return {fixtures::at_option("A", "ball", "basket"), fixtures::at_option("B", "ball", "box")}; }

/// Sam looks in the fridge, gives up, then grabs the apple from the shelf.
Scenario kitchen_search(bool grabs) {
    Scenario s;
    s.id = "kitchen";
    s.decl.agents = {"Sam"};
    s.decl.rooms = {"kitchen"};
    s.decl.containers = {"fridge", "shelf"};
    s.decl.objects = {"milk", "apple"};
    s.initial.agent_room = {{"Sam", "kitchen"}};
    s.initial.container_room = {{"fridge", "kitchen"}, {"shelf", "kitchen"}};
    s.initial.object_loc = {{"milk", "fridge"}, {"apple", "shelf"}};
    s.events = {{1, Act{"Sam", Action::search("fridge")}}};
    if (grabs) s.events.push_back({2, Act{"Sam", Action::exploit("apple", "shelf")}});
    s.question.kind_hint = "goal";
    s.question.text = "What is Sam trying to do?";
    s.question.target_path = {"Sam"};
    s.question.subject.agent = "Sam";
    s.question.options = {{"A", Claim{GoalClaim{"Sam", Goal{GoalKind::fetch, "milk", std::nullopt}}}},
                          {"B", Claim{GoalClaim{"Sam", Goal{GoalKind::fetch, "apple", std::nullopt}}}}};
    s.meta = {"unit", "goal", 1, "observed"};
    return s;
}

Scenario told(const ContainerId& said, bool speaker_saw) {
    auto s = fixtures::sally_anne();
    if (!speaker_saw) {
        // Anne was never with the ball.
        s.initial.agent_room["Anne"] = "hall";
        s.events = {{1, Leave{"Sally", "kitchen"}}, {2, Move{std::nullopt, "ball", "box"}}};
    }
    s.events.push_back({3, Utter{"Anne", true, {"Sally"}, AtClaim{"ball", said}}});
    s.question.kind_hint = "social_goal";
    s.question.target_path = {"Anne"};
    s.question.options = {{"A", IntentClaim{"Anne", "Sally", Intent::helping}},
                          {"B", IntentClaim{"Anne", "Sally", Intent::hindering}}};
    s.question.gold.reset();
    return s;
}

}  // namespace

TEST(Classify, RealityWhenNoPath) {
    auto s = fixtures::sally_anne();
    s.question.kind_hint.reset();
    s.question.target_path.clear();
    EXPECT_EQ(kind_of(s).type, QueryType::reality);
}

TEST(Classify, SearchPhrasingIsAnAction) {
    auto s = fixtures::sally_anne();
    s.question.kind_hint.reset();
    s.question.text = "Where will Sally look for the ball?";
    EXPECT_EQ(kind_of(s).type, QueryType::action);
}

TEST(Classify, LongPathIsBelief) {
    auto s = fixtures::sally_anne();
    s.question.kind_hint.reset();
    s.question.target_path = {"Anne", "Sally", "Anne"};
    auto q = kind_of(s);
    EXPECT_EQ(q.type, QueryType::belief);
    EXPECT_EQ(q.path.size(), 3u);
}

TEST(Classify, MemoryCueAndHints) {
    auto s = fixtures::sally_anne();
    s.question.kind_hint.reset();
    s.question.text = "Where was the ball at the beginning?";
    EXPECT_EQ(kind_of(s).type, QueryType::memory);
    EXPECT_EQ(kind_of(told("box", true)).type, QueryType::social_intent);
    EXPECT_EQ(kind_of(kitchen_search(true)).type, QueryType::goal);
}

TEST(Classify, DeepGoalNestingIsRefused) {
    auto s = fixtures::sally_anne();
    s.question.kind_hint = "belief_of_goal";
    s.question.target_path = {"Anne", "Sally", "Anne"};
    EXPECT_THROW(kind_of(s), ClassificationError);
}

TEST(CheckOption, SallyAnneBelief) {
    auto s = fixtures::sally_anne();
    EXPECT_EQ(verdict(s, "A").status, Status::consistent);
    auto box = verdict(s, "B");
    EXPECT_EQ(box.status, Status::contradicted);
    EXPECT_EQ(box.reason, Reason::unobserved_knowledge);
}

TEST(CheckOption, RealityLookup) {
    auto s = fixtures::sally_anne();
    s.question.kind_hint = "reality";
    s.question.target_path.clear();
    EXPECT_EQ(verdict(s, "B").status, Status::consistent);
    EXPECT_EQ(verdict(s, "A").reason, Reason::reality_mismatch);
}

TEST(CheckOption, UnheardPrivateMessage) {
    auto s = fixtures::sally_anne();
    s.decl.agents.push_back("Max");
    s.initial.agent_room["Max"] = "kitchen";
    s.events = {{1, Leave{"Sally", "kitchen"}}, {2, Utter{"Anne", true, {"Max"}, AtClaim{"ball", "box"}}}};
    auto v = verdict(s, "B");
    EXPECT_EQ(v.status, Status::contradicted);
    EXPECT_EQ(v.reason, Reason::communication_access);
}

TEST(CheckOption, SearchOptionsFollowTheBelief) {
    auto s = fixtures::sally_anne();
    s.question.kind_hint = "search";
    s.question.options = {{"A", Action::search("box")}, {"B", Action::search("basket")}};
    EXPECT_EQ(verdict(s, "B").status, Status::consistent);
    EXPECT_EQ(verdict(s, "A").reason, Reason::action_rule_violation);
}

TEST(SocialIntent, HelpingHinderingUndetermined) {
    auto help = told("box", true);
    EXPECT_EQ(classify_social_intent(trace_for(help), "Anne", "Sally").intent, Intent::helping);
    auto hinder = told("basket", true);
    auto reading = classify_social_intent(trace_for(hinder), "Anne", "Sally");
    EXPECT_EQ(reading.intent, Intent::hindering);
    EXPECT_EQ(reading.step, 3u);
    EXPECT_EQ(classify_social_intent(trace_for(told("box", false)), "Anne", "Sally").intent, Intent::undetermined);
    EXPECT_THROW(classify_social_intent(trace_for(help), "Anne", "Max"), PreconditionError);
}

TEST(SocialIntent, LeastLikelyInverts) {
    auto s = told("basket", true);
    EXPECT_EQ(prove(s).answer.chosen, "B");
    s.question.kind_hint = "social_goal_least";
    EXPECT_EQ(prove(s).answer.chosen, "A");
}

TEST(InferGoal, ExploitPins) {
    auto tr = build_trace(kitchen_search(true), "Sam", {});
    std::vector<Goal> c = {{GoalKind::fetch, "milk", std::nullopt}, {GoalKind::fetch, "apple", std::nullopt}};
    EXPECT_EQ(infer_goal(tr, c), std::vector<Goal>{c[1]});
}

TEST(InferGoal, AbandonedSearchEliminates) {
    auto s = kitchen_search(false);
    s.events.push_back({2, Act{"Sam", Action::search("shelf")}});
    auto tr = build_trace(s, "Sam", {});
    std::vector<Goal> c = {{GoalKind::fetch, "milk", std::nullopt}, {GoalKind::fetch, "apple", std::nullopt}};
    EXPECT_EQ(infer_goal(tr, c), std::vector<Goal>{c[1]});
}

TEST(InferGoal, NoSearchLeavesCandidates) {
    auto s = kitchen_search(false);
    s.events.clear();
    auto tr = build_trace(s, "Sam", {});
    std::vector<Goal> c = {{GoalKind::fetch, "milk", std::nullopt}, {GoalKind::fetch, "apple", std::nullopt}};
    EXPECT_EQ(infer_goal(tr, c), c);
    auto r = prove(s);
    EXPECT_TRUE(r.answer.abstained);
}

TEST(InferGoal, ProveUsesTheTrajectory) {
    auto r = prove(kitchen_search(true));
    EXPECT_EQ(r.answer.chosen, "B");
    EXPECT_FALSE(r.answer.abstained);
}

TEST(SelectAnswer, UniqueSurvivor) {
    auto a = select_answer({make(Status::consistent), make(Status::contradicted)}, two());
    EXPECT_EQ(a.chosen, "A");
    EXPECT_FALSE(a.abstained);
}

TEST(SelectAnswer, AllUndeterminedAbstainsOnTheDefault) {
    auto a = select_answer({make(Status::undetermined), make(Status::undetermined)}, two());
    EXPECT_EQ(a.chosen, "A");
    EXPECT_TRUE(a.abstained);
    auto b = select_answer({make(Status::undetermined), make(Status::undetermined)}, two(), {0, 2});
    EXPECT_EQ(b.chosen, "B");
}

TEST(SelectAnswer, TiedConsistentDefaultsWithinTheSet) {
    std::vector<Option> opts = two();
    opts.push_back(fixtures::at_option("C", "ball", "drawer"));
    auto a = select_answer({make(Status::contradicted), make(Status::consistent), make(Status::consistent)}, opts,
                           {9, 1, 1});
    EXPECT_EQ(a.chosen, "B");
    EXPECT_TRUE(a.abstained);
}

TEST(SelectAnswer, MixedAndContradicted) {
    std::vector<Option> opts = two();
    opts.push_back(fixtures::at_option("C", "ball", "drawer"));
    auto a = select_answer({make(Status::contradicted), make(Status::undetermined), make(Status::undetermined)}, opts);
    EXPECT_EQ(a.chosen, "B");
    EXPECT_TRUE(a.abstained);
    auto b = select_answer({make(Status::contradicted), make(Status::contradicted)}, two(), {1, 3});
    EXPECT_EQ(b.chosen, "B");
    EXPECT_TRUE(b.abstained);
    EXPECT_THROW(select_answer({make(Status::consistent)}, two()), PreconditionError);
}

namespace {

class Throwing final : public SolverAdapter {
public:
    std::string name() const override { return "throwing"; }
    AdapterChoice choose(const Scenario&, const Trace*, const std::vector<Option>&, const std::string&) override {
        throw std::runtime_error("offline");
    }
};

class Picky final : public SolverAdapter {
public:
    std::string name() const override { return "picky"; }
    AdapterChoice choose(const Scenario&, const Trace*, const std::vector<Option>&, const std::string&) override {
        return {"B", "Pick one: A or B?", "B."};
    }
};

}  // namespace

TEST(Fallback, NullAdapterKeepsTheDefault) {
    auto s = fixtures::sally_anne();
    NullAdapter null;
    auto r = resolve_fallback(null, s, nullptr, s.question.options, "A");
    EXPECT_EQ(r.label, "A");
    EXPECT_TRUE(r.adapter_resolved);
    EXPECT_EQ(r.effective_tokens, 0u);
}

TEST(Fallback, FailureKeepsTheDefaultAndRecordsIt) {
    auto s = fixtures::sally_anne();
    Throwing bad;
    auto r = resolve_fallback(bad, s, nullptr, s.question.options, "A");
    EXPECT_EQ(r.label, "A");
    EXPECT_FALSE(r.adapter_resolved);
    EXPECT_NE(r.error.find("offline"), std::string::npos);
}

TEST(Fallback, ResolvedChoiceCountsTokens) {
    auto s = fixtures::sally_anne();
    Picky p;
    auto r = resolve_fallback(p, s, nullptr, s.question.options, "A");
    EXPECT_EQ(r.label, "B");
    EXPECT_TRUE(r.adapter_resolved);
    EXPECT_EQ(r.effective_tokens, 7u + 2u);
}

TEST(Fallback, RegistryKnowsTheNullAdapter) {
    auto reg = AdapterRegistry::with_builtins();
    EXPECT_TRUE(reg.has("null"));
    EXPECT_EQ(reg.create("null")->name(), "null");
    EXPECT_THROW(reg.create("oracle"), ConfigError);
}

TEST(Prove, SallyAnneAnswersAndCitesVisibleSteps) {
    auto s = fixtures::sally_anne();
    auto r = prove(s);
    EXPECT_EQ(r.answer.chosen, "A");
    EXPECT_FALSE(r.answer.abstained);
    EXPECT_TRUE(proof_is_sound(r, s));
    ASSERT_FALSE(r.answer.proof.empty());
    EXPECT_EQ(r.answer.proof.back().rule, "select");
}

TEST(Prove, MemoryIsTheFirstBelief) {
    auto s = fixtures::sally_anne();
    s.question.kind_hint = "memory";
    s.question.target_path = {"Anne"};
    EXPECT_EQ(prove(s).answer.chosen, "A");
}

TEST(Prove, ErrorsBecomeAbstentions) {
    auto s = fixtures::sally_anne();
    s.question.target_path.clear();
    s.question.kind_hint = "belief";
    auto r = prove(s);
    EXPECT_TRUE(r.answer.abstained);
    EXPECT_NE(r.answer.error.find("classification"), std::string::npos);

    auto deep = fixtures::sally_anne();
    deep.question.target_path = {"Anne", "Sally"};
    ProverConfig cfg;
    cfg.max_order = 1;
    auto r2 = prove(deep, cfg);
    EXPECT_TRUE(r2.answer.abstained);
    EXPECT_NE(r2.answer.error.find("configuration"), std::string::npos);
}

TEST(Prove, TaskPreconditionHiddenBreakage) {
    auto s = fixtures::sally_anne();
    s.decl.attributes = {"state"};
    s.initial.attributes[{"ball", "state"}] = "usable";
    s.events = {{1, GoalDecl{"Anne", Goal{GoalKind::task, "play", Requirement{"ball", "state", "usable"}}}},
                {2, StateSet{"ball", "state", "broken", false}}};
    s.question.kind_hint = "action";
    s.question.target_path = {"Anne"};
    s.question.options = {{"A", Action::avoid("ball")}, {"B", Action::proceed("play")}};
    EXPECT_EQ(prove(s).answer.chosen, "B");
    std::get<StateSet>(s.events[1].body).cause_visible = true;
    EXPECT_EQ(prove(s).answer.chosen, "A");
}

TEST(Soundness, DetectsACitationOfAnInvisibleEvent) {
    auto s = fixtures::sally_anne();
    auto r = prove(s);
    r.answer.proof.push_back({"A", 2, true, "R1", "forged"});
    EXPECT_FALSE(proof_is_sound(r, s));
}
