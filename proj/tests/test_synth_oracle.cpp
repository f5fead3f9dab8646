#include <gtest/gtest.h>

#include "support.hpp"

using namespace mindtrace;

namespace {

synth::GenConfig config(synth::Regime r, std::uint64_t seed) {
    synth::GenConfig c;
    c.regime = r;
    c.seed = seed;
    return c;
}

}  // namespace

TEST(Generate, SameSeedSameStory) {
    auto a = synth::generate(config(synth::Regime::false_belief, 0));
    auto b = synth::generate(config(synth::Regime::false_belief, 0));
    EXPECT_EQ(serialize_scenario(a.scenario), serialize_scenario(b.scenario));
    auto c = synth::generate(config(synth::Regime::false_belief, 1));
    EXPECT_NE(serialize_scenario(a.scenario), serialize_scenario(c.scenario));
}

TEST(Generate, NestedOrderTwoDiverges) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto c = config(synth::Regime::nested, seed);
        c.belief_order = 2;
        auto g = synth::generate(c);
        const auto& path = g.scenario.question.target_path;
        ASSERT_EQ(path.size(), 2u);
        bool diverged = false;
        for (const auto& step : g.truth.tables)
            diverged = diverged || step.at(path) != step.at({path[0]});
        EXPECT_TRUE(diverged) << g.scenario.id;
    }
}

TEST(Generate, OrderZeroGoldIsReality) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto c = config(synth::kAllRegimes[seed % 4], seed);
        c.belief_order = 0;
        auto g = synth::generate(c);
        ASSERT_EQ(g.scenario.meta.question_type, "reality");
        ASSERT_TRUE(g.decidable());
        const auto* gold = g.scenario.question.find_option(*g.scenario.question.gold);
        const auto& at = std::get<AtClaim>(std::get<Claim>(gold->payload));
        EXPECT_EQ(g.truth.final_reality().at(at.object), at.container);
    }
}

TEST(Generate, InfeasibleConfigurationsAreRejected) {
    auto c = config(synth::Regime::nested, 0);
    c.n_agents = 2;
    c.belief_order = 3;
    EXPECT_THROW(synth::generate(c), synth::GenerationError);
    c = config(synth::Regime::false_belief, 0);
    c.question_type = "belief";  // an exit and a move at least
    c.n_events = 1;
    EXPECT_THROW(synth::generate(c), synth::GenerationError);
    c = config(synth::Regime::false_belief, 0);
    c.deception_rate = 1.5;
    EXPECT_THROW(synth::generate(c), synth::GenerationError);
    c = config(synth::Regime::false_belief, 0);
    c.question_type = "social_goal";
    EXPECT_THROW(synth::generate(c), synth::GenerationError);
    EXPECT_THROW(synth::parse_regime("chaos"), synth::GenerationError);
}

TEST(Generate, NoDeceptionMeansNoFalseClaims) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto c = synth::config_for_seed(seed, synth::Regime::communication);
        c.deception_rate = 0;
        c.communication_rate = 1;
        auto g = synth::generate(c);
        WorldState w = g.scenario.initial;
        for (const auto& e : g.scenario.events) {
            if (auto* u = std::get_if<Utter>(&e.body)) {
                const auto& at = std::get<AtClaim>(u->claim);
                EXPECT_EQ(w.location_of(at.object), at.container) << g.scenario.id;
            }
            w = apply_event(w, e);
        }
    }
}

TEST(Generate, NoDistractorsKeepsEveryEventInScope) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto c = synth::config_for_seed(seed, synth::kAllRegimes[seed % 4]);
        c.distractor_rate = 0;
        auto g = synth::generate(c);
        auto scope = question_scope(g.scenario.question);
        for (const auto& e : g.scenario.events) EXPECT_TRUE(scope.count(event_subject(e))) << g.scenario.id;
    }
}

TEST(Generate, GoldEqualsTheOracleAndTheRecordIsValid) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto g = synth::generate(synth::config_for_seed(seed, synth::kAllRegimes[seed % 4]));
        EXPECT_EQ(g.scenario.question.gold, oracle::oracle_answer(g.scenario, g.truth));
        EXPECT_EQ(g.truth.gold, g.scenario.question.gold);
        EXPECT_NO_THROW(validate_scenario(g.scenario));
        EXPECT_EQ(parse_scenario(serialize_scenario(g.scenario)), g.scenario);
        EXPECT_GE(g.scenario.question.options.size(), 2u);
    }
}

TEST(Generate, EveryRegimeCoversItsQuestionTypes) {
    for (auto r : synth::kAllRegimes) {
        std::set<std::string> seen;
        for (std::uint64_t seed = 0; seed < 80; ++seed) seen.insert(synth::generate(synth::config_for_seed(seed, r)).scenario.meta.question_type);
        std::set<std::string> all;
        for (std::size_t k = 0; k <= 4; ++k)
            for (const auto& t : synth::question_types(r, k, 4)) all.insert(t);
        EXPECT_EQ(seen, all) << synth::to_string(r);
    }
}

TEST(Oracle, FullVisibilityTracksReality) {
    auto s = fixtures::sally_anne();
    s.events = {{1, Move{"Anne", "ball", "box"}}, {2, Move{"Sally", "ball", "basket"}}};
    auto gt = oracle::oracle_beliefs(s, 2);
    for (std::size_t t = 0; t < gt.tables.size(); ++t)
        for (const auto& [path, table] : gt.tables[t]) EXPECT_EQ(table.locations, gt.reality[t]);
}

TEST(Oracle, SallyAnne) {
    auto gt = oracle::oracle_beliefs(fixtures::sally_anne(), 1);
    EXPECT_EQ(gt.final_tables().at({"Sally"}).locations.at("ball"), "basket");
    EXPECT_EQ(gt.final_tables().at({"Anne"}).locations.at("ball"), "box");
    EXPECT_EQ(gt.final_reality().at("ball"), "box");
    EXPECT_EQ(oracle::oracle_answer(fixtures::sally_anne(), gt), "A");
}

TEST(Oracle, PublicClaimAfterExit) {
    auto s = fixtures::sally_anne();
    s.events.push_back({3, Utter{"Anne", false, {}, AtClaim{"ball", "box"}}});
    auto gt = oracle::oracle_beliefs(s, 1);
    EXPECT_EQ(gt.tables[2].at({"Sally"}), gt.tables[3].at({"Sally"}));
}

TEST(Oracle, AnswersByKind) {
    auto s = fixtures::sally_anne();
    s.question.kind_hint = "reality";
    s.question.target_path.clear();
    EXPECT_EQ(oracle::oracle_answer(s, oracle::oracle_beliefs(s, 1)), "B");

    s = fixtures::sally_anne();
    s.question.target_path = {"Anne", "Sally"};
    EXPECT_EQ(oracle::oracle_answer(s, oracle::oracle_beliefs(s, 2)), "A");
    EXPECT_EQ(oracle::oracle_answer(s, oracle::oracle_beliefs(s, 1)), std::nullopt);

    s = fixtures::sally_anne();
    s.question.kind_hint = "search";
    s.question.options = {{"A", Action::search("box")}, {"B", Action::search("basket")}};
    EXPECT_EQ(oracle::oracle_answer(s, oracle::oracle_beliefs(s, 1)), "B");
}

TEST(Oracle, PathEnumerationAvoidsSelfRepeats) {
    auto paths = oracle::all_paths({"A", "B", "C"}, 3);
    EXPECT_EQ(paths.size(), 3u + 6u + 12u);
    for (const auto& p : paths)
        for (std::size_t i = 1; i < p.size(); ++i) EXPECT_NE(p[i], p[i - 1]);
}

TEST(Equivalence, EngineMatchesOracleOnASample) {
    std::size_t bad = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        auto g = synth::generate(synth::config_for_seed(seed, synth::kAllRegimes[seed % 4]));
        bad += fixtures::count_mismatches(g.scenario, g.truth, g.truth.max_order);
    }
    EXPECT_EQ(bad, 0u);
}

TEST(Equivalence, RuleTogglesMatchTheOracleSwitches) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto g = synth::generate(synth::config_for_seed(seed, synth::kAllRegimes[seed % 4]));
        const auto& s = g.scenario;
        oracle::OracleOptions opt;
        opt.nested = false;
        opt.communication = false;
        opt.distractor_scope = false;
        auto gt = oracle::oracle_beliefs(s, g.truth.max_order, opt);
        for (const auto& holder : s.decl.agents) {
            BeliefConfig cfg;
            cfg.max_order = g.truth.max_order;
            cfg.rules.disable(Rule::co_observation_nests).disable(Rule::communication_scoped).disable(Rule::distractor_inert);
            cfg.scope = question_scope(s.question);
            auto tr = build_trace(s, holder, cfg);
            for (const auto& [path, w] : tr.final_belief().entries)
                EXPECT_EQ(fixtures::strip(w), gt.final_tables().at(path.agents())) << s.id << ' ' << path.str();
        }
    }
}

TEST(Sidecar, TruthJsonCarriesGoldAndTables) {
    auto g = synth::generate(config(synth::Regime::false_belief, 3));
    auto j = synth::truth_to_json(g.scenario, g.truth);
    EXPECT_EQ(j["id"], g.scenario.id);
    EXPECT_TRUE(j["tables"].is_object());
    EXPECT_FALSE(j["tables"].empty());
}
