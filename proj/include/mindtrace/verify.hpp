// Engine-vs-oracle equivalence over generated stories.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "oracle.hpp"
#include "perspective.hpp"
#include "prover.hpp"
#include "synth.hpp"
#include "trace.hpp"

namespace mindtrace::verify {

inline BeliefConfig engine_config(const Scenario& s, std::size_t max_order) {
    BeliefConfig cfg;
    cfg.max_order = max_order;
    cfg.scope = question_scope(s.question);
    return cfg;
}

/// Values only; provenance is engine bookkeeping the oracle does not keep.
inline oracle::PathTable strip(const PartialWorld& w) {
    oracle::PathTable t;
    for (const auto& [o, f] : w.location) t.locations[o] = f.value;
    for (const auto& [k, f] : w.attribute) t.attributes[k] = f.value;
    for (const auto& [a, f] : w.goal) t.goals[a] = f.value;
    return t;
}

/// Number of (holder, path) entries where the engine's final belief differs from the oracle.
/// The first few differences are appended to `log`.
inline std::size_t count_mismatches(const Scenario& s, const oracle::GroundTruth& gt, std::size_t max_order,
                                    std::ostream* log = nullptr) {
    std::size_t bad = 0;
    const auto& want = gt.final_tables();
    std::size_t seen = 0;
    for (const auto& holder : s.decl.agents) {
        auto tr = build_trace(s, holder, engine_config(s, max_order));
        for (const auto& [path, world] : tr.final_belief().entries) {
            ++seen;
            auto it = want.find(path.agents());
            if (it != want.end() && strip(world) == it->second) continue;
            ++bad;
            if (log && bad <= 3) *log << "  " << s.id << " path " << path.str() << " differs\n";
        }
    }
    if (seen != want.size()) {
        ++bad;
        if (log) *log << "  " << s.id << " path count " << seen << " vs oracle " << want.size() << '\n';
    }
    return bad;
}

struct Summary {
    std::size_t stories = 0;
    std::size_t table_mismatches = 0;  // stories whose belief tables differ
    std::size_t decidable = 0;
    std::size_t answer_mismatches = 0;  // decidable stories the prover got wrong
    std::size_t unsound = 0;

    bool ok() const { return table_mismatches == 0 && answer_mismatches == 0 && unsound == 0; }
};

/// Generates `count` stories from consecutive seeds. Without a fixed regime, seeds rotate over all four.
inline Summary run(std::uint64_t first_seed, std::size_t count, std::optional<synth::Regime> regime = std::nullopt,
                   std::ostream* log = nullptr) {
    Summary sum;
    for (std::uint64_t seed = first_seed; seed < first_seed + count; ++seed) {
        auto r = regime.value_or(synth::kAllRegimes[seed % synth::kAllRegimes.size()]);
        auto g = synth::generate(synth::config_for_seed(seed, r));
        ++sum.stories;
        if (count_mismatches(g.scenario, g.truth, g.truth.max_order, log) > 0) ++sum.table_mismatches;
        auto proof = prove(g.scenario);
        if (!proof_is_sound(proof, g.scenario)) {
            ++sum.unsound;
            if (log) *log << "  " << g.scenario.id << " cites an unseen event\n";
        }
        if (!g.decidable()) continue;
        ++sum.decidable;
        if (proof.answer.chosen != *g.scenario.question.gold) {
            ++sum.answer_mismatches;
            if (log)
                *log << "  " << g.scenario.id << " chose " << proof.answer.chosen << ", oracle " << *g.scenario.question.gold
                     << '\n';
        }
    }
    return sum;
}

}  // namespace mindtrace::verify
