// Scoring arithmetic: difficulty tiers, token proxy, harness gap, audit calibration.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "event_model.hpp"

namespace mindtrace {

enum class Tier { easy, medium, hard };

inline std::string to_string(Tier t) {
    switch (t) {
        case Tier::easy: return "easy";
        case Tier::medium: return "medium";
        case Tier::hard: return "hard";
    }
    return "?";
}

/// easy: >= 98, medium: [90, 98), hard: < 90. Accuracy is a percentage.
inline Tier assign_tier(double accuracy) {
    if (!(accuracy >= 0.0 && accuracy <= 100.0))
        throw std::invalid_argument("accuracy out of range [0, 100]: " + std::to_string(accuracy));
    if (accuracy >= 98.0) return Tier::easy;
    if (accuracy >= 90.0) return Tier::medium;
    return Tier::hard;
}

namespace detail {

inline bool is_ascii_space(unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); }

inline bool is_ascii_word(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

inline std::size_t utf8_length(unsigned char lead) {
    if (lead >= 0xF0) return 4;
    if (lead >= 0xE0) return 3;
    if (lead >= 0xC0) return 2;
    return 1;
}

}  // namespace detail

/// Effective-token proxy: matches of `\w+|[^\w\s]`, scanned left to right.
/// Non-ASCII code points count as word characters.
inline std::size_t count_tokens(std::string_view text) {
    std::size_t count = 0;
    std::size_t i = 0;
    bool in_word = false;
    while (i < text.size()) {
        auto c = static_cast<unsigned char>(text[i]);
        if (c >= 0x80) {
            if (!in_word) ++count;
            in_word = true;
            i += detail::utf8_length(c);
        } else if (detail::is_ascii_word(c)) {
            if (!in_word) ++count;
            in_word = true;
            ++i;
        } else {
            in_word = false;
            if (!detail::is_ascii_space(c)) ++count;
            ++i;
        }
    }
    return count;
}

struct GapRow {
    std::string benchmark;
    double model_accuracy = 0;
    double symbolic_accuracy = 0;
    double gap = 0;
};

struct GapReport {
    std::vector<GapRow> rows;
    double macro_gap = 0;
};

struct AccuracyPair {
    std::string benchmark;
    double model_accuracy = 0;
    double symbolic_accuracy = 0;
};

/// Per-benchmark gap is model minus symbolic; the macro gap is the mean of those gaps.
inline GapReport compute_gap(const std::vector<AccuracyPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("compute_gap needs at least one benchmark");
    GapReport r;
    double sum = 0;
    for (const auto& p : pairs) {
        double gap = p.model_accuracy - p.symbolic_accuracy;
        r.rows.push_back({p.benchmark, p.model_accuracy, p.symbolic_accuracy, gap});
        sum += gap;
    }
    r.macro_gap = sum / static_cast<double>(pairs.size());
    return r;
}

enum class AuditDecision { accept, reject, abstain };

struct AuditLogRecord {
    std::string id;
    std::string harness_answer;
    bool harness_correct = false;
    AuditDecision decision = AuditDecision::accept;
    std::optional<std::string> override_answer;
    std::optional<bool> override_correct;
};

struct CalibrationStats {
    std::size_t rejects = 0;
    std::optional<double> rejected_proof_correctness;  // nullopt: undefined (no rejects)
    std::optional<double> override_precision;
};

inline CalibrationStats calibration_stats(const std::vector<AuditLogRecord>& log) {
    if (log.empty()) throw std::invalid_argument("calibration_stats needs a non-empty audit log");
    std::size_t rejects = 0, harness_ok = 0, override_ok = 0;
    for (const auto& r : log) {
        bool is_reject = r.decision == AuditDecision::reject;
        if (is_reject != (r.override_answer.has_value() && r.override_correct.has_value()))
            throw Error("audit record '" + r.id + "': override fields must be present iff decision is reject");
        if (!is_reject) continue;
        ++rejects;
        harness_ok += r.harness_correct;
        override_ok += *r.override_correct;
    }
    CalibrationStats s;
    s.rejects = rejects;
    if (rejects > 0) {
        s.rejected_proof_correctness = static_cast<double>(harness_ok) / static_cast<double>(rejects);
        s.override_precision = static_cast<double>(override_ok) / static_cast<double>(rejects);
    }
    return s;
}

}  // namespace mindtrace
