// Batch evaluation: JSONL in, per-record rows and sliced accuracy tables out.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "metrics.hpp"
#include "prover.hpp"
#include "record_io.hpp"

namespace mindtrace {

struct EvalOptions {
    std::string mode = "symbolic";  // symbolic | adapter
    std::string adapter = "null";
    ProverConfig prover;
    std::size_t workers = 1;
};

struct EvalRecord {
    std::string id;
    std::string benchmark;
    std::string question_type;
    std::optional<std::size_t> belief_order;
    std::string visibility;
    std::optional<std::string> gold;
    std::string chosen;
    bool correct = false;
    bool abstained = false;
    bool adapter_resolved = false;
    bool failed = false;  // unparseable or invalid record; scored as incorrect
    std::size_t effective_tokens = 0;
    std::string error;

    bool scored() const { return failed || gold.has_value(); }
};

struct Tally {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t abstained = 0;
    std::size_t failed = 0;

    void add(const EvalRecord& r) {
        if (!r.scored()) return;
        ++total;
        correct += r.correct;
        abstained += r.abstained;
        failed += r.failed;
    }
    /// Percentage; nullopt when nothing was scored.
    std::optional<double> accuracy() const {
        if (total == 0) return std::nullopt;
        return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
    }
    std::optional<double> abstention() const {
        if (total == 0) return std::nullopt;
        return 100.0 * static_cast<double>(abstained) / static_cast<double>(total);
    }
};

struct SliceRow {
    std::string benchmark;
    std::string variable;  // question_type | belief_order | visibility
    std::string value;
    Tally tally;
};

struct EvalReport {
    std::vector<EvalRecord> records;  // sorted by id
    std::map<std::string, Tally> per_benchmark;
    std::vector<SliceRow> slices;
    std::optional<double> macro_accuracy;  // unweighted mean over benchmarks
    std::size_t unscored = 0;
};

/// Proves one scenario and scores it against its gold label.
inline EvalRecord evaluate_scenario(const Scenario& s, const EvalOptions& opt, SolverAdapter* adapter = nullptr) {
    EvalRecord r;
    r.id = s.id;
    r.benchmark = s.meta.benchmark;
    r.question_type = s.meta.question_type;
    r.belief_order = s.meta.belief_order;
    r.visibility = s.meta.visibility;
    r.gold = s.question.gold;

    auto res = prove(s, opt.prover);
    r.chosen = res.answer.chosen;
    r.abstained = res.answer.abstained;
    r.error = res.answer.error;
    if (r.abstained && opt.mode == "adapter" && adapter) {
        auto fb = resolve_fallback(*adapter, s, res.trace ? &*res.trace : nullptr, s.question.options, r.chosen);
        r.chosen = fb.label;
        r.adapter_resolved = fb.adapter_resolved;
        r.effective_tokens = fb.effective_tokens;
        if (!fb.error.empty()) r.error = fb.error;
    }
    r.correct = r.gold && *r.gold == r.chosen;
    return r;
}

namespace detail {

/// Best-effort id and benchmark of a line that failed to parse.
inline EvalRecord failed_record(const std::string& file, const RecordLine& line) {
    EvalRecord r;
    r.failed = true;
    r.error = line.error;
    r.id = file + ":" + std::to_string(line.line);
    r.benchmark = "unknown";
    auto j = nlohmann::json::parse(line.raw, nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
        if (j.contains("id") && j["id"].is_string()) r.id = j["id"].get<std::string>();
        if (j.contains("meta") && j["meta"].is_object()) {
            const auto& m = j["meta"];
            if (m.contains("benchmark") && m["benchmark"].is_string()) r.benchmark = m["benchmark"].get<std::string>();
            if (m.contains("question_type") && m["question_type"].is_string())
                r.question_type = m["question_type"].get<std::string>();
        }
    }
    return r;
}

}  // namespace detail

/// Aggregates records into per-benchmark tallies, slices and the macro accuracy.
inline EvalReport summarize(std::vector<EvalRecord> records) {
    EvalReport rep;
    std::stable_sort(records.begin(), records.end(), [](const EvalRecord& a, const EvalRecord& b) { return a.id < b.id; });
    std::map<std::tuple<std::string, std::string, std::string>, Tally> slices;
    for (const auto& r : records) {
        if (!r.scored()) {
            ++rep.unscored;
            continue;
        }
        rep.per_benchmark[r.benchmark].add(r);
        slices[{r.benchmark, "question_type", r.question_type.empty() ? "-" : r.question_type}].add(r);
        slices[{r.benchmark, "belief_order", r.belief_order ? std::to_string(*r.belief_order) : "-"}].add(r);
        slices[{r.benchmark, "visibility", r.visibility.empty() ? "-" : r.visibility}].add(r);
    }
    for (const auto& [key, t] : slices) rep.slices.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), t});
    if (!rep.per_benchmark.empty()) {
        double sum = 0;
        for (const auto& [b, t] : rep.per_benchmark) sum += *t.accuracy();
        rep.macro_accuracy = sum / static_cast<double>(rep.per_benchmark.size());
    }
    rep.records = std::move(records);
    return rep;
}

/// Reads every file, proves every record (in parallel when workers > 1) and summarizes.
inline EvalReport run_eval(const std::vector<std::string>& files, const EvalOptions& opt,
                           const AdapterRegistry& registry = AdapterRegistry::with_builtins()) {
    if (opt.mode != "symbolic" && opt.mode != "adapter") throw ConfigError("unknown eval mode '" + opt.mode + "'");
    if (opt.mode == "adapter" && !registry.has(opt.adapter))
        throw ConfigError("no solver adapter registered as '" + opt.adapter + "'");

    std::vector<EvalRecord> out;
    std::vector<const Scenario*> todo;
    std::vector<std::vector<RecordLine>> loaded;
    for (const auto& f : files) {
        loaded.push_back(read_record_file(f));
        for (const auto& line : loaded.back()) {
            if (line.scenario) todo.push_back(&*line.scenario);
            else out.push_back(detail::failed_record(f, line));
        }
    }

    std::vector<EvalRecord> results(todo.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        std::unique_ptr<SolverAdapter> adapter;
        if (opt.mode == "adapter") adapter = registry.create(opt.adapter);
        for (std::size_t i = next++; i < todo.size(); i = next++) results[i] = evaluate_scenario(*todo[i], opt, adapter.get());
    };
    std::size_t n = std::max<std::size_t>(1, std::min(opt.workers, todo.size()));
    if (n == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    out.insert(out.end(), std::make_move_iterator(results.begin()), std::make_move_iterator(results.end()));
    return summarize(std::move(out));
}

// ---------------------------------------------------------------------------
// Output files

inline std::string percent(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

inline std::string summary_text(const EvalReport& rep, const EvalOptions& opt) {
    std::ostringstream out;
    std::size_t failed = 0, scored = 0;
    for (const auto& [b, t] : rep.per_benchmark) {
        failed += t.failed;
        scored += t.total;
    }
    out << "mode\t" << opt.mode << '\n';
    out << "records\t" << rep.records.size() << '\n';
    out << "scored\t" << scored << '\n';
    out << "unscored\t" << rep.unscored << '\n';
    out << "failed\t" << failed << '\n';
    for (const auto& [b, t] : rep.per_benchmark)
        out << "benchmark\t" << b << "\taccuracy\t" << percent(t.accuracy()) << "\tabstention\t"
            << percent(t.abstention()) << "\tn\t" << t.total << '\n';
    out << "macro_accuracy\t" << percent(rep.macro_accuracy) << '\n';
    return out.str();
}

inline std::string records_csv(const EvalReport& rep) {
    std::ostringstream out;
    out << "id,benchmark,question_type,belief_order,visibility,gold,chosen,correct,abstained,adapter_resolved,failed,"
           "effective_tokens,error\n";
    for (const auto& r : rep.records)
        out << csv_field(r.id) << ',' << csv_field(r.benchmark) << ',' << csv_field(r.question_type) << ','
            << (r.belief_order ? std::to_string(*r.belief_order) : "") << ',' << csv_field(r.visibility) << ','
            << csv_field(r.gold.value_or("")) << ',' << csv_field(r.chosen) << ',' << r.correct << ',' << r.abstained
            << ',' << r.adapter_resolved << ',' << r.failed << ',' << r.effective_tokens << ',' << csv_field(r.error)
            << '\n';
    return out.str();
}

inline std::string slices_csv(const EvalReport& rep) {
    std::ostringstream out;
    out << "benchmark,variable,value,n,correct,accuracy,tier,abstention\n";
    for (const auto& s : rep.slices)
        out << csv_field(s.benchmark) << ',' << s.variable << ',' << csv_field(s.value) << ',' << s.tally.total << ','
            << s.tally.correct << ',' << percent(s.tally.accuracy()) << ',' << to_string(assign_tier(*s.tally.accuracy()))
            << ',' << percent(s.tally.abstention()) << '\n';
    return out.str();
}

inline std::string benchmarks_csv(const EvalReport& rep) {
    std::ostringstream out;
    out << "benchmark,n,correct,abstained,failed,accuracy,tier\n";
    for (const auto& [b, t] : rep.per_benchmark)
        out << csv_field(b) << ',' << t.total << ',' << t.correct << ',' << t.abstained << ',' << t.failed << ','
            << percent(t.accuracy()) << ',' << to_string(assign_tier(*t.accuracy())) << '\n';
    return out.str();
}

/// Model columns stay blank unless reference model accuracies are supplied.
inline std::string gap_csv(const EvalReport& rep, const std::map<std::string, double>& model = {}) {
    std::ostringstream out;
    out << "benchmark,model_accuracy,symbolic_accuracy,gap\n";
    for (const auto& [b, t] : rep.per_benchmark) {
        auto it = model.find(b);
        out << csv_field(b) << ',' << (it == model.end() ? "" : percent(it->second)) << ',' << percent(t.accuracy())
            << ',' << (it == model.end() ? "" : percent(it->second - *t.accuracy())) << '\n';
    }
    return out.str();
}

inline void write_report(const EvalReport& rep, const EvalOptions& opt, const std::filesystem::path& dir,
                         const std::map<std::string, double>& model = {}) {
    std::filesystem::create_directories(dir);
    auto put = [&](const char* name, const std::string& text) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw Error("cannot write " + (dir / name).string());
        f << text;
    };
    put("summary.txt", summary_text(rep, opt));
    put("records.csv", records_csv(rep));
    put("slices.csv", slices_csv(rep));
    put("benchmarks.csv", benchmarks_csv(rep));
    put("gap.csv", gap_csv(rep, model));
}

}  // namespace mindtrace
