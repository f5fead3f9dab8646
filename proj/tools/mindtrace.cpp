// mindtrace: command-line front end for evaluation, generation and the scoring utilities.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include <mindtrace/mindtrace.hpp>

using namespace mindtrace;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') out.back() += line[++i];
            else if (c == '"') quoted = false;
            else out.back() += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else if (c != '\r') {
            out.back() += c;
        }
    }
    return out;
}

/// benchmark -> accuracy from any CSV with `benchmark` and `accuracy` (or `symbolic_accuracy`) columns.
std::map<std::string, double> read_accuracy_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(path + " is empty");
    auto head = split_csv_line(line);
    auto col = [&](std::initializer_list<const char*> names) -> std::size_t {
        for (const char* n : names)
            for (std::size_t i = 0; i < head.size(); ++i)
                if (head[i] == n) return i;
        throw Error(path + ": missing column '" + *names.begin() + "'");
    };
    std::size_t b = col({"benchmark"}), a = col({"accuracy", "model_accuracy", "symbolic_accuracy"});
    std::map<std::string, double> out;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto f = split_csv_line(line);
        if (f.size() <= std::max(a, b)) throw Error(path + ":" + std::to_string(n) + ": too few fields");
        try {
            std::size_t used = 0;
            out[f[b]] = std::stod(f[a], &used);
            if (used != f[a].size()) throw std::invalid_argument(f[a]);
        } catch (const std::logic_error&) {
            throw Error(path + ":" + std::to_string(n) + ": accuracy '" + f[a] + "' is not a number");
        }
    }
    return out;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string slurp(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::optional<synth::Regime> regime_arg(const std::string& s) {
    if (s == "all") return std::nullopt;
    return synth::parse_regime(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perspective-tracking belief solver and evaluation harness"};
    app.require_subcommand(1);

    // eval
    auto* eval = app.add_subcommand("eval", "Score JSONL records and write a report directory");
    std::vector<std::string> inputs;
    EvalOptions eopt;
    std::size_t max_order = 0;
    std::string out_dir = "report", model_csv;
    eval->add_option("inputs", inputs, "Record files (JSONL)")->required()->check(CLI::ExistingFile);
    eval->add_option("--mode", eopt.mode, "symbolic or adapter")->check(CLI::IsMember({"symbolic", "adapter"}));
    eval->add_option("--adapter", eopt.adapter, "Fallback adapter name in adapter mode");
    eval->add_option("--max-order", max_order, "Deepest belief path tracked (0: the question's own order)");
    eval->add_option("--workers", eopt.workers, "Parallel workers")->check(CLI::PositiveNumber);
    eval->add_option("--out", out_dir, "Report directory");
    eval->add_option("--model-csv", model_csv, "Reference model accuracies for gap.csv")->check(CLI::ExistingFile);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate labelled stories with an oracle-backed truth sidecar");
    synth::GenConfig gcfg;
    std::string regime = "all", gen_out = "stories.jsonl", truth_out, qtype;
    std::uint64_t first_seed = 0;
    std::size_t n_seeds = 10;
    bool per_seed = false;
    gen->add_option("--regime", regime, "false_belief, nested, communication, goal_action or all");
    gen->add_option("--seeds", n_seeds, "Number of stories");
    gen->add_option("--first-seed", first_seed, "Seed of the first story");
    gen->add_flag("--vary", per_seed, "Derive sizes and belief order from each seed instead of the flags");
    gen->add_option("--agents", gcfg.n_agents);
    gen->add_option("--rooms", gcfg.n_rooms);
    gen->add_option("--containers", gcfg.n_containers);
    gen->add_option("--objects", gcfg.n_objects);
    gen->add_option("--events", gcfg.n_events);
    gen->add_option("--order", gcfg.belief_order, "Belief order of the question");
    gen->add_option("--communication-rate", gcfg.communication_rate);
    gen->add_option("--deception-rate", gcfg.deception_rate);
    gen->add_option("--distractor-rate", gcfg.distractor_rate);
    gen->add_option("--question-type", qtype, "Force one question type");
    gen->add_option("--out", gen_out, "Story file (JSONL)");
    gen->add_option("--truth", truth_out, "Truth sidecar (default: <out>.truth.jsonl)");

    // verify
    auto* ver = app.add_subcommand("verify", "Check the belief engine and prover against the oracle");
    std::uint64_t ver_first = 0;
    std::size_t ver_count = 1000;
    std::string ver_regime = "all";
    bool verbose = false;
    ver->add_option("--first-seed", ver_first);
    ver->add_option("--count", ver_count, "Number of generated stories");
    ver->add_option("--regime", ver_regime);
    ver->add_flag("-v,--verbose", verbose, "List the first differences");

    // gap
    auto* gap = app.add_subcommand("gap", "Per-benchmark and macro gap between model and symbolic accuracy");
    std::string gap_model, gap_sym;
    gap->add_option("--model-csv", gap_model, "CSV with benchmark,accuracy")->required()->check(CLI::ExistingFile);
    gap->add_option("--sym-csv", gap_sym, "CSV with benchmark,accuracy (benchmarks.csv works)")
        ->required()
        ->check(CLI::ExistingFile);

    // calib
    auto* calib = app.add_subcommand("calib", "Calibration statistics from an audit log");
    std::string audit;
    calib->add_option("--audit-log", audit, "JSONL audit log")->required()->check(CLI::ExistingFile);

    // tokens
    auto* tok = app.add_subcommand("tokens", "Effective-token proxy count of a text file");
    std::string tok_file = "-";
    tok->add_option("--file", tok_file, "Text file, or - for stdin");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            if (max_order > 0) eopt.prover.max_order = max_order;
            auto rep = run_eval(inputs, eopt);
            std::map<std::string, double> model;
            if (!model_csv.empty()) model = read_accuracy_csv(model_csv);
            write_report(rep, eopt, out_dir, model);
            std::cout << summary_text(rep, eopt);
        } else if (gen->parsed()) {
            auto fixed = regime_arg(regime);
            if (truth_out.empty()) truth_out = gen_out + ".truth.jsonl";
            std::ofstream stories(gen_out), truth(truth_out);
            if (!stories || !truth) throw Error("cannot write " + gen_out + " or " + truth_out);
            std::size_t undecidable = 0;
            for (std::uint64_t seed = first_seed; seed < first_seed + n_seeds; ++seed) {
                auto r = fixed.value_or(synth::kAllRegimes[seed % synth::kAllRegimes.size()]);
                synth::GenConfig c = per_seed ? synth::config_for_seed(seed, r) : gcfg;
                c.regime = r;
                c.seed = seed;
                if (!qtype.empty()) c.question_type = qtype;
                auto g = synth::generate(c);
                undecidable += !g.decidable();
                stories << serialize_scenario(g.scenario) << '\n';
                truth << synth::truth_to_json(g.scenario, g.truth).dump() << '\n';
            }
            std::cout << "wrote " << n_seeds << " stories to " << gen_out << " (" << undecidable
                      << " without a decidable answer)\n";
        } else if (ver->parsed()) {
            auto s = verify::run(ver_first, ver_count, regime_arg(ver_regime), verbose ? &std::cerr : nullptr);
            std::cout << "stories\t" << s.stories << "\ntable_mismatches\t" << s.table_mismatches << "\ndecidable\t"
                      << s.decidable << "\nanswer_mismatches\t" << s.answer_mismatches << "\nunsound\t" << s.unsound
                      << '\n'
                      << (s.ok() ? "OK" : "MISMATCH") << '\n';
            return s.ok() ? 0 : 1;
        } else if (gap->parsed()) {
            auto model = read_accuracy_csv(gap_model), sym = read_accuracy_csv(gap_sym);
            std::vector<AccuracyPair> pairs;
            for (const auto& [b, m] : model) {
                auto it = sym.find(b);
                if (it == sym.end()) throw Error("benchmark '" + b + "' has no symbolic accuracy");
                pairs.push_back({b, m, it->second});
            }
            auto rep = compute_gap(pairs);
            std::cout << "benchmark,model_accuracy,symbolic_accuracy,gap\n";
            for (const auto& r : rep.rows)
                std::cout << csv_field(r.benchmark) << ',' << fixed2(r.model_accuracy) << ','
                          << fixed2(r.symbolic_accuracy) << ',' << fixed2(r.gap) << '\n';
            std::cout << "macro,,," << fixed2(rep.macro_gap) << '\n';
        } else if (calib->parsed()) {
            std::ifstream in(audit);
            std::vector<AuditLogRecord> log;
            std::string line;
            std::size_t n = 0;
            while (std::getline(in, line)) {
                ++n;
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                try {
                    log.push_back(parse_audit_record(line));
                } catch (const Error& e) {
                    throw Error(audit + ":" + std::to_string(n) + ": " + e.what());
                }
            }
            auto s = calibration_stats(log);
            auto frac = [](const std::optional<double>& v) {
                if (!v) return std::string("undefined");
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.4f", *v);
                return std::string(buf);
            };
            std::cout << "records\t" << log.size() << "\nrejects\t" << s.rejects << "\nrejected_proof_correctness\t"
                      << frac(s.rejected_proof_correctness) << "\noverride_precision\t"
                      << frac(s.override_precision) << '\n';
        } else if (tok->parsed()) {
            std::cout << count_tokens(slurp(tok_file)) << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
