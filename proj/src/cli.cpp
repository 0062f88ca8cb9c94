// Copyright 2026 The mmqubo Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "mmqubo/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmqubo/chimera.hpp"
#include "mmqubo/error.hpp"
#include "mmqubo/experiments.hpp"
#include "mmqubo/formulations.hpp"
#include "mmqubo/instance.hpp"
#include "mmqubo/samplers.hpp"

namespace mmqubo {

namespace {

struct Options {
    std::string instance;

    double A = 1.0;
    double B = 12.0;
    std::optional<double> quad_weight;
    bool omit_slack_free = false;

    std::string sampler = "sa";
    std::optional<int> reads;
    int default_reads = 500;
    int sweeps = 1000;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
    std::optional<double> beta_min;
    std::optional<double> beta_max;

    bool embedded = false;
    std::optional<double> chain_strength;
    int rows = 16;
    int cols = 16;
    int shore = 4;

    std::vector<double> B_values{3, 6, 12};
    std::vector<double> chain_strengths{1, 2, 5, 10, 120, 240, 480};
    double bin_width = 5.0;

    std::string out;
    std::string out_dir;
    std::string format = "json";
    std::string report;
};

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

std::string list(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ",") + num(x);
    return s;
}

void write_file(const std::string& path, const std::string& content) {
    if (path.empty()) return;
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(path);
    if (!f) throw Error("cannot write '" + path + "'");
    f << content;
    if (!f) throw Error("failed writing '" + path + "'");
}

std::string join(const std::string& dir, const std::string& name) {
    return dir.empty() ? std::string() : (std::filesystem::path(dir) / name).string();
}

PenaltyConfig penalty(const Options& o) {
    PenaltyConfig pc;
    pc.A = o.A;
    pc.B = o.B;
    pc.quad_weight = o.quad_weight;
    pc.omit_slack_free_tracks = o.omit_slack_free;
    return pc;
}

SAParams sa_params(const Options& o) {
    SAParams p;
    p.reads = o.reads.value_or(o.default_reads);
    p.sweeps = o.sweeps;
    p.seed = o.seed;
    p.threads = o.threads;
    if (o.beta_min || o.beta_max) {
        if (!o.beta_min || !o.beta_max) throw std::invalid_argument("--beta-min and --beta-max must be given together");
        p.beta = BetaRange{*o.beta_min, *o.beta_max};
    }
    return p;
}

std::string penalty_echo(const Options& o) {
    std::string s = "A=" + num(o.A) + " B=" + num(o.B);
    s += " quad_weight=" + (o.quad_weight ? num(*o.quad_weight) : std::string("auto"));
    s += std::string(" omit_slack_free=") + (o.omit_slack_free ? "1" : "0");
    return s;
}

std::string sampler_echo(const Options& o) {
    std::string s = "reads=" + std::to_string(o.reads.value_or(o.default_reads)) +
                    " sweeps=" + std::to_string(o.sweeps) +
                    " seed=" + std::to_string(o.seed);
    s += " beta_min=" + (o.beta_min ? num(*o.beta_min) : std::string("auto"));
    s += " beta_max=" + (o.beta_max ? num(*o.beta_max) : std::string("auto"));
    return s;
}

int cmd_validate(const Options& o, std::ostream& out) {
    const ProblemInstance inst = load_instance(o.instance);
    out << "# mmqubo validate instance=" << o.instance << "\n";
    out << "containers=" << inst.num_containers() << " tracks=" << inst.num_tracks()
        << " variant=" << to_string(inst.variant()) << "\n";
    for (const Track& t : inst.tracks()) {
        out << "track " << t.id + 1 << ": capacity=" << t.capacity << " potential_load=" << inst.potential_load(t.id)
            << (t.equality ? " equality" : "") << "\n";
    }
    out << "default_B=" << num(default_penalty_B(inst)) << "\n";
    for (const std::string& w : inst.warnings()) out << "warning: " << w << "\n";
    out << "valid\n";
    return 0;
}

int cmd_build(const Options& o, std::ostream& out) {
    const ProblemInstance inst = load_instance(o.instance);
    const PenaltyConfig pc = penalty(o);
    out << "# mmqubo build instance=" << o.instance << " " << penalty_echo(o) << " format=" << o.format << "\n";
    const BuiltQubo built = build_qubo(inst, pc);
    nlohmann::json report = build_report(built, pc);
    const ChainStrengthHeuristics h = chain_strength_heuristics(built.model);
    report["chain_strength_rule_of_thumb"] = h.rule_of_thumb;
    report["chain_strength_upper_bound"] = h.upper_bound;
    report["layout"] = to_json(built.layout);

    if (!o.out.empty()) {
        write_file(o.out, o.format == "triples" ? to_triples(built.model) : to_json(built.model).dump(1) + "\n");
    }
    write_file(o.report, report.dump(2) + "\n");
    out << "variables=" << built.model.num_vars() << " terms=" << built.model.coefficients().size()
        << " offset=" << num(built.model.offset()) << " max_coefficient=" << num(h.rule_of_thumb)
        << " sum_abs_coefficients=" << num(h.upper_bound) << "\n";
    return 0;
}

void print_best(const SampleSet& s, const BuiltQubo& built, const ProblemInstance& inst, std::ostream& out) {
    // Best feasible by (energy, bits); fall back to the lowest-energy sample.
    const Sample* chosen = &s.first();
    for (const Sample& sample : s.samples) {
        const DecodedSample d = decode_sample(built.layout, sample.bits);
        if (evaluate_assignment(inst, d.assignment).feasible) {
            chosen = &sample;
            break;
        }
    }
    const DecodedSample d = decode_sample(built.layout, chosen->bits);
    const EvaluationResult eval = evaluate_assignment(inst, d.assignment);
    out << "energy=" << num(chosen->energy) << " cost=" << num(eval.total_cost)
        << " feasible=" << (eval.feasible ? 1 : 0) << " trucks=" << format_truck_set(d.assignment) << "\n";
}

int cmd_solve(const Options& o, std::ostream& out) {
    const ProblemInstance inst = load_instance(o.instance);
    if (o.sampler == "exact") {
        out << "# mmqubo solve instance=" << o.instance << " sampler=exact\n";
        const OracleSolution sol = exact_ilp_oracle(inst);
        out << "cost=" << num(sol.evaluation.total_cost) << " trucks=" << format_truck_set(sol.assignment) << "\n";
        nlohmann::json choices = nlohmann::json::array();
        for (const Mode& m : sol.assignment) choices.push_back(m.is_truck() ? "truck" : "route" + std::to_string(m.route()));
        write_file(join(o.out_dir, "solution.json"),
                   nlohmann::json{{"cost", sol.evaluation.total_cost},
                                  {"choices", choices},
                                  {"track_loads", sol.evaluation.track_loads},
                                  {"feasible", sol.evaluation.feasible}}
                                   .dump(2) +
                           "\n");
        return 0;
    }

    const PenaltyConfig pc = penalty(o);
    const BuiltQubo built = build_qubo(inst, pc);
    SampleSet samples;
    std::string echo = "# mmqubo solve instance=" + o.instance + " sampler=" + o.sampler + " " + penalty_echo(o);
    if (o.sampler == "qubo-exact") {
        out << echo << "\n";
        if (inst.variant() == Variant::TwoAlt) {
            const Sample best = qubo_oracle_with_slack_completion(built.model, built.layout, inst);
            samples = make_sample_set(built.model, {best.bits}, {{"sampler", "slack_completion"}});
        } else {
            samples = exhaustive_qubo(built.model);
        }
    } else if (o.sampler == "sa") {
        const SAParams params = sa_params(o);
        echo += " " + sampler_echo(o);
        if (o.embedded) {
            const ChimeraGraph g(o.rows, o.cols, o.shore);
            const Embedding e = clique_embedding(built.model.num_vars(), g);
            const double lambda = o.chain_strength.value_or(chain_strength_heuristics(built.model).rule_of_thumb);
            echo += " embedded=1 chain_strength=" + num(lambda) + " graph=" + std::to_string(o.rows) + "x" +
                    std::to_string(o.cols) + "x" + std::to_string(o.shore);
            out << echo << "\n";
            samples = embedded_simulated_annealing(built.model, e, g, lambda, params);
        } else {
            out << echo << " embedded=0\n";
            samples = simulated_annealing(built.model, params);
        }
    } else {
        throw std::invalid_argument("unknown sampler '" + o.sampler + "' (expected exact, qubo-exact or sa)");
    }

    print_best(samples, built, inst, out);
    const RunStats stats = sample_statistics(samples, built.layout, inst);
    const Histogram hist = histogram(samples, built.layout, inst, o.bin_width);
    out << "reads=" << stats.reads << " feasible_fraction=" << num(stats.feasible_fraction);
    if (stats.min_energy_feasible_cost) out << " min_energy_feasible_cost=" << num(*stats.min_energy_feasible_cost);
    if (stats.best_feasible_cost) out << " best_feasible_cost=" << num(*stats.best_feasible_cost);
    if (stats.avg_feasible_cost) out << " avg_feasible_cost=" << num(*stats.avg_feasible_cost);
    if (stats.chain_break_fraction) out << " chain_break_fraction=" << num(*stats.chain_break_fraction);
    out << "\n";

    write_file(join(o.out_dir, "samples.csv"), samples_csv(samples, built.layout, inst));
    write_file(join(o.out_dir, "samples.json"), samples_json(samples, built.layout, inst).dump(1) + "\n");
    write_file(join(o.out_dir, "stats.json"), to_json(stats).dump(2) + "\n");
    write_file(join(o.out_dir, "histogram.csv"), histogram_csv(hist));
    return 0;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const ProblemInstance inst = load_instance(o.instance);
    SweepConfig cfg;
    cfg.sampler = sa_params(o);
    cfg.embedded = o.embedded;
    cfg.A = o.A;
    cfg.quad_weight = o.quad_weight;
    cfg.chimera_rows = o.rows;
    cfg.chimera_cols = o.cols;
    cfg.chimera_shore = o.shore;
    out << "# mmqubo sweep instance=" << o.instance << " A=" << num(o.A) << " B=" << list(o.B_values)
        << " chain_strength=" << list(o.chain_strengths) << " " << sampler_echo(o)
        << " embedded=" << (o.embedded ? 1 : 0) << "\n";
    const SweepReport report = run_sweep(inst, o.B_values, o.chain_strengths, cfg);
    const std::string csv = sweep_csv(report);
    write_file(o.out, csv);
    out << csv;
    return 0;
}

int cmd_embed_info(const Options& o, std::ostream& out) {
    const ProblemInstance inst = load_instance(o.instance);
    const BuiltQubo built = build_qubo(inst, penalty(o));
    const ChimeraGraph g(o.rows, o.cols, o.shore);
    const Embedding e = clique_embedding(built.model.num_vars(), g);
    const EmbeddingReport check = validate_embedding(built.model, e, g);
    const ChainStrengthHeuristics h = chain_strength_heuristics(built.model);
    out << "# mmqubo embed-info instance=" << o.instance << " " << penalty_echo(o) << " graph=" << o.rows << "x"
        << o.cols << "x" << o.shore << "\n";
    out << "variables=" << built.model.num_vars() << " capacity=" << clique_capacity(g)
        << " max_chain_length=" << e.max_chain_length() << " valid=" << (check.ok ? 1 : 0) << "\n";
    out << "rule_of_thumb=" << num(h.rule_of_thumb) << " upper_bound=" << num(h.upper_bound) << "\n";
    for (const std::string& v : check.violations) out << "violation: " << v << "\n";

    nlohmann::json doc = to_json(e);
    doc["chain_strength_heuristics"] = {{"rule_of_thumb", h.rule_of_thumb}, {"upper_bound", h.upper_bound}};
    doc["valid"] = check.ok;
    write_file(o.out, doc.dump() + "\n");
    return check.ok ? 0 : 1;
}

void add_instance(CLI::App* cmd, Options& o) {
    cmd->add_option("-i,--instance", o.instance, "Instance JSON file")->required();
}

void add_penalty(CLI::App* cmd, Options& o) {
    cmd->add_option("--A", o.A, "Objective weight A")->capture_default_str();
    cmd->add_option("--B", o.B, "Capacity penalty weight B (12 is the tested value for the 10x12 case study)")
            ->capture_default_str();
    cmd->add_option("--quad-weight", o.quad_weight, "Rosenberg weight for four-alternative auxiliaries (default: auto)");
    cmd->add_flag("--omit-slack-free", o.omit_slack_free,
                  "Drop constraints of tracks whose potential load never exceeds capacity");
}

void add_sampler(CLI::App* cmd, Options& o, int default_reads) {
    cmd->add_option("--reads", o.reads, "Annealing reads (default: " + std::to_string(default_reads) + ")");
    cmd->add_option("--sweeps", o.sweeps, "Sweeps per read")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = hardware concurrency")->capture_default_str();
    cmd->add_option("--beta-min", o.beta_min, "Initial inverse temperature (default: auto)");
    cmd->add_option("--beta-max", o.beta_max, "Final inverse temperature (default: auto)");
}

void add_graph(CLI::App* cmd, Options& o) {
    cmd->add_option("--chimera-rows", o.rows, "Chimera rows M")->capture_default_str();
    cmd->add_option("--chimera-cols", o.cols, "Chimera columns N")->capture_default_str();
    cmd->add_option("--chimera-shore", o.shore, "Chimera shore size L")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Container-assignment QUBO toolkit: build, solve, embed and sweep."};
    app.require_subcommand(1);

    auto* validate = app.add_subcommand("validate", "Check an instance file and print its summary");
    add_instance(validate, o);

    auto* build = app.add_subcommand("build", "Build the QUBO and write it with a build report");
    add_instance(build, o);
    add_penalty(build, o);
    build->add_option("-o,--out", o.out, "QUBO output file");
    build->add_option("--format", o.format, "QUBO output format")
            ->check(CLI::IsMember({"json", "triples"}))
            ->capture_default_str();
    build->add_option("--report", o.report, "Build report JSON file");

    auto* solve = app.add_subcommand("solve", "Solve with an exact oracle or simulated annealing");
    add_instance(solve, o);
    add_penalty(solve, o);
    solve->add_option("--sampler", o.sampler, "exact (enumerate assignments), qubo-exact (QUBO ground state) or sa")
            ->check(CLI::IsMember({"exact", "qubo-exact", "sa"}))
            ->capture_default_str();
    add_sampler(solve, o, 500);
    solve->add_flag("--embedded", o.embedded, "Anneal the Chimera-embedded model");
    solve->add_option("--chain-strength", o.chain_strength, "Chain strength (default: max_ij Q_ij)");
    add_graph(solve, o);
    solve->add_option("--bin-width", o.bin_width, "Histogram bin width")->capture_default_str();
    solve->add_option("--out-dir", o.out_dir, "Directory for samples.csv, samples.json, stats.json, histogram.csv");

    auto* sweep = app.add_subcommand("sweep", "Grid search over B and chain strength");
    add_instance(sweep, o);
    sweep->add_option("--A", o.A, "Objective weight A")->capture_default_str();
    sweep->add_option("--B", o.B_values, "B values")->delimiter(',')->capture_default_str();
    sweep->add_option("--chain-strength", o.chain_strengths, "Chain strengths")->delimiter(',')->capture_default_str();
    sweep->add_option("--quad-weight", o.quad_weight, "Rosenberg weight for four-alternative auxiliaries (default: auto)");
    add_sampler(sweep, o, 1000);
    sweep->add_flag("--embedded", o.embedded, "Anneal the Chimera-embedded model");
    add_graph(sweep, o);
    sweep->add_option("-o,--out", o.out, "Report CSV file");

    auto* embed = app.add_subcommand("embed-info", "Clique-embed the model and report chain-strength heuristics");
    add_instance(embed, o);
    add_penalty(embed, o);
    add_graph(embed, o);
    embed->add_option("-o,--out", o.out, "Embedding JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    if (*sweep) o.default_reads = 1000;
    try {
        if (*validate) return cmd_validate(o, out);
        if (*build) return cmd_build(o, out);
        if (*solve) return cmd_solve(o, out);
        if (*sweep) return cmd_sweep(o, out);
        if (*embed) return cmd_embed_info(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace mmqubo
