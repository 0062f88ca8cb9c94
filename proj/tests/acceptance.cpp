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

// End-to-end acceptance checks on the 10-container case study. Prints one
// PASS/FAIL line per criterion and exits nonzero if any fails. Pass a list of
// criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mmqubo/chimera.hpp"
#include "mmqubo/experiments.hpp"
#include "mmqubo/formulations.hpp"
#include "mmqubo/samplers.hpp"
#include "oracles.hpp"

using namespace mmqubo;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds
    std::function<Outcome()> run;
};

PenaltyConfig with_B(double B) {
    PenaltyConfig pc;
    pc.A = 1.0;
    pc.B = B;
    return pc;
}

// Collects failed expectations into a single outcome.
class Checker {
 public:
    void expect(bool cond, const std::string& what) {
        if (!cond && failures_ < 5) notes_ << (failures_ ? "; " : "") << what;
        if (!cond) ++failures_;
    }
    Outcome done(const std::string& summary) const {
        if (failures_ == 0) return {true, summary};
        std::ostringstream s;
        s << failures_ << " failed check(s): " << notes_.str();
        return {false, s.str()};
    }

 private:
    int failures_ = 0;
    std::ostringstream notes_;
};

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

Outcome case_study_optimum() {
    Checker c;
    const OracleSolution sol = exact_ilp_oracle(oracle::case_study());
    c.expect(sol.evaluation.total_cost == 85.0, "cost " + num(sol.evaluation.total_cost));
    c.expect(format_truck_set(sol.assignment) == "{4,7,8}", "trucks " + format_truck_set(sol.assignment));
    c.expect(sol.evaluation.feasible, "infeasible optimum");
    return c.done("cost=" + num(sol.evaluation.total_cost) + " trucks=" + format_truck_set(sol.assignment));
}

Outcome variable_count() {
    const BuiltQubo b = build_two_alt_qubo(oracle::case_study(), with_B(12));
    Checker c;
    c.expect(b.model.num_vars() == 46, "num_vars " + std::to_string(b.model.num_vars()));
    c.expect(b.layout.total == 46, "layout total " + std::to_string(b.layout.total));
    return c.done("variables=" + std::to_string(b.model.num_vars()));
}

Outcome slack_completion_agreement() {
    const ProblemInstance inst = oracle::case_study();
    const BuiltQubo b = build_two_alt_qubo(inst, with_B(12));
    const Sample s = qubo_oracle_with_slack_completion(b.model, b.layout, inst);
    const Assignment a = decode_sample(b.layout, s.bits).assignment;
    const oracle::BruteOptimum brute = oracle::brute_force_optimum(inst);
    Checker c;
    c.expect(s.energy == 85.0, "energy " + num(s.energy));
    c.expect(brute.argmins.size() == 1 && oracle::choices_of(a) == brute.argmins.front(), "decoded assignment differs");
    c.expect(oracle::dense_energy(b.model, s.bits) == 85.0, "re-scored energy differs");
    return c.done("energy=" + num(s.energy) + " trucks=" + format_truck_set(a));
}

Outcome chain_strength_values() {
    const ProblemInstance inst = oracle::case_study();
    const std::vector<double> Bs{3, 6, 12};
    const std::vector<double> rule{120, 240, 480};
    const std::vector<double> bound{4673, 9341, 18687};
    Checker c;
    std::ostringstream got;
    for (std::size_t k = 0; k < Bs.size(); ++k) {
        const ChainStrengthHeuristics h = chain_strength_heuristics(build_two_alt_qubo(inst, with_B(Bs[k])).model);
        got << (k ? " " : "") << "B=" << Bs[k] << ":" << num(h.rule_of_thumb) << "/" << num(h.upper_bound);
        c.expect(h.rule_of_thumb == rule[k], "rule of thumb at B=" + num(Bs[k]) + " is " + num(h.rule_of_thumb));
        c.expect(h.upper_bound == bound[k], "upper bound at B=" + num(Bs[k]) + " is " + num(h.upper_bound));
    }
    return c.done(got.str());
}

Outcome feasible_energy_identity() {
    const ProblemInstance inst = oracle::case_study();
    const BuiltQubo b = build_two_alt_qubo(inst, with_B(12));
    Checker c;
    int feasible = 0;
    int total = 0;
    double worst = 0.0;
    oracle::for_each_choice(inst, [&](const std::vector<int>& choice) {
        ++total;
        if (!oracle::feasible(inst, choice)) return;
        ++feasible;
        const Bits bits = encode_assignment(inst, b.layout, oracle::assignment_of(choice));
        // Exact slack fill: every constrained residual is zero.
        const DecodedSample d = decode_sample(b.layout, bits);
        const std::vector<int> load = oracle::loads(inst, choice);
        for (std::size_t j = 0; j < load.size(); ++j) {
            c.expect(load[j] + d.slack[j] == oracle::kCapacity, "slack fill not exact");
        }
        const double diff = std::abs(b.model.energy(bits) - oracle::total_cost(inst, choice));
        worst = std::max(worst, diff);
        c.expect(diff <= 1e-9, "energy differs from cost by " + num(diff));
    });
    c.expect(total == 1024, "enumerated " + std::to_string(total));
    return c.done(std::to_string(total) + " mode vectors, " + std::to_string(feasible) +
                  " feasible, max |E - A*cost| = " + num(worst));
}

Outcome sa_recovery() {
    const ProblemInstance inst = oracle::case_study();
    const BuiltQubo b = build_two_alt_qubo(inst, with_B(12));
    SAParams p;
    p.reads = 500;
    const SampleSet s = simulated_annealing(b.model, p);
    const RunStats st = sample_statistics(s, b.layout, inst);
    Checker c;
    c.expect(st.best_feasible_cost && *st.best_feasible_cost == 85.0,
             "best feasible cost " + (st.best_feasible_cost ? num(*st.best_feasible_cost) : std::string("absent")));
    c.expect(st.feasible_fraction >= 0.5, "feasible fraction " + num(st.feasible_fraction));
    for (const Sample& smp : s.samples) {
        c.expect(std::abs(smp.energy - oracle::dense_energy(b.model, smp.bits)) <= 1e-9, "stored energy drift");
    }
    return c.done("best_feasible_cost=" + num(st.best_feasible_cost.value_or(NAN)) +
                  " feasible_fraction=" + num(st.feasible_fraction));
}

Outcome penalty_threshold() {
    // Two containers share a capacity-1 track; moving container 0 to the
    // truck removes the overload at extra cost ct - cb.
    Checker c;
    std::mt19937_64 rng(509);
    std::uniform_int_distribution<int> cost(0, 30);
    int comparisons = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const double cb = cost(rng);
        const double ct = cb + 1 + cost(rng);
        const double spread = ct - cb;
        Container swing{0, ct, {{cb, {0}}}};
        Container stay{1, 1000.0, {{static_cast<double>(cost(rng)), {0}}}};
        const ProblemInstance inst({swing, stay}, {{0, 1, false}});
        for (double B : {spread / 2, spread - 1e-6, spread, spread + 1e-6, spread * 2}) {
            const BuiltQubo b = build_two_alt_qubo(inst, with_B(B));
            const int slack = b.layout.slack_bits[0][0];
            auto energy = [&](const Assignment& a) {
                // Lowest energy over both slack values.
                Bits bits = encode_assignment(inst, b.layout, a);
                bits[static_cast<std::size_t>(slack)] = 0;
                const double e0 = b.model.energy(bits);
                bits[static_cast<std::size_t>(slack)] = 1;
                return std::min(e0, b.model.energy(bits));
            };
            const double overloaded = energy({Mode::barge(1), Mode::barge(1)});
            const double moved = energy({Mode::truck(), Mode::barge(1)});
            // Independent value of both states from the definition.
            c.expect(overloaded == oracle::penalized_objective(inst, {1, 1}, 1.0, B), "overloaded energy");
            c.expect(moved == oracle::penalized_objective(inst, {0, 1}, 1.0, B), "feasible energy");
            c.expect((overloaded < moved) == (B < spread),
                     "B=" + num(B) + " spread=" + num(spread) + " overloaded=" + num(overloaded) +
                             " feasible=" + num(moved));
            ++comparisons;
        }
    }
    return c.done(std::to_string(comparisons) + " comparisons around B = ct - cb");
}

Outcome four_alt_equivalence() {
    std::mt19937_64 rng(2027);
    Checker c;
    int instances = 0;
    int minima = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + trial % 3;
        const int m = 1 + (trial / 3) % 4;
        const ProblemInstance inst = oracle::random_instance(rng, n, m, 3);
        PenaltyConfig pc;
        pc.B = default_penalty_B(inst);
        const BuiltQubo b = build_four_alt_qubo(inst, pc);
        const SampleSet s = exhaustive_qubo(b.model);
        const double ilp = exact_ilp_oracle(inst).evaluation.total_cost;
        c.expect(ilp == oracle::brute_force_optimum(inst).cost, "assignment oracle disagrees with brute force");
        c.expect(std::abs(s.first().energy - oracle::brute_min_energy(b.model)) <= 1e-9, "QUBO minimum differs");
        for (const Sample& smp : s.samples) {
            const DecodedSample d = decode_sample(b.layout, smp.bits);
            const EvaluationResult r = evaluate_assignment(inst, d.assignment);
            c.expect(d.aux_consistent(), "broken auxiliary at a minimum");
            c.expect(r.feasible && r.total_cost == ilp, "minimum decodes to cost " + num(r.total_cost) + " vs " + num(ilp));
            ++minima;
        }
        ++instances;
    }
    return c.done(std::to_string(instances) + " instances, " + std::to_string(minima) + " minima checked");
}

Outcome embedding_round_trip() {
    const ChimeraGraph g(16, 16, 4);
    const BuiltQubo b = build_two_alt_qubo(oracle::case_study(), with_B(12));
    const Embedding e = clique_embedding(46, g);
    const EmbeddingReport report = validate_embedding(b.model, e, g);
    Checker c;
    c.expect(report.ok, report.violations.empty() ? "invalid" : report.violations.front());
    const QuboModel phys = embed_qubo(b.model, e, g, chain_strength_heuristics(b.model).rule_of_thumb);
    std::mt19937_64 rng(46);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        Bits x(46);
        for (auto& v : x) v = static_cast<std::uint8_t>(rng() & 1U);
        const Bits p = extend_to_physical(x, e);
        const double diff = std::abs(phys.energy(p) - b.model.energy(x));
        worst = std::max(worst, diff);
        c.expect(diff <= 1e-9, "energy mismatch " + num(diff));
        const Unembedded u = unembed(p, e);
        c.expect(u.logical == x, "unembed(extend(x)) != x");
        c.expect(u.stats.break_fraction == 0.0, "chain breaks on a uniform state");
    }
    return c.done("max_chain_length=" + std::to_string(e.max_chain_length()) + " max |dE| = " + num(worst));
}

Outcome sweep_phenomenology() {
    const ProblemInstance inst = oracle::case_study();
    SweepConfig cfg;
    cfg.embedded = true;
    cfg.sampler.reads = 1000;
    const std::vector<double> Bs{3, 6, 12};
    const std::vector<double> lambdas{1, 10, 240};
    const SweepReport r = run_sweep(inst, Bs, lambdas, cfg);
    const std::string csv = sweep_csv(r);
    Checker c;

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    c.expect(line == "chain_strength,B,min_cost,best_cost,avg_cost,feasible_pct,chain_break_pct", "header " + line);
    std::size_t row = 0;
    while (std::getline(lines, line)) {
        const std::string prefix = num(lambdas[row / 3]) + "," + num(Bs[row % 3]) + ",";
        c.expect(line.rfind(prefix, 0) == 0, "row " + std::to_string(row) + " is " + line);
        c.expect(std::count(line.begin(), line.end(), ',') == 6, "row width");
        ++row;
    }
    c.expect(row == 9, "rows " + std::to_string(row));

    std::ostringstream trend;
    double previous = -1.0;
    for (double B : Bs) {
        const double f = r.at(1.0, B).stats.feasible_fraction;
        trend << (previous < 0 ? "" : " -> ") << num(100.0 * f) << "%";
        c.expect(f >= previous, "feasible fraction drops at B=" + num(B));
        previous = f;
    }
    for (const SweepCell& cell : r.cells) c.expect(cell.stats.reads == 1000, "reads per cell");
    std::cout << csv;
    return c.done("lambda=1 feasible " + trend.str());
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
            {1, "case-study optimum", 1.0, case_study_optimum},
            {2, "variable count", 1.0, variable_count},
            {3, "slack-completion ground truth", 1.0, slack_completion_agreement},
            {4, "chain-strength heuristics", 1.0, chain_strength_values},
            {5, "feasible-energy identity", 1.0, feasible_energy_identity},
            {6, "annealing recovery", 30.0, sa_recovery},
            {7, "penalty threshold", 1.0, penalty_threshold},
            {8, "four-alternative equivalence", 10.0, four_alt_equivalence},
            {9, "embedding round trip", 5.0, embedding_round_trip},
            {10, "embedded sweep trend", 300.0, sweep_phenomenology},
    };
    std::set<int> selected;
    for (int k = 1; k < argc; ++k) selected.insert(std::stoi(argv[k]));

    int failed = 0;
    for (const Criterion& cr : criteria) {
        if (!selected.empty() && !selected.count(cr.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > cr.time_limit) {
            o.ok = false;
            o.detail += " (took " + num(secs) + " s, limit " + num(cr.time_limit) + " s)";
        }
        if (!o.ok) ++failed;
        std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << cr.id << " " << cr.name << ": " << o.detail << " ["
                  << std::fixed << std::setprecision(3) << secs << " s]" << std::defaultfloat << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
