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

#include "mmqubo/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mmqubo/chimera.hpp"
#include "mmqubo/error.hpp"

namespace mmqubo {

namespace {

struct DecodedCost {
    double cost = 0.0;
    bool feasible = false;
};

std::vector<DecodedCost> decode_all(const SampleSet& s, const VariableLayout& layout,
                                    const ProblemInstance& instance) {
    std::vector<DecodedCost> out;
    out.reserve(s.samples.size());
    for (const Sample& sample : s.samples) {
        const DecodedSample d = decode_sample(layout, sample.bits);
        const EvaluationResult eval = evaluate_assignment(instance, d.assignment);
        out.push_back({eval.total_cost, eval.feasible});
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(12) << v;
    return out.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

RunStats sample_statistics(const SampleSet& s, const VariableLayout& layout, const ProblemInstance& instance) {
    const std::vector<DecodedCost> decoded = decode_all(s, layout, instance);
    RunStats stats;
    double sum = 0.0;
    for (std::size_t k = 0; k < s.samples.size(); ++k) {
        const auto count = static_cast<std::size_t>(s.samples[k].multiplicity);
        stats.reads += count;
        if (!decoded[k].feasible) continue;
        stats.feasible_reads += count;
        sum += decoded[k].cost * static_cast<double>(count);
        // Samples are sorted by energy, so the first feasible one has the lowest energy.
        if (!stats.min_energy_feasible_cost) stats.min_energy_feasible_cost = decoded[k].cost;
        if (!stats.best_feasible_cost || decoded[k].cost < *stats.best_feasible_cost) {
            stats.best_feasible_cost = decoded[k].cost;
        }
    }
    if (stats.feasible_reads > 0) stats.avg_feasible_cost = sum / static_cast<double>(stats.feasible_reads);
    stats.feasible_fraction =
            stats.reads == 0 ? 0.0 : static_cast<double>(stats.feasible_reads) / static_cast<double>(stats.reads);
    if (!s.chain_break_fraction.empty()) {
        double total = 0.0;
        for (double b : s.chain_break_fraction) total += b;
        stats.chain_break_fraction = total / static_cast<double>(s.chain_break_fraction.size());
    }
    return stats;
}

const SweepCell& SweepReport::at(double chain_strength, double B) const {
    for (const SweepCell& c : cells) {
        if (c.chain_strength == chain_strength && c.B == B) return c;
    }
    throw std::out_of_range("no sweep cell for chain strength " + fmt(chain_strength) + ", B " + fmt(B));
}

std::uint64_t cell_seed(std::uint64_t master, double B, double chain_strength) {
    return read_seed(read_seed(master, std::bit_cast<std::uint64_t>(B)), std::bit_cast<std::uint64_t>(chain_strength));
}

std::uint64_t fingerprint(const ProblemInstance& instance) {
    const std::string text = to_json(instance).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

SweepReport run_sweep(const ProblemInstance& instance, const std::vector<double>& B_values,
                      const std::vector<double>& chain_strengths, const SweepConfig& cfg) {
    if (B_values.empty() || chain_strengths.empty()) throw std::invalid_argument("sweep grids must be non-empty");
    for (double b : B_values) {
        if (!(b > 0.0)) throw std::invalid_argument("B values must be positive");
    }
    for (double l : chain_strengths) {
        if (!(l > 0.0)) throw std::invalid_argument("chain strengths must be positive");
    }
    cfg.sampler.validate();

    SweepReport report;
    report.B_values = B_values;
    report.chain_strengths = chain_strengths;
    report.instance_fingerprint = fingerprint(instance);
    report.sampler = to_json(cfg.sampler, cfg.sampler.beta.value_or(BetaRange{}));
    if (!cfg.sampler.beta) {
        report.sampler["beta_min"] = "auto";
        report.sampler["beta_max"] = "auto";
    }
    report.sampler["embedded"] = cfg.embedded;
    report.sampler["A"] = cfg.A;
    if (cfg.embedded) {
        report.sampler["graph"] = {{"M", cfg.chimera_rows}, {"N", cfg.chimera_cols}, {"L", cfg.chimera_shore}};
    }

    std::vector<BuiltQubo> models;
    for (double B : B_values) {
        PenaltyConfig pc;
        pc.A = cfg.A;
        pc.B = B;
        pc.quad_weight = cfg.quad_weight;
        models.push_back(build_qubo(instance, pc));
    }

    std::optional<ChimeraGraph> graph;
    std::optional<Embedding> embedding;
    if (cfg.embedded) {
        graph.emplace(cfg.chimera_rows, cfg.chimera_cols, cfg.chimera_shore);
        embedding = clique_embedding(models.front().model.num_vars(), *graph);
    }

    for (double lambda : chain_strengths) {
        for (std::size_t b = 0; b < B_values.size(); ++b) {
            SweepCell cell;
            cell.B = B_values[b];
            cell.chain_strength = lambda;
            cell.seed = cell_seed(cfg.sampler.seed, cell.B, lambda);
            SAParams params = cfg.sampler;
            params.seed = cell.seed;
            const auto start = std::chrono::steady_clock::now();
            const SampleSet samples =
                    cfg.embedded ? embedded_simulated_annealing(models[b].model, *embedding, *graph, lambda, params)
                                 : simulated_annealing(models[b].model, params);
            cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            cell.stats = sample_statistics(samples, models[b].layout, instance);
            report.cells.push_back(cell);
        }
    }
    return report;
}

std::size_t Histogram::total() const {
    std::size_t n = 0;
    for (const HistogramBin& b : bins) n += b.feasible + b.infeasible;
    return n;
}

Histogram histogram(const SampleSet& s, const VariableLayout& layout, const ProblemInstance& instance,
                    double bin_width) {
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
    Histogram h;
    h.bin_width = bin_width;
    const std::vector<DecodedCost> decoded = decode_all(s, layout, instance);
    if (decoded.empty()) return h;

    std::map<long long, HistogramBin> bins;
    for (std::size_t k = 0; k < decoded.size(); ++k) {
        const auto idx = static_cast<long long>(std::floor(decoded[k].cost / bin_width));
        HistogramBin& bin = bins[idx];
        const auto count = static_cast<std::size_t>(s.samples[k].multiplicity);
        (decoded[k].feasible ? bin.feasible : bin.infeasible) += count;
    }
    const long long lo = bins.begin()->first;
    const long long hi = bins.rbegin()->first;
    for (long long idx = lo; idx <= hi; ++idx) {
        HistogramBin bin;
        if (auto it = bins.find(idx); it != bins.end()) bin = it->second;
        bin.low = static_cast<double>(idx) * bin_width;
        bin.high = static_cast<double>(idx + 1) * bin_width;
        h.bins.push_back(bin);
    }
    return h;
}

std::string sweep_csv(const SweepReport& report) {
    std::ostringstream out;
    out << "chain_strength,B,min_cost,best_cost,avg_cost,feasible_pct,chain_break_pct\n";
    for (const SweepCell& c : report.cells) {
        const RunStats& s = c.stats;
        out << fmt(c.chain_strength) << ',' << fmt(c.B) << ',' << fmt(s.min_energy_feasible_cost) << ','
            << fmt(s.best_feasible_cost) << ',' << fmt(s.avg_feasible_cost) << ',' << fmt(100.0 * s.feasible_fraction)
            << ',';
        if (s.chain_break_fraction) out << fmt(100.0 * *s.chain_break_fraction);
        out << '\n';
    }
    return out.str();
}

std::string histogram_csv(const Histogram& h) {
    std::ostringstream out;
    out << "bin_low,bin_high,feasible_count,infeasible_count\n";
    for (const HistogramBin& b : h.bins) {
        out << fmt(b.low) << ',' << fmt(b.high) << ',' << b.feasible << ',' << b.infeasible << '\n';
    }
    return out.str();
}

std::string samples_csv(const SampleSet& s, const VariableLayout& layout, const ProblemInstance& instance) {
    const std::vector<DecodedCost> decoded = decode_all(s, layout, instance);
    const bool embedded = !s.chain_break_fraction.empty();
    std::ostringstream out;
    out << "read,energy,feasible,cost,bits" << (embedded ? ",chain_break_fraction" : "") << '\n';
    for (std::size_t r = 0; r < s.num_reads(); ++r) {
        const std::size_t k = s.read_sample[r];
        out << r << ',' << fmt(s.samples[k].energy) << ',' << (decoded[k].feasible ? 1 : 0) << ','
            << fmt(decoded[k].cost) << ',' << bits_to_string(s.samples[k].bits);
        if (embedded) out << ',' << fmt(s.chain_break_fraction[r]);
        out << '\n';
    }
    return out.str();
}

nlohmann::json samples_json(const SampleSet& s, const VariableLayout& layout, const ProblemInstance& instance) {
    const std::vector<DecodedCost> decoded = decode_all(s, layout, instance);
    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t k = 0; k < s.samples.size(); ++k) {
        samples.push_back({{"bits", bits_to_string(s.samples[k].bits)},
                           {"energy", s.samples[k].energy},
                           {"multiplicity", s.samples[k].multiplicity},
                           {"feasible", decoded[k].feasible},
                           {"cost", decoded[k].cost}});
    }
    nlohmann::json doc = {{"params", s.params},
                          {"model_fingerprint", s.fingerprint},
                          {"num_reads", s.num_reads()},
                          {"samples", samples}};
    if (!s.chain_break_fraction.empty()) doc["chain_break_fraction"] = s.chain_break_fraction;
    return doc;
}

nlohmann::json to_json(const RunStats& stats) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return {{"min_energy_feasible_cost", opt(stats.min_energy_feasible_cost)},
            {"best_feasible_cost", opt(stats.best_feasible_cost)},
            {"avg_feasible_cost", opt(stats.avg_feasible_cost)},
            {"feasible_fraction", stats.feasible_fraction},
            {"chain_break_fraction", opt(stats.chain_break_fraction)},
            {"reads", stats.reads},
            {"feasible_reads", stats.feasible_reads}};
}

}  // namespace mmqubo
