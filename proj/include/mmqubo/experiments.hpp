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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmqubo/formulations.hpp"
#include "mmqubo/instance.hpp"
#include "mmqubo/samplers.hpp"

namespace mmqubo {

struct RunStats {
    /// Cost of the lowest-energy sample that violates no capacity.
    std::optional<double> min_energy_feasible_cost;
    /// Lowest cost among all feasible samples, whatever their energy.
    std::optional<double> best_feasible_cost;
    /// Mean cost over feasible reads.
    std::optional<double> avg_feasible_cost;
    double feasible_fraction = 0.0;
    /// Mean per-read chain break fraction, embedded runs only.
    std::optional<double> chain_break_fraction;
    std::size_t reads = 0;
    std::size_t feasible_reads = 0;
};

/// Throws std::invalid_argument when the sample length does not match the layout.
RunStats sample_statistics(const SampleSet& s, const VariableLayout& layout, const ProblemInstance& instance);

struct SweepConfig {
    SAParams sampler;
    bool embedded = false;
    double A = 1.0;
    std::optional<double> quad_weight;
    int chimera_rows = 16;
    int chimera_cols = 16;
    int chimera_shore = 4;
};

struct SweepCell {
    double B = 0.0;
    double chain_strength = 0.0;
    std::uint64_t seed = 0;
    RunStats stats;
    double seconds = 0.0;
};

struct SweepReport {
    std::vector<double> B_values;
    std::vector<double> chain_strengths;
    /// Row-major: one row per chain strength, B varying fastest.
    std::vector<SweepCell> cells;
    nlohmann::json sampler = nlohmann::json::object();
    std::uint64_t instance_fingerprint = 0;

    const SweepCell& at(double chain_strength, double B) const;
};

/// Seed of grid cell (B, chain_strength), derived from the values themselves so a
/// cell's result does not depend on the rest of the grid.
std::uint64_t cell_seed(std::uint64_t master, double B, double chain_strength);

std::uint64_t fingerprint(const ProblemInstance& instance);

/// For each cell: build the QUBO with (cfg.A, B), optionally clique-embed it on
/// a Chimera graph with the cell's chain strength, anneal, and summarize.
/// Throws std::invalid_argument for empty or non-positive grids and
/// EmbeddingError when the model exceeds the clique capacity.
SweepReport run_sweep(const ProblemInstance& instance, const std::vector<double>& B_values,
                      const std::vector<double>& chain_strengths, const SweepConfig& cfg);

struct HistogramBin {
    double low = 0.0;
    double high = 0.0;
    std::size_t feasible = 0;
    std::size_t infeasible = 0;
};

struct Histogram {
    double bin_width = 5.0;
    /// Contiguous bins; boundaries are integer multiples of bin_width.
    std::vector<HistogramBin> bins;

    std::size_t total() const;
};

/// Decoded costs per read, bucketed separately by feasibility.
Histogram histogram(const SampleSet& s, const VariableLayout& layout, const ProblemInstance& instance,
                    double bin_width = 5.0);

/// `chain_strength,B,min_cost,best_cost,avg_cost,feasible_pct,chain_break_pct`; absent values are empty.
std::string sweep_csv(const SweepReport& report);
/// `bin_low,bin_high,feasible_count,infeasible_count`
std::string histogram_csv(const Histogram& h);
/// `read,energy,feasible,cost,bits`, plus `chain_break_fraction` for embedded runs.
std::string samples_csv(const SampleSet& s, const VariableLayout& layout, const ProblemInstance& instance);
nlohmann::json samples_json(const SampleSet& s, const VariableLayout& layout, const ProblemInstance& instance);
nlohmann::json to_json(const RunStats& stats);

}  // namespace mmqubo
