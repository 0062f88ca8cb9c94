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
#include <vector>

#include "json.hpp"
#include "mmqubo/formulations.hpp"
#include "mmqubo/instance.hpp"
#include "mmqubo/qubo_model.hpp"

namespace mmqubo {

inline constexpr std::uint64_t kDefaultSeed = 20210401;

struct Sample {
    Bits bits;
    double energy = 0.0;
    int multiplicity = 1;
};

/// Distinct samples sorted by (energy, bits), plus the read -> sample map.
struct SampleSet {
    std::vector<Sample> samples;
    /// read_sample[r] is the index in `samples` of the state read r ended in.
    std::vector<std::size_t> read_sample;
    /// Per read, fraction of broken chains; empty for unembedded runs.
    std::vector<double> chain_break_fraction;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t fingerprint = 0;

    std::size_t num_reads() const { return read_sample.size(); }
    const Sample& first() const { return samples.front(); }
    const Sample& for_read(std::size_t r) const { return samples[read_sample[r]]; }
};

/// Aggregates one bit vector per read. Energies are recomputed from `model`.
SampleSet make_sample_set(const QuboModel& model, const std::vector<Bits>& reads,
                          nlohmann::json params = nlohmann::json::object());

struct BetaRange {
    double min = 0.0;
    double max = 0.0;
};

/// beta_min = ln 2 / dE_max, beta_max = ln 100 / dE_min where dE_max bounds the
/// largest single-flip energy change (|Q_ii| + sum_j |Q_ij|, maximized over i)
/// and dE_min is the smallest nonzero |coefficient|.
BetaRange default_beta_range(const QuboModel& model);

struct SAParams {
    int reads = 500;
    int sweeps = 1000;
    /// Auto-derived from the model when empty.
    std::optional<BetaRange> beta;
    std::uint64_t seed = kDefaultSeed;
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    int threads = 0;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Geometric inverse-temperature schedule with `sweeps` points from min to max.
std::vector<double> geometric_schedule(BetaRange range, int sweeps);

/// Seed of read `read` derived from the master seed (SplitMix64 finalizer).
std::uint64_t read_seed(std::uint64_t master, std::uint64_t read);

/// Single-bit Metropolis annealing with fixed ascending sweep order, followed
/// by one zero-temperature pass that only accepts downhill flips. Each read
/// draws a random start state from its own generator, so results are
/// identical for any thread count.
SampleSet simulated_annealing(const QuboModel& model, const SAParams& params);

struct OracleSolution {
    Assignment assignment;
    EvaluationResult evaluation;
};

/// Exhaustive enumeration of all alternatives^n assignments (guard 2^26).
/// Ties go to the lexicographically smallest choice vector (truck < route 1 < 2 < 3).
OracleSolution exact_ilp_oracle(const ProblemInstance& instance);

/// Every minimum-energy state of a model with at most 24 variables.
SampleSet exhaustive_qubo(const QuboModel& model);

/// Enumerates the 2^n mode vectors of a TwoAlt model and completes each with
/// its energy-optimal slack fill clamp(V_j - load_j, 0, 2^K_j - 1).
Sample qubo_oracle_with_slack_completion(const QuboModel& model, const VariableLayout& layout,
                                         const ProblemInstance& instance);

nlohmann::json to_json(const SAParams& params, BetaRange resolved);

}  // namespace mmqubo
