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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmqubo/instance.hpp"
#include "mmqubo/polynomial.hpp"
#include "mmqubo/qubo_model.hpp"

namespace mmqubo {

/// Maps QUBO bit positions to decision semantics.
///
/// Ordering: container mode bits first (the two bits of a four-alternative
/// container are adjacent), then the product auxiliaries, then slack bits
/// track-major with ascending weight 2^k.
struct VariableLayout {
    Variant variant = Variant::TwoAlt;
    /// Per container: {x_i} (TwoAlt) or {x_{2i-1}, x_{2i}} (FourAlt).
    std::vector<std::vector<int>> mode_bits;
    /// FourAlt only: per container the index of z_i = x_{2i-1} * x_{2i}.
    std::vector<int> aux_bits;
    /// Per track, slack bit indices; bit k carries weight 2^k.
    std::vector<std::vector<int>> slack_bits;
    /// Per track, whether its capacity constraint is part of the model.
    std::vector<bool> constrained;
    int total = 0;

    std::vector<std::string> labels() const;
};

struct PenaltyConfig {
    double A = 1.0;
    double B = 12.0;
    /// Rosenberg weight for FourAlt auxiliaries; automatic per auxiliary when empty.
    std::optional<double> quad_weight;
    /// Drop the constraint of every track whose potential load cannot exceed
    /// its capacity. Off by default so every track keeps its slack bits.
    bool omit_slack_free_tracks = false;

    /// Throws std::invalid_argument unless A > 0, B > 0 and quad_weight > 0.
    void validate() const;
};

/// ceil(log2(capacity + 1)): the fewest bits whose binary weights cover 0..capacity.
int slack_bit_count(int capacity);

/// The unweighted pieces of a formulation, before quadratization.
struct Formulation {
    Polynomial cost;     ///< H_A
    Polynomial penalty;  ///< H_B, degree 4 for FourAlt
    VariableLayout layout;
};

Formulation two_alt_formulation(const ProblemInstance& instance, const PenaltyConfig& cfg = {});
Formulation four_alt_formulation(const ProblemInstance& instance, const PenaltyConfig& cfg = {});

struct BuiltQubo {
    QuboModel model;
    VariableLayout layout;
    /// Rosenberg auxiliaries with their weights (FourAlt only).
    std::vector<AuxProduct> aux;
};

/// A*H_A + B*H_B over n mode bits plus slack bits. Throws ModelError for a FourAlt instance.
BuiltQubo build_two_alt_qubo(const ProblemInstance& instance, const PenaltyConfig& cfg);

/// A*H_A + B*H_B with every x_{2i-1}x_{2i} replaced by z_i and Rosenberg
/// penalties attached. Throws ModelError for a TwoAlt instance.
BuiltQubo build_four_alt_qubo(const ProblemInstance& instance, const PenaltyConfig& cfg);

/// Dispatches on the instance variant.
BuiltQubo build_qubo(const ProblemInstance& instance, const PenaltyConfig& cfg);

/// min c^T x + penalty * (Ax - b)^T (Ax - b), expanded directly.
/// `constraints` is row-major, one row per constraint, each of cost.size().
QuboModel ilp_to_qubo(std::span<const double> cost, const std::vector<std::vector<int>>& constraints,
                      std::span<const int> rhs, double penalty);

/// Rule-of-thumb capacity penalty. TwoAlt: 1 + max_i c_i^b. FourAlt:
/// 1 + the largest cost of any alternative (which also exceeds every cost spread).
double default_penalty_B(const ProblemInstance& instance);

struct DecodedSample {
    Assignment assignment;
    /// Per track, sum of 2^k * y_jk (0 for tracks without slack bits).
    std::vector<int> slack;
    /// FourAlt: per container, true when z_i != x_{2i-1} * x_{2i}.
    std::vector<bool> aux_broken;

    bool aux_consistent() const;
};

DecodedSample decode_sample(const VariableLayout& layout, std::span<const std::uint8_t> bits);

/// Bits for an assignment with every slack register set to
/// clamp(V_j - load_j, 0, 2^K_j - 1) and auxiliaries consistent.
Bits encode_assignment(const ProblemInstance& instance, const VariableLayout& layout, const Assignment& a);

nlohmann::json to_json(const VariableLayout& layout);
/// Variable count, layout blocks, max |Q|, sum |Q|, offset and the penalty echo.
nlohmann::json build_report(const BuiltQubo& built, const PenaltyConfig& cfg);

}  // namespace mmqubo
