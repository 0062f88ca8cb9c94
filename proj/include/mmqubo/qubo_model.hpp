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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mmqubo/polynomial.hpp"

namespace mmqubo {

/// Upper-triangular QUBO: energy(x) = offset + sum_{i<=j} Q[i,j] x_i x_j.
/// Linear terms live on the diagonal. Exact zeros are never stored.
class QuboModel {
 public:
    using Index = std::pair<int, int>;
    using Coefficients = std::map<Index, double>;

    /// Throws ModelError when `labels` is empty.
    explicit QuboModel(std::vector<std::string> labels, double offset = 0.0);

    int num_vars() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Coefficients& coefficients() const { return coefficients_; }
    double offset() const { return offset_; }

    /// Adds to Q[min(i,j), max(i,j)]; an exact-zero result is pruned.
    void add(int i, int j, double value);
    void add_offset(double value) { offset_ += value; }
    double get(int i, int j) const;

    /// Throws std::invalid_argument on length mismatch.
    double energy(std::span<const std::uint8_t> bits) const;

    /// FNV-1a over (num_vars, offset, coefficients).
    std::uint64_t fingerprint() const;

    double max_coefficient() const;
    double max_abs_coefficient() const;
    double sum_abs_coefficients() const;

    friend bool operator==(const QuboModel&, const QuboModel&) = default;

 private:
    std::vector<std::string> labels_;
    Coefficients coefficients_;
    double offset_ = 0.0;
};

inline double qubo_energy(const QuboModel& m, std::span<const std::uint8_t> bits) { return m.energy(bits); }

/// Constant -> offset, linear -> diagonal, quadratic -> off-diagonal.
/// Throws ModelError for degree > 2 or variables outside the label range.
QuboModel compile_to_qubo(const Polynomial& p, std::vector<std::string> labels);

/// Sparse adjacency used by local-search samplers: per variable its diagonal
/// coefficient and (neighbor, coupling) list.
struct NeighborTable {
    std::vector<double> linear;
    std::vector<std::vector<std::pair<int, double>>> neighbors;
};

NeighborTable neighbor_table(const QuboModel& m);

/// One character per bit, e.g. "00101".
std::string bits_to_string(std::span<const std::uint8_t> bits);

nlohmann::json to_json(const QuboModel& m);
QuboModel qubo_from_json(const nlohmann::json& doc);
/// One `i j coeff` line per stored coefficient, preceded by `# offset <d>` and
/// `# num_vars <n>` comment lines.
std::string to_triples(const QuboModel& m);

}  // namespace mmqubo
