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

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mmqubo/qubo_model.hpp"
#include "mmqubo/samplers.hpp"

namespace mmqubo {

/// Chimera topology: rows x cols unit cells, each a complete bipartite K_{L,L}.
/// Qubits are numbered cell-major: ((row * cols + col) * 2 + shore) * L + k.
/// Shore 0 qubits couple vertically to the same qubit in the cells above and
/// below, shore 1 qubits horizontally to the cells left and right.
class ChimeraGraph {
 public:
    ChimeraGraph(int rows = 16, int cols = 16, int shore = 4);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int shore() const { return shore_; }
    int num_qubits() const { return 2 * shore_ * rows_ * cols_; }

    int qubit(int row, int col, int side, int k) const;

    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    /// Sorted neighbor list.
    const std::vector<int>& neighbors(int q) const { return adjacency_[static_cast<std::size_t>(q)]; }
    bool has_edge(int a, int b) const;

 private:
    int rows_;
    int cols_;
    int shore_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

inline ChimeraGraph build_chimera(int rows, int cols, int shore) { return ChimeraGraph(rows, cols, shore); }

struct Embedding {
    /// Per logical variable, sorted physical qubit ids.
    std::vector<std::vector<int>> chains;
    int rows = 16;
    int cols = 16;
    int shore = 4;

    int num_qubits() const { return 2 * shore * rows * cols; }
    std::size_t max_chain_length() const;
};

/// Largest clique the construction below can place: shore * min(rows, cols) + 1.
int clique_capacity(const ChimeraGraph& g);

/// Deterministic embedding of K_k. Up to shore + 1 chains fit in one cell
/// with chains of at most two qubits. Larger cliques use the triangle layout
/// over ceil(k / shore) cells, where chain (t, k) runs down column t to the
/// diagonal and then along row t, giving chains of ceil(k / shore) + 1 qubits.
/// At full capacity one extra chain snakes through the unused lower triangle.
/// Throws EmbeddingError when k exceeds the capacity.
Embedding clique_embedding(int k, const ChimeraGraph& g);

struct EmbeddingReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Checks chain count, qubit range, disjointness, chain connectivity and that
/// every nonzero off-diagonal Q entry has a coupler between its two chains.
EmbeddingReport validate_embedding(const QuboModel& m, const Embedding& e, const ChimeraGraph& g);

/// Physical model over all qubits of `g`. Linear terms are split equally over
/// the chain; each quadratic term sits on the first coupler between the two
/// chains (qubits in ascending order); every edge of a BFS spanning tree of a
/// chain gets chain_strength * (x_a + x_b - 2 x_a x_b).
/// Throws EmbeddingError if validation fails, std::invalid_argument for
/// non-positive chain strength.
QuboModel embed_qubo(const QuboModel& m, const Embedding& e, const ChimeraGraph& g, double chain_strength);

/// Chain-uniform physical state; unused qubits are 0.
Bits extend_to_physical(std::span<const std::uint8_t> logical, const Embedding& e);

struct ChainStats {
    double break_fraction = 0.0;
    std::vector<bool> broken;
    /// Majority-vote value per chain (ties resolve to 0).
    Bits decisions;
};

struct Unembedded {
    Bits logical;
    ChainStats stats;
};

/// Throws std::invalid_argument when the length differs from the qubit count.
Unembedded unembed(std::span<const std::uint8_t> physical, const Embedding& e);

struct ChainStrengthHeuristics {
    double rule_of_thumb = 0.0;  ///< max_ij Q_ij
    double upper_bound = 0.0;    ///< sum_ij |Q_ij|
};

/// Both quantities range over stored coefficients and exclude the offset.
ChainStrengthHeuristics chain_strength_heuristics(const QuboModel& m);

/// Anneals the embedded physical model, majority-votes every read back to
/// logical bits, and re-scores them on the logical model. The result carries
/// per-read chain break fractions.
SampleSet embedded_simulated_annealing(const QuboModel& logical, const Embedding& e, const ChimeraGraph& g,
                                       double chain_strength, const SAParams& params);

nlohmann::json to_json(const Embedding& e);
Embedding embedding_from_json(const nlohmann::json& doc);

}  // namespace mmqubo
