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

#include "mmqubo/chimera.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>

#include "mmqubo/error.hpp"

namespace mmqubo {

ChimeraGraph::ChimeraGraph(int rows, int cols, int shore) : rows_(rows), cols_(cols), shore_(shore) {
    if (rows < 1 || cols < 1 || shore < 1) throw std::invalid_argument("Chimera dimensions must be >= 1");
    adjacency_.resize(static_cast<std::size_t>(num_qubits()));
    auto connect = [this](int a, int b) {
        edges_.emplace_back(std::min(a, b), std::max(a, b));
        adjacency_[static_cast<std::size_t>(a)].push_back(b);
        adjacency_[static_cast<std::size_t>(b)].push_back(a);
    };
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            for (int i = 0; i < shore_; ++i) {
                for (int j = 0; j < shore_; ++j) connect(qubit(r, c, 0, i), qubit(r, c, 1, j));
                if (r + 1 < rows_) connect(qubit(r, c, 0, i), qubit(r + 1, c, 0, i));
                if (c + 1 < cols_) connect(qubit(r, c, 1, i), qubit(r, c + 1, 1, i));
            }
        }
    }
    std::sort(edges_.begin(), edges_.end());
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

int ChimeraGraph::qubit(int row, int col, int side, int k) const {
    return ((row * cols_ + col) * 2 + side) * shore_ + k;
}

bool ChimeraGraph::has_edge(int a, int b) const {
    if (a < 0 || b < 0 || a >= num_qubits() || b >= num_qubits()) return false;
    const auto& nbrs = neighbors(a);
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::size_t Embedding::max_chain_length() const {
    std::size_t len = 0;
    for (const auto& c : chains) len = std::max(len, c.size());
    return len;
}

int clique_capacity(const ChimeraGraph& g) { return g.shore() * std::min(g.rows(), g.cols()) + 1; }

Embedding clique_embedding(int k, const ChimeraGraph& g) {
    if (k < 0) throw std::invalid_argument("clique size must be non-negative");
    const int capacity = clique_capacity(g);
    if (k > capacity) {
        throw EmbeddingError("K_" + std::to_string(k) + " exceeds the clique capacity " + std::to_string(capacity) +
                             " of a " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()) + "x" +
                             std::to_string(g.shore()) + " Chimera graph");
    }
    Embedding e;
    e.rows = g.rows();
    e.cols = g.cols();
    e.shore = g.shore();
    const int L = g.shore();

    if (k <= L + 1) {
        // One cell: {v0}, {h0}, then {v_c, h_c} pairs.
        for (int c = 0; c < k; ++c) {
            if (c == 0) {
                e.chains.push_back({g.qubit(0, 0, 0, 0)});
            } else if (c == 1) {
                e.chains.push_back({g.qubit(0, 0, 1, 0)});
            } else {
                e.chains.push_back({g.qubit(0, 0, 0, c - 1), g.qubit(0, 0, 1, c - 1)});
            }
        }
        return e;
    }

    const bool extra = k > L * std::min(g.rows(), g.cols());
    const int bands = extra ? std::min(g.rows(), g.cols()) : (k + L - 1) / L;
    const int triangle_chains = extra ? k - 1 : k;
    for (int c = 0; c < triangle_chains; ++c) {
        const int t = c / L;
        const int idx = c % L;
        std::vector<int> chain;
        for (int row = 0; row <= t; ++row) chain.push_back(g.qubit(row, t, 0, idx));
        for (int col = t; col < bands; ++col) chain.push_back(g.qubit(t, col, 1, idx));
        std::sort(chain.begin(), chain.end());
        e.chains.push_back(std::move(chain));
    }
    if (extra) {
        // Lower-triangle snake: the shore-0 qubits of cell (1,0) touch every band-0
        // chain, the shore-1 qubits of cell (t,t-1) touch every band-t chain.
        std::vector<int> chain;
        for (int i = 0; i < L; ++i) chain.push_back(g.qubit(1, 0, 0, i));
        for (int t = 1; t < bands; ++t) {
            for (int i = 0; i < L; ++i) chain.push_back(g.qubit(t, t - 1, 1, i));
            if (t >= 2) chain.push_back(g.qubit(t, t - 1, 0, 0));
            if (t + 1 < bands) {
                chain.push_back(g.qubit(t + 1, t - 1, 0, 0));
                chain.push_back(g.qubit(t + 1, t - 1, 1, 0));
            }
        }
        std::sort(chain.begin(), chain.end());
        e.chains.push_back(std::move(chain));
    }
    return e;
}

namespace {

bool chain_connected(const std::vector<int>& chain, const ChimeraGraph& g) {
    if (chain.empty()) return false;
    std::vector<bool> seen(chain.size(), false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const int q = chain[frontier.front()];
        frontier.pop();
        for (int nb : g.neighbors(q)) {
            auto it = std::lower_bound(chain.begin(), chain.end(), nb);
            if (it == chain.end() || *it != nb) continue;
            const auto pos = static_cast<std::size_t>(it - chain.begin());
            if (seen[pos]) continue;
            seen[pos] = true;
            ++reached;
            frontier.push(pos);
        }
    }
    return reached == chain.size();
}

// First coupler (a, b), a in `from`, b in `to`, in ascending qubit order.
std::optional<std::pair<int, int>> first_coupler(const std::vector<int>& from, const std::vector<int>& to,
                                                 const ChimeraGraph& g) {
    for (int a : from) {
        for (int b : g.neighbors(a)) {
            if (std::binary_search(to.begin(), to.end(), b)) return std::make_pair(a, b);
        }
    }
    return std::nullopt;
}

std::vector<std::pair<int, int>> spanning_tree(const std::vector<int>& chain, const ChimeraGraph& g) {
    std::vector<std::pair<int, int>> tree;
    if (chain.empty()) return tree;
    std::vector<bool> seen(chain.size(), false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    while (!frontier.empty()) {
        const int q = chain[frontier.front()];
        frontier.pop();
        for (int nb : g.neighbors(q)) {
            auto it = std::lower_bound(chain.begin(), chain.end(), nb);
            if (it == chain.end() || *it != nb) continue;
            const auto pos = static_cast<std::size_t>(it - chain.begin());
            if (seen[pos]) continue;
            seen[pos] = true;
            tree.emplace_back(q, nb);
            frontier.push(pos);
        }
    }
    return tree;
}

}  // namespace

EmbeddingReport validate_embedding(const QuboModel& m, const Embedding& e, const ChimeraGraph& g) {
    EmbeddingReport report;
    auto fail = [&report](std::string msg) {
        report.ok = false;
        report.violations.push_back(std::move(msg));
    };
    if (e.rows != g.rows() || e.cols != g.cols() || e.shore != g.shore()) {
        fail("embedding graph dimensions do not match the target graph");
    }
    if (static_cast<int>(e.chains.size()) != m.num_vars()) {
        fail("embedding has " + std::to_string(e.chains.size()) + " chains for " + std::to_string(m.num_vars()) +
             " variables");
    }
    std::vector<int> owner(static_cast<std::size_t>(g.num_qubits()), -1);
    bool in_range = true;
    for (std::size_t v = 0; v < e.chains.size(); ++v) {
        const auto& chain = e.chains[v];
        if (chain.empty()) fail("chain " + std::to_string(v) + " is empty");
        if (!std::is_sorted(chain.begin(), chain.end())) fail("chain " + std::to_string(v) + " is not sorted");
        for (int q : chain) {
            if (q < 0 || q >= g.num_qubits()) {
                fail("chain " + std::to_string(v) + " uses qubit " + std::to_string(q) + " outside the graph");
                in_range = false;
                continue;
            }
            int& o = owner[static_cast<std::size_t>(q)];
            if (o >= 0) {
                fail("qubit " + std::to_string(q) + " is shared by chains " + std::to_string(o) + " and " +
                     std::to_string(v));
            } else {
                o = static_cast<int>(v);
            }
        }
    }
    if (!in_range) return report;
    for (std::size_t v = 0; v < e.chains.size(); ++v) {
        if (!e.chains[v].empty() && !chain_connected(e.chains[v], g)) {
            fail("chain " + std::to_string(v) + " is not connected");
        }
    }
    for (const auto& [ij, q] : m.coefficients()) {
        const auto [i, j] = ij;
        if (i == j) continue;
        if (static_cast<std::size_t>(j) >= e.chains.size()) continue;
        if (!first_coupler(e.chains[static_cast<std::size_t>(i)], e.chains[static_cast<std::size_t>(j)], g)) {
            fail("no coupler between chains " + std::to_string(i) + " and " + std::to_string(j));
        }
    }
    return report;
}

// TODO: splitting logical couplings over parallel couplers would lower the
// per-coupler weight; only single-coupler placement is implemented.
QuboModel embed_qubo(const QuboModel& m, const Embedding& e, const ChimeraGraph& g, double chain_strength) {
    if (!(chain_strength > 0.0)) throw std::invalid_argument("chain strength must be positive");
    const EmbeddingReport report = validate_embedding(m, e, g);
    if (!report.ok) throw EmbeddingError("invalid embedding: " + report.violations.front());

    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(g.num_qubits()));
    for (int q = 0; q < g.num_qubits(); ++q) labels.push_back("q" + std::to_string(q));
    QuboModel physical(std::move(labels), m.offset());

    for (const auto& [ij, q] : m.coefficients()) {
        const auto [i, j] = ij;
        const auto& ci = e.chains[static_cast<std::size_t>(i)];
        if (i == j) {
            const double share = q / static_cast<double>(ci.size());
            for (int qb : ci) physical.add(qb, qb, share);
        } else {
            const auto coupler = first_coupler(ci, e.chains[static_cast<std::size_t>(j)], g);
            physical.add(coupler->first, coupler->second, q);
        }
    }
    for (const auto& chain : e.chains) {
        for (const auto& [a, b] : spanning_tree(chain, g)) {
            physical.add(a, a, chain_strength);
            physical.add(b, b, chain_strength);
            physical.add(a, b, -2.0 * chain_strength);
        }
    }
    return physical;
}

Bits extend_to_physical(std::span<const std::uint8_t> logical, const Embedding& e) {
    if (logical.size() != e.chains.size()) throw std::invalid_argument("logical state length != chain count");
    Bits physical(static_cast<std::size_t>(e.num_qubits()), 0);
    for (std::size_t v = 0; v < e.chains.size(); ++v) {
        for (int q : e.chains[v]) physical[static_cast<std::size_t>(q)] = logical[v] ? 1 : 0;
    }
    return physical;
}

Unembedded unembed(std::span<const std::uint8_t> physical, const Embedding& e) {
    if (static_cast<int>(physical.size()) != e.num_qubits()) {
        throw std::invalid_argument("physical state has " + std::to_string(physical.size()) + " bits, graph has " +
                                    std::to_string(e.num_qubits()) + " qubits");
    }
    Unembedded out;
    std::size_t broken = 0;
    for (const auto& chain : e.chains) {
        std::size_t ones = 0;
        for (int q : chain) ones += physical[static_cast<std::size_t>(q)] ? 1 : 0;
        const bool is_broken = ones != 0 && ones != chain.size();
        const std::uint8_t vote = 2 * ones > chain.size() ? 1 : 0;
        out.logical.push_back(vote);
        out.stats.decisions.push_back(vote);
        out.stats.broken.push_back(is_broken);
        broken += is_broken ? 1 : 0;
    }
    out.stats.break_fraction =
            e.chains.empty() ? 0.0 : static_cast<double>(broken) / static_cast<double>(e.chains.size());
    return out;
}

ChainStrengthHeuristics chain_strength_heuristics(const QuboModel& m) {
    return {m.max_coefficient(), m.sum_abs_coefficients()};
}

SampleSet embedded_simulated_annealing(const QuboModel& logical, const Embedding& e, const ChimeraGraph& g,
                                       double chain_strength, const SAParams& params) {
    const QuboModel physical = embed_qubo(logical, e, g, chain_strength);
    const SampleSet raw = simulated_annealing(physical, params);

    std::vector<Bits> reads;
    std::vector<double> breaks;
    reads.reserve(raw.num_reads());
    for (std::size_t r = 0; r < raw.num_reads(); ++r) {
        Unembedded u = unembed(raw.for_read(r).bits, e);
        reads.push_back(std::move(u.logical));
        breaks.push_back(u.stats.break_fraction);
    }
    nlohmann::json echo = raw.params;
    echo["embedded"] = true;
    echo["chain_strength"] = chain_strength;
    echo["graph"] = {{"M", g.rows()}, {"N", g.cols()}, {"L", g.shore()}};
    echo["physical_fingerprint"] = raw.fingerprint;
    echo["max_chain_length"] = e.max_chain_length();
    SampleSet out = make_sample_set(logical, reads, std::move(echo));
    out.chain_break_fraction = std::move(breaks);
    return out;
}

nlohmann::json to_json(const Embedding& e) {
    return {{"chains", e.chains}, {"graph", {{"M", e.rows}, {"N", e.cols}, {"L", e.shore}}}};
}

Embedding embedding_from_json(const nlohmann::json& doc) {
    try {
        Embedding e;
        e.chains = doc.at("chains").get<std::vector<std::vector<int>>>();
        for (auto& c : e.chains) std::sort(c.begin(), c.end());
        const auto& graph = doc.at("graph");
        e.rows = graph.at("M").get<int>();
        e.cols = graph.at("N").get<int>();
        e.shore = graph.at("L").get<int>();
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw EmbeddingError(std::string("malformed embedding document: ") + ex.what());
    }
}

}  // namespace mmqubo
