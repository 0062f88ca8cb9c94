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

#include "mmqubo/samplers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

#include "mmqubo/error.hpp"

namespace mmqubo {

SampleSet make_sample_set(const QuboModel& model, const std::vector<Bits>& reads, nlohmann::json params) {
    std::map<Bits, int> counts;
    for (const Bits& b : reads) ++counts[b];

    SampleSet set;
    set.params = std::move(params);
    set.fingerprint = model.fingerprint();
    for (const auto& [bits, count] : counts) set.samples.push_back({bits, model.energy(bits), count});
    std::sort(set.samples.begin(), set.samples.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.bits < b.bits;
    });
    std::map<Bits, std::size_t> where;
    for (std::size_t k = 0; k < set.samples.size(); ++k) where.emplace(set.samples[k].bits, k);
    set.read_sample.reserve(reads.size());
    for (const Bits& b : reads) set.read_sample.push_back(where.at(b));
    return set;
}

BetaRange default_beta_range(const QuboModel& model) {
    const NeighborTable table = neighbor_table(model);
    double max_delta = 0.0;
    for (std::size_t i = 0; i < table.linear.size(); ++i) {
        double bound = std::abs(table.linear[i]);
        for (const auto& [j, q] : table.neighbors[i]) bound += std::abs(q);
        max_delta = std::max(max_delta, bound);
    }
    double min_delta = std::numeric_limits<double>::infinity();
    for (const auto& [ij, q] : model.coefficients()) min_delta = std::min(min_delta, std::abs(q));
    if (max_delta == 0.0) return {0.1, 1.0};
    return {std::log(2.0) / max_delta, std::log(100.0) / min_delta};
}

void SAParams::validate() const {
    if (reads < 1) throw std::invalid_argument("reads must be >= 1");
    if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
    if (beta) {
        if (!(beta->min > 0.0) || !(beta->max > 0.0)) throw std::invalid_argument("beta values must be positive");
        if (!(beta->min < beta->max)) throw std::invalid_argument("beta_min must be < beta_max");
    }
}

std::vector<double> geometric_schedule(BetaRange range, int sweeps) {
    std::vector<double> betas(static_cast<std::size_t>(sweeps));
    if (sweeps == 1) {
        betas[0] = range.max;
        return betas;
    }
    const double ratio = std::log(range.max / range.min);
    for (int s = 0; s < sweeps; ++s) {
        betas[static_cast<std::size_t>(s)] = range.min * std::exp(ratio * s / (sweeps - 1));
    }
    return betas;
}

std::uint64_t read_seed(std::uint64_t master, std::uint64_t read) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (read + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

// Compressed adjacency over the variables that carry any coefficient.
struct SweepGraph {
    std::vector<int> active;
    std::vector<double> linear;
    std::vector<std::size_t> row_start;
    std::vector<int> col;
    std::vector<double> weight;
};

SweepGraph sweep_graph(const QuboModel& model) {
    const NeighborTable table = neighbor_table(model);
    SweepGraph g;
    g.linear = table.linear;
    g.row_start.push_back(0);
    for (std::size_t i = 0; i < table.linear.size(); ++i) {
        auto nbrs = table.neighbors[i];
        std::sort(nbrs.begin(), nbrs.end());
        for (const auto& [j, q] : nbrs) {
            g.col.push_back(j);
            g.weight.push_back(q);
        }
        g.row_start.push_back(g.col.size());
        if (table.linear[i] != 0.0 || !nbrs.empty()) g.active.push_back(static_cast<int>(i));
    }
    return g;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Bits anneal_one(const SweepGraph& g, std::size_t n, const std::vector<double>& betas, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Bits x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>(rng() >> 63);

    // field[i] = dE of flipping x_i from 0 to 1 given the rest.
    std::vector<double> field(g.linear);
    for (std::size_t i = 0; i < n; ++i) {
        if (!x[i]) continue;
        for (std::size_t e = g.row_start[i]; e < g.row_start[i + 1]; ++e) {
            field[static_cast<std::size_t>(g.col[e])] += g.weight[e];
        }
    }

    auto flip = [&](std::size_t i) {
        x[i] ^= 1;
        const double sign = x[i] ? 1.0 : -1.0;
        for (std::size_t e = g.row_start[i]; e < g.row_start[i + 1]; ++e) {
            field[static_cast<std::size_t>(g.col[e])] += sign * g.weight[e];
        }
    };

    for (double beta : betas) {
        // exp(-beta * dE) underflows the uniform's resolution past this point.
        const double cutoff = 40.0 / beta;
        for (int v : g.active) {
            const auto i = static_cast<std::size_t>(v);
            const double delta = x[i] ? -field[i] : field[i];
            if (delta <= 0.0 || (delta < cutoff && uniform01(rng) < std::exp(-beta * delta))) flip(i);
        }
    }
    // The cold end of the schedule still accepts the smallest uphill moves
    // about 1% of the time; one zero-temperature pass removes those.
    for (int v : g.active) {
        const auto i = static_cast<std::size_t>(v);
        if ((x[i] ? -field[i] : field[i]) < 0.0) flip(i);
    }
    return x;
}

}  // namespace

SampleSet simulated_annealing(const QuboModel& model, const SAParams& params) {
    params.validate();
    const BetaRange range = params.beta ? *params.beta : default_beta_range(model);
    const std::vector<double> betas = geometric_schedule(range, params.sweeps);
    const SweepGraph graph = sweep_graph(model);
    const auto n = static_cast<std::size_t>(model.num_vars());
    const auto reads = static_cast<std::size_t>(params.reads);

    std::vector<Bits> results(reads);
    unsigned workers = params.threads > 0 ? static_cast<unsigned>(params.threads)
                                          : std::max(1U, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(reads));
    auto work = [&](unsigned w) {
        for (std::size_t r = w; r < reads; r += workers) {
            results[r] = anneal_one(graph, n, betas, read_seed(params.seed, r));
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    return make_sample_set(model, results, to_json(params, range));
}

nlohmann::json to_json(const SAParams& params, BetaRange resolved) {
    return {{"sampler", "simulated_annealing"},
            {"reads", params.reads},
            {"sweeps", params.sweeps},
            {"schedule", "geometric"},
            {"beta_min", resolved.min},
            {"beta_max", resolved.max},
            {"beta_auto", !params.beta.has_value()},
            {"seed", params.seed}};
}

OracleSolution exact_ilp_oracle(const ProblemInstance& instance) {
    const std::size_t n = instance.num_containers();
    const int alternatives = instance.num_alternatives();
    double states = std::pow(static_cast<double>(alternatives), static_cast<double>(n));
    if (states > static_cast<double>(1ULL << 26)) {
        throw SizeLimitError("enumeration of " + std::to_string(alternatives) + "^" + std::to_string(n) +
                             " assignments exceeds the 2^26 guard");
    }

    // Odometer over choice indices 0 (truck) .. alternatives-1; the first container is the
    // most significant digit, so strict improvement keeps the lexicographically smallest.
    std::vector<int> digit(n, 0);
    const int m = static_cast<int>(instance.num_tracks());
    std::vector<int> load(static_cast<std::size_t>(m));
    std::optional<OracleSolution> best;
    while (true) {
        std::fill(load.begin(), load.end(), 0);
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Container& c = instance.containers()[i];
            if (digit[i] == 0) {
                cost += c.truck_cost;
                continue;
            }
            const Route& r = c.barge_routes[static_cast<std::size_t>(digit[i] - 1)];
            cost += r.cost;
            for (int t : r.tracks) ++load[static_cast<std::size_t>(t)];
        }
        bool feasible = true;
        for (int j = 0; j < m && feasible; ++j) {
            feasible = load[static_cast<std::size_t>(j)] <= instance.tracks()[static_cast<std::size_t>(j)].capacity;
        }
        if (feasible && (!best || cost < best->evaluation.total_cost)) {
            Assignment a;
            for (int d : digit) a.push_back(d == 0 ? Mode::truck() : Mode::barge(d));
            best = OracleSolution{a, evaluate_assignment(instance, a)};
        }
        bool done = true;
        for (std::size_t pos = n; pos-- > 0;) {
            if (++digit[pos] < alternatives) {
                done = false;
                break;
            }
            digit[pos] = 0;
        }
        if (done) break;
    }
    if (!best) throw ModelError("instance has no feasible assignment");
    return *best;
}

SampleSet exhaustive_qubo(const QuboModel& model) {
    const int n = model.num_vars();
    if (n > 24) throw SizeLimitError("exhaustive QUBO scan limited to 24 variables, model has " + std::to_string(n));
    const NeighborTable table = neighbor_table(model);

    // Gray-code walk with incremental energies; candidates are re-scored exactly.
    const auto un = static_cast<std::size_t>(n);
    Bits x(un, 0);
    std::vector<double> field(table.linear);
    double energy = model.offset();
    double tol_scale = std::max(1.0, model.sum_abs_coefficients() + std::abs(model.offset()));
    const double tol = 1e-9 * tol_scale;

    double best = energy;
    std::vector<Bits> minima{x};
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t step = 1; step < total; ++step) {
        const auto i = static_cast<std::size_t>(std::countr_zero(step));
        energy += x[i] ? -field[i] : field[i];
        x[i] ^= 1;
        const double sign = x[i] ? 1.0 : -1.0;
        for (const auto& [j, q] : table.neighbors[i]) field[static_cast<std::size_t>(j)] += sign * q;
        if (energy < best - tol) {
            best = energy;
            minima.assign(1, x);
        } else if (energy <= best + tol) {
            minima.push_back(x);
        }
    }

    // Drop near-ties that are not exact minima after re-scoring.
    double exact_best = std::numeric_limits<double>::infinity();
    for (const Bits& b : minima) exact_best = std::min(exact_best, model.energy(b));
    std::vector<Bits> exact;
    for (const Bits& b : minima) {
        if (model.energy(b) <= exact_best + tol) exact.push_back(b);
    }
    return make_sample_set(model, exact, {{"sampler", "exhaustive"}, {"num_vars", n}});
}

Sample qubo_oracle_with_slack_completion(const QuboModel& model, const VariableLayout& layout,
                                         const ProblemInstance& instance) {
    if (layout.variant != Variant::TwoAlt || instance.variant() != Variant::TwoAlt) {
        throw ModelError("slack-completion oracle requires a TwoAlt layout");
    }
    if (layout.total != model.num_vars() || layout.mode_bits.size() != instance.num_containers()) {
        throw ModelError("layout does not match the model/instance");
    }
    const std::size_t n = instance.num_containers();
    if (n > 26) throw SizeLimitError("slack-completion oracle limited to 26 containers");

    std::optional<Sample> best;
    Assignment a(n);
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1 ? Mode::truck() : Mode::barge(1);
        Bits bits = encode_assignment(instance, layout, a);
        const double e = model.energy(bits);
        if (!best || e < best->energy || (e == best->energy && bits < best->bits)) {
            best = Sample{std::move(bits), e, 1};
        }
    }
    return *best;
}

}  // namespace mmqubo
