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

#include "mmqubo/formulations.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "mmqubo/error.hpp"

namespace mmqubo {

std::vector<std::string> VariableLayout::labels() const {
    std::vector<std::string> out(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < mode_bits.size(); ++i) {
        if (mode_bits[i].size() == 1) {
            out[static_cast<std::size_t>(mode_bits[i][0])] = "x[" + std::to_string(i) + "]";
        } else {
            for (std::size_t b = 0; b < mode_bits[i].size(); ++b) {
                out[static_cast<std::size_t>(mode_bits[i][b])] =
                        "x[" + std::to_string(i) + "][" + std::to_string(b) + "]";
            }
        }
    }
    for (std::size_t i = 0; i < aux_bits.size(); ++i) {
        out[static_cast<std::size_t>(aux_bits[i])] = "z[" + std::to_string(i) + "]";
    }
    for (std::size_t j = 0; j < slack_bits.size(); ++j) {
        for (std::size_t k = 0; k < slack_bits[j].size(); ++k) {
            out[static_cast<std::size_t>(slack_bits[j][k])] =
                    "y[" + std::to_string(j) + "][" + std::to_string(k) + "]";
        }
    }
    return out;
}

void PenaltyConfig::validate() const {
    if (!(A > 0.0)) throw std::invalid_argument("penalty coefficient A must be positive");
    if (!(B > 0.0)) throw std::invalid_argument("penalty coefficient B must be positive");
    if (quad_weight && !(*quad_weight > 0.0)) throw std::invalid_argument("quadratization weight must be positive");
}

int slack_bit_count(int capacity) {
    if (capacity < 0) throw std::invalid_argument("capacity must be non-negative");
    int bits = 0;
    while ((1LL << bits) - 1 < capacity) ++bits;
    return bits;
}

namespace {

VariableLayout make_layout(const ProblemInstance& instance, const PenaltyConfig& cfg) {
    VariableLayout layout;
    layout.variant = instance.variant();
    const int n = static_cast<int>(instance.num_containers());
    const int per_container = instance.variant() == Variant::TwoAlt ? 1 : 2;
    int next = 0;
    for (int i = 0; i < n; ++i) {
        std::vector<int> bits;
        for (int b = 0; b < per_container; ++b) bits.push_back(next++);
        layout.mode_bits.push_back(std::move(bits));
    }
    if (instance.variant() == Variant::FourAlt) {
        for (int i = 0; i < n; ++i) layout.aux_bits.push_back(next++);
    }
    for (const Track& t : instance.tracks()) {
        const bool keep = !cfg.omit_slack_free_tracks || instance.potential_load(t.id) > t.capacity;
        layout.constrained.push_back(keep);
        std::vector<int> slack;
        if (keep && !t.equality) {
            const int k = slack_bit_count(t.capacity);
            for (int b = 0; b < k; ++b) slack.push_back(next++);
        }
        layout.slack_bits.push_back(std::move(slack));
    }
    layout.total = next;
    return layout;
}

// sum_k 2^k y_jk - V_j
Polynomial slack_minus_capacity(const VariableLayout& layout, const Track& t) {
    Polynomial p = Polynomial::constant(-static_cast<double>(t.capacity));
    const auto& slack = layout.slack_bits[static_cast<std::size_t>(t.id)];
    for (std::size_t k = 0; k < slack.size(); ++k) {
        p.add_term({slack[k]}, static_cast<double>(1LL << k));
    }
    return p;
}

void require_variant(const ProblemInstance& instance, Variant expected) {
    if (instance.variant() != expected) {
        throw ModelError("formulation expects a " + std::string(to_string(expected)) + " instance, got " +
                         std::string(to_string(instance.variant())));
    }
}

}  // namespace

Formulation two_alt_formulation(const ProblemInstance& instance, const PenaltyConfig& cfg) {
    require_variant(instance, Variant::TwoAlt);
    Formulation f;
    f.layout = make_layout(instance, cfg);

    for (std::size_t i = 0; i < instance.num_containers(); ++i) {
        const Container& c = instance.containers()[i];
        const double barge = c.barge_routes.front().cost;
        f.cost.add_term({}, barge);
        f.cost.add_term({f.layout.mode_bits[i][0]}, c.truck_cost - barge);
    }

    for (const Track& t : instance.tracks()) {
        if (!f.layout.constrained[static_cast<std::size_t>(t.id)]) continue;
        Polynomial load;
        for (std::size_t i = 0; i < instance.num_containers(); ++i) {
            if (!instance.containers()[i].barge_routes.front().uses(t.id)) continue;
            // (1 - x_i)
            load += Polynomial::constant(1.0) - Polynomial::variable(f.layout.mode_bits[i][0]);
        }
        const Polynomial residual = load + slack_minus_capacity(f.layout, t);
        f.penalty += residual * residual;
    }
    return f;
}

Formulation four_alt_formulation(const ProblemInstance& instance, const PenaltyConfig& cfg) {
    require_variant(instance, Variant::FourAlt);
    Formulation f;
    f.layout = make_layout(instance, cfg);

    // Indicator polynomial of each route for container i, with a = x_{2i-1}, b = x_{2i}:
    // route 1 <-> {0,1}: b - ab; route 2 <-> {1,0}: a - ab; route 3 <-> {0,0}: (1-a)(1-b).
    std::vector<std::array<Polynomial, 3>> indicators;
    for (std::size_t i = 0; i < instance.num_containers(); ++i) {
        const int a = f.layout.mode_bits[i][0];
        const int b = f.layout.mode_bits[i][1];
        const Polynomial xa = Polynomial::variable(a);
        const Polynomial xb = Polynomial::variable(b);
        const Polynomial ab = Polynomial::term({a, b}, 1.0);
        const Polynomial one = Polynomial::constant(1.0);
        indicators.push_back({xb - ab, xa - ab, (one - xa) * (one - xb)});

        const Container& c = instance.containers()[i];
        const double c1 = c.barge_routes[0].cost;
        const double c2 = c.barge_routes[1].cost;
        const double c3 = c.barge_routes[2].cost;
        f.cost.add_term({}, c3);
        f.cost.add_term({a}, c2 - c3);
        f.cost.add_term({b}, c1 - c3);
        f.cost.add_term({a, b}, c.truck_cost + c3 - c2 - c1);
    }

    for (const Track& t : instance.tracks()) {
        if (!f.layout.constrained[static_cast<std::size_t>(t.id)]) continue;
        Polynomial load;
        for (std::size_t i = 0; i < instance.num_containers(); ++i) {
            const auto& routes = instance.containers()[i].barge_routes;
            for (std::size_t k = 0; k < 3; ++k) {
                if (routes[k].uses(t.id)) load += indicators[i][k];
            }
        }
        const Polynomial residual = load + slack_minus_capacity(f.layout, t);
        f.penalty += residual * residual;
    }
    return f;
}

BuiltQubo build_two_alt_qubo(const ProblemInstance& instance, const PenaltyConfig& cfg) {
    cfg.validate();
    Formulation f = two_alt_formulation(instance, cfg);
    const Polynomial h = cfg.A * f.cost + cfg.B * f.penalty;
    return {compile_to_qubo(h, f.layout.labels()), std::move(f.layout), {}};
}

BuiltQubo build_four_alt_qubo(const ProblemInstance& instance, const PenaltyConfig& cfg) {
    cfg.validate();
    Formulation f = four_alt_formulation(instance, cfg);
    const Polynomial h = cfg.A * f.cost + cfg.B * f.penalty;
    std::vector<AuxProduct> pairs;
    for (std::size_t i = 0; i < instance.num_containers(); ++i) {
        pairs.push_back({f.layout.aux_bits[i], f.layout.mode_bits[i][0], f.layout.mode_bits[i][1], 0.0});
    }
    Quadratization q = quadratize_rosenberg(h, pairs, cfg.quad_weight);
    return {compile_to_qubo(q.polynomial, f.layout.labels()), std::move(f.layout), std::move(q.aux)};
}

BuiltQubo build_qubo(const ProblemInstance& instance, const PenaltyConfig& cfg) {
    return instance.variant() == Variant::TwoAlt ? build_two_alt_qubo(instance, cfg)
                                                 : build_four_alt_qubo(instance, cfg);
}

QuboModel ilp_to_qubo(std::span<const double> cost, const std::vector<std::vector<int>>& constraints,
                      std::span<const int> rhs, double penalty) {
    if (cost.empty()) throw ModelError("ILP needs at least one variable");
    if (constraints.size() != rhs.size()) {
        throw ModelError("constraint matrix has " + std::to_string(constraints.size()) + " rows but rhs has " +
                         std::to_string(rhs.size()) + " entries");
    }
    if (!(penalty > 0.0)) throw ModelError("penalty must be positive");
    const std::size_t n = cost.size();
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x[" + std::to_string(i) + "]");
    QuboModel m(std::move(labels));

    for (std::size_t i = 0; i < n; ++i) m.add(static_cast<int>(i), static_cast<int>(i), cost[i]);

    for (std::size_t r = 0; r < constraints.size(); ++r) {
        const auto& row = constraints[r];
        if (row.size() != n) {
            throw ModelError("constraint row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                             " columns, expected " + std::to_string(n));
        }
        const double b = rhs[r];
        // (a.x - b)^2 = sum a_i^2 x_i + 2 sum_{i<k} a_i a_k x_i x_k - 2b sum a_i x_i + b^2
        for (std::size_t i = 0; i < n; ++i) {
            if (row[i] == 0) continue;
            const double a = row[i];
            m.add(static_cast<int>(i), static_cast<int>(i), penalty * (a * a - 2.0 * b * a));
            for (std::size_t k = i + 1; k < n; ++k) {
                if (row[k] != 0) m.add(static_cast<int>(i), static_cast<int>(k), penalty * 2.0 * a * row[k]);
            }
        }
        m.add_offset(penalty * b * b);
    }
    return m;
}

double default_penalty_B(const ProblemInstance& instance) {
    double worst = 0.0;
    for (const Container& c : instance.containers()) {
        for (const Route& r : c.barge_routes) worst = std::max(worst, r.cost);
        if (instance.variant() == Variant::FourAlt) worst = std::max(worst, c.truck_cost);
    }
    return worst + 1.0;
}

bool DecodedSample::aux_consistent() const {
    return std::none_of(aux_broken.begin(), aux_broken.end(), [](bool b) { return b; });
}

DecodedSample decode_sample(const VariableLayout& layout, std::span<const std::uint8_t> bits) {
    if (static_cast<int>(bits.size()) != layout.total) {
        throw std::invalid_argument("sample has " + std::to_string(bits.size()) + " bits, layout expects " +
                                    std::to_string(layout.total));
    }
    auto bit = [&](int idx) { return bits[static_cast<std::size_t>(idx)] != 0; };
    DecodedSample d;
    for (std::size_t i = 0; i < layout.mode_bits.size(); ++i) {
        const auto& mb = layout.mode_bits[i];
        if (layout.variant == Variant::TwoAlt) {
            d.assignment.push_back(bit(mb[0]) ? Mode::truck() : Mode::barge(1));
            continue;
        }
        const bool a = bit(mb[0]);
        const bool b = bit(mb[1]);
        if (a && b) {
            d.assignment.push_back(Mode::truck());
        } else if (b) {
            d.assignment.push_back(Mode::barge(1));
        } else if (a) {
            d.assignment.push_back(Mode::barge(2));
        } else {
            d.assignment.push_back(Mode::barge(3));
        }
        d.aux_broken.push_back(bit(layout.aux_bits[i]) != (a && b));
    }
    for (const auto& slack : layout.slack_bits) {
        int value = 0;
        for (std::size_t k = 0; k < slack.size(); ++k) {
            if (bit(slack[k])) value += 1 << k;
        }
        d.slack.push_back(value);
    }
    return d;
}

Bits encode_assignment(const ProblemInstance& instance, const VariableLayout& layout, const Assignment& a) {
    const EvaluationResult eval = evaluate_assignment(instance, a);
    Bits bits(static_cast<std::size_t>(layout.total), 0);
    auto set = [&](int idx, bool v) { bits[static_cast<std::size_t>(idx)] = v ? 1 : 0; };
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& mb = layout.mode_bits[i];
        if (layout.variant == Variant::TwoAlt) {
            set(mb[0], a[i].is_truck());
            continue;
        }
        const int r = a[i].route();
        const bool first = a[i].is_truck() || r == 2;
        const bool second = a[i].is_truck() || r == 1;
        set(mb[0], first);
        set(mb[1], second);
        set(layout.aux_bits[i], first && second);
    }
    for (std::size_t j = 0; j < layout.slack_bits.size(); ++j) {
        const auto& slack = layout.slack_bits[j];
        const int max_value = static_cast<int>((1LL << slack.size()) - 1);
        const int value = std::clamp(instance.tracks()[j].capacity - eval.track_loads[j], 0, max_value);
        for (std::size_t k = 0; k < slack.size(); ++k) set(slack[k], (value >> k) & 1);
    }
    return bits;
}

nlohmann::json to_json(const VariableLayout& layout) {
    return {{"variant", to_string(layout.variant)},
            {"total", layout.total},
            {"mode_bits", layout.mode_bits},
            {"aux_bits", layout.aux_bits},
            {"slack_bits", layout.slack_bits},
            {"constrained", layout.constrained}};
}

nlohmann::json build_report(const BuiltQubo& built, const PenaltyConfig& cfg) {
    const VariableLayout& layout = built.layout;
    const int num_mode = static_cast<int>(layout.mode_bits.size() * (layout.variant == Variant::TwoAlt ? 1 : 2));
    const int num_aux = static_cast<int>(layout.aux_bits.size());
    int num_slack = 0;
    std::vector<int> slack_per_track;
    for (const auto& s : layout.slack_bits) {
        num_slack += static_cast<int>(s.size());
        slack_per_track.push_back(static_cast<int>(s.size()));
    }
    nlohmann::json aux = nlohmann::json::array();
    for (const AuxProduct& a : built.aux) {
        aux.push_back({{"aux", a.aux}, {"first", a.first}, {"second", a.second}, {"weight", a.weight}});
    }
    nlohmann::json report = {
            {"variant", to_string(layout.variant)},
            {"num_vars", built.model.num_vars()},
            {"num_terms", built.model.coefficients().size()},
            {"blocks",
             {{"mode", {{"start", 0}, {"count", num_mode}}},
              {"aux", {{"start", num_mode}, {"count", num_aux}}},
              {"slack", {{"start", num_mode + num_aux}, {"count", num_slack}}}}},
            {"slack_bits_per_track", slack_per_track},
            {"constrained_tracks", layout.constrained},
            {"max_coefficient", built.model.max_coefficient()},
            {"max_abs_coefficient", built.model.max_abs_coefficient()},
            {"sum_abs_coefficients", built.model.sum_abs_coefficients()},
            {"offset", built.model.offset()},
            {"convention", "upper-triangular, linear terms on the diagonal, offset excluded"},
            {"A", cfg.A},
            {"B", cfg.B},
            {"omit_slack_free_tracks", cfg.omit_slack_free_tracks},
            {"aux_products", aux}};
    if (cfg.quad_weight) report["quad_weight"] = *cfg.quad_weight;
    return report;
}

}  // namespace mmqubo
