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

#include "mmqubo/qubo_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mmqubo/error.hpp"

namespace mmqubo {

QuboModel::QuboModel(std::vector<std::string> labels, double offset)
        : labels_(std::move(labels)), offset_(offset) {
    if (labels_.empty()) throw ModelError("a QUBO model needs at least one variable");
}

void QuboModel::add(int i, int j, double value) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= num_vars()) {
        throw ModelError("coefficient index (" + std::to_string(i) + "," + std::to_string(j) +
                         ") outside 0.." + std::to_string(num_vars() - 1));
    }
    if (value == 0.0) return;
    auto [it, inserted] = coefficients_.try_emplace({i, j}, value);
    if (inserted) return;
    it->second += value;
    if (it->second == 0.0) coefficients_.erase(it);
}

double QuboModel::get(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = coefficients_.find({i, j});
    return it == coefficients_.end() ? 0.0 : it->second;
}

double QuboModel::energy(std::span<const std::uint8_t> bits) const {
    if (static_cast<int>(bits.size()) != num_vars()) {
        throw std::invalid_argument("bit vector length " + std::to_string(bits.size()) + " != model size " +
                                    std::to_string(num_vars()));
    }
    double e = offset_;
    for (const auto& [ij, q] : coefficients_) {
        if (bits[static_cast<std::size_t>(ij.first)] && bits[static_cast<std::size_t>(ij.second)]) e += q;
    }
    return e;
}

std::uint64_t QuboModel::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            h ^= (word >> (8 * b)) & 0xffU;
            h *= 1099511628211ULL;
        }
    };
    mix(static_cast<std::uint64_t>(num_vars()));
    mix(std::bit_cast<std::uint64_t>(offset_));
    for (const auto& [ij, q] : coefficients_) {
        mix(static_cast<std::uint64_t>(ij.first));
        mix(static_cast<std::uint64_t>(ij.second));
        mix(std::bit_cast<std::uint64_t>(q));
    }
    return h;
}

double QuboModel::max_coefficient() const {
    if (coefficients_.empty()) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [ij, q] : coefficients_) best = std::max(best, q);
    return best;
}

double QuboModel::max_abs_coefficient() const {
    double best = 0.0;
    for (const auto& [ij, q] : coefficients_) best = std::max(best, std::abs(q));
    return best;
}

double QuboModel::sum_abs_coefficients() const {
    double sum = 0.0;
    for (const auto& [ij, q] : coefficients_) sum += std::abs(q);
    return sum;
}

QuboModel compile_to_qubo(const Polynomial& p, std::vector<std::string> labels) {
    if (p.degree() > 2) {
        throw ModelError("cannot compile a degree-" + std::to_string(p.degree()) + " polynomial to a QUBO");
    }
    if (p.num_vars() > static_cast<int>(labels.size())) {
        throw ModelError("polynomial uses variable " + std::to_string(p.num_vars() - 1) + " but only " +
                         std::to_string(labels.size()) + " labels were given");
    }
    QuboModel m(std::move(labels));
    for (const auto& [vars, coeff] : p.terms()) {
        switch (vars.size()) {
            case 0: m.add_offset(coeff); break;
            case 1: m.add(vars[0], vars[0], coeff); break;
            default: m.add(vars[0], vars[1], coeff); break;
        }
    }
    return m;
}

NeighborTable neighbor_table(const QuboModel& m) {
    NeighborTable t;
    const auto n = static_cast<std::size_t>(m.num_vars());
    t.linear.assign(n, 0.0);
    t.neighbors.resize(n);
    for (const auto& [ij, q] : m.coefficients()) {
        const auto [i, j] = ij;
        if (i == j) {
            t.linear[static_cast<std::size_t>(i)] = q;
        } else {
            t.neighbors[static_cast<std::size_t>(i)].emplace_back(j, q);
            t.neighbors[static_cast<std::size_t>(j)].emplace_back(i, q);
        }
    }
    return t;
}

std::string bits_to_string(std::span<const std::uint8_t> bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) s[i] = '1';
    }
    return s;
}

nlohmann::json to_json(const QuboModel& m) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [ij, q] : m.coefficients()) terms.push_back({ij.first, ij.second, q});
    return {{"num_vars", m.num_vars()}, {"offset", m.offset()}, {"labels", m.labels()}, {"terms", terms}};
}

QuboModel qubo_from_json(const nlohmann::json& doc) {
    try {
        const int n = doc.at("num_vars").get<int>();
        std::vector<std::string> labels;
        if (doc.contains("labels")) {
            labels = doc.at("labels").get<std::vector<std::string>>();
        } else {
            for (int i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i));
        }
        if (static_cast<int>(labels.size()) != n) throw ModelError("label count does not match num_vars");
        QuboModel m(std::move(labels), doc.value("offset", 0.0));
        for (const auto& t : doc.at("terms")) {
            const int i = t.at(0).get<int>();
            const int j = t.at(1).get<int>();
            if (i > j) throw ModelError("term (" + std::to_string(i) + "," + std::to_string(j) + ") has i > j");
            m.add(i, j, t.at(2).get<double>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("malformed QUBO document: ") + e.what());
    }
}

std::string to_triples(const QuboModel& m) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "# num_vars " << m.num_vars() << "\n# offset " << m.offset() << "\n";
    for (const auto& [ij, q] : m.coefficients()) out << ij.first << ' ' << ij.second << ' ' << q << '\n';
    return out.str();
}

}  // namespace mmqubo
