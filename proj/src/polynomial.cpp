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

#include "mmqubo/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>
#include <stdexcept>
#include <string>

#include "mmqubo/error.hpp"

namespace mmqubo {

namespace {

Monomial normalize(std::vector<int> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

Monomial merge(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void accumulate(Polynomial::Terms& terms, Monomial key, double coeff) {
    if (coeff == 0.0) return;
    auto [it, inserted] = terms.try_emplace(std::move(key), coeff);
    if (inserted) return;
    it->second += coeff;
    if (it->second == 0.0) terms.erase(it);
}

}  // namespace

Polynomial Polynomial::constant(double value) {
    Polynomial p;
    p.add_term({}, value);
    return p;
}

Polynomial Polynomial::variable(int index, double coeff) {
    Polynomial p;
    p.add_term({index}, coeff);
    return p;
}

Polynomial Polynomial::term(std::vector<int> vars, double coeff) {
    Polynomial p;
    p.add_term(std::move(vars), coeff);
    return p;
}

void Polynomial::add_term(std::vector<int> vars, double coeff) {
    for (int v : vars) {
        if (v < 0) throw std::invalid_argument("negative variable index " + std::to_string(v));
    }
    accumulate(terms_, normalize(std::move(vars)), coeff);
}

double Polynomial::coefficient(const Monomial& vars) const {
    auto it = terms_.find(vars);
    return it == terms_.end() ? 0.0 : it->second;
}

int Polynomial::degree() const {
    std::size_t d = 0;
    for (const auto& [vars, coeff] : terms_) d = std::max(d, vars.size());
    return static_cast<int>(d);
}

int Polynomial::num_vars() const {
    int n = 0;
    for (const auto& [vars, coeff] : terms_) {
        if (!vars.empty()) n = std::max(n, vars.back() + 1);
    }
    return n;
}

double Polynomial::evaluate(std::span<const std::uint8_t> bits) const {
    if (static_cast<int>(bits.size()) < num_vars()) {
        throw std::invalid_argument("bit vector shorter than polynomial's variable range");
    }
    double value = 0.0;
    for (const auto& [vars, coeff] : terms_) {
        if (std::all_of(vars.begin(), vars.end(), [&](int v) { return bits[static_cast<std::size_t>(v)] != 0; })) {
            value += coeff;
        }
    }
    return value;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    for (const auto& [vars, coeff] : other.terms_) accumulate(terms_, vars, coeff);
    return *this;
}

Polynomial& Polynomial::operator*=(double scale) {
    if (scale == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= scale;
        // Underflow can produce an exact zero.
        it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

Polynomial operator-(Polynomial p, const Polynomial& q) {
    for (const auto& [vars, coeff] : q.terms_) accumulate(p.terms_, vars, -coeff);
    return p;
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    Polynomial out;
    for (const auto& [a, ca] : p.terms_) {
        for (const auto& [b, cb] : q.terms_) accumulate(out.terms_, merge(a, b), ca * cb);
    }
    return out;
}

Quadratization quadratize_rosenberg(const Polynomial& p, std::span<const AuxProduct> pairs,
                                    std::optional<double> weight) {
    if (weight && !(*weight > 0.0)) throw ModelError("quadratization weight must be positive");

    std::set<int> seen;
    for (const AuxProduct& pr : pairs) {
        if (pr.first == pr.second) throw ModelError("designated pair repeats variable " + std::to_string(pr.first));
        for (int v : {pr.aux, pr.first, pr.second}) {
            if (v < 0) throw ModelError("negative variable index in designated pair");
            if (!seen.insert(v).second) throw ModelError("designated pairs overlap at variable " + std::to_string(v));
        }
    }
    for (const auto& [vars, coeff] : p.terms()) {
        for (const AuxProduct& pr : pairs) {
            if (std::binary_search(vars.begin(), vars.end(), pr.aux)) {
                throw ModelError("auxiliary variable " + std::to_string(pr.aux) + " already occurs in the polynomial");
            }
        }
    }

    Polynomial substituted;
    for (const auto& [vars, coeff] : p.terms()) {
        Monomial reduced = vars;
        for (const AuxProduct& pr : pairs) {
            auto a = std::lower_bound(reduced.begin(), reduced.end(), pr.first);
            auto b = std::lower_bound(reduced.begin(), reduced.end(), pr.second);
            if (a == reduced.end() || *a != pr.first || b == reduced.end() || *b != pr.second) continue;
            std::vector<int> next;
            for (int v : reduced) {
                if (v != pr.first && v != pr.second) next.push_back(v);
            }
            next.push_back(pr.aux);
            reduced = normalize(std::move(next));
        }
        if (reduced.size() > 2) {
            std::string desc;
            for (int v : vars) desc += (desc.empty() ? "" : ",") + std::to_string(v);
            throw ModelError("term {" + desc + "} of degree " + std::to_string(vars.size()) +
                             " is not reduced to degree 2 by the designated pairs");
        }
        substituted.add_term(std::move(reduced), coeff);
    }

    Quadratization out;
    out.polynomial = substituted;
    for (const AuxProduct& pr : pairs) {
        double w = 0.0;
        if (weight) {
            w = *weight;
        } else {
            w = 1.0;
            for (const auto& [vars, coeff] : substituted.terms()) {
                if (std::binary_search(vars.begin(), vars.end(), pr.aux)) w += std::abs(coeff);
            }
        }
        out.polynomial.add_term({pr.aux}, 3.0 * w);
        out.polynomial.add_term({pr.first, pr.second}, w);
        out.polynomial.add_term({pr.first, pr.aux}, -2.0 * w);
        out.polynomial.add_term({pr.second, pr.aux}, -2.0 * w);
        out.aux.push_back({pr.aux, pr.first, pr.second, w});
    }
    return out;
}

}  // namespace mmqubo
