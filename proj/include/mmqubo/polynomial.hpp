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
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace mmqubo {

/// Bit vectors are stored one byte per variable (0 or 1).
using Bits = std::vector<std::uint8_t>;

/// Sorted, duplicate-free set of variable indices. The empty monomial is the constant term.
using Monomial = std::vector<int>;

/// Multilinear polynomial over binary variables. Since x*x == x for binaries,
/// every monomial is a set and products take the union of index sets.
/// Terms with a zero coefficient are never stored.
class Polynomial {
 public:
    using Terms = std::map<Monomial, double>;

    Polynomial() = default;

    static Polynomial constant(double value);
    static Polynomial variable(int index, double coeff = 1.0);
    /// `vars` may be unsorted and contain repeats.
    static Polynomial term(std::vector<int> vars, double coeff);

    /// Adds `coeff` to the monomial over `vars`, pruning it if the sum is exactly zero.
    void add_term(std::vector<int> vars, double coeff);

    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    /// Coefficient of the monomial, 0 if absent.
    double coefficient(const Monomial& vars) const;
    /// Maximum monomial size; 0 for constants and the empty polynomial.
    int degree() const;
    /// One past the largest variable index, 0 if there are no variables.
    int num_vars() const;

    double evaluate(std::span<const std::uint8_t> bits) const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator*=(double scale);

    friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
    friend Polynomial operator-(Polynomial p, const Polynomial& q);
    friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
    friend Polynomial operator*(Polynomial p, double s) { return p *= s; }
    friend Polynomial operator*(double s, Polynomial p) { return p *= s; }
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
    Terms terms_;
};

inline Polynomial poly_add(const Polynomial& p, const Polynomial& q) { return p + q; }
inline Polynomial poly_mul(const Polynomial& p, const Polynomial& q) { return p * q; }

/// Auxiliary variable `aux` stands for the product `first * second`.
struct AuxProduct {
    int aux = 0;
    int first = 0;
    int second = 0;
    /// Penalty weight applied to this auxiliary.
    double weight = 0.0;
};

struct Quadratization {
    Polynomial polynomial;
    std::vector<AuxProduct> aux;
};

/// Rosenberg (substitution) degree reduction. Every monomial containing both
/// variables of a designated pair has the pair replaced by the pair's
/// auxiliary, and weight * (3z + ab - 2az - 2bz) is added for each pair.
/// The penalty vanishes iff z == a*b and is at least `weight` otherwise.
///
/// A pair's `weight` field is ignored on input. If `weight` is given it is
/// used for every pair; otherwise each auxiliary gets
/// 1 + sum of |coefficients| of the substituted terms containing it.
///
/// Throws ModelError when a term of degree > 2 survives substitution, when
/// pairs overlap or their auxiliary already occurs in `p`, or for a
/// non-positive weight.
Quadratization quadratize_rosenberg(const Polynomial& p, std::span<const AuxProduct> pairs,
                                    std::optional<double> weight = std::nullopt);

}  // namespace mmqubo
