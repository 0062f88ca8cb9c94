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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mmqubo/error.hpp"
#include "mmqubo/polynomial.hpp"
#include "mmqubo/qubo_model.hpp"
#include "oracles.hpp"

using namespace mmqubo;

namespace {

std::vector<std::string> labels(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("v" + std::to_string(i));
    return out;
}

Polynomial random_polynomial(std::mt19937_64& rng, int n, int max_degree, int terms) {
    std::uniform_int_distribution<int> var(0, n - 1);
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<int> coeff(-9, 9);
    Polynomial p;
    for (int t = 0; t < terms; ++t) {
        std::vector<int> vars;
        const int d = deg(rng);
        for (int k = 0; k < d; ++k) vars.push_back(var(rng));
        p.add_term(vars, coeff(rng));
    }
    return p;
}

// Evaluates straight from the term map, multiplying bits as numbers.
double naive_evaluate(const Polynomial& p, const Bits& x) {
    double s = 0.0;
    for (const auto& [mono, c] : p.terms()) {
        double prod = c;
        for (int v : mono) prod *= x[static_cast<std::size_t>(v)];
        s += prod;
    }
    return s;
}

bool has_zero_coefficient(const Polynomial& p) {
    for (const auto& [mono, c] : p.terms()) {
        if (c == 0.0) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("poly_add cancels and merges", "[polynomial]") {
    CHECK(poly_add(Polynomial::variable(0, 1.0), Polynomial::variable(0, -1.0)).empty());

    const Polynomial sum = poly_add(Polynomial::constant(3.0), Polynomial::term({1, 2}, 2.0));
    CHECK(sum.size() == 2);
    CHECK(sum.coefficient({}) == 3.0);
    CHECK(sum.coefficient({1, 2}) == 2.0);
}

TEST_CASE("poly_mul is idempotent on variables and expands products", "[polynomial]") {
    CHECK(poly_mul(Polynomial::variable(0), Polynomial::variable(0)) == Polynomial::variable(0));

    const Polynomial one_minus_x0 = Polynomial::constant(1.0) - Polynomial::variable(0);
    const Polynomial one_minus_x1 = Polynomial::constant(1.0) - Polynomial::variable(1);
    const Polynomial prod = poly_mul(one_minus_x0, one_minus_x1);
    CHECK(prod.size() == 4);
    CHECK(prod.coefficient({}) == 1.0);
    CHECK(prod.coefficient({0}) == -1.0);
    CHECK(prod.coefficient({1}) == -1.0);
    CHECK(prod.coefficient({0, 1}) == 1.0);
}

TEST_CASE("squared first-track load expression of the case study", "[polynomial]") {
    // sum_i r_i1 (1 - x_i) + y0 + 2 y1 + 4 y2 - 5, with slack bits at 10..12.
    Polynomial e = Polynomial::constant(-5.0);
    int users = 0;
    for (int i = 0; i < 10; ++i) {
        if (!oracle::kIncidence[static_cast<std::size_t>(i)][0]) continue;
        ++users;
        e += Polynomial::constant(1.0) - Polynomial::variable(i);
    }
    for (int k = 0; k < 3; ++k) e += Polynomial::variable(10 + k, std::ldexp(1.0, k));
    const Polynomial sq = e * e;
    CHECK(sq.degree() == 2);
    // Constant (users - 5)^2, here (8 - 5)^2 = 9 once the ones are absorbed.
    CHECK(sq.coefficient({}) == (users - 5.0) * (users - 5.0));
    CHECK(sq.coefficient({10, 12}) == 2.0 * 1.0 * 4.0);
    CHECK(sq.coefficient({0, 1}) == 2.0);
    CHECK(sq.coefficient({0, 11}) == -4.0);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Bits x(13);
        for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1U);
        const double v = e.evaluate(x);
        CHECK(sq.evaluate(x) == v * v);
    }
}

TEST_CASE("polynomial algebra properties", "[polynomial][property]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const Polynomial p = random_polynomial(rng, 6, 2, 5);
        const Polynomial q = random_polynomial(rng, 6, 2, 5);
        const Polynomial r = random_polynomial(rng, 6, 2, 5);
        CHECK(p * q == q * p);
        Bits x(6);
        for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1U);
        // Distributivity is checked by value; float sums may associate differently.
        CHECK(std::abs((p * (q + r)).evaluate(x) - (p * q + p * r).evaluate(x)) < 1e-9);
        CHECK((p * q).evaluate(x) == Catch::Approx(p.evaluate(x) * q.evaluate(x)).margin(1e-9));
        CHECK(p.evaluate(x) == naive_evaluate(p, x));
        CHECK_FALSE(has_zero_coefficient(p * q + r));
        CHECK_FALSE(has_zero_coefficient(p - p));
        CHECK((p - p).empty());
    }
}

TEST_CASE("quadratize_rosenberg unfolds the substitution", "[polynomial]") {
    const Polynomial p = Polynomial::term({0, 1}, 5.0);
    const std::vector<AuxProduct> pairs{{2, 0, 1, 0.0}};
    const Quadratization q = quadratize_rosenberg(p, pairs, 20.0);
    Polynomial expected = Polynomial::variable(2, 5.0);
    expected += 20.0 * (Polynomial::variable(2, 3.0) + Polynomial::term({0, 1}, 1.0) + Polynomial::term({0, 2}, -2.0) +
                        Polynomial::term({1, 2}, -2.0));
    CHECK(q.polynomial == expected);
    REQUIRE(q.aux.size() == 1);
    CHECK(q.aux[0].aux == 2);
    CHECK(q.aux[0].weight == 20.0);
}

TEST_CASE("Rosenberg penalty truth table", "[polynomial]") {
    const double w = 7.5;
    const std::vector<AuxProduct> pairs{{2, 0, 1, 0.0}};
    const Quadratization q = quadratize_rosenberg(Polynomial{}, pairs, w);
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        const Bits x = oracle::bits_of(mask, 3);
        const double penalty = q.polynomial.evaluate(x);
        const bool consistent = x[2] == (x[0] & x[1]);
        if (consistent) {
            CHECK(penalty == 0.0);
        } else {
            CHECK(penalty >= w);
        }
    }
}

TEST_CASE("quadratic input without pairs is returned unchanged", "[polynomial]") {
    std::mt19937_64 rng(3);
    const Polynomial p = random_polynomial(rng, 5, 2, 8);
    const Quadratization q = quadratize_rosenberg(p, {});
    CHECK(q.polynomial == p);
    CHECK(q.aux.empty());
}

TEST_CASE("quadratize_rosenberg errors", "[polynomial]") {
    const Polynomial cubic = Polynomial::term({0, 1, 2}, 1.0);
    CHECK_THROWS_AS(quadratize_rosenberg(cubic, {}), ModelError);
    const std::vector<AuxProduct> pair01{{3, 0, 1, 0.0}};
    CHECK_THROWS_AS(quadratize_rosenberg(cubic, pair01, 0.0), ModelError);
    CHECK_THROWS_AS(quadratize_rosenberg(cubic, pair01, -1.0), ModelError);
    const std::vector<AuxProduct> overlap{{3, 0, 1, 0.0}, {4, 1, 2, 0.0}};
    CHECK_THROWS_AS(quadratize_rosenberg(cubic, overlap), ModelError);
    const std::vector<AuxProduct> taken{{2, 0, 1, 0.0}};
    CHECK_THROWS_AS(quadratize_rosenberg(cubic, taken), ModelError);
}

TEST_CASE("minimizing over auxiliaries recovers the quartic", "[polynomial][property]") {
    // Products of pair-structured factors, as produced by the four-alternative penalty.
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> coeff(-6, 6);
    for (int trial = 0; trial < 40; ++trial) {
        const int pairs_n = 3;  // variables 0..5, auxiliaries 6..8
        Polynomial p;
        for (int t = 0; t < 6; ++t) {
            const int a = static_cast<int>(rng() % pairs_n);
            const int b = static_cast<int>(rng() % pairs_n);
            std::vector<int> vars{2 * a, 2 * a + 1};
            if (rng() & 1U) vars.push_back(2 * b);
            if (rng() & 1U) vars.push_back(2 * b + 1);
            p.add_term(vars, coeff(rng));
            p.add_term({static_cast<int>(rng() % 6)}, coeff(rng));
        }
        std::vector<AuxProduct> pairs;
        for (int i = 0; i < pairs_n; ++i) pairs.push_back({6 + i, 2 * i, 2 * i + 1, 0.0});
        const Quadratization q = quadratize_rosenberg(p, pairs);
        REQUIRE(q.polynomial.degree() <= 2);
        for (std::uint64_t mask = 0; mask < 64; ++mask) {
            double best = std::numeric_limits<double>::infinity();
            for (std::uint64_t z = 0; z < 8; ++z) {
                best = std::min(best, q.polynomial.evaluate(oracle::bits_of(mask | (z << 6), 9)));
            }
            CHECK(best == Catch::Approx(p.evaluate(oracle::bits_of(mask, 9))).margin(1e-9));
        }
    }
}

TEST_CASE("compile_to_qubo maps degrees to offset, diagonal and upper triangle", "[qubo]") {
    Polynomial p = Polynomial::constant(7.0);
    p += Polynomial::variable(0, 3.0);
    p += Polynomial::term({1, 0}, -2.0);
    const QuboModel m = compile_to_qubo(p, labels(2));
    CHECK(m.offset() == 7.0);
    CHECK(m.get(0, 0) == 3.0);
    CHECK(m.get(0, 1) == -2.0);
    CHECK(m.get(1, 0) == -2.0);
    CHECK(m.coefficients().size() == 2);
    CHECK(m.energy(Bits{1, 1}) == 8.0);

    const QuboModel empty = compile_to_qubo(Polynomial{}, labels(2));
    CHECK(empty.offset() == 0.0);
    CHECK(empty.coefficients().empty());

    CHECK_THROWS_AS(compile_to_qubo(Polynomial::term({0, 1, 2}, 1.0), labels(3)), ModelError);
    CHECK_THROWS_AS(compile_to_qubo(Polynomial::variable(4), labels(2)), ModelError);
}

TEST_CASE("qubo_energy basics", "[qubo]") {
    QuboModel m(labels(2), 7.0);
    m.add(0, 0, 3.0);
    m.add(1, 0, -2.0);
    CHECK(qubo_energy(m, Bits{0, 0}) == 7.0);
    CHECK(qubo_energy(m, Bits{1, 1}) == 8.0);
    CHECK_THROWS_AS(qubo_energy(m, Bits{1}), std::invalid_argument);
    m.add(0, 1, 2.0);
    CHECK(m.coefficients().size() == 1);
    CHECK_THROWS_AS(QuboModel(std::vector<std::string>{}), ModelError);
}

TEST_CASE("compiled energy equals polynomial value", "[qubo][property]") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const Polynomial p = random_polynomial(rng, n, 2, 6);
        const QuboModel m = compile_to_qubo(p, labels(n));
        Bits x(static_cast<std::size_t>(n));
        for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1U);
        const double expected = naive_evaluate(p, x);
        CHECK(std::abs(m.energy(x) - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
        CHECK(oracle::dense_energy(m, x) == Catch::Approx(m.energy(x)).margin(1e-9));
        for (const auto& [ij, v] : m.coefficients()) {
            CHECK(ij.first <= ij.second);
            CHECK(v != 0.0);
        }
    }
}

TEST_CASE("model statistics and serialization", "[qubo]") {
    QuboModel m(labels(3), 1.5);
    m.add(0, 0, -2.0);
    m.add(0, 2, 4.0);
    m.add(1, 1, 0.5);
    CHECK(m.max_coefficient() == 4.0);
    CHECK(m.max_abs_coefficient() == 4.0);
    CHECK(m.sum_abs_coefficients() == 6.5);

    const QuboModel back = qubo_from_json(to_json(m));
    CHECK(back == m);
    CHECK(back.fingerprint() == m.fingerprint());
    QuboModel other = m;
    other.add(1, 2, 1.0);
    CHECK(other.fingerprint() != m.fingerprint());

    const nlohmann::json doc = to_json(m);
    CHECK(doc["num_vars"] == 3);
    CHECK(doc["terms"].size() == 3);

    const std::string triples = to_triples(m);
    CHECK(triples.find("# num_vars 3") != std::string::npos);
    CHECK(triples.find("# offset 1.5") != std::string::npos);
    CHECK(triples.find("0 2 4") != std::string::npos);

    CHECK(bits_to_string(Bits{0, 1, 0, 1}) == "0101");

    const NeighborTable t = neighbor_table(m);
    CHECK(t.linear == std::vector<double>{-2.0, 0.5, 0.0});
    REQUIRE(t.neighbors[2].size() == 1);
    CHECK(t.neighbors[2][0] == std::pair<int, double>{0, 4.0});
}
