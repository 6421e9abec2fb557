/*
 * Copyright 2026 The hypheat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hypheat/alpha_engine.hpp"
#include "hypheat/errors.hpp"
#include "hypheat/radial_basis.hpp"
#include "support.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <vector>

using namespace hypheat;
using hypheat::testing::Gen;
using hypheat::testing::rel_diff;

namespace {

Expansion term(long c, int t_power, std::vector<Monomial::Factor> factors) {
    Expansion e;
    e.add({t_power, Monomial(std::move(factors))}, mpz_class(c));
    return e;
}

std::vector<int> dense_exponents(const Monomial& mono, std::size_t width) {
    std::vector<int> e(width, 0);
    for (const auto& f : mono.factors()) e[static_cast<std::size_t>(f.level - 1)] = f.exponent;
    return e;
}

std::vector<double> ladder_values(int levels, double rho) {
    std::vector<double> f;
    for (int l = 1; l <= levels; ++l) f.push_back(RadialBasis::shared().eval_fl(l, rho));
    return f;
}

}  // namespace

TEST_CASE("small alphas") {
    CHECK(build_alpha(1).expansion == Expansion::constant(1));
    CHECK(build_alpha(3).expansion == term(1, 0, {{1, 1}}));
    CHECK(build_alpha(5).expansion == term(1, 0, {{1, 2}}) + term(2, 1, {{2, 1}}));
    const Expansion a7 = term(1, 0, {{1, 3}}) + term(6, 1, {{1, 1}, {2, 1}}) + term(4, 2, {{3, 1}});
    CHECK(build_alpha(7).expansion == a7);
    CHECK(to_latex(build_alpha(7)) == "α_7 = f_1^3 + 6 t f_1 f_2 + 4 t^2 f_3");
}

TEST_CASE("alpha_5 at t = 1, rho = 1") {
    const double v = eval_expansion(build_alpha(5).expansion, RadialBasis::shared(), 1.0, 1.0);
    CHECK(v == doctest::Approx(1.17738).epsilon(1e-5));
}

TEST_CASE("exact derivatives") {
    CHECK(diff_sigma(term(1, 0, {{1, 2}})) == term(-2, 0, {{1, 1}, {2, 1}}));
    CHECK(diff_sigma(term(3, 2, {{2, 1}, {4, 2}})) ==
          term(-3, 2, {{3, 1}, {4, 2}}) + term(-6, 2, {{2, 1}, {4, 1}, {5, 1}}));
    CHECK(diff_t(build_alpha(5).expansion) == term(2, 0, {{2, 1}}));
    CHECK(diff_t(build_alpha(7).expansion) == term(6, 0, {{1, 1}, {2, 1}}) + term(8, 1, {{3, 1}}));
    CHECK(diff_sigma(Expansion::constant(5)).empty());
}

TEST_CASE("sigma derivative of a positive polynomial is all negative") {
    for (int n = 3; n <= 21; n += 2) {
        const Expansion d = diff_sigma(build_alpha(n).expansion);
        for (const auto& [key, c] : d.terms()) CHECK(c < 0);
    }
}

TEST_CASE("coefficients match a dense recurrence") {
    for (int n = 1; n <= 31; n += 2) {
        const AlphaPoly& a = alpha_cached(n);
        const auto dense = hypheat::testing::oracle_alpha(n);
        const std::size_t width = static_cast<std::size_t>(a.m) + 2;
        std::size_t nonzero = 0;
        for (const auto& [key, c] : dense) nonzero += c != 0.0;
        CAPTURE(n);
        REQUIRE(a.expansion.size() == nonzero);
        for (const auto& [key, c] : a.expansion.terms()) {
            const auto it = dense.find({key.t_power, dense_exponents(key.monomial, width)});
            REQUIRE(it != dense.end());
            CHECK(c.get_d() == it->second);
        }
    }
}

TEST_CASE("term counts are partition numbers") {
    // p(m) for m = 0..12
    const int partitions[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77};
    for (int m = 0; m <= 12; ++m) {
        CAPTURE(m);
        CHECK(build_alpha(2 * m + 1).expansion.size() == static_cast<std::size_t>(partitions[m]));
    }
}

TEST_CASE("each P_{m,i} is homogeneous") {
    const AlphaPoly& a = alpha_cached(25);
    for (const auto& [key, c] : a.expansion.terms()) {
        CHECK(key.monomial.weight() == a.m);
        CHECK(key.monomial.degree() == a.m - key.t_power);
    }
}

TEST_CASE("structure checks") {
    const auto r3 = structure_check(build_alpha(7));
    CHECK(r3.pass);
    CHECK(r3.worst_value == 1.0);

    const auto start = std::chrono::steady_clock::now();
    const AlphaPoly a = build_alpha(51);
    const auto r = structure_check(a);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(r.pass);
    CHECK(r.worst_value >= 1.0);
    CHECK(a.expansion.max_level() == 25);
    CHECK(secs < 10.0);
}

TEST_CASE("numeric values agree with the dense recurrence") {
    Gen g(0xa1fa01);
    for (int n = 1; n <= 31; n += 2) {
        const auto dense = hypheat::testing::oracle_alpha(n);
        for (int k = 0; k < 25; ++k) {
            const double t = g.log_uniform(1e-3, 1e2);
            const double rho = g.log_uniform(1e-3, 5.0);
            const auto f = ladder_values((n - 1) / 2 + 2, rho);
            const double want = hypheat::testing::eval_dense(dense, f, t);
            const double got = eval_expansion(alpha_cached(n).expansion, RadialBasis::shared(), t, rho);
            CAPTURE(n);
            CAPTURE(t);
            CAPTURE(rho);
            CHECK(rel_diff(got, want) < 1e-13);
        }
    }
}

TEST_CASE("sigma derivative agrees with finite differences") {
    Gen g(0xa1fa02);
    const double h = 1e-5;
    for (int n = 3; n <= 15; n += 2) {
        const Expansion& a = alpha_cached(n).expansion;
        const Expansion da = diff_sigma(a);
        for (int k = 0; k < 10; ++k) {
            const double t = g.log_uniform(0.05, 5.0);
            const double rho = g.uniform(0.3, 3.0);
            const double sigma = std::cosh(rho);
            const auto& b = RadialBasis::shared();
            const double fd = (eval_expansion(a, b, t, std::acosh(sigma + h)) -
                               eval_expansion(a, b, t, std::acosh(sigma - h))) /
                              (2.0 * h);
            CAPTURE(n);
            CHECK(rel_diff(eval_expansion(da, b, t, rho), fd) < 1e-6);
        }
    }
}

TEST_CASE("scaled evaluation survives underflow") {
    const auto& b = RadialBasis::shared();
    const auto s = eval_expansion_scaled(alpha_cached(31).expansion, b, 1e-3, 200.0);
    CHECK(std::isfinite(s.log_abs()));
    CHECK(s.mantissa > 0.0);
    CHECK(s.value() == 0.0);
}

TEST_CASE("json dump") {
    const auto j = to_json(build_alpha(7));
    CHECK(j["n"] == 7);
    CHECK(j["m"] == 3);
    CHECK(j["P"]["2"][0]["coefficient"] == "4");
    CHECK(j["P"]["2"][0]["exponents"]["3"] == 1);
    CHECK(j["P"]["1"][0]["coefficient"] == "6");
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(build_alpha(4), UsageError);
    CHECK_THROWS_AS(build_alpha(-1), UsageError);
    CHECK_THROWS_AS(build_alpha(9, 3), UsageError);
    CHECK_THROWS_AS(diff_sigma(term(1, 0, {{3, 1}}), 3), LevelOutOfRange);
    CHECK_THROWS_AS(eval_expansion(Expansion::constant(1), RadialBasis::shared(), 0.0, 1.0), UsageError);
    CHECK_THROWS_AS(Monomial({{0, 1}}), UsageError);
}
