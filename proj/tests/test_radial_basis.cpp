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

#include "hypheat/errors.hpp"
#include "hypheat/radial_basis.hpp"
#include "hypheat/verification.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace hypheat;
using hypheat::testing::Gen;
using hypheat::testing::oracle_log_fl;
using hypheat::testing::rel_diff;

namespace {

std::vector<mpz_class> Z(std::initializer_list<long> v) {
    std::vector<mpz_class> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("closed forms of the first ladder levels") {
    const auto table = build_fl_table(3);
    REQUIRE(table.size() == 3);
    CHECK(table[0].p == SigmaPoly(Z({1})));
    CHECK(table[0].q.is_zero());
    CHECK(table[1].p == SigmaPoly(Z({0, 1})));
    CHECK(table[1].q == SigmaPoly(Z({-1})));
    CHECK(table[2].p == SigmaPoly(Z({1, 0, 2})));
    CHECK(table[2].q == SigmaPoly(Z({0, -3})));
}

TEST_CASE("closed-form degrees") {
    const auto table = build_fl_table(30);
    for (const auto& rep : table) {
        CHECK(rep.p.degree() == rep.level - 1);
        CHECK(rep.q.degree() == rep.level - 2);
    }
}

TEST_CASE("table json lists coefficients low to high") {
    const auto table = build_fl_table(3);
    const auto j = fl_table_to_json(table);
    REQUIRE(j.size() == 3);
    CHECK(j[2]["level"] == 3);
    CHECK(j[2]["p"] == nlohmann::json::array({"1", "0", "2"}));
    CHECK(j[2]["q"] == nlohmann::json::array({"0", "-3"}));
}

TEST_CASE("known values") {
    const auto& b = RadialBasis::shared();
    CHECK(b.eval_fl(1, 1.0) == doctest::Approx(1.0 / std::sinh(1.0)).epsilon(1e-15));
    // cosh 1 - sinh 1 = 1/e
    const double f2 = std::exp(-1.0) / std::pow(std::sinh(1.0), 3);
    CHECK(b.eval_fl(2, 1.0) == doctest::Approx(f2).epsilon(1e-14));
    CHECK(b.eval_fl(2, 1.0) == doctest::Approx(0.22666).epsilon(1e-4));
    CHECK(b.eval_fl(1, 0.0) == 1.0);
    CHECK(b.eval_fl(2, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(b.eval_fl(3, 0.0) == doctest::Approx(std::exp(oracle_log_fl(3, 0.0))).epsilon(1e-12));
}

TEST_CASE("closed form and series agree around the switch") {
    const auto& b = RadialBasis::shared();
    for (double rho : {0.04, 0.05, 0.06}) {
        for (int l = 1; l <= 20; ++l) {
            CAPTURE(rho);
            CAPTURE(l);
            const double closed = std::exp(b.log_fl_closed_form(l, rho));
            CHECK(rel_diff(closed, b.eval_fl_series(l, rho)) < 1e-12);
        }
    }
}

TEST_CASE("ladder matches the integral representation") {
    const auto& b = RadialBasis::shared();
    Gen g(0x5eed01);
    for (int k = 0; k < 200; ++k) {
        const int l = g.integer(1, 40);
        const double rho = g.log_uniform(1e-4, 30.0);
        CAPTURE(l);
        CAPTURE(rho);
        CHECK(std::abs(b.log_fl(l, rho) - oracle_log_fl(l, rho)) < 1e-10);
    }
}

TEST_CASE("each level is minus the sigma derivative of the previous one") {
    const auto& b = RadialBasis::shared();
    const double h = 1e-5;
    for (int i = 0; i < 20; ++i) {
        const double rho = 0.2 + 0.25 * i;
        const double sigma = std::cosh(rho);
        for (int l = 1; l <= 10; ++l) {
            const double up = b.eval_fl(l, std::acosh(sigma + h));
            const double down = b.eval_fl(l, std::acosh(sigma - h));
            const double fd = -(up - down) / (2.0 * h);
            CAPTURE(rho);
            CAPTURE(l);
            CHECK(rel_diff(fd, b.eval_fl(l + 1, rho)) < 1e-6);
        }
    }
}

TEST_CASE("first level solves its sigma ODE") {
    // (sigma^2 - 1) f_1' + sigma f_1 = 1 with f_1' = -f_2
    const auto& b = RadialBasis::shared();
    for (double rho : {1e-3, 0.03, 0.5, 2.0, 9.0}) {
        const double s = std::sinh(rho);
        const double lhs = -s * s * b.eval_fl(2, rho) + std::cosh(rho) * b.eval_fl(1, rho);
        CAPTURE(rho);
        CHECK(lhs == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("three-term relation across the ladder") {
    // (sigma^2 - 1) f_{k+2} = (2k+1) sigma f_{k+1} - k^2 f_k
    const auto& b = RadialBasis::shared();
    Gen g(0x5eed02);
    for (int c = 0; c < 100; ++c) {
        const int k = g.integer(1, 30);
        const double rho = g.log_uniform(0.1, 20.0);
        const auto lf = b.log_ladder(k + 2, rho);
        const double s = std::sinh(rho);
        const double lhs = 2.0 * std::log(s) + lf[k + 1];
        const double a = std::log((2.0 * k + 1.0) * std::cosh(rho)) + lf[k];
        const double d = std::log(static_cast<double>(k) * k) + lf[k - 1];
        const double rhs = a + std::log1p(-std::exp(d - a));
        CAPTURE(k);
        CAPTURE(rho);
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("positive and decreasing for the first 40 levels") {
    const auto& b = RadialBasis::shared();
    Gen g(0x5eed03);
    for (int c = 0; c < 300; ++c) {
        const int l = g.integer(1, 40);
        const double rho = g.log_uniform(1e-3, 30.0);
        const double step = rho * g.uniform(1e-3, 0.5);
        CAPTURE(l);
        CAPTURE(rho);
        const double here = b.log_fl(l, rho);
        CHECK(std::isfinite(here));
        CHECK(b.log_fl(l, rho + step) < here);
    }
    CHECK(verify_ladder(40, ladder_rho_grid()).pass);
}

TEST_CASE("log-ladder matches single evaluations") {
    const auto& b = RadialBasis::shared();
    for (double rho : {1e-4, 0.049, 0.051, 1.0, 35.0}) {
        const auto lf = b.log_ladder(40, rho);
        for (int l = 1; l <= 40; ++l) CHECK(lf[l - 1] == doctest::Approx(b.log_fl(l, rho)).epsilon(1e-14));
    }
}

TEST_CASE("log-convexity along the ladder") {
    const auto& b = RadialBasis::shared();
    const auto grid = ladder_rho_grid();
    for (int l = 1; l <= 20; ++l) {
        const auto r = check_fl_logconvex(b, l, grid);
        CAPTURE(l);
        CHECK(r.pass);
        CHECK(r.worst_value > 0.0);
    }
}

TEST_CASE("large arguments stay finite in log form") {
    const auto& b = RadialBasis::shared();
    const double v = b.log_fl(40, 30.0);
    CHECK(std::isfinite(v));
    CHECK(std::abs(v - oracle_log_fl(40, 30.0)) < 1e-9);
}

TEST_CASE("level errors") {
    const auto& b = RadialBasis::shared();
    CHECK_THROWS_AS(b.eval_fl(0, 1.0), LevelOutOfRange);
    CHECK_THROWS_AS(b.eval_fl(kDefaultLadderLevels + 1, 1.0), LevelOutOfRange);
    CHECK_THROWS_AS(b.log_ladder(kDefaultLadderLevels + 1, 1.0), LevelOutOfRange);
}
