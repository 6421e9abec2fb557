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
#include "hypheat/monotonicity.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>

using namespace hypheat;
using hypheat::testing::Gen;
using hypheat::testing::rel_diff;

namespace {

/// Trapezoid over the polar angle with the closed-form K_1 / K_3.
double oracle_offset(int n, double r, double tau, double d) {
    const int steps = 4000;
    const double h = std::numbers::pi / steps;
    double sum = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double th = i * h;
        const double c = std::cosh(r) * std::cosh(d) - std::sinh(r) * std::sinh(d) * std::cos(th);
        const double dist = std::acosh(std::max(c, 1.0));
        const double k = n == 1 ? hypheat::testing::oracle_K1(tau, dist) : hypheat::testing::oracle_K3(tau, dist);
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        sum += w * std::pow(std::sin(th), n - 1) * k;
    }
    // omega_0 = 2, omega_2 = 4 pi
    const double omega = n == 1 ? 2.0 : 4.0 * std::numbers::pi;
    return omega * std::pow(std::sinh(r), n) * sum * h;
}

}  // namespace

TEST_CASE("extinction time") {
    CHECK(extinction_time(2, 2.0) == doctest::Approx(0.66250).epsilon(1e-5));
    CHECK(extinction_time(3, 1.0) == doctest::Approx(std::log(std::cosh(1.0)) / 3.0));
    CHECK(sphere_radius(3, 1.5, 0.0) == doctest::Approx(1.5));
    CHECK_THROWS_AS(sphere_radius(1, 1.0, 1.0), ExtinctFlow);
}

TEST_CASE("radius solves the flow equation") {
    // r' = -n coth r
    const double h = 1e-6;
    for (int n : {1, 2, 3}) {
        const double time = 0.3 * extinction_time(n, 2.0);
        const double dr = (sphere_radius(n, 2.0, time + h) - sphere_radius(n, 2.0, time - h)) / (2.0 * h);
        const double r = sphere_radius(n, 2.0, time);
        CHECK(dr == doctest::Approx(-n / std::tanh(r)).epsilon(1e-8));
    }
}

TEST_CASE("RK4 tracks the exact radius") {
    Gen g(0x3c01);
    for (int k = 0; k < 50; ++k) {
        const int n = g.integer(1, 5);
        const double r0 = g.uniform(0.5, 3.0);
        const double time = g.uniform(0.05, 0.9) * extinction_time(n, r0);
        CAPTURE(n);
        CAPTURE(r0);
        CAPTURE(time);
        CHECK(std::abs(rk4_sphere_radius(n, r0, time, 1e-3) - sphere_radius(n, r0, time)) < 1e-8);
    }
}

TEST_CASE("centered offset reduces to the closed form") {
    for (int n : {1, 3, 5}) {
        for (double r : {0.3, 1.0, 2.5}) {
            for (double tau : {0.05, 0.5, 2.0}) {
                CAPTURE(n);
                CAPTURE(r);
                CAPTURE(tau);
                CHECK(rel_diff(weighted_volume_offset(n, r, tau, 0.0, 64), weighted_volume_centered(n, r, tau)) <
                      1e-10);
            }
        }
    }
}

TEST_CASE("offset volume against a trapezoid oracle") {
    for (int n : {1, 3}) {
        for (double d : {0.5, 1.0}) {
            for (double tau : {0.1, 0.6}) {
                const double r = 1.7;
                CAPTURE(n);
                CAPTURE(d);
                CAPTURE(tau);
                CHECK(rel_diff(weighted_volume_offset(n, r, tau, d, 256), oracle_offset(n, r, tau, d)) < 1e-9);
            }
        }
    }
}

TEST_CASE("offset quadrature is converged") {
    Gen g(0x3c02);
    for (int k = 0; k < 20; ++k) {
        const int n = g.odd(1, 7);
        const double r = g.uniform(0.3, 3.0);
        const double tau = g.log_uniform(0.05, 2.0);
        const double d = g.uniform(0.0, 1.5);
        CAPTURE(n);
        CAPTURE(r);
        CAPTURE(tau);
        CAPTURE(d);
        CHECK(std::abs(log_weighted_volume_offset(n, r, tau, d, 64) -
                       log_weighted_volume_offset(n, r, tau, d, 128)) < 1e-10);
    }
}

TEST_CASE("log forms agree with the plain values") {
    CHECK(std::exp(log_weighted_volume_centered(3, 1.2, 0.4)) ==
          doctest::Approx(weighted_volume_centered(3, 1.2, 0.4)).epsilon(1e-14));
    CHECK(std::exp(log_weighted_volume_offset(3, 1.2, 0.4, 0.7, 128)) ==
          doctest::Approx(weighted_volume_offset(3, 1.2, 0.4, 0.7, 128)).epsilon(1e-13));
}

TEST_CASE("sphere scans decrease") {
    struct Case {
        int n;
        double r0, t0;
    };
    for (const Case c : {Case{1, 1.0, 0.1}, Case{3, 2.0, 0.2}}) {
        for (double d : {0.0, 0.5, 1.0}) {
            const auto scan = monotonicity_scan(c.n, c.r0, c.t0, d, 200);
            CAPTURE(c.n);
            CAPTURE(d);
            REQUIRE(scan.samples.size() == 200);
            CHECK(scan.pass);
            CHECK(scan.max_log_slope < 0.0);
            for (std::size_t i = 0; i < scan.samples.size(); ++i) {
                CHECK(scan.samples[i].dF_estimate < 0.0);
                if (i > 0) CHECK(scan.samples[i].time > scan.samples[i - 1].time);
            }
            CHECK(scan.samples.back().time < scan.window_end);
        }
    }
}

TEST_CASE("scan window stops short of extinction") {
    const double ts = extinction_time(1, 1.0);
    const auto scan = monotonicity_scan(1, 1.0, ts, 0.0, 50, 1e-3);
    CHECK(scan.window_end == doctest::Approx(ts - 1e-3));
    CHECK(scan.pass);
    const auto late = monotonicity_scan(1, 1.0, 10.0, 0.5, 50);
    CHECK(late.window_end == doctest::Approx(ts - kScanEndGap));
    CHECK(late.pass);
}

TEST_CASE("totally geodesic plane keeps unit mass") {
    for (int n : {1, 3, 5, 7}) {
        for (double tau : {0.05, 0.5, 5.0}) {
            CAPTURE(n);
            CAPTURE(tau);
            CHECK(std::abs(geodesic_plane_functional(n, tau) - 1.0) < 1e-7);
        }
    }
}

TEST_CASE("csv export round-trips") {
    const auto scan = monotonicity_scan(3, 2.0, 0.2, 0.5, 12);
    const std::string csv = scan_to_csv(scan.samples);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "time,F,dF_estimate");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto& s = scan.samples.at(rows++);
        char* end = nullptr;
        const double time = std::strtod(line.c_str(), &end);
        const double F = std::strtod(end + 1, &end);
        const double dF = std::strtod(end + 1, &end);
        CHECK(time == s.time);
        CHECK(F == s.F);
        CHECK(dF == s.dF_estimate);
    }
    CHECK(rows == scan.samples.size());
}

TEST_CASE("flow errors") {
    CHECK_THROWS_AS(extinction_time(0, 1.0), UsageError);
    CHECK_THROWS_AS(extinction_time(1, 0.0), UsageError);
    CHECK_THROWS_AS(rk4_sphere_radius(1, 1.0, 1.0, 1e-3), ExtinctFlow);
    CHECK_THROWS_AS(monotonicity_scan(1, 1.0, 0.1, 0.0, 5), UsageError);
    CHECK_THROWS_AS(weighted_volume_offset(3, 1.0, 0.5, 0.5, 4), UsageError);
    CHECK_THROWS_AS(weighted_volume_offset(3, 1.0, 0.5, -0.5, 64), UsageError);
}
