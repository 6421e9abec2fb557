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

#include "hypheat/monotonicity.hpp"

#include "hypheat/errors.hpp"
#include "hypheat/kernel.hpp"
#include "hypheat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

namespace hypheat {

namespace {

void check_flow_args(int n, double r0) {
    if (n < 1) throw UsageError("sphere dimension n must be >= 1");
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw UsageError("initial radius must be > 0");
}

double log_cosh(double x) {
    return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

double log_sinh(double x) {
    if (x > 20.0) return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
    return std::log(std::sinh(x));
}

/// acosh(1 + x) without cancellation for small x.
double acosh1p(double x) { return std::log1p(x + std::sqrt(x * (x + 2.0))); }

}  // namespace

double extinction_time(int n, double r0) {
    check_flow_args(n, r0);
    return log_cosh(r0) / n;
}

double sphere_radius(int n, double r0, double time) {
    const double t_star = extinction_time(n, r0);
    if (!(time >= 0.0)) throw UsageError("flow time must be >= 0");
    if (time >= t_star) {
        throw ExtinctFlow("time " + std::to_string(time) + " is past extinction at " +
                          std::to_string(t_star));
    }
    if (time == 0.0) return r0;
    return acosh1p(std::expm1(log_cosh(r0) - n * time));
}

SphereFlowState sphere_state(int n, double r0, double time) {
    return {n, sphere_radius(n, r0, time), time};
}

double rk4_sphere_radius(int n, double r0, double time, double step) {
    const double t_star = extinction_time(n, r0);
    if (!(step > 0.0)) throw UsageError("RK4 step must be > 0");
    if (!(time >= 0.0)) throw UsageError("flow time must be >= 0");
    if (time >= t_star) throw ExtinctFlow("requested time is past extinction");

    auto rhs = [n](double r) { return -n / std::tanh(r); };
    double r = r0;
    double elapsed = 0.0;
    while (elapsed < time) {
        const double h = std::min(step, time - elapsed);
        const double k1 = rhs(r);
        const double k2 = rhs(r + 0.5 * h * k1);
        const double k3 = rhs(r + 0.5 * h * k2);
        const double k4 = rhs(r + h * k3);
        const double next = r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(next) || next < 1e-3) {
            throw ExtinctFlow("RK4 radius fell below 1e-3 before the requested time");
        }
        if (next > r) throw UsageError("RK4 step too large: radius increased");
        r = next;
        elapsed += h;
    }
    return r;
}

double log_weighted_volume_centered(int n, double r, double tau) {
    if (!(r > 0.0)) throw UsageError("sphere radius must be > 0");
    return log_sphere_area(n) + n * log_sinh(r) + log_kernel_value(n, tau, r);
}

double weighted_volume_centered(int n, double r, double tau) {
    return std::exp(log_weighted_volume_centered(n, r, tau));
}

double log_weighted_volume_offset(int n, double r, double tau, double d, int order) {
    if (order < 8) throw UsageError("quadrature order must be >= 8");
    if (!(r > 0.0)) throw UsageError("sphere radius must be > 0");
    if (!(d >= 0.0) || !std::isfinite(d)) throw UsageError("offset must be finite and >= 0");
    // K decreases in distance, so the nearest point sets the scale.
    const double log_peak = log_kernel_value(n, tau, std::abs(r - d));
    const double a = 2.0 * std::sinh(0.5 * (r - d));
    const double sr_sd = std::sinh(r) * std::sinh(d);
    auto integrand = [&](double theta) {
        // cosh rho - 1 = 2 sinh^2((r-d)/2) + 2 sinh r sinh d sin^2(theta/2)
        const double half = std::sin(0.5 * theta);
        const double rho = acosh1p(0.5 * a * a + 2.0 * sr_sd * half * half);
        double v = std::exp(log_kernel_value(n, tau, rho) - log_peak);
        if (n > 1) v *= std::pow(std::sin(theta), n - 1);
        return v;
    };
    const double integral = integrate_gauss_legendre(integrand, 0.0, std::numbers::pi, order);
    return log_sphere_area(n - 1) + n * log_sinh(r) + log_peak + std::log(integral);
}

double weighted_volume_offset(int n, double r, double tau, double d, int order) {
    return std::exp(log_weighted_volume_offset(n, r, tau, d, order));
}

ScanResult monotonicity_scan(int n, double r0, double t0, double d, int samples, double end_gap,
                             int order) {
    if (samples < 10) throw UsageError("a scan needs at least 10 samples");
    if (!(t0 > 0.0)) throw UsageError("t0 must be > 0");
    if (!(end_gap >= 0.0)) throw UsageError("end gap must be >= 0");
    const double t_star = extinction_time(n, r0);
    const double end = std::min(t0, t_star) - end_gap;
    if (!(end > 0.0)) throw UsageError("scan window is empty");

    ScanResult out;
    out.window_end = end;
    const double h = end / samples;
    out.samples.resize(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        auto& s = out.samples[static_cast<std::size_t>(i)];
        s.time = (i + 0.5) * h;
        const double r = sphere_radius(n, r0, s.time);
        const double tau = t0 - s.time;
        s.log_F = d == 0.0 ? log_weighted_volume_centered(n, r, tau)
                           : log_weighted_volume_offset(n, r, tau, d, order);
        s.F = std::exp(s.log_F);
    }

    out.pass = true;
    out.max_log_slope = -std::numeric_limits<double>::infinity();
    const auto last = static_cast<std::size_t>(samples - 1);
    for (std::size_t i = 0; i <= last; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i == last ? last : i + 1;
        const double span = (hi - lo) * h;
        auto& s = out.samples[i];
        s.dlogF_estimate = (out.samples[hi].log_F - out.samples[lo].log_F) / span;
        s.dF_estimate = (out.samples[hi].F - out.samples[lo].F) / span;
        out.max_log_slope = std::max(out.max_log_slope, s.dlogF_estimate);
        if (!(s.dlogF_estimate < 0.0)) out.pass = false;
        if (i < last && !(out.samples[i + 1].log_F < s.log_F)) out.pass = false;
    }
    return out;
}

double geodesic_plane_functional(int n, double tau) { return normalization(n, tau); }

std::string scan_to_csv(const std::vector<WeightedVolumeSample>& samples) {
    std::string out = "time,F,dF_estimate\n";
    char buf[96];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e\n", s.time, s.F, s.dF_estimate);
        out += buf;
    }
    return out;
}

}  // namespace hypheat
