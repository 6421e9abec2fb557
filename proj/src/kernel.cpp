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

#include "hypheat/kernel.hpp"

#include "hypheat/errors.hpp"
#include "hypheat/quadrature.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace hypheat {

namespace {

void check_dimension(int n) {
    if (n < 1 || n % 2 == 0) {
        throw UsageError("kernel dimension n = " + std::to_string(n) +
                         " is not supported: only odd n >= 1 are built");
    }
    if (n > kMaxKernelDimension) {
        throw UsageError("kernel dimension n = " + std::to_string(n) + " exceeds the ladder budget (max " +
                         std::to_string(kMaxKernelDimension) + ")");
    }
}

void check_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("t must be finite and > 0");
}

void check_rho(double rho, bool strictly_positive) {
    if (!std::isfinite(rho) || rho < 0.0 || (strictly_positive && rho == 0.0)) {
        throw UsageError(strictly_positive ? "rho must be finite and > 0"
                                           : "rho must be finite and >= 0");
    }
}

double log_sinh(double x) {
    if (x > 20.0) return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
    return std::log(std::sinh(x));
}

/// log of (4 pi t)^(-n/2) exp(-(n-1)^2 t/4) exp(-rho^2/4t).
double log_prefactor(int n, double t, double rho) {
    const double nm1 = n - 1;
    return -0.5 * n * std::log(4.0 * std::numbers::pi * t) - 0.25 * nm1 * nm1 * t -
           rho * rho / (4.0 * t);
}

template <typename T>
const T& memoized(int key, T (*build)(int)) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const T>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[key];
    if (!slot) slot = std::make_unique<const T>(build(key));
    return *slot;
}

KernelTerms build_kernel_terms(int n) {
    const AlphaPoly& a = alpha_cached(n);
    const Expansion d1 = diff_sigma(a.expansion);
    const Expansion d2 = diff_sigma(d1);
    KernelTerms k;
    k.n = n;
    k.m = a.m;
    k.alpha = CompiledExpansion(a.expansion);
    k.d_sigma = CompiledExpansion(d1);
    k.d2_sigma = CompiledExpansion(d2);
    k.d_t = CompiledExpansion(diff_t(a.expansion));
    k.levels = std::max({2, k.d2_sigma.max_level(), k.alpha.max_level()});
    return k;
}

void require_levels(const LadderPoint& point, int levels) {
    if (static_cast<int>(point.log_f.size()) < levels) {
        throw LevelOutOfRange("ladder point carries " + std::to_string(point.log_f.size()) +
                              " levels, " + std::to_string(levels) + " needed");
    }
}

/// Signed sum of products kept in log form.
class ScaledSum {
public:
    void add(double sign, double log_abs) {
        if (!std::isfinite(log_abs)) return;
        terms_.push_back({sign, log_abs});
    }
    void add_product(double sign, const ScaledValue& a, const ScaledValue& b) {
        if (a.mantissa == 0.0 || b.mantissa == 0.0) return;
        const double s = sign * (a.mantissa < 0 ? -1.0 : 1.0) * (b.mantissa < 0 ? -1.0 : 1.0);
        add(s, a.log_abs() + b.log_abs());
    }
    /// (signed sum, sum of magnitudes), sharing one scale.
    std::pair<ScaledValue, ScaledValue> result() const {
        if (terms_.empty()) return {};
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& [s, l] : terms_) top = std::max(top, l);
        double sum = 0.0;
        double mag = 0.0;
        for (const auto& [s, l] : terms_) {
            const double v = std::exp(l - top);
            sum += s * v;
            mag += v;
        }
        return {{sum, top}, {mag, top}};
    }

private:
    std::vector<std::pair<double, double>> terms_;
};

}  // namespace

double KernelEval::K() const { return std::exp(logK); }

const KernelTerms& kernel_terms(int n) {
    check_dimension(n);
    return memoized<KernelTerms>(n, &build_kernel_terms);
}

LadderPoint make_ladder_point(double rho, int levels) {
    check_rho(rho, false);
    return {rho, RadialBasis::shared().log_ladder(levels, rho)};
}

KernelEval log_kernel(int n, double t, const LadderPoint& point) {
    const KernelTerms& terms = kernel_terms(n);
    check_time(t);
    check_rho(point.rho, false);
    require_levels(point, terms.levels);
    const double log_t = std::log(t);

    const ScaledValue a = terms.alpha.evaluate(point.log_f, log_t);
    const ScaledValue a1 = terms.d_sigma.evaluate(point.log_f, log_t);
    const ScaledValue a2 = terms.d2_sigma.evaluate(point.log_f, log_t);
    const ScaledValue at = terms.d_t.evaluate(point.log_f, log_t);
    if (!(a.mantissa > 0.0)) {
        throw InvariantViolation("alpha_" + std::to_string(n) + " evaluated non-positive");
    }

    KernelEval k;
    k.n = n;
    k.t = t;
    k.rho = point.rho;
    k.log_alpha = a.log_abs();
    k.logK = log_prefactor(n, t, point.rho) + k.log_alpha;
    k.alpha = a.value();
    k.dalpha_dsigma = a1.value();
    k.d2alpha_dsigma2 = a2.value();
    k.dalpha_dt = at.value();
    k.dsigma_ratio = a1.ratio(a);
    k.d2sigma_ratio = a2.ratio(a);
    k.dt_ratio = at.ratio(a);
    return k;
}

KernelEval log_kernel(int n, double t, double rho) {
    const KernelTerms& terms = kernel_terms(n);
    return log_kernel(n, t, make_ladder_point(rho, terms.levels));
}

double log_kernel_value(int n, double t, double rho) {
    const KernelTerms& terms = kernel_terms(n);
    check_time(t);
    check_rho(rho, false);
    if (terms.m == 0) return log_prefactor(n, t, rho);
    const auto log_f = RadialBasis::shared().log_ladder(terms.alpha.max_level(), rho);
    return log_prefactor(n, t, rho) + terms.alpha.evaluate(log_f, std::log(t)).log_abs();
}

// ---------------------------------------------------------------------------
// Superconvexity

MarginParts superconvexity_margin_parts(int n, double t, const LadderPoint& point) {
    check_rho(point.rho, true);
    const KernelEval k = log_kernel(n, t, point);
    MarginParts parts;
    // (rho coth rho - 1) / sinh^2 rho = (rho sigma - sinh rho) / sinh^3 rho = f_2
    parts.prefactor_part = std::exp(point.log_f[1]) / (2.0 * t);
    parts.alpha_part = k.d2sigma_ratio - k.dsigma_ratio * k.dsigma_ratio;
    parts.total = parts.prefactor_part + parts.alpha_part;
    return parts;
}

double superconvexity_margin(int n, double t, double rho) {
    check_rho(rho, true);
    return superconvexity_margin_parts(n, t, make_ladder_point(rho, kernel_terms(n).levels)).total;
}

double margin_rho_form(int n, double t, const LadderPoint& point) {
    check_rho(point.rho, true);
    const KernelEval k = log_kernel(n, t, point);
    using quad = __float128;
    const quad rho = point.rho;
    const quad tq = t;
    const quad s = sinhq(rho);
    const quad sigma = coshq(rho);
    const quad a1 = k.dsigma_ratio;
    const quad a2 = k.d2sigma_ratio;
    // d/drho = sinh(rho) d/dsigma, applied to log K once and twice.
    const quad d_log_k = -rho / (2 * tq) + s * a1;
    const quad d2_log_k = -1 / (2 * tq) + sigma * a1 + s * s * (a2 - a1 * a1);
    return static_cast<double>(d2_log_k - (sigma / s) * d_log_k);
}

double margin_rho_form(int n, double t, double rho) {
    check_rho(rho, true);
    return margin_rho_form(n, t, make_ladder_point(rho, kernel_terms(n).levels));
}

// ---------------------------------------------------------------------------
// Heat equation

double heat_residual(int n, double t, const LadderPoint& point) {
    check_rho(point.rho, true);
    const KernelEval k = log_kernel(n, t, point);
    using real = long double;
    const real rho = point.rho;
    const real tl = t;
    const real s = std::sinh(rho);
    const real sigma = std::cosh(rho);
    const real nm1 = n - 1;
    const real a1 = k.dsigma_ratio;
    const real a2 = k.d2sigma_ratio;

    const real dt_log_k = -n / (2 * tl) - nm1 * nm1 / 4 + rho * rho / (4 * tl * tl) + k.dt_ratio;
    const real g1 = -rho / (2 * tl) + s * a1;  // K_rho / K
    const real d2_log_k = -1 / (2 * tl) + sigma * a1 + s * s * (a2 - a1 * a1);
    const real laplacian = g1 * g1 + d2_log_k + nm1 * (sigma / s) * g1;  // Delta K / K
    const real residual = dt_log_k - laplacian;
    return static_cast<double>(std::abs(residual) /
                               (std::abs(dt_log_k) + std::abs(laplacian) + 1e-300L));
}

double heat_residual(int n, double t, double rho) {
    check_rho(rho, true);
    return heat_residual(n, t, make_ladder_point(rho, kernel_terms(n).levels));
}

// ---------------------------------------------------------------------------
// Normalization

double log_sphere_area(int k) {
    if (k < 0) throw UsageError("sphere dimension must be >= 0");
    const double h = 0.5 * (k + 1);
    return std::numbers::ln2 + h * std::log(std::numbers::pi) - std::lgamma(h);
}

namespace {

/// log of K_n(t, rho) omega_{n-1} sinh^{n-1}(rho).
double log_radial_density(int n, double t, double rho) {
    double v = log_kernel_value(n, t, rho) + log_sphere_area(n - 1);
    if (n > 1) v += (n - 1) * log_sinh(rho);
    return v;
}

double radial_integral(int n, double t, double lo, double hi, const QuadratureSpec& spec) {
    if (!(hi > lo)) return 0.0;
    auto f = [n, t](double rho) {
        if (rho <= 0.0) return n == 1 ? std::exp(log_radial_density(n, t, 0.0)) : 0.0;
        return std::exp(log_radial_density(n, t, rho));
    };
    // Split at the density peak so each panel sees a one-sided profile.
    const double peak = std::clamp((n - 1) * t + std::sqrt(2.0 * t), lo, hi);
    double total = 0.0;
    if (peak > lo) total += integrate_adaptive(f, lo, peak, spec.rel_tol, spec.max_depth, spec.tail_bound).value;
    if (hi > peak) total += integrate_adaptive(f, peak, hi, spec.rel_tol, spec.max_depth, spec.tail_bound).value;
    return total;
}

}  // namespace

double normalization_cutoff(int n, double t, double tail_bound) {
    check_dimension(n);
    check_time(t);
    // alpha_n(t, rho) <= alpha_n(t, 0) because every f_l decreases in rho.
    const double log_alpha0 = log_kernel(n, t, 0.0).log_alpha;
    const double log_tail = std::log(tail_bound);
    auto log_bound = [&](double rho) {
        double v = log_prefactor(n, t, rho) + log_alpha0 + log_sphere_area(n - 1);
        if (n > 1) v += (n - 1) * log_sinh(rho);
        return v;
    };
    double rho = std::max(1.0, 2.0 * (n - 1) * t + 1.0);
    for (int iter = 0; iter < 200; ++iter) {
        const bool decreasing = rho / (2.0 * t) > (n - 1) / std::tanh(rho);
        if (decreasing && log_bound(rho) < log_tail) return rho;
        rho *= 1.25;
    }
    throw QuadratureError("could not place the tail cutoff for n = " + std::to_string(n));
}

double normalization(int n, double t, const QuadratureSpec& spec) {
    check_dimension(n);
    check_time(t);
    return radial_integral(n, t, 0.0, normalization_cutoff(n, t, spec.tail_bound), spec);
}

double mass_beyond(int n, double t, double rho0, const QuadratureSpec& spec) {
    check_dimension(n);
    check_time(t);
    check_rho(rho0, false);
    const double hi = normalization_cutoff(n, t, spec.tail_bound);
    return radial_integral(n, t, rho0, std::max(hi, rho0), spec);
}

// ---------------------------------------------------------------------------
// Semigroup

double semigroup_check(double s, double t, double d01, double rel_tol) {
    check_time(s);
    check_time(t);
    check_rho(d01, false);
    const double log_target = log_kernel_value(3, s + t, d01);
    const double log_sinh_d01 = d01 > 0.0 ? log_sinh(d01) : 0.0;
    // The total is close to 1, so pieces far below rel_tol are irrelevant.
    const double floor = 1e-6 * rel_tol;

    // Integral over the sphere of radius rho about p0 of K_3(t, d(q, p1)),
    // parametrized by the distance d to p1 instead of the polar angle:
    // sinh d dd = sinh rho sinh d01 sin(theta) dtheta.
    auto shell = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        const double log_outer = log_kernel_value(3, s, rho) + std::log(2.0 * std::numbers::pi) +
                                 2.0 * log_sinh(rho) - log_target;
        if (d01 == 0.0) {
            return 2.0 * std::exp(log_outer + log_kernel_value(3, t, rho));
        }
        const double lo = std::abs(rho - d01);
        const double hi = rho + d01;
        const double log_jac = -log_sinh(rho) - log_sinh_d01;
        auto inner = [&](double d) {
            if (d <= 0.0) return 0.0;
            return std::exp(log_outer + log_jac + log_sinh(d) + log_kernel_value(3, t, d));
        };
        return integrate_adaptive(inner, lo, hi, rel_tol, 18, floor).value;
    };

    const double width = std::sqrt(s + t);
    const double mid = d01 + 4.0 * (s + t);
    const double hi = mid + 40.0 * width + 10.0;
    double total = integrate_adaptive(shell, 0.0, mid, rel_tol, 18, floor).value;
    total += integrate_adaptive(shell, mid, hi, rel_tol, 18, floor).value;
    return std::abs(total - 1.0);
}

// ---------------------------------------------------------------------------
// Proof intermediates

namespace {

struct ProofTerms {
    int m = 1;
    std::vector<CompiledExpansion> P, dP, d2P;
    int levels = 3;
};

ProofTerms build_proof_terms(int m) {
    const AlphaPoly& a = alpha_cached(2 * m + 1);
    ProofTerms pt;
    pt.m = m;
    for (int i = 0; i < m; ++i) {
        const Expansion p = a.expansion.t_part(i);
        const Expansion d1 = diff_sigma(p);
        pt.P.emplace_back(p);
        pt.dP.emplace_back(d1);
        pt.d2P.emplace_back(diff_sigma(d1));
    }
    pt.levels = m + 2;
    return pt;
}

}  // namespace

ProofIntermediates proof_intermediates(int m, double t, const LadderPoint& point) {
    if (m < 1) throw UsageError("proof intermediates need m >= 1");
    check_dimension(2 * m + 1);
    check_time(t);
    check_rho(point.rho, true);
    const ProofTerms& pt = memoized<ProofTerms>(m, &build_proof_terms);
    require_levels(point, pt.levels);
    const double log_t = std::log(t);

    std::vector<ScaledValue> P, dP, d2P;
    for (int i = 0; i < m; ++i) {
        const auto k = static_cast<std::size_t>(i);
        P.push_back(pt.P[k].evaluate(point.log_f, 0.0));
        dP.push_back(pt.dP[k].evaluate(point.log_f, 0.0));
        d2P.push_back(pt.d2P[k].evaluate(point.log_f, 0.0));
    }

    ProofIntermediates out;
    out.m = m;
    for (int i = 0; i <= 2 * m - 2; ++i) {
        ScaledSum sum;
        for (int a = std::max(0, i - (m - 1)); a <= std::min(i, m - 1); ++a) {
            const auto ka = static_cast<std::size_t>(a);
            const auto kb = static_cast<std::size_t>(i - a);
            sum.add_product(1.0, P[ka], d2P[kb]);
            sum.add_product(-1.0, dP[ka], dP[kb]);
        }
        const auto [value, magnitude] = sum.result();
        out.B.push_back(value);
        out.B_normalized.push_back(magnitude.mantissa > 0.0 ? value.mantissa / magnitude.mantissa : 0.0);
    }

    const KernelTerms& kt = kernel_terms(2 * m + 1);
    const ScaledValue a0 = kt.alpha.evaluate(point.log_f, log_t);
    const ScaledValue a1 = kt.d_sigma.evaluate(point.log_f, log_t);
    const ScaledValue a2 = kt.d2_sigma.evaluate(point.log_f, log_t);
    ScaledSum a_sum;
    a_sum.add_product(1.0, a2, a0);
    a_sum.add_product(-1.0, a1, a1);
    const auto [a_value, a_mag] = a_sum.result();
    out.A = a_value;
    out.A_normalized = a_mag.mantissa > 0.0 ? a_value.mantissa / a_mag.mantissa : 0.0;
    return out;
}

ProofIntermediates proof_intermediates(int m, double t, double rho) {
    check_rho(rho, true);
    return proof_intermediates(m, t, make_ladder_point(rho, m + 2));
}

}  // namespace hypheat
