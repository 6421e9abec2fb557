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

#ifndef HYPHEAT_RADIAL_BASIS_HPP
#define HYPHEAT_RADIAL_BASIS_HPP

// The ladder f_1 = rho / sinh(rho), f_{l+1} = -d f_l / d sigma with
// sigma = cosh(rho). Every f_l has the closed form
//
//     f_l = (p_l(sigma) * rho + q_l(sigma) * sinh(rho)) / sinh(rho)^(2l-1)
//
// with integer polynomials p_l (degree l-1) and q_l (degree l-2), and an even
// Maclaurin series in rho used near the removable singularity at rho = 0.

#include "hypheat/report.hpp"

#include <gmpxx.h>

#include <span>
#include <vector>

namespace hypheat {

inline constexpr int kDefaultLadderLevels = 64;
inline constexpr double kSeriesSwitchRho = 0.05;
/// Highest power of rho kept in the near-origin series (even terms only).
inline constexpr int kSeriesOrder = 12;

/// Polynomial in sigma with exact integer coefficients, low-to-high.
class SigmaPoly {
public:
    SigmaPoly() = default;
    explicit SigmaPoly(std::vector<mpz_class> coeffs);

    const std::vector<mpz_class>& coeffs() const { return coeffs_; }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    SigmaPoly derivative() const;

    friend SigmaPoly operator+(const SigmaPoly& a, const SigmaPoly& b);
    friend SigmaPoly operator-(const SigmaPoly& a, const SigmaPoly& b);
    friend SigmaPoly operator*(const SigmaPoly& a, const SigmaPoly& b);
    friend SigmaPoly operator*(long k, const SigmaPoly& a);
    friend bool operator==(const SigmaPoly& a, const SigmaPoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim();
    std::vector<mpz_class> coeffs_;
};

struct FlRep {
    int level = 1;
    SigmaPoly p;
    SigmaPoly q;
};

/// Maclaurin coefficients of f_l: coeffs[k] multiplies rho^(2k).
struct FlSeries {
    int level = 1;
    std::vector<mpq_class> coeffs;
};

/// Closed forms for l = 1..l_max via
///   p_{l+1} = (2l-1) sigma p_l - (sigma^2-1) p_l'
///   q_{l+1} = (2l-2) sigma q_l - (sigma^2-1) q_l' - p_l.
std::vector<FlRep> build_fl_table(int l_max);

/// Series for l = 1..l_max through rho^order, in exact rationals.
std::vector<FlSeries> build_fl_series(int l_max, int order = kSeriesOrder);

/// Immutable closed-form and series tables plus the numeric evaluators.
/// Safe to share across threads once constructed.
class RadialBasis {
public:
    explicit RadialBasis(int l_max = kDefaultLadderLevels);

    /// Process-wide table with kDefaultLadderLevels levels, built on first use.
    static const RadialBasis& shared();

    int levels() const { return static_cast<int>(reps_.size()); }
    const FlRep& rep(int l) const;
    const FlSeries& series(int l) const;

    /// f_l(rho), rho >= 0. Underflows to 0 for large l and rho; use log_fl there.
    double eval_fl(int l, double rho) const;
    double log_fl(int l, double rho) const;

    /// log f_1 .. log f_levels at one rho (index l-1). Shares the hyperbolic
    /// functions and working precision across levels.
    std::vector<double> log_ladder(int levels, double rho) const;

    /// Forced paths, regardless of the switch threshold.
    double log_fl_closed_form(int l, double rho) const;
    double eval_fl_series(int l, double rho) const;

private:
    void check_level(int l) const;

    std::vector<FlRep> reps_;
    std::vector<FlSeries> series_;
    std::vector<std::vector<double>> series_d_;
};

/// Checks f_{l+2} f_l - f_{l+1}^2 >= -tol_rel * f_{l+1}^2 on a rho grid.
/// The reported value is f_{l+2} f_l / f_{l+1}^2 - 1.
VerificationReport check_fl_logconvex(const RadialBasis& basis, int l,
                                      std::span<const double> rho_grid,
                                      double tol_rel = 1e-12);

nlohmann::json fl_table_to_json(std::span<const FlRep> table);

}  // namespace hypheat

#endif
