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

#ifndef HYPHEAT_KERNEL_HPP
#define HYPHEAT_KERNEL_HPP

// Odd-dimensional hyperbolic heat kernels in log form,
//
//     K_n(t, rho) = (4 pi t)^(-n/2) exp(-(n-1)^2 t / 4) exp(-rho^2 / 4t) alpha_n(t, rho),
//
// with every sigma- and t-derivative taken from exact expansions of alpha_n.

#include "hypheat/alpha_engine.hpp"

#include <span>
#include <vector>

namespace hypheat {

/// Largest odd n whose alpha can be differentiated twice in sigma.
inline constexpr int kMaxKernelDimension = 2 * (kDefaultLadderLevels - 2) + 1;

struct KernelEval {
    int n = 1;
    double t = 0.0;
    double rho = 0.0;
    double logK = 0.0;
    double alpha = 0.0;
    double dalpha_dsigma = 0.0;
    double d2alpha_dsigma2 = 0.0;
    double dalpha_dt = 0.0;

    // Scale-free forms; finite even where the raw fields under- or overflow.
    double log_alpha = 0.0;
    double dsigma_ratio = 0.0;   // alpha_sigma / alpha
    double d2sigma_ratio = 0.0;  // alpha_sigma_sigma / alpha
    double dt_ratio = 0.0;       // alpha_t / alpha

    double K() const;
};

/// alpha_n and its derivatives compiled for evaluation; memoized per n.
struct KernelTerms {
    int n = 1;
    int m = 0;
    CompiledExpansion alpha;
    CompiledExpansion d_sigma;
    CompiledExpansion d2_sigma;
    CompiledExpansion d_t;
    /// Ladder levels needed for all four (at least 2, for f_2 in the margin).
    int levels = 2;
};

const KernelTerms& kernel_terms(int n);

/// log f_1 .. log f_levels at one rho, shared across a t sweep.
struct LadderPoint {
    double rho = 0.0;
    std::vector<double> log_f;
};

LadderPoint make_ladder_point(double rho, int levels);

KernelEval log_kernel(int n, double t, double rho);
KernelEval log_kernel(int n, double t, const LadderPoint& point);

/// log K_n only (no derivatives); cheaper, for quadrature.
double log_kernel_value(int n, double t, double rho);

struct MarginParts {
    double prefactor_part = 0.0;  // (rho coth rho - 1) / (2t sinh^2 rho)
    double alpha_part = 0.0;      // d^2/dsigma^2 log alpha
    double total = 0.0;
};

/// d^2/dsigma^2 log K_n, rho > 0.
double superconvexity_margin(int n, double t, double rho);
MarginParts superconvexity_margin_parts(int n, double t, const LadderPoint& point);

/// d^2/drho^2 log K_n - coth(rho) d/drho log K_n, assembled through the rho
/// chain rule in quad precision (independent of the sigma route above).
double margin_rho_form(int n, double t, double rho);
double margin_rho_form(int n, double t, const LadderPoint& point);

/// |K_t - (K_rhorho + (n-1) coth(rho) K_rho)| / (|K_t| + |Delta K| + 1e-300),
/// all terms divided through by K.
double heat_residual(int n, double t, double rho);
double heat_residual(int n, double t, const LadderPoint& point);

struct QuadratureSpec {
    double rel_tol = 1e-13;
    /// Tail cut: integrand upper bound below this beyond rho_max.
    double tail_bound = 1e-18;
    unsigned max_depth = 18;
};

/// log of omega_{k} = 2 pi^{(k+1)/2} / Gamma((k+1)/2), the unit k-sphere area.
double log_sphere_area(int k);

/// Integral of K_n(t, rho) omega_{n-1} sinh^{n-1}(rho) over rho in [0, inf).
double normalization(int n, double t, const QuadratureSpec& spec = {});
/// Same integrand over [rho0, inf).
double mass_beyond(int n, double t, double rho0, const QuadratureSpec& spec = {});
/// Upper integration limit used by normalization for (n, t).
double normalization_cutoff(int n, double t, double tail_bound);

/// Chapman-Kolmogorov on H^3: relative error between the convolution of
/// K_3(s, .) and K_3(t, .) and K_3(s + t, d01).
double semigroup_check(double s, double t, double d01, double rel_tol = 1e-10);

struct ProofIntermediates {
    int m = 1;
    /// A = alpha'' alpha - alpha'^2 (sigma derivatives).
    ScaledValue A;
    /// A / (|alpha'' alpha| + alpha'^2).
    double A_normalized = 0.0;
    /// B_{m,i} = sum_{a+b=i} P_a P_b'' - P_a' P_b', i = 0..2m-2.
    std::vector<ScaledValue> B;
    /// B_{m,i} / sum_{a+b=i} (|P_a P_b''| + |P_a' P_b'|).
    std::vector<double> B_normalized;
};

ProofIntermediates proof_intermediates(int m, double t, double rho);
ProofIntermediates proof_intermediates(int m, double t, const LadderPoint& point);

}  // namespace hypheat

#endif
