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

#ifndef HYPHEAT_VERIFICATION_HPP
#define HYPHEAT_VERIFICATION_HPP

// Grid sweeps that turn the kernel, ladder and flow properties into
// VerificationReports. Sweeps run over parallel_for and merge per-worker
// builders, so results do not depend on HYPHEAT_THREADS.

#include "hypheat/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypheat {

struct GridOptions {
    double t_min = 1e-3;
    double t_max = 1e2;
    int t_count = 25;
    double rho_min = 1e-3;
    double rho_max = 30.0;
    int rho_count = 40;
    bool log_spaced = true;

    std::vector<double> t_values() const;
    std::vector<double> rho_values() const;
};

namespace defaults {
inline constexpr int kSuperconvexityMaxN = 31;
inline constexpr int kHeatMaxN = 15;
inline constexpr int kLadderMaxLevel = 40;
inline constexpr int kYuZhaoMaxLevel = 20;
inline constexpr int kAlphaStructureMaxM = 25;
inline constexpr int kProofMaxM = 12;
inline constexpr double kSignSlack = 1e-12;
inline constexpr double kEquivalenceTol = 1e-12;
inline constexpr double kHeatTol = 1e-8;
inline constexpr double kNormalizationTol = 1e-8;
inline constexpr double kPlaneTol = 1e-7;
inline constexpr double kRk4Tol = 1e-8;
inline constexpr double kSemigroupTol = 1e-6;
/// Margins must be strictly positive (no slack) for rho up to this value.
inline constexpr double kStrictRho = 10.0;
}  // namespace defaults

/// Margin normalised by |prefactor part| + |alpha part|; LowerBound.
VerificationReport verify_superconvexity(int n_max, const GridOptions& grid,
                                         double tol = defaults::kSignSlack,
                                         double strict_rho = defaults::kStrictRho);
/// |rho form - sinh^2 rho * margin| / |rho form|; UpperBound.
VerificationReport verify_margin_equivalence(int n_max, const GridOptions& grid,
                                             double tol = defaults::kEquivalenceTol);
VerificationReport verify_heat(int n_max, const GridOptions& grid, double tol = defaults::kHeatTol);
/// |mass - 1| for every (n, t) pair; UpperBound.
VerificationReport verify_normalization(const std::vector<int>& ns, const std::vector<double>& ts,
                                        double tol = defaults::kNormalizationTol);
/// |geodesic plane functional - 1| across tau; UpperBound.
VerificationReport verify_plane_equality(const std::vector<int>& ns, const std::vector<double>& taus,
                                         double tol = defaults::kPlaneTol);
/// f_l positive and strictly decreasing along the rho grid for l <= l_max.
/// worst_value is the largest log f_l(rho_{i+1}) - log f_l(rho_i).
VerificationReport verify_ladder(int l_max, const std::vector<double>& rho_grid);
VerificationReport verify_yuzhao(int l_max, const std::vector<double>& rho_grid,
                                 double tol = defaults::kSignSlack);
VerificationReport verify_alpha_structure(int m_max);
/// A_normalized and every B_normalized; LowerBound.
VerificationReport verify_proof_intermediates(int m_max, const GridOptions& grid,
                                              double tol = defaults::kSignSlack);

struct FlowCase {
    int n;
    double r0;
    double t0;
    double d;
};

/// Sphere scans (max d log F/dt, must be < 0) plus the RK4 radius cross-check.
VerificationReport verify_mcf(const std::vector<FlowCase>& cases, int samples,
                              double rk4_tol = defaults::kRk4Tol);
std::vector<FlowCase> default_flow_cases();

struct SemigroupCase {
    double s;
    double t;
    double d01;
};
VerificationReport verify_semigroup(const std::vector<SemigroupCase>& cases,
                                    double tol = defaults::kSemigroupTol);
std::vector<SemigroupCase> default_semigroup_cases();

/// The 60-point log grid on [1e-4, 40] used for ladder properties.
std::vector<double> ladder_rho_grid();

struct SuiteOptions {
    /// Largest n (kernel suites), l (ladder suites) or m (alpha suites).
    std::optional<int> max_index;
    GridOptions grid;
    std::optional<double> tolerance;
};

/// superconvexity, equivalence, heat, normalization, plane, ladder, yuzhao,
/// alpha-structure, proof-intermediates, mcf, semigroup.
const std::vector<std::string>& suite_names();
VerificationReport run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace hypheat

#endif
