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

#include "hypheat/verification.hpp"

#include "hypheat/alpha_engine.hpp"
#include "hypheat/errors.hpp"
#include "hypheat/kernel.hpp"
#include "hypheat/monotonicity.hpp"
#include "hypheat/parallel.hpp"
#include "hypheat/radial_basis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace hypheat {

std::vector<double> GridOptions::t_values() const {
    return log_spaced ? log_grid(t_min, t_max, t_count) : linear_grid(t_min, t_max, t_count);
}

std::vector<double> GridOptions::rho_values() const {
    return log_spaced ? log_grid(rho_min, rho_max, rho_count)
                      : linear_grid(rho_min, rho_max, rho_count);
}

std::vector<double> ladder_rho_grid() { return log_grid(1e-4, 40.0, 60); }

namespace {

void check_odd_max(int n_max) {
    if (n_max < 1 || n_max % 2 == 0) throw UsageError("n-max must be odd and >= 1");
}

GridSpec kernel_grid(int n_lo, int n_hi, const GridOptions& g) {
    const std::string spacing = g.log_spaced ? "log" : "linear";
    return {{{"n", static_cast<double>(n_lo), static_cast<double>(n_hi), (n_hi - n_lo) / 2 + 1, "odd"},
             {"t", g.t_min, g.t_max, g.t_count, spacing},
             {"rho", g.rho_min, g.rho_max, g.rho_count, spacing}}};
}

Location ntr(int n, double t, double rho) {
    return {{{"n", static_cast<double>(n)}, {"t", t}, {"rho", rho}}};
}

/// Runs body(builder, rho_index) for every rho, one builder per worker, and merges.
VerificationReport sweep_rho(const ReportBuilder& proto, std::size_t rho_count,
                             const std::function<void(ReportBuilder&, std::size_t)>& body) {
    std::vector<ReportBuilder> partial(static_cast<std::size_t>(sweep_threads()), proto);
    parallel_for(rho_count, [&](int worker, std::size_t i) {
        body(partial[static_cast<std::size_t>(worker)], i);
    });
    ReportBuilder total = proto;
    for (const auto& p : partial) total.merge(p);
    return total.finish();
}

}  // namespace

VerificationReport verify_superconvexity(int n_max, const GridOptions& grid, double tol,
                                         double strict_rho) {
    check_odd_max(n_max);
    const auto ts = grid.t_values();
    const auto rhos = grid.rho_values();
    const int levels = kernel_terms(n_max).levels;
    for (int n = 1; n <= n_max; n += 2) kernel_terms(n);
    ReportBuilder proto("superconvexity", kernel_grid(1, n_max, grid),
                        ReportBuilder::Kind::LowerBound, tol);
    return sweep_rho(proto, rhos.size(), [&](ReportBuilder& rb, std::size_t i) {
        const LadderPoint point = make_ladder_point(rhos[i], levels);
        for (int n = 1; n <= n_max; n += 2) {
            for (double t : ts) {
                const MarginParts p = superconvexity_margin_parts(n, t, point);
                const double scale = std::abs(p.prefactor_part) + std::abs(p.alpha_part);
                rb.observe(p.total / scale, ntr(n, t, point.rho));
                if (point.rho <= strict_rho && !(p.total > 0.0)) rb.mark_failure(ntr(n, t, point.rho));
            }
        }
    });
}

VerificationReport verify_margin_equivalence(int n_max, const GridOptions& grid, double tol) {
    check_odd_max(n_max);
    const auto ts = grid.t_values();
    const auto rhos = grid.rho_values();
    const int levels = kernel_terms(n_max).levels;
    for (int n = 1; n <= n_max; n += 2) kernel_terms(n);
    ReportBuilder proto("margin_equivalence", kernel_grid(1, n_max, grid),
                        ReportBuilder::Kind::UpperBound, tol);
    return sweep_rho(proto, rhos.size(), [&](ReportBuilder& rb, std::size_t i) {
        const LadderPoint point = make_ladder_point(rhos[i], levels);
        const double s = std::sinh(point.rho);
        for (int n = 1; n <= n_max; n += 2) {
            for (double t : ts) {
                const double sigma_form = superconvexity_margin_parts(n, t, point).total;
                const double rho_form = margin_rho_form(n, t, point);
                rb.observe(std::abs(rho_form - s * s * sigma_form) / std::abs(rho_form),
                           ntr(n, t, point.rho));
            }
        }
    });
}

VerificationReport verify_heat(int n_max, const GridOptions& grid, double tol) {
    check_odd_max(n_max);
    const auto ts = grid.t_values();
    const auto rhos = grid.rho_values();
    const int levels = kernel_terms(n_max).levels;
    for (int n = 1; n <= n_max; n += 2) kernel_terms(n);
    ReportBuilder proto("heat_residual", kernel_grid(1, n_max, grid),
                        ReportBuilder::Kind::UpperBound, tol);
    return sweep_rho(proto, rhos.size(), [&](ReportBuilder& rb, std::size_t i) {
        const LadderPoint point = make_ladder_point(rhos[i], levels);
        for (int n = 1; n <= n_max; n += 2) {
            for (double t : ts) rb.observe(heat_residual(n, t, point), ntr(n, t, point.rho));
        }
    });
}

VerificationReport verify_normalization(const std::vector<int>& ns, const std::vector<double>& ts,
                                        double tol) {
    GridSpec grid{{{"n", static_cast<double>(*std::min_element(ns.begin(), ns.end())),
                    static_cast<double>(*std::max_element(ns.begin(), ns.end())),
                    static_cast<int>(ns.size()), "list"},
                   {"t", *std::min_element(ts.begin(), ts.end()),
                    *std::max_element(ts.begin(), ts.end()), static_cast<int>(ts.size()), "list"}}};
    ReportBuilder rb("normalization", grid, ReportBuilder::Kind::UpperBound, tol);
    for (int n : ns) {
        for (double t : ts) {
            rb.observe(std::abs(normalization(n, t) - 1.0),
                       {{{"n", static_cast<double>(n)}, {"t", t}}});
        }
    }
    return rb.finish();
}

VerificationReport verify_plane_equality(const std::vector<int>& ns, const std::vector<double>& taus,
                                         double tol) {
    GridSpec grid{{{"n", static_cast<double>(*std::min_element(ns.begin(), ns.end())),
                    static_cast<double>(*std::max_element(ns.begin(), ns.end())),
                    static_cast<int>(ns.size()), "list"},
                   {"tau", *std::min_element(taus.begin(), taus.end()),
                    *std::max_element(taus.begin(), taus.end()), static_cast<int>(taus.size()),
                    "list"}}};
    ReportBuilder rb("geodesic_plane_equality", grid, ReportBuilder::Kind::UpperBound, tol);
    for (int n : ns) {
        for (double tau : taus) {
            rb.observe(std::abs(geodesic_plane_functional(n, tau) - 1.0),
                       {{{"n", static_cast<double>(n)}, {"tau", tau}}});
        }
    }
    return rb.finish();
}

VerificationReport verify_ladder(int l_max, const std::vector<double>& rho_grid) {
    const auto& basis = RadialBasis::shared();
    if (l_max < 1 || l_max > basis.levels()) throw UsageError("l-max outside the ladder table");
    GridSpec grid{{{"l", 1.0, static_cast<double>(l_max), l_max, "linear"},
                   {"rho", rho_grid.front(), rho_grid.back(), static_cast<int>(rho_grid.size()),
                    "list"}}};
    ReportBuilder rb("ladder_positive_decreasing", grid, ReportBuilder::Kind::UpperBound, 0.0);
    std::vector<std::vector<double>> logs;
    for (double rho : rho_grid) logs.push_back(basis.log_ladder(l_max, rho));
    for (int l = 1; l <= l_max; ++l) {
        const auto k = static_cast<std::size_t>(l - 1);
        for (std::size_t i = 0; i < rho_grid.size(); ++i) {
            const Location loc{{{"l", static_cast<double>(l)}, {"rho", rho_grid[i]}}};
            // A finite log is a strictly positive value.
            if (!std::isfinite(logs[i][k])) rb.mark_failure(loc);
            if (i + 1 == rho_grid.size()) continue;
            const double step = logs[i + 1][k] - logs[i][k];
            rb.observe(step, loc);
            if (!(step < 0.0)) rb.mark_failure(loc);
        }
    }
    return rb.finish();
}

VerificationReport verify_yuzhao(int l_max, const std::vector<double>& rho_grid, double tol) {
    const auto& basis = RadialBasis::shared();
    if (l_max < 1 || l_max + 2 > basis.levels()) throw UsageError("l-max outside the ladder table");
    GridSpec grid{{{"l", 1.0, static_cast<double>(l_max), l_max, "linear"},
                   {"rho", rho_grid.front(), rho_grid.back(), static_cast<int>(rho_grid.size()),
                    "list"}}};
    ReportBuilder rb("yuzhao_logconvexity", grid, ReportBuilder::Kind::LowerBound, tol);
    for (double rho : rho_grid) {
        const auto lf = basis.log_ladder(l_max + 2, rho);
        for (int l = 1; l <= l_max; ++l) {
            const auto i = static_cast<std::size_t>(l - 1);
            rb.observe(std::expm1(lf[i + 2] + lf[i] - 2.0 * lf[i + 1]),
                       {{{"l", static_cast<double>(l)}, {"rho", rho}}});
        }
    }
    return rb.finish();
}

VerificationReport verify_alpha_structure(int m_max) {
    if (m_max < 0) throw UsageError("m-max must be >= 0");
    GridSpec grid{{{"m", 0.0, static_cast<double>(m_max), m_max + 1, "linear"}}};
    ReportBuilder rb("alpha_structure", grid, ReportBuilder::Kind::LowerBound, 0.0);
    for (int m = 0; m <= m_max; ++m) {
        const VerificationReport r = structure_check(alpha_cached(2 * m + 1));
        rb.observe(r.worst_value, r.worst_location);
        if (!r.pass) rb.mark_failure(r.worst_location);
    }
    return rb.finish();
}

VerificationReport verify_proof_intermediates(int m_max, const GridOptions& grid, double tol) {
    if (m_max < 1) throw UsageError("m-max must be >= 1");
    const auto ts = grid.t_values();
    const auto rhos = grid.rho_values();
    for (int m = 1; m <= m_max; ++m) proof_intermediates(m, 1.0, 1.0);
    GridSpec spec = kernel_grid(3, 2 * m_max + 1, grid);
    ReportBuilder proto("proof_intermediates", spec, ReportBuilder::Kind::LowerBound, tol);
    return sweep_rho(proto, rhos.size(), [&](ReportBuilder& rb, std::size_t i) {
        const LadderPoint point = make_ladder_point(rhos[i], m_max + 2);
        for (int m = 1; m <= m_max; ++m) {
            for (std::size_t k = 0; k < ts.size(); ++k) {
                const ProofIntermediates p = proof_intermediates(m, ts[k], point);
                rb.observe(p.A_normalized,
                           {{{"m", static_cast<double>(m)}, {"t", ts[k]}, {"rho", point.rho}}});
                if (k != 0) continue;
                // B_{m,i} does not depend on t.
                for (std::size_t j = 0; j < p.B_normalized.size(); ++j) {
                    rb.observe(p.B_normalized[j], {{{"m", static_cast<double>(m)},
                                                    {"i", static_cast<double>(j)},
                                                    {"rho", point.rho}}});
                }
            }
        }
    });
}

std::vector<FlowCase> default_flow_cases() {
    std::vector<FlowCase> cases;
    for (double d : {0.0, 0.5, 1.0}) {
        cases.push_back({1, 1.0, 0.1, d});
        cases.push_back({3, 2.0, 0.2, d});
    }
    return cases;
}

VerificationReport verify_mcf(const std::vector<FlowCase>& cases, int samples, double rk4_tol) {
    GridSpec grid{{{"case", 0.0, static_cast<double>(cases.size() - 1),
                    static_cast<int>(cases.size()), "list"},
                   {"sample", 0.0, static_cast<double>(samples - 1), samples, "linear"}}};
    ReportBuilder rb("mcf_monotonicity", grid, ReportBuilder::Kind::UpperBound, 0.0);
    for (const auto& c : cases) {
        const ScanResult scan = monotonicity_scan(c.n, c.r0, c.t0, c.d, samples);
        const Location loc{{{"n", static_cast<double>(c.n)}, {"r0", c.r0}, {"t0", c.t0}, {"d", c.d}}};
        rb.observe(scan.max_log_slope, loc);
        if (!scan.pass) rb.mark_failure(loc);

        // Closed-form radius against RK4 at three points of the window.
        for (double frac : {0.25, 0.5, 1.0}) {
            const double time = frac * scan.window_end;
            const double exact = sphere_radius(c.n, c.r0, time);
            const double rk4 = rk4_sphere_radius(c.n, c.r0, time, 1e-4);
            if (!(std::abs(exact - rk4) <= rk4_tol)) {
                rb.mark_failure({{{"n", static_cast<double>(c.n)}, {"r0", c.r0}, {"time", time}}});
            }
        }
    }
    return rb.finish();
}

std::vector<SemigroupCase> default_semigroup_cases() {
    return {{0.5, 0.5, 0.0}, {0.3, 0.7, 2.0}, {1.0, 1.0, 5.0}};
}

VerificationReport verify_semigroup(const std::vector<SemigroupCase>& cases, double tol) {
    GridSpec grid{{{"case", 0.0, static_cast<double>(cases.size() - 1),
                    static_cast<int>(cases.size()), "list"}}};
    ReportBuilder rb("semigroup", grid, ReportBuilder::Kind::UpperBound, tol);
    for (const auto& c : cases) {
        rb.observe(semigroup_check(c.s, c.t, c.d01), {{{"s", c.s}, {"t", c.t}, {"d01", c.d01}}});
    }
    return rb.finish();
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "superconvexity", "equivalence", "heat",   "normalization",       "plane", "ladder",
        "yuzhao",         "alpha-structure", "proof-intermediates", "mcf", "semigroup"};
    return names;
}

VerificationReport run_suite(const std::string& name, const SuiteOptions& o) {
    auto tol = [&](double fallback) { return o.tolerance.value_or(fallback); };
    auto index = [&](int fallback) { return o.max_index.value_or(fallback); };
    if (name == "superconvexity") {
        return verify_superconvexity(index(defaults::kSuperconvexityMaxN), o.grid,
                                     tol(defaults::kSignSlack));
    }
    if (name == "equivalence") {
        return verify_margin_equivalence(index(defaults::kSuperconvexityMaxN), o.grid,
                                         tol(defaults::kEquivalenceTol));
    }
    if (name == "heat") return verify_heat(index(defaults::kHeatMaxN), o.grid, tol(defaults::kHeatTol));
    if (name == "normalization") {
        std::vector<int> ns;
        for (int n = 1; n <= index(9); n += 2) ns.push_back(n);
        return verify_normalization(ns, {0.01, 0.1, 1.0, 10.0}, tol(defaults::kNormalizationTol));
    }
    if (name == "plane") {
        std::vector<int> ns;
        for (int n = 1; n <= index(7); n += 2) ns.push_back(n);
        return verify_plane_equality(ns, {0.05, 0.5, 5.0}, tol(defaults::kPlaneTol));
    }
    if (name == "ladder") return verify_ladder(index(defaults::kLadderMaxLevel), ladder_rho_grid());
    if (name == "yuzhao") {
        return verify_yuzhao(index(defaults::kYuZhaoMaxLevel), ladder_rho_grid(),
                             tol(defaults::kSignSlack));
    }
    if (name == "alpha-structure") return verify_alpha_structure(index(defaults::kAlphaStructureMaxM));
    if (name == "proof-intermediates") {
        return verify_proof_intermediates(index(defaults::kProofMaxM), o.grid,
                                          tol(defaults::kSignSlack));
    }
    if (name == "mcf") return verify_mcf(default_flow_cases(), 200, tol(defaults::kRk4Tol));
    if (name == "semigroup") {
        return verify_semigroup(default_semigroup_cases(), tol(defaults::kSemigroupTol));
    }
    throw UsageError("unknown verification suite '" + name + "'");
}

}  // namespace hypheat
