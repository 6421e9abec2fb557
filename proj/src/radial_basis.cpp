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

#include "hypheat/radial_basis.hpp"

#include "hypheat/errors.hpp"
#include "mp_real.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace hypheat {

// ---------------------------------------------------------------------------
// SigmaPoly

SigmaPoly::SigmaPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void SigmaPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

SigmaPoly SigmaPoly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<mpz_class> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
    return SigmaPoly(std::move(d));
}

SigmaPoly operator+(const SigmaPoly& a, const SigmaPoly& b) {
    std::vector<mpz_class> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
    return SigmaPoly(std::move(c));
}

SigmaPoly operator-(const SigmaPoly& a, const SigmaPoly& b) { return a + (-1L) * b; }

SigmaPoly operator*(const SigmaPoly& a, const SigmaPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return SigmaPoly(std::move(c));
}

SigmaPoly operator*(long k, const SigmaPoly& a) {
    std::vector<mpz_class> c(a.coeffs_);
    for (auto& x : c) x *= k;
    return SigmaPoly(std::move(c));
}

// ---------------------------------------------------------------------------
// Table construction

std::vector<FlRep> build_fl_table(int l_max) {
    if (l_max < 1) throw UsageError("build_fl_table: l_max must be >= 1");
    const SigmaPoly sigma({0, 1});
    const SigmaPoly sigma2_minus_1({-1, 0, 1});

    std::vector<FlRep> table;
    table.reserve(static_cast<std::size_t>(l_max));
    table.push_back({1, SigmaPoly({1}), SigmaPoly()});
    for (int l = 1; l < l_max; ++l) {
        const FlRep& cur = table.back();
        FlRep next;
        next.level = l + 1;
        next.p = (2L * l - 1) * (sigma * cur.p) - sigma2_minus_1 * cur.p.derivative();
        next.q = (2L * l - 2) * (sigma * cur.q) - sigma2_minus_1 * cur.q.derivative() - cur.p;
        table.push_back(std::move(next));
    }
    return table;
}

namespace {

// Truncated power series in x = rho^2 with rational coefficients.
using Series = std::vector<mpq_class>;

Series multiply(const Series& a, const Series& b, std::size_t terms) {
    Series c(std::min(terms, a.size() + b.size() - 1));
    for (std::size_t i = 0; i < a.size() && i < c.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < c.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

}  // namespace

std::vector<FlSeries> build_fl_series(int l_max, int order) {
    if (l_max < 1) throw UsageError("build_fl_series: l_max must be >= 1");
    if (order < 0 || order % 2 != 0) throw UsageError("build_fl_series: order must be even");
    const std::size_t kept = static_cast<std::size_t>(order / 2 + 1);
    // Each ladder step consumes one x-power, so f_1 needs l_max - 1 extra.
    const std::size_t terms = kept + static_cast<std::size_t>(l_max - 1);

    // sinh(rho)/rho = sum x^k / (2k+1)!, inverted term by term.
    Series shc(terms);
    mpz_class fact = 1;
    for (std::size_t k = 0; k < terms; ++k) {
        if (k > 0) fact *= static_cast<unsigned long>((2 * k) * (2 * k + 1));
        shc[k] = mpq_class(1, 1) / mpq_class(fact);
    }
    Series f1(terms);
    f1[0] = 1;
    for (std::size_t k = 1; k < terms; ++k) {
        mpq_class acc = 0;
        for (std::size_t j = 1; j <= k; ++j) acc += shc[j] * f1[k - j];
        f1[k] = -acc;
    }

    // f_{l+1} = -(1/sinh rho) d f_l/d rho = -(sum_k 2(k+1) c_{k+1} x^k) * (rho/sinh rho)
    std::vector<FlSeries> out;
    out.reserve(static_cast<std::size_t>(l_max));
    Series cur = f1;
    for (int l = 1; l <= l_max; ++l) {
        FlSeries s;
        s.level = l;
        s.coeffs.assign(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(kept));
        out.push_back(std::move(s));
        if (l == l_max) break;
        Series deriv(cur.size() - 1);
        for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
            deriv[k] = -mpq_class(static_cast<long>(2 * (k + 1))) * cur[k + 1];
        }
        cur = multiply(deriv, f1, deriv.size());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numeric evaluation

namespace {

double log_sinh(double rho) {
    if (rho > 20.0) return rho + std::log1p(-std::exp(-2.0 * rho)) - std::log(2.0);
    return std::log(std::sinh(rho));
}

double log_f1_direct(double rho) { return std::log(rho) - log_sinh(rho); }

/// Horner evaluation of poly at x, also of sum |c_k| x^k (x >= 1 here).
void horner(const SigmaPoly& poly, mpfr_srcptr x, mpfr_ptr value, mpfr_ptr abs_value) {
    mpfr_set_zero(value, 1);
    mpfr_set_zero(abs_value, 1);
    const auto& c = poly.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) {
        mpfr_mul(value, value, x, MPFR_RNDN);
        mpfr_add_z(value, value, c[k].get_mpz_t(), MPFR_RNDN);
        mpfr_mul(abs_value, abs_value, x, MPFR_RNDN);
        if (sgn(c[k]) < 0) {
            mpfr_sub_z(abs_value, abs_value, c[k].get_mpz_t(), MPFR_RNDN);
        } else {
            mpfr_add_z(abs_value, abs_value, c[k].get_mpz_t(), MPFR_RNDN);
        }
    }
}

/// Evaluates the closed forms of levels [first, last] at a fixed working
/// precision. Stops early at the first level whose numerator cancellation
/// eats into the 64 guard bits and returns the level reached.
class ClosedFormEvaluator {
public:
    ClosedFormEvaluator(double rho, mpfr_prec_t prec)
        : prec_(prec), rho_(prec), sigma_(prec), sinh_(prec), log_sinh_(prec), pv_(prec),
          pa_(prec), qv_(prec), qa_(prec), num_(prec), tmp_(prec) {
        mpfr_set_d(rho_.get(), rho, MPFR_RNDN);
        mpfr_sinh_cosh(sinh_.get(), sigma_.get(), rho_.get(), MPFR_RNDN);
        mpfr_log(log_sinh_.get(), sinh_.get(), MPFR_RNDN);
    }

    std::optional<double> log_value(const FlRep& rep) {
        horner(rep.p, sigma_.get(), pv_.get(), pa_.get());
        horner(rep.q, sigma_.get(), qv_.get(), qa_.get());
        mpfr_mul(pv_.get(), pv_.get(), rho_.get(), MPFR_RNDN);
        mpfr_mul(pa_.get(), pa_.get(), rho_.get(), MPFR_RNDN);
        mpfr_mul(qv_.get(), qv_.get(), sinh_.get(), MPFR_RNDN);
        mpfr_mul(qa_.get(), qa_.get(), sinh_.get(), MPFR_RNDN);
        mpfr_add(num_.get(), pv_.get(), qv_.get(), MPFR_RNDN);
        mpfr_add(tmp_.get(), pa_.get(), qa_.get(), MPFR_RNDN);
        if (mpfr_sgn(num_.get()) <= 0) return std::nullopt;
        const long lost = mpfr_get_exp(tmp_.get()) - mpfr_get_exp(num_.get());
        if (lost > static_cast<long>(prec_) - 64) return std::nullopt;
        mpfr_log(num_.get(), num_.get(), MPFR_RNDN);
        mpfr_mul_si(tmp_.get(), log_sinh_.get(), 2L * rep.level - 1, MPFR_RNDN);
        mpfr_sub(num_.get(), num_.get(), tmp_.get(), MPFR_RNDN);
        return mpfr_get_d(num_.get(), MPFR_RNDN);
    }

private:
    mpfr_prec_t prec_;
    detail::MpReal rho_, sigma_, sinh_, log_sinh_, pv_, pa_, qv_, qa_, num_, tmp_;
};

constexpr mpfr_prec_t kMaxPrecision = 1 << 16;

void closed_form_ladder(std::span<const FlRep> reps, double rho, std::span<double> out) {
    std::size_t next = 0;
    // Cancellation is roughly (2l-2) log2(1/rho) bits; start near that and double on demand.
    const double small = std::max(0.0, std::log2(2.0 / rho));
    mpfr_prec_t prec = 128 + static_cast<mpfr_prec_t>(2.0 * static_cast<double>(reps.size()) * small);
    while (next < reps.size()) {
        if (prec > kMaxPrecision) {
            throw InvariantViolation("closed-form ladder value is not positive at level " +
                                     std::to_string(reps[next].level));
        }
        ClosedFormEvaluator ev(rho, prec);
        for (; next < reps.size(); ++next) {
            auto v = ev.log_value(reps[next]);
            if (!v) break;
            out[next] = *v;
        }
        prec *= 2;
    }
}

}  // namespace

RadialBasis::RadialBasis(int l_max)
    : reps_(build_fl_table(l_max)), series_(build_fl_series(l_max)) {
    series_d_.reserve(series_.size());
    for (const auto& s : series_) {
        std::vector<double> d;
        d.reserve(s.coeffs.size());
        for (const auto& c : s.coeffs) d.push_back(c.get_d());
        series_d_.push_back(std::move(d));
    }
}

const RadialBasis& RadialBasis::shared() {
    static const RadialBasis basis(kDefaultLadderLevels);
    return basis;
}

void RadialBasis::check_level(int l) const {
    if (l < 1 || l > levels()) {
        throw LevelOutOfRange("ladder level " + std::to_string(l) + " outside table of " +
                              std::to_string(levels()) + " levels");
    }
}

const FlRep& RadialBasis::rep(int l) const {
    check_level(l);
    return reps_[static_cast<std::size_t>(l - 1)];
}

const FlSeries& RadialBasis::series(int l) const {
    check_level(l);
    return series_[static_cast<std::size_t>(l - 1)];
}

double RadialBasis::eval_fl_series(int l, double rho) const {
    check_level(l);
    const auto& c = series_d_[static_cast<std::size_t>(l - 1)];
    const double x = rho * rho;
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

double RadialBasis::log_fl_closed_form(int l, double rho) const {
    check_level(l);
    if (!(rho > 0.0)) throw UsageError("closed form needs rho > 0");
    if (l == 1) return log_f1_direct(rho);
    double out = 0.0;
    closed_form_ladder(std::span(&reps_[static_cast<std::size_t>(l - 1)], 1), rho,
                       std::span(&out, 1));
    return out;
}

std::vector<double> RadialBasis::log_ladder(int levels, double rho) const {
    if (levels < 1) return {};
    check_level(levels);
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw UsageError("rho must be finite and >= 0");
    std::vector<double> out(static_cast<std::size_t>(levels));
    if (rho < kSeriesSwitchRho) {
        for (int l = 1; l <= levels; ++l) {
            out[static_cast<std::size_t>(l - 1)] = std::log(eval_fl_series(l, rho));
        }
        return out;
    }
    out[0] = log_f1_direct(rho);
    if (levels > 1) {
        closed_form_ladder(std::span(reps_).subspan(1, static_cast<std::size_t>(levels - 1)), rho,
                           std::span(out).subspan(1));
    }
    return out;
}

double RadialBasis::log_fl(int l, double rho) const {
    check_level(l);
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw UsageError("rho must be finite and >= 0");
    if (rho < kSeriesSwitchRho) return std::log(eval_fl_series(l, rho));
    return log_fl_closed_form(l, rho);
}

double RadialBasis::eval_fl(int l, double rho) const { return std::exp(log_fl(l, rho)); }

// ---------------------------------------------------------------------------

VerificationReport check_fl_logconvex(const RadialBasis& basis, int l,
                                      std::span<const double> rho_grid, double tol_rel) {
    if (l < 1 || l + 2 > basis.levels()) {
        throw LevelOutOfRange("log-convexity check at level " + std::to_string(l) +
                              " needs levels through " + std::to_string(l + 2));
    }
    GridSpec grid;
    if (!rho_grid.empty()) {
        grid.axes.push_back({"rho", *std::min_element(rho_grid.begin(), rho_grid.end()),
                             *std::max_element(rho_grid.begin(), rho_grid.end()),
                             static_cast<int>(rho_grid.size()), "list"});
    }
    grid.axes.push_back({"l", static_cast<double>(l), static_cast<double>(l), 1, "list"});
    ReportBuilder rb("yuzhao_logconvexity", grid, ReportBuilder::Kind::LowerBound, tol_rel);
    for (double rho : rho_grid) {
        const auto lf = basis.log_ladder(l + 2, rho);
        const auto i = static_cast<std::size_t>(l - 1);
        const double value = std::expm1(lf[i + 2] + lf[i] - 2.0 * lf[i + 1]);
        rb.observe(value, {{{"l", static_cast<double>(l)}, {"rho", rho}}});
    }
    return rb.finish();
}

nlohmann::json fl_table_to_json(std::span<const FlRep> table) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& rep : table) {
        nlohmann::json p = nlohmann::json::array();
        nlohmann::json q = nlohmann::json::array();
        for (const auto& c : rep.p.coeffs()) p.push_back(c.get_str());
        for (const auto& c : rep.q.coeffs()) q.push_back(c.get_str());
        out.push_back({{"level", rep.level}, {"p", p}, {"q", q}});
    }
    return out;
}

}  // namespace hypheat
