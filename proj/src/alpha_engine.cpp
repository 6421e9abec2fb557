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

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace hypheat {

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(std::vector<Factor> factors) {
    std::sort(factors.begin(), factors.end(),
              [](const Factor& a, const Factor& b) { return a.level < b.level; });
    for (const auto& f : factors) {
        if (f.level < 1) throw UsageError("monomial levels start at 1");
        if (f.exponent < 0) throw UsageError("monomial exponents must be non-negative");
        if (f.exponent == 0) continue;
        if (!factors_.empty() && factors_.back().level == f.level) {
            factors_.back().exponent += f.exponent;
        } else {
            factors_.push_back(f);
        }
    }
}

int Monomial::exponent(int level) const {
    for (const auto& f : factors_) {
        if (f.level == level) return f.exponent;
    }
    return 0;
}

int Monomial::degree() const {
    return std::accumulate(factors_.begin(), factors_.end(), 0,
                           [](int acc, const Factor& f) { return acc + f.exponent; });
}

int Monomial::weight() const {
    return std::accumulate(factors_.begin(), factors_.end(), 0,
                           [](int acc, const Factor& f) { return acc + f.level * f.exponent; });
}

Monomial Monomial::times(int level, int exponent) const {
    std::vector<Factor> f = factors_;
    f.push_back({level, exponent});
    return Monomial(std::move(f));
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    const auto& fa = a.factors_;
    const auto& fb = b.factors_;
    const std::size_t n = std::min(fa.size(), fb.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (fa[k].level != fb[k].level) {
            // The one with a non-zero exponent at the lower level sorts first.
            return fa[k].level < fb[k].level ? std::strong_ordering::less
                                             : std::strong_ordering::greater;
        }
        if (fa[k].exponent != fb[k].exponent) {
            return fa[k].exponent > fb[k].exponent ? std::strong_ordering::less
                                                   : std::strong_ordering::greater;
        }
    }
    return fb.size() <=> fa.size();
}

// ---------------------------------------------------------------------------
// Expansion

Expansion Expansion::constant(long value) {
    Expansion e;
    e.add({0, Monomial()}, mpz_class(value));
    return e;
}

void Expansion::add(const TermKey& key, const mpz_class& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(key, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

int Expansion::max_level() const {
    int out = 0;
    for (const auto& [key, c] : terms_) out = std::max(out, key.monomial.max_level());
    return out;
}

int Expansion::max_t_power() const {
    int out = -1;
    for (const auto& [key, c] : terms_) out = std::max(out, key.t_power);
    return out;
}

Expansion Expansion::t_part(int i) const {
    Expansion out;
    for (const auto& [key, c] : terms_) {
        if (key.t_power == i) out.terms_.emplace(TermKey{0, key.monomial}, c);
    }
    return out;
}

Expansion operator+(const Expansion& a, const Expansion& b) {
    Expansion out = a;
    for (const auto& [key, c] : b.terms_) out.add(key, c);
    return out;
}

Expansion operator-(const Expansion& a, const Expansion& b) {
    Expansion out = a;
    for (const auto& [key, c] : b.terms_) out.add(key, -c);
    return out;
}

Expansion operator*(const Expansion& a, const Expansion& b) {
    Expansion out;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            std::vector<Monomial::Factor> f = ka.monomial.factors();
            f.insert(f.end(), kb.monomial.factors().begin(), kb.monomial.factors().end());
            out.add({ka.t_power + kb.t_power, Monomial(std::move(f))}, ca * cb);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Differentiation and the recurrence

Expansion diff_sigma(const Expansion& a, int ladder_budget) {
    Expansion out;
    for (const auto& [key, c] : a.terms()) {
        const auto& factors = key.monomial.factors();
        for (std::size_t k = 0; k < factors.size(); ++k) {
            const int level = factors[k].level;
            if (level + 1 > ladder_budget) {
                throw LevelOutOfRange("d/dsigma needs f_" + std::to_string(level + 1) +
                                      " beyond the ladder budget of " +
                                      std::to_string(ladder_budget));
            }
            std::vector<Monomial::Factor> f = factors;
            f[k].exponent -= 1;
            f.push_back({level + 1, 1});
            out.add({key.t_power, Monomial(std::move(f))}, -c * factors[k].exponent);
        }
    }
    return out;
}

Expansion diff_t(const Expansion& a) {
    Expansion out;
    for (const auto& [key, c] : a.terms()) {
        if (key.t_power == 0) continue;
        out.add({key.t_power - 1, key.monomial}, c * key.t_power);
    }
    return out;
}

AlphaPoly build_alpha(int n, int ladder_budget) {
    if (n < 1 || n % 2 == 0) throw UsageError("alpha_n is built for odd n >= 1 only");
    if (n > 2 * ladder_budget + 1) {
        throw UsageError("n = " + std::to_string(n) + " exceeds the ladder budget (max " +
                         std::to_string(2 * ladder_budget + 1) + ")");
    }
    AlphaPoly alpha{0, Expansion::constant(1)};
    const Expansion f1 = [] {
        Expansion e;
        e.add({0, Monomial({{1, 1}})}, 1);
        return e;
    }();
    while (alpha.n() < n) {
        const Expansion d = diff_sigma(alpha.expansion, ladder_budget);
        Expansion next = f1 * alpha.expansion;
        for (const auto& [key, c] : d.terms()) next.add({key.t_power + 1, key.monomial}, -2 * c);
        ++alpha.m;
        for (const auto& [key, c] : next.terms()) {
            if (sgn(c) <= 0) {
                throw InvariantViolation("alpha_" + std::to_string(alpha.n()) +
                                         " acquired a non-positive coefficient " + c.get_str() +
                                         " at t^" + std::to_string(key.t_power));
            }
        }
        alpha.expansion = std::move(next);
    }
    return alpha;
}

const AlphaPoly& alpha_cached(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const AlphaPoly>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::make_unique<const AlphaPoly>(build_alpha(n))).first;
    }
    return *it->second;
}

// ---------------------------------------------------------------------------
// Numeric evaluation

double ScaledValue::value() const {
    if (mantissa == 0.0) return 0.0;
    return mantissa * std::exp(log_scale);
}

double ScaledValue::log_abs() const {
    if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa)) + log_scale;
}

double ScaledValue::ratio(const ScaledValue& other) const {
    if (mantissa == 0.0) return 0.0;
    return mantissa / other.mantissa * std::exp(log_scale - other.log_scale);
}

namespace {

double log_abs_mpz(const mpz_class& z) {
    long exp2 = 0;
    const double d = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(std::abs(d)) + static_cast<double>(exp2) * std::log(2.0);
}

}  // namespace

CompiledExpansion::CompiledExpansion(const Expansion& e) {
    terms_.reserve(e.size());
    for (const auto& [key, c] : e.terms()) {
        terms_.push_back({log_abs_mpz(c), sgn(c) < 0 ? -1.0 : 1.0, key.t_power,
                          key.monomial.factors()});
        max_level_ = std::max(max_level_, key.monomial.max_level());
    }
}

ScaledValue CompiledExpansion::evaluate(std::span<const double> log_f, double log_t) const {
    if (terms_.empty()) return {};
    if (static_cast<int>(log_f.size()) < max_level_) {
        throw LevelOutOfRange("evaluation needs ladder values through f_" +
                              std::to_string(max_level_));
    }
    thread_local std::vector<double> logs;
    logs.resize(terms_.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const Term& term = terms_[k];
        double x = term.log_abs_coeff;
        if (term.t_power != 0) x += term.t_power * log_t;
        for (const auto& f : term.factors) x += f.exponent * log_f[static_cast<std::size_t>(f.level - 1)];
        logs[k] = x;
        top = std::max(top, x);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < terms_.size(); ++k) sum += terms_[k].sign * std::exp(logs[k] - top);
    return {sum, top};
}

ScaledValue eval_expansion_scaled(const Expansion& a, const RadialBasis& basis, double t,
                                  double rho) {
    if (!(t > 0.0)) throw UsageError("eval_expansion needs t > 0");
    const CompiledExpansion compiled(a);
    const auto log_f = basis.log_ladder(compiled.max_level(), rho);
    return compiled.evaluate(log_f, std::log(t));
}

double eval_expansion(const Expansion& a, const RadialBasis& basis, double t, double rho) {
    return eval_expansion_scaled(a, basis, t, rho).value();
}

// ---------------------------------------------------------------------------
// Structure and output

VerificationReport structure_check(const AlphaPoly& a) {
    GridSpec grid;
    grid.axes.push_back({"m", static_cast<double>(a.m), static_cast<double>(a.m), 1, "list"});
    ReportBuilder rb("alpha_structure", grid, ReportBuilder::Kind::LowerBound, 0.0);
    const double m = a.m;
    for (const auto& [key, c] : a.expansion.terms()) {
        const Location loc{{{"m", m}, {"i", static_cast<double>(key.t_power)}}};
        rb.observe(c.get_d(), loc);
        if (sgn(c) <= 0) rb.mark_failure(loc);
        if (key.t_power < 0 || (a.m > 0 && key.t_power > a.m - 1)) rb.mark_failure(loc);
    }
    if (a.m == 0) {
        if (!(a.expansion == Expansion::constant(1))) rb.mark_failure({{{"m", 0.0}}});
        return rb.finish();
    }
    Expansion lead;
    lead.add({0, Monomial({{1, a.m}})}, 1);
    if (!(a.expansion.t_part(0) == lead)) rb.mark_failure({{{"m", m}, {"i", 0.0}}});

    Expansion top;
    mpz_class pow2;
    mpz_ui_pow_ui(pow2.get_mpz_t(), 2, static_cast<unsigned long>(a.m - 1));
    top.add({0, Monomial({{a.m, 1}})}, pow2);
    if (!(a.expansion.t_part(a.m - 1) == top)) rb.mark_failure({{{"m", m}, {"i", m - 1}}});

    if (a.expansion.max_level() != a.m) rb.mark_failure({{{"m", m}}});
    return rb.finish();
}

namespace {

std::string subscript(int k) {
    const std::string s = std::to_string(k);
    return s.size() == 1 ? s : "{" + s + "}";
}

std::string term_latex(const TermKey& key, const mpz_class& abs_coeff) {
    std::vector<std::string> parts;
    const bool bare = key.t_power == 0 && key.monomial.is_constant();
    if (abs_coeff != 1 || bare) parts.push_back(abs_coeff.get_str());
    if (key.t_power == 1) parts.emplace_back("t");
    if (key.t_power > 1) parts.push_back("t^" + subscript(key.t_power));
    for (const auto& f : key.monomial.factors()) {
        std::string s = "f_" + subscript(f.level);
        if (f.exponent != 1) s += "^" + subscript(f.exponent);
        parts.push_back(std::move(s));
    }
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
    return out;
}

}  // namespace

std::string to_latex(const Expansion& e) {
    if (e.empty()) return "0";
    std::string out;
    for (const auto& [key, c] : e.terms()) {
        const bool neg = sgn(c) < 0;
        const mpz_class mag = abs(c);
        if (out.empty()) {
            out = (neg ? "-" : "") + term_latex(key, mag);
        } else {
            out += (neg ? " - " : " + ") + term_latex(key, mag);
        }
    }
    return out;
}

std::string to_latex(const AlphaPoly& a) {
    return "α_" + subscript(a.n()) + " = " + to_latex(a.expansion);
}

nlohmann::json to_json(const AlphaPoly& a) {
    nlohmann::json parts = nlohmann::json::object();
    for (const auto& [key, c] : a.expansion.terms()) {
        nlohmann::json exps = nlohmann::json::object();
        for (const auto& f : key.monomial.factors()) exps[std::to_string(f.level)] = f.exponent;
        parts[std::to_string(key.t_power)].push_back(
            {{"exponents", exps}, {"coefficient", c.get_str()}});
    }
    return {{"n", a.n()}, {"m", a.m}, {"P", parts}};
}

}  // namespace hypheat
