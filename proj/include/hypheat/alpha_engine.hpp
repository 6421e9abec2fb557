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

#ifndef HYPHEAT_ALPHA_ENGINE_HPP
#define HYPHEAT_ALPHA_ENGINE_HPP

// Exact expansions of alpha_{2m+1}(t, rho) = sum_i t^i P_{m,i}(f_1, ..., f_m),
// built from alpha_1 = 1 and alpha_n = f_1 alpha_{n-2} - 2t d alpha_{n-2}/d sigma,
// with d f_l / d sigma = -f_{l+1}.

#include "hypheat/radial_basis.hpp"
#include "hypheat/report.hpp"

#include <gmpxx.h>

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace hypheat {

/// Sparse product of ladder functions, f_{l_1}^{j_1} f_{l_2}^{j_2} ...
/// Factors are sorted by level and every stored exponent is >= 1; the empty
/// monomial is the constant 1.
class Monomial {
public:
    struct Factor {
        int level;
        int exponent;
        friend bool operator==(const Factor&, const Factor&) = default;
    };

    Monomial() = default;
    explicit Monomial(std::vector<Factor> factors);

    const std::vector<Factor>& factors() const { return factors_; }
    int exponent(int level) const;
    /// Highest level present, 0 for the constant.
    int max_level() const { return factors_.empty() ? 0 : factors_.back().level; }
    /// Number of f factors counted with multiplicity.
    int degree() const;
    /// Sum of level * exponent.
    int weight() const;
    bool is_constant() const { return factors_.empty(); }

    Monomial times(int level, int exponent = 1) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    /// Orders by exponent vector, higher f_1 power first, then f_2, ...
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

private:
    std::vector<Factor> factors_;
};

struct TermKey {
    int t_power = 0;
    Monomial monomial;
    friend bool operator==(const TermKey&, const TermKey&) = default;
    friend std::strong_ordering operator<=>(const TermKey& a, const TermKey& b) {
        if (auto c = a.t_power <=> b.t_power; c != 0) return c;
        return a.monomial <=> b.monomial;
    }
};

/// General signed polynomial in t and the f_l with integer coefficients.
/// Zero coefficients are never stored.
class Expansion {
public:
    using Terms = std::map<TermKey, mpz_class>;

    Expansion() = default;
    static Expansion constant(long value);

    void add(const TermKey& key, const mpz_class& coeff);
    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    /// Highest ladder level used, 0 if none.
    int max_level() const;
    /// -1 for the empty expansion.
    int max_t_power() const;
    /// Coefficient of t^i, returned with t-power 0.
    Expansion t_part(int i) const;

    friend Expansion operator+(const Expansion& a, const Expansion& b);
    friend Expansion operator-(const Expansion& a, const Expansion& b);
    friend Expansion operator*(const Expansion& a, const Expansion& b);
    friend bool operator==(const Expansion&, const Expansion&) = default;

private:
    Terms terms_;
};

/// alpha_{2m+1}; every coefficient is a strictly positive integer.
struct AlphaPoly {
    int m = 0;
    Expansion expansion;
    int n() const { return 2 * m + 1; }
};

AlphaPoly build_alpha(int n, int ladder_budget = kDefaultLadderLevels);

/// Memoized build_alpha with the default budget. The returned reference stays
/// valid for the life of the process; first builds are serialized.
const AlphaPoly& alpha_cached(int n);

/// Exact d/d sigma; errors if a term would need a level beyond ladder_budget.
Expansion diff_sigma(const Expansion& a, int ladder_budget = kDefaultLadderLevels);
Expansion diff_t(const Expansion& a);

/// value = mantissa * exp(log_scale); keeps sums of tiny or huge terms finite.
struct ScaledValue {
    double mantissa = 0.0;
    double log_scale = 0.0;

    double value() const;
    /// log |value|; -inf for zero.
    double log_abs() const;
    /// this / other, computed without forming either value.
    double ratio(const ScaledValue& other) const;
};

/// Double-precision form of an Expansion for repeated evaluation.
class CompiledExpansion {
public:
    CompiledExpansion() = default;
    explicit CompiledExpansion(const Expansion& e);

    int max_level() const { return max_level_; }
    bool empty() const { return terms_.empty(); }

    /// log_f[l-1] = log f_l at the evaluation point, for l <= max_level().
    ScaledValue evaluate(std::span<const double> log_f, double log_t) const;

private:
    struct Term {
        double log_abs_coeff;
        double sign;
        int t_power;
        std::vector<Monomial::Factor> factors;
    };
    std::vector<Term> terms_;
    int max_level_ = 0;
};

/// Numeric value of sum coeff * t^i * prod f_l^{j_l}, t > 0, rho >= 0.
double eval_expansion(const Expansion& a, const RadialBasis& basis, double t, double rho);
ScaledValue eval_expansion_scaled(const Expansion& a, const RadialBasis& basis, double t,
                                  double rho);

/// Positivity and the exact identities P_{m,0} = f_1^m, P_{m,m-1} = 2^{m-1} f_m,
/// and top ladder level m. worst_value is the smallest coefficient.
VerificationReport structure_check(const AlphaPoly& a);

/// "α_7 = f_1^3 + 6 t f_1 f_2 + 4 t^2 f_3"
std::string to_latex(const AlphaPoly& a);
std::string to_latex(const Expansion& e);
/// {"n", "m", "P": {"i": [{"exponents": {"level": j}, "coefficient": "..."}]}}
nlohmann::json to_json(const AlphaPoly& a);

}  // namespace hypheat

#endif
