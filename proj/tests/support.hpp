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

#ifndef HYPHEAT_TESTS_SUPPORT_HPP
#define HYPHEAT_TESTS_SUPPORT_HPP

// Shared generators and independent oracles for the unit tests. Nothing here
// calls into the library's own evaluators.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace hypheat::testing {

/// Seeded draws for property tests. Each case logs its seed on failure.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    int odd(int lo, int hi) {
        int v = integer(lo, hi);
        return v % 2 == 0 ? (v + 1 <= hi ? v + 1 : v - 1) : v;
    }

private:
    std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// log f_l(rho) from f_l(sigma) = (l-1)! int_0^inf (sigma + cosh u)^{-l} du,
/// rescaled by sigma^l so it stays finite at large rho.
inline double oracle_log_fl(int l, double rho) {
    using boost::math::quadrature::gauss_kronrod;
    const double sigma = std::cosh(rho);
    auto f = [&](double u) { return std::pow(1.0 + std::cosh(u) / sigma, -l); };
    const double hi = rho + 40.0 / l + 40.0;
    double err = 0.0;
    const double split = std::max(rho, 1.0);
    double I = gauss_kronrod<double, 61>::integrate(f, 0.0, split, 20, 1e-14, &err);
    I += gauss_kronrod<double, 61>::integrate(f, split, hi, 20, 1e-14, &err);
    return std::lgamma(static_cast<double>(l)) - l * std::log(sigma) + std::log(I);
}

/// Exact K_3 = (4 pi t)^{-3/2} e^{-t} (rho / sinh rho) e^{-rho^2 / 4t}.
inline double oracle_K3(double t, double rho) {
    const double ratio = rho == 0.0 ? 1.0 : rho / std::sinh(rho);
    return std::pow(4.0 * std::numbers::pi * t, -1.5) * std::exp(-t) * ratio *
           std::exp(-rho * rho / (4.0 * t));
}

/// Exact K_1 on the line.
inline double oracle_K1(double t, double rho) {
    return std::pow(4.0 * std::numbers::pi * t, -0.5) * std::exp(-rho * rho / (4.0 * t));
}

/// Dense alpha_n as {t power, exponent vector over f_1..f_m} -> coefficient,
/// from the recurrence with the product rule applied term by term.
using DenseKey = std::pair<int, std::vector<int>>;
using DenseAlpha = std::map<DenseKey, double>;

inline DenseAlpha oracle_alpha(int n) {
    const int m = (n - 1) / 2;
    const std::size_t width = static_cast<std::size_t>(m) + 2;
    DenseAlpha a;
    a[{0, std::vector<int>(width, 0)}] = 1.0;
    for (int step = 0; step < m; ++step) {
        DenseAlpha next;
        for (const auto& [key, c] : a) {
            // f_1 * term
            auto e = key.second;
            e[0] += 1;
            next[{key.first, e}] += c;
            // -2t d/dsigma term, with d f_l = -f_{l+1}
            for (std::size_t j = 0; j + 1 < width; ++j) {
                if (key.second[j] == 0) continue;
                auto d = key.second;
                const double k = d[j];
                d[j] -= 1;
                d[j + 1] += 1;
                next[{key.first + 1, d}] += 2.0 * k * c;
            }
        }
        a = std::move(next);
    }
    return a;
}

inline double eval_dense(const DenseAlpha& a, const std::vector<double>& f, double t) {
    double sum = 0.0;
    for (const auto& [key, c] : a) {
        double term = c * std::pow(t, key.first);
        for (std::size_t j = 0; j < key.second.size(); ++j) {
            if (key.second[j] != 0) term *= std::pow(f[j], key.second[j]);
        }
        sum += term;
    }
    return sum;
}

}  // namespace hypheat::testing

#endif
