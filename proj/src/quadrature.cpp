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

#include "hypheat/quadrature.hpp"

#include "hypheat/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace hypheat {

namespace {

std::string format_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

GaussLegendreRule make_rule(int order) {
    GaussLegendreRule rule;
    // legendre_p_zeros returns the non-negative zeros in ascending order.
    const auto zeros = boost::math::legendre_p_zeros<double>(order);
    auto push = [&](double x) {
        const double dp = boost::math::legendre_p_prime<double>(order, x);
        rule.nodes.push_back(x);
        rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    };
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
        if (*it != 0.0) push(-*it);
    }
    for (double x : zeros) push(x);
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
    if (order < 1) throw UsageError("Gauss-Legendre order must be >= 1");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<const GaussLegendreRule>(make_rule(order));
    return *slot;
}

double integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                int order) {
    const auto& rule = gauss_legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    return sum * half;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, unsigned max_depth, double abs_tol) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    const double value = gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, rel_tol, &error);
    if (!std::isfinite(value) || error > std::max(100.0 * rel_tol * std::abs(value), abs_tol)) {
        throw QuadratureError("adaptive quadrature on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "] did not converge (error estimate " +
                              format_g(error) + ")");
    }
    return {value, error};
}

}  // namespace hypheat
