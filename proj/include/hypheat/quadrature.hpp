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

#ifndef HYPHEAT_QUADRATURE_HPP
#define HYPHEAT_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace hypheat {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached per order; order >= 1.
const GaussLegendreRule& gauss_legendre(int order);

double integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                int order);

struct AdaptiveResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive 61-point Gauss-Kronrod on a finite interval. Throws
/// QuadratureError when the error estimate misses rel_tol * |value| by more
/// than a factor of 100 (the estimate itself is pessimistic) and also
/// exceeds abs_tol. Pass abs_tol for pieces that may be negligible.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, unsigned max_depth = 18, double abs_tol = 0.0);

}  // namespace hypheat

#endif
