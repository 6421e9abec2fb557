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

#ifndef HYPHEAT_MONOTONICITY_HPP
#define HYPHEAT_MONOTONICITY_HPP

// Weighted volumes F(t) = int_{Sigma_t} K_n(t0 - t, dist(p, p0)) dVol along
// geodesic-sphere mean curvature flows in H^{n+1}, and the totally geodesic
// plane through p0 as the equality case.

#include <string>
#include <vector>

namespace hypheat {

struct SphereFlowState {
    int n = 1;
    double r = 0.0;
    double time = 0.0;
};

/// t* = ln(cosh r0) / n.
double extinction_time(int n, double r0);

/// Exact flow r' = -n coth r: cosh r(time) = cosh(r0) exp(-n time).
double sphere_radius(int n, double r0, double time);
SphereFlowState sphere_state(int n, double r0, double time);

/// Classical RK4 on r' = -n coth r with a fixed step (last step shortened).
double rk4_sphere_radius(int n, double r0, double time, double step);

/// omega_n sinh^n(r) K_n(tau, r): p0 at the sphere's centre. Odd n only.
double weighted_volume_centered(int n, double r, double tau);
double log_weighted_volume_centered(int n, double r, double tau);

/// p0 at distance d from the centre; Gauss-Legendre over the polar angle.
double weighted_volume_offset(int n, double r, double tau, double d, int order);
double log_weighted_volume_offset(int n, double r, double tau, double d, int order);

struct WeightedVolumeSample {
    double time = 0.0;
    double F = 0.0;
    double dF_estimate = 0.0;
    double log_F = 0.0;
    double dlogF_estimate = 0.0;
};

struct ScanResult {
    std::vector<WeightedVolumeSample> samples;
    double window_end = 0.0;
    /// Largest d(log F)/dt estimate; the scan passes iff this is < 0 and
    /// log F strictly decreases between every consecutive pair of samples.
    double max_log_slope = 0.0;
    bool pass = false;
};

inline constexpr double kScanEndGap = 1e-4;
inline constexpr int kScanQuadratureOrder = 256;

/// Samples F at the midpoints of `samples` equal cells covering
/// (0, min(t0, t*) - end_gap); slopes are centred differences (one-sided at
/// the two ends).
ScanResult monotonicity_scan(int n, double r0, double t0, double d, int samples,
                             double end_gap = kScanEndGap, int order = kScanQuadratureOrder);

/// Heat-kernel mass of a totally geodesic H^n through p0; 1 for every tau.
double geodesic_plane_functional(int n, double tau);

/// "time,F,dF_estimate" then one row per sample, 17 significant digits.
std::string scan_to_csv(const std::vector<WeightedVolumeSample>& samples);

}  // namespace hypheat

#endif
