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

#include "hypheat/report.hpp"

#include "hypheat/errors.hpp"

#include <cmath>
#include <limits>

namespace hypheat {

nlohmann::json to_json(const GridSpec& grid) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : grid.axes) {
        axes.push_back({{"name", a.name},
                        {"min", a.min},
                        {"max", a.max},
                        {"count", a.count},
                        {"spacing", a.spacing}});
    }
    return {{"axes", axes}};
}

nlohmann::json to_json(const Location& loc) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : loc.coords) out[k] = v;
    return out;
}

nlohmann::json to_json(const VerificationReport& r) {
    nlohmann::json worst = std::isfinite(r.worst_value) ? nlohmann::json(r.worst_value)
                                                        : nlohmann::json(nullptr);
    return {{"check_name", r.check_name},
            {"grid", to_json(r.grid)},
            {"worst_value", worst},
            {"worst_location", to_json(r.worst_location)},
            {"tolerance", r.tolerance},
            {"pass", r.pass}};
}

ReportBuilder::ReportBuilder(std::string check_name, GridSpec grid, Kind kind, double tolerance)
    : name_(std::move(check_name)),
      grid_(std::move(grid)),
      kind_(kind),
      tolerance_(tolerance),
      worst_(kind == Kind::LowerBound ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity()) {}

bool ReportBuilder::worse(double a, double b) const {
    return kind_ == Kind::LowerBound ? a < b : a > b;
}

void ReportBuilder::observe(double value, const Location& loc) {
    ++count_;
    if (std::isnan(value)) {
        if (!saw_nan_) worst_loc_ = loc;
        saw_nan_ = true;
        return;
    }
    if (saw_nan_) {
        if (worse(value, worst_)) worst_ = value;
        return;
    }
    if (count_ == 1 || worse(value, worst_)) {
        worst_ = value;
        worst_loc_ = loc;
    }
}

void ReportBuilder::mark_failure(const Location& loc) {
    if (!forced_failure_ && !saw_nan_) worst_loc_ = loc;
    forced_failure_ = true;
}

void ReportBuilder::merge(const ReportBuilder& other) {
    count_ += other.count_;
    if (other.saw_nan_ && !saw_nan_) {
        saw_nan_ = true;
        worst_loc_ = other.worst_loc_;
    }
    if (other.forced_failure_ && !forced_failure_ && !saw_nan_) worst_loc_ = other.worst_loc_;
    forced_failure_ = forced_failure_ || other.forced_failure_;
    if (worse(other.worst_, worst_)) {
        worst_ = other.worst_;
        if (!saw_nan_ && !forced_failure_) worst_loc_ = other.worst_loc_;
    }
}

bool ReportBuilder::failed() const {
    if (saw_nan_ || forced_failure_) return true;
    if (count_ == 0) return false;
    return kind_ == Kind::LowerBound ? !(worst_ >= -tolerance_) : !(worst_ <= tolerance_);
}

VerificationReport ReportBuilder::finish() const {
    VerificationReport r;
    r.check_name = name_;
    r.grid = grid_;
    r.worst_value = saw_nan_ ? std::numeric_limits<double>::quiet_NaN() : worst_;
    if (count_ == 0) r.worst_value = 0.0;
    r.worst_location = worst_loc_;
    r.tolerance = tolerance_;
    r.pass = !failed();
    return r;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (count < 2 || !(lo > 0.0) || !(hi > lo)) {
        throw UsageError("log grid needs count >= 2 and 0 < lo < hi");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 2 || !(hi > lo)) throw UsageError("linear grid needs count >= 2 and lo < hi");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    }
    out.back() = hi;
    return out;
}

}  // namespace hypheat
