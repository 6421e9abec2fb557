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

#ifndef HYPHEAT_REPORT_HPP
#define HYPHEAT_REPORT_HPP

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace hypheat {

struct GridAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    std::string spacing;  // "log", "linear" or "list"
};

struct GridSpec {
    std::vector<GridAxis> axes;
};

/// Named coordinates of a grid point, e.g. {n, t, rho} or {m, i, t, rho}.
struct Location {
    std::vector<std::pair<std::string, double>> coords;
};

struct VerificationReport {
    std::string check_name;
    GridSpec grid;
    double worst_value = 0.0;
    Location worst_location;
    double tolerance = 0.0;
    bool pass = false;
};

nlohmann::json to_json(const GridSpec& grid);
nlohmann::json to_json(const Location& loc);
nlohmann::json to_json(const VerificationReport& report);

/// Accumulates the worst observation of one check.
///
/// LowerBound checks pass iff every value >= -tolerance (signed quantities
/// normalised by their natural scale); UpperBound checks pass iff every value
/// <= tolerance (residuals, relative errors). A NaN observation or an explicit
/// mark_failure() fails the report regardless of the numeric worst value.
class ReportBuilder {
public:
    enum class Kind { LowerBound, UpperBound };

    ReportBuilder(std::string check_name, GridSpec grid, Kind kind, double tolerance);

    void observe(double value, const Location& loc);
    void mark_failure(const Location& loc);
    void merge(const ReportBuilder& other);

    bool failed() const;
    std::size_t observations() const { return count_; }
    VerificationReport finish() const;

private:
    bool worse(double a, double b) const;

    std::string name_;
    GridSpec grid_;
    Kind kind_;
    double tolerance_;
    double worst_;
    Location worst_loc_;
    bool forced_failure_ = false;
    bool saw_nan_ = false;
    std::size_t count_ = 0;
};

std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> linear_grid(double lo, double hi, int count);

}  // namespace hypheat

#endif
