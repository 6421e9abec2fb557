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

#include "hypheat/cli.hpp"

#include "hypheat/alpha_engine.hpp"
#include "hypheat/errors.hpp"
#include "hypheat/kernel.hpp"
#include "hypheat/monotonicity.hpp"
#include "hypheat/radial_basis.hpp"
#include "hypheat/verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace hypheat::cli {

namespace {

struct Config {
    std::string output;
    std::string format;  // empty: the command default

    int n = 3;
    double t = 1.0;
    double rho = 1.0;
    int l_max = 8;

    std::string suite;
    std::optional<int> max_index;
    std::optional<double> tolerance;
    GridOptions grid;
    bool linear = false;

    double r0 = 2.0;
    double t0 = 0.2;
    double offset = 0.0;
    int samples = 200;
    int order = kScanQuadratureOrder;

    double s = 0.5;
    double d01 = 0.0;
};

/// Returns the chosen format; the first allowed entry is the default.
std::string require_format(const std::string& format, std::initializer_list<const char*> allowed) {
    if (format.empty()) return *allowed.begin();
    for (const char* a : allowed) {
        if (format == a) return format;
    }
    throw UsageError("format '" + format + "' is not available for this command");
}

nlohmann::json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

int cmd_eval(const Config& c, std::ostream& out) {
    require_format(c.format, {"json"});
    const KernelEval k = log_kernel(c.n, c.t, c.rho);
    nlohmann::json j = {{"n", k.n},
                        {"t", k.t},
                        {"rho", k.rho},
                        {"logK", k.logK},
                        {"K", k.K()},
                        {"alpha", k.alpha},
                        {"margin", nullptr}};
    if (c.rho > 0.0) j["margin"] = finite_or_null(superconvexity_margin(c.n, c.t, c.rho));
    out << j.dump(2) << '\n';
    return kSuccess;
}

int cmd_table(const Config& c, std::ostream& out) {
    require_format(c.format, {"json"});
    if (c.l_max < 1) throw UsageError("--l-max must be >= 1");
    out << fl_table_to_json(build_fl_table(c.l_max)).dump(2) << '\n';
    return kSuccess;
}

int cmd_alpha(const Config& c, std::ostream& out) {
    const std::string format = require_format(c.format, {"json", "latex"});
    const AlphaPoly a = build_alpha(c.n);
    if (format == "latex") {
        out << to_latex(a) << '\n';
    } else {
        out << to_json(a).dump(2) << '\n';
    }
    return kSuccess;
}

int cmd_verify(const Config& c, std::ostream& out) {
    require_format(c.format, {"json"});
    SuiteOptions o;
    o.max_index = c.max_index;
    o.tolerance = c.tolerance;
    o.grid = c.grid;
    o.grid.log_spaced = !c.linear;

    bool all_pass = true;
    if (c.suite == "all") {
        nlohmann::json reports = nlohmann::json::array();
        for (const auto& name : suite_names()) {
            // Per-suite index defaults differ (n, l, m); only forward tolerance and grid.
            SuiteOptions each = o;
            each.max_index.reset();
            const VerificationReport r = run_suite(name, each);
            all_pass = all_pass && r.pass;
            reports.push_back(to_json(r));
        }
        out << reports.dump(2) << '\n';
    } else {
        const VerificationReport r = run_suite(c.suite, o);
        all_pass = r.pass;
        out << to_json(r).dump(2) << '\n';
    }
    return all_pass ? kSuccess : kCheckFailed;
}

int cmd_mcf(const Config& c, std::ostream& out) {
    const std::string format = require_format(c.format, {"csv", "json"});
    const ScanResult scan = monotonicity_scan(c.n, c.r0, c.t0, c.offset, c.samples, kScanEndGap, c.order);
    if (format == "csv") {
        out << scan_to_csv(scan.samples);
    } else {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& s : scan.samples) {
            rows.push_back({{"time", s.time},
                            {"F", s.F},
                            {"dF_estimate", s.dF_estimate},
                            {"log_F", s.log_F},
                            {"dlogF_estimate", s.dlogF_estimate}});
        }
        out << nlohmann::json{{"n", c.n},
                              {"r0", c.r0},
                              {"t0", c.t0},
                              {"d", c.offset},
                              {"window_end", scan.window_end},
                              {"max_log_slope", scan.max_log_slope},
                              {"pass", scan.pass},
                              {"samples", rows}}
                   .dump(2)
            << '\n';
    }
    return scan.pass ? kSuccess : kCheckFailed;
}

int cmd_semigroup(const Config& c, std::ostream& out) {
    require_format(c.format, {"json"});
    const double tol = c.tolerance.value_or(defaults::kSemigroupTol);
    const double err = semigroup_check(c.s, c.t, c.d01);
    const bool pass = err <= tol;
    out << nlohmann::json{{"s", c.s},
                          {"t", c.t},
                          {"d01", c.d01},
                          {"relative_error", err},
                          {"tolerance", tol},
                          {"pass", pass}}
               .dump(2)
        << '\n';
    return pass ? kSuccess : kCheckFailed;
}

void add_grid_flags(CLI::App* sub, Config& c) {
    sub->add_option("--t-min", c.grid.t_min, "Smallest t on the grid")->check(CLI::PositiveNumber);
    sub->add_option("--t-max", c.grid.t_max, "Largest t on the grid")->check(CLI::PositiveNumber);
    sub->add_option("--t-count", c.grid.t_count, "Number of t values")->check(CLI::Range(2, 100000));
    sub->add_option("--rho-min", c.grid.rho_min, "Smallest rho on the grid")->check(CLI::PositiveNumber);
    sub->add_option("--rho-max", c.grid.rho_max, "Largest rho on the grid")->check(CLI::PositiveNumber);
    sub->add_option("--rho-count", c.grid.rho_count, "Number of rho values")->check(CLI::Range(2, 100000));
    sub->add_flag("--linear", c.linear, "Linear instead of log spacing");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Odd-dimensional hyperbolic heat kernels: evaluation, dumps and verification suites.\n"
                 "Only odd kernel dimensions n are supported.",
                 "hypheat"};
    app.require_subcommand(1, 1);
    app.add_option("-o,--output", c.output, "Write the report to a file instead of stdout");

    auto* eval = app.add_subcommand("eval", "Evaluate K_n, alpha_n and the superconvexity margin");
    eval->add_option("--n", c.n, "Odd dimension")->required();
    eval->add_option("--t", c.t, "Time (> 0)")->required();
    eval->add_option("--rho", c.rho, "Hyperbolic distance (>= 0)")->required();
    eval->add_option("--format", c.format, "json");

    auto* table = app.add_subcommand("table", "Dump the closed forms (p_l, q_l) of the ladder f_l");
    table->add_option("--l-max", c.l_max, "Number of levels")->required();
    table->add_option("--format", c.format, "json");

    auto* alpha = app.add_subcommand("alpha", "Dump alpha_n as t-polynomials P_{m,i}");
    alpha->add_option("--n", c.n, "Odd dimension")->required();
    alpha->add_option("--format", c.format, "json or latex");

    auto* verify = app.add_subcommand("verify", "Run a verification suite and emit its report");
    std::vector<std::string> suites = suite_names();
    suites.emplace_back("all");
    verify->add_option("suite", c.suite, "Suite name")->required()->check(CLI::IsMember(suites));
    verify->add_option("--n-max,--l-max,--m-max", c.max_index,
                       "Largest kernel n, ladder level l or alpha index m for the suite");
    verify->add_option("--tol", c.tolerance, "Override the suite tolerance");
    verify->add_option("--format", c.format, "json");
    add_grid_flags(verify, c);

    auto* mcf = app.add_subcommand("mcf", "Scan the weighted volume along a geodesic-sphere flow");
    mcf->add_option("--n", c.n, "Odd dimension of the sphere (ambient H^{n+1})")->required();
    mcf->add_option("--r0", c.r0, "Initial radius")->check(CLI::PositiveNumber);
    mcf->add_option("--t0", c.t0, "Kernel time origin")->check(CLI::PositiveNumber);
    mcf->add_option("--d", c.offset, "Distance from the sphere centre to p0")->check(CLI::NonNegativeNumber);
    mcf->add_option("--samples", c.samples, "Sample count (>= 10)");
    mcf->add_option("--order", c.order, "Gauss-Legendre order for offset scans (>= 8)");
    mcf->add_option("--format", c.format, "csv or json");

    auto* semi = app.add_subcommand("semigroup", "Chapman-Kolmogorov check for K_3");
    semi->add_option("--s", c.s, "First time")->check(CLI::PositiveNumber);
    semi->add_option("--t", c.t, "Second time")->check(CLI::PositiveNumber);
    semi->add_option("--d01", c.d01, "Distance between the endpoints")->check(CLI::NonNegativeNumber);
    semi->add_option("--tol", c.tolerance, "Relative error tolerance");
    semi->add_option("--format", c.format, "json");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    std::ostringstream buffer;
    int code = kSuccess;
    try {
        if (*eval) code = cmd_eval(c, buffer);
        else if (*table) code = cmd_table(c, buffer);
        else if (*alpha) code = cmd_alpha(c, buffer);
        else if (*verify) code = cmd_verify(c, buffer);
        else if (*mcf) code = cmd_mcf(c, buffer);
        else if (*semi) code = cmd_semigroup(c, buffer);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const LevelOutOfRange& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ExtinctFlow& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const QuadratureError& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const InvariantViolation& e) {
        err << "invariant violated: " << e.what() << '\n';
        return kCheckFailed;
    }

    if (c.output.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(c.output);
        if (!file) {
            err << "error: cannot open " << c.output << " for writing\n";
            return kUsageError;
        }
        file << buffer.str();
    }
    return code;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace hypheat::cli
