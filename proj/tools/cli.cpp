// Copyright 2026 The fockstir Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cli.hpp"

#include "fockstir/adiabatic.hpp"
#include "fockstir/config_io.hpp"
#include "fockstir/entangle.hpp"
#include "fockstir/errors.hpp"
#include "fockstir/integrator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

namespace fockstir::cli {

namespace {

using nlohmann::json;

struct CommonOptions {
    std::string config;
    std::string out;
    std::string format = "csv";
    double tol = 1e-10;
    std::size_t grid = 2001;
};

struct DelayRange {
    double min = 0.0;
    double max = 40.0;
    double step = 1.0;

    std::vector<double> grid() const {
        if (!(step > 0.0) || !std::isfinite(step)) {
            throw ConfigError("--delay-step must be positive");
        }
        if (!(max >= min)) {
            throw ConfigError("--delay-max must not be below --delay-min");
        }
        const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
        std::vector<double> out(count);
        for (std::size_t k = 0; k < count; ++k) {
            out[k] = min + step * static_cast<double>(k);
        }
        return out;
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

IntegratorOptions integrator_options(const CommonOptions& o) {
    IntegratorOptions opts;
    opts.tol = o.tol;
    opts.grid_points = o.grid;
    return opts;
}

void check_format(const CommonOptions& o) {
    if (o.format != "csv" && o.format != "json") {
        throw ConfigError("--format must be csv or json, got " + o.format);
    }
}

PulseSchedule load_schedule(const std::string& path) { return schedule_from_json(read_json_file(path)); }

json resolved_config(const std::string& command, const CommonOptions& o, const json& extra) {
    json j{{"command", command}, {"config_path", o.config}, {"tol", o.tol}, {"grid", o.grid}, {"format", o.format}};
    j.update(extra);
    return j;
}

// Writes to --out when given, otherwise to the command's stdout.
void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw ConfigError("cannot write output file: " + path);
    }
    file << text;
}

std::string csv_comment(const json& config) { return "# config: " + config.dump() + "\n"; }

/// Transfer angle read off the final populations, in [0, pi/2].
double gamma_from_amplitudes(const AmplitudeBlock& b) { return std::atan2(std::abs(b.b(3)), std::abs(b.b(0))); }

json simulation_summary(const PulseSchedule& s, const Trajectory& traj, double gamma_signed) {
    const AmplitudeBlock& last = traj.final_state();
    return json{{"gamma_analytic", std::abs(gamma_signed)},
                {"gamma_analytic_signed", gamma_signed},
                {"gamma_from_populations", gamma_from_amplitudes(last)},
                {"max_p2", traj.diagnostics.max_p2},
                {"s_prime", effective_pulse_area(s)},
                {"norm_drift", traj.diagnostics.max_norm_drift},
                {"final_populations", {last.population(1), last.population(2), last.population(3), last.population(4)}},
                {"adiabaticity",
                 {{"max_theta_ratio", traj.diagnostics.max_theta_ratio},
                  {"max_phi_ratio", traj.diagnostics.max_phi_ratio},
                  {"flagged", std::max(traj.diagnostics.max_theta_ratio, traj.diagnostics.max_phi_ratio) >
                                  kAdiabaticityThreshold}}},
                {"steps", {{"accepted", traj.diagnostics.accepted_steps}, {"rejected", traj.diagnostics.rejected_steps}}}};
}

int cmd_simulate(const CommonOptions& o, const std::string& summary_path, std::ostream& out, std::ostream& err) {
    check_format(o);
    const PulseSchedule s = load_schedule(o.config);
    const Trajectory traj = integrate_schrodinger(s, AmplitudeBlock::basis(1, s.n), integrator_options(o));
    const double gamma = mixing_angle_gamma(s);

    const json config = resolved_config("simulate", o, {{"schedule", s}});
    json summary = simulation_summary(s, traj, gamma);
    summary["config"] = config;

    if (o.format == "json") {
        json doc = summary;
        doc["trajectory"] = {{"t", traj.times}, {"p1", traj.populations[0]}, {"p2", traj.populations[1]},
                             {"p3", traj.populations[2]}, {"p4", traj.populations[3]}};
        emit(o.out, out, doc.dump(2) + "\n");
        return kOk;
    }

    std::ostringstream csv;
    csv << csv_comment(config);
    write_trajectory_csv(csv, traj);
    emit(o.out, out, csv.str());

    std::string target = summary_path;
    if (target.empty() && !o.out.empty()) {
        target = o.out + ".summary.json";
    }
    if (target.empty()) {
        err << summary.dump(2) << "\n";
    } else {
        emit(target, out, summary.dump(2) + "\n");
    }
    return kOk;
}

struct SweepRow {
    double delay = 0.0;
    double gamma_analytic = 0.0;
    double gamma_ode = 0.0;
    double max_p2 = 0.0;
};

/// Evaluates f(k) for k in [0, count) on a small thread pool; results keep grid order.
template <class F>
void parallel_for(std::size_t count, F&& f) {
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, count == 0 ? 1 : count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                f(k);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

int cmd_sweep(const CommonOptions& o, const DelayRange& range, std::ostream& out) {
    check_format(o);
    const PulseSchedule base = load_schedule(o.config);
    const std::vector<double> delays = range.grid();
    const IntegratorOptions opts = integrator_options(o);

    std::vector<SweepRow> rows(delays.size());
    parallel_for(delays.size(), [&](std::size_t k) {
        const PulseSchedule s = with_delay(base, delays[k]);
        validate_schedule(s);
        const Trajectory traj = integrate_schrodinger(s, AmplitudeBlock::basis(1, s.n), opts);
        rows[k] = {delays[k], std::abs(mixing_angle_gamma(s)), gamma_from_amplitudes(traj.final_state()),
                   traj.diagnostics.max_p2};
    });

    const json config = resolved_config(
        "sweep-delay", o,
        {{"schedule", base}, {"delay_min", range.min}, {"delay_max", range.max}, {"delay_step", range.step}});
    if (o.format == "json") {
        json doc{{"config", config}, {"rows", json::array()}};
        for (const SweepRow& r : rows) {
            doc["rows"].push_back(
                {{"delay", r.delay}, {"gamma_analytic", r.gamma_analytic}, {"gamma_ode", r.gamma_ode}, {"max_p2", r.max_p2}});
        }
        emit(o.out, out, doc.dump(2) + "\n");
        return kOk;
    }
    std::ostringstream csv;
    csv << csv_comment(config) << "delay,gamma_analytic,gamma_ode,max_p2\n";
    for (const SweepRow& r : rows) {
        csv << fmt(r.delay) << ',' << fmt(r.gamma_analytic) << ',' << fmt(r.gamma_ode) << ',' << fmt(r.max_p2) << '\n';
    }
    emit(o.out, out, csv.str());
    return kOk;
}

constexpr double kDesignTol = 1e-4;
constexpr double kDesignPopulationTol = 1e-2;

struct DesignResult {
    double delay = 0.0;
    double gamma_signed = 0.0;
    double gamma_min = 0.0;
    double gamma_max = 0.0;
};

DesignResult find_delay(const PulseSchedule& base, const DelayRange& range, double target) {
    const std::vector<double> delays = range.grid();
    auto transfer = [&](double delay) { return std::abs(mixing_angle_gamma(with_delay(base, delay))); };

    std::vector<double> values(delays.size());
    parallel_for(delays.size(), [&](std::size_t k) { values[k] = transfer(delays[k]); });

    DesignResult result;
    result.gamma_min = *std::min_element(values.begin(), values.end());
    result.gamma_max = *std::max_element(values.begin(), values.end());
    if (target < result.gamma_min - kDesignTol || target > result.gamma_max + kDesignTol) {
        std::ostringstream msg;
        msg << "gamma target " << target << " outside the achievable range [" << result.gamma_min << ", "
            << result.gamma_max << "] over delays [" << range.min << ", " << range.max << "]";
        throw ConfigError(msg.str());
    }

    // Earliest sign change of |gamma| - target, refined by bisection.
    for (std::size_t k = 0; k + 1 < delays.size(); ++k) {
        double lo = delays[k], hi = delays[k + 1];
        double f_lo = values[k] - target;
        const double f_hi = values[k + 1] - target;
        if (f_lo == 0.0) {
            result.delay = lo;
            result.gamma_signed = mixing_angle_gamma(with_delay(base, lo));
            return result;
        }
        if ((f_lo < 0.0) == (f_hi < 0.0)) {
            continue;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = transfer(mid) - target;
            if (std::abs(f_mid) <= 1e-3 * kDesignTol) {
                lo = hi = mid;
                break;
            }
            if ((f_mid < 0.0) == (f_lo < 0.0)) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        result.delay = 0.5 * (lo + hi);
        result.gamma_signed = mixing_angle_gamma(with_delay(base, result.delay));
        return result;
    }

    // No crossing (e.g. a target of 0 met only asymptotically): closest grid point, latest on ties.
    std::size_t best = 0;
    for (std::size_t k = 1; k < delays.size(); ++k) {
        if (std::abs(values[k] - target) <= std::abs(values[best] - target)) {
            best = k;
        }
    }
    if (std::abs(values[best] - target) > kDesignTol) {
        std::ostringstream msg;
        msg << "no delay in [" << range.min << ", " << range.max << "] reaches gamma " << target
            << " within " << kDesignTol << "; closest is " << values[best] << " at delay " << delays[best];
        throw ConfigError(msg.str());
    }
    result.delay = delays[best];
    result.gamma_signed = mixing_angle_gamma(with_delay(base, result.delay));
    return result;
}

int cmd_design(const CommonOptions& o, const DelayRange& range, double target, std::ostream& out) {
    check_format(o);
    if (!(target >= 0.0 && target <= std::numbers::pi / 2)) {
        std::ostringstream msg;
        msg << "--gamma-target must lie in [0, pi/2], got " << target;
        throw ConfigError(msg.str());
    }
    const PulseSchedule base = load_schedule(o.config);
    const DesignResult found = find_delay(base, range, target);

    const PulseSchedule s = with_delay(base, found.delay);
    const Trajectory traj = integrate_schrodinger(s, AmplitudeBlock::basis(1, s.n), integrator_options(o));
    json verification = simulation_summary(s, traj, found.gamma_signed);
    const AmplitudeBlock& last = traj.final_state();
    const double dp1 = std::abs(last.population(1) - std::pow(std::cos(target), 2));
    const double dp4 = std::abs(last.population(4) - std::pow(std::sin(target), 2));
    verification["population_error"] = std::max(dp1, dp4);
    verification["verified"] = std::max(dp1, dp4) <= kDesignPopulationTol;

    const json config = resolved_config("design", o,
                                        {{"schedule", base},
                                         {"gamma_target", target},
                                         {"delay_min", range.min},
                                         {"delay_max", range.max},
                                         {"delay_step", range.step}});
    const double achieved = std::abs(found.gamma_signed);
    if (o.format == "json") {
        const json doc{{"config", config},
                       {"gamma_target", target},
                       {"delay", found.delay},
                       {"gamma_analytic", achieved},
                       {"gamma_analytic_signed", found.gamma_signed},
                       {"residual", achieved - target},
                       {"bracket_gamma_range", {found.gamma_min, found.gamma_max}},
                       {"schedule", s},
                       {"verification", verification}};
        emit(o.out, out, doc.dump(2) + "\n");
        return kOk;
    }
    std::ostringstream csv;
    csv << csv_comment(config) << "delay,gamma_target,gamma_analytic,gamma_ode,population_error\n"
        << fmt(found.delay) << ',' << fmt(target) << ',' << fmt(achieved) << ','
        << fmt(gamma_from_amplitudes(last)) << ',' << fmt(std::max(dp1, dp4)) << '\n';
    emit(o.out, out, csv.str());
    return kOk;
}

int cmd_entangle(const CommonOptions& o, std::optional<int> n_max_flag, std::ostream& out) {
    if (o.format != "json") {
        throw ConfigError("entangle writes a JSON report; use --format json");
    }
    const json cfg = read_json_file(o.config);
    if (!cfg.is_object() || !cfg.contains("stage1") || !cfg.contains("stage2")) {
        throw ConfigError(o.config + ": entangle config needs \"stage1\" and \"stage2\" schedules");
    }
    const PulseSchedule stage1 = schedule_from_json(cfg.at("stage1"));
    const PulseSchedule stage2 = schedule_from_json(cfg.at("stage2"));
    int n_max = 2;
    try {
        n_max = n_max_flag.value_or(cfg.value("n_max", 2));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed n_max: ") + e.what());
    }

    const ProtocolResult result = run_protocol(stage1, stage2, n_max, integrator_options(o));
    const json config = resolved_config("entangle", o, {{"stage1", stage1}, {"stage2", stage2}, {"n_max", n_max}});
    json doc = result.report;
    doc["stage1"] = stage1;
    doc["stage2"] = stage2;
    doc["leaked_norm"] = {{"stage1", result.leaked_stage1}, {"stage2", result.leaked_stage2}};
    doc["photon_distribution"] = photon_distribution(result.state);
    doc["config"] = config;
    emit(o.out, out, doc.dump(2) + "\n");
    return kOk;
}

void add_common(CLI::App& sub, CommonOptions& o, bool needs_format = true) {
    sub.add_option("--config", o.config, "Schedule configuration (JSON)")->required();
    sub.add_option("--out", o.out, "Output path (default: stdout)");
    if (needs_format) {
        sub.add_option("--format", o.format, "Output format: csv or json");
    }
    sub.add_option("--tol", o.tol, "Integrator local error tolerance");
    sub.add_option("--grid", o.grid, "Points on the reporting grid");
}

void add_range(CLI::App& sub, DelayRange& r) {
    sub.add_option("--delay-min", r.min, "First delay center(W2) - center(W1)");
    sub.add_option("--delay-max", r.max, "Last delay");
    sub.add_option("--delay-step", r.step, "Delay increment");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adiabatic cavity Fock-superposition and two-atom entanglement simulator", "fockstir"};
    app.require_subcommand(1);

    CommonOptions simulate_opts;
    std::string summary_path;
    auto* simulate = app.add_subcommand("simulate", "Integrate one schedule and summarise it");
    add_common(*simulate, simulate_opts);
    simulate->add_option("--summary", summary_path, "Summary JSON path (default: <out>.summary.json)");

    CommonOptions sweep_opts;
    DelayRange sweep_range;
    auto* sweep = app.add_subcommand("sweep-delay", "Dark-state rotation angle as a function of delay");
    add_common(*sweep, sweep_opts);
    add_range(*sweep, sweep_range);

    CommonOptions design_opts;
    DelayRange design_range{0.0, 160.0, 2.0};
    double gamma_target = 0.0;
    auto* design = app.add_subcommand("design", "Find the delay producing a target rotation angle");
    add_common(*design, design_opts);
    add_range(*design, design_range);
    design->add_option("--gamma-target", gamma_target, "Target |gamma| in radians")->required();

    CommonOptions entangle_opts;
    entangle_opts.format = "json";
    std::optional<int> n_max;
    auto* entangle = app.add_subcommand("entangle", "Run the two-atom protocol");
    add_common(*entangle, entangle_opts);
    entangle->add_option("--n-max", n_max, "Photon-number truncation");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(simulate_opts, summary_path, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_opts, sweep_range, out);
        }
        if (design->parsed()) {
            return cmd_design(design_opts, design_range, gamma_target, out);
        }
        return cmd_entangle(entangle_opts, n_max, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    }
}

} // namespace fockstir::cli
