#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "exhawkes/errors.hpp"
#include "exhawkes/forecast.hpp"

namespace excli {

using namespace exhawkes;

namespace {

struct ForecastCmdOptions {
    CommonOptions common;
    InputOptions input;
    std::string mu1_surface_path, mu2_surface_path;
    bool chain_estimate = false;
    EstimateOptions est;
    std::string t_star_date;
    int t_star_index = 0;
    int horizon = 0;
    double c_value = 0.0;
    double r_target = 0.0;
    bool calibrate = false;
    std::string objective = "infections";
    int shift_days = 0;
    double grid_lo = 0.2, grid_hi = 3.0, grid_step = 0.01;
    int replicates = 0;
    std::uint64_t seed = 1;
    int rho_cutoff = 0;
};

void write_forecast_csv(const ForecastResult& fc, const Dataset& data,
                        const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << "day,date,infections_forecast,hospitalizations_forecast\n";
        char buf[96];
        for (int s = 1; s <= fc.horizon; ++s) {
            const int day = fc.t_star + s;
            const Date date = data.infections.start_date + (day - 1);
            out << day << ',' << date.to_iso() << ',';
            std::snprintf(buf, sizeof buf, "%.17g", fc.infections[s - 1]);
            out << buf << ',';
            if (!fc.hospitalizations.empty()) {
                std::snprintf(buf, sizeof buf, "%.17g", fc.hospitalizations[s - 1]);
                out << buf;
            }
            out << '\n';
        }
        if (!out) throw data_error("cannot write " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_curve_csv(const OptimalCResult& oc, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << "C,sse\n";
        char buf[80];
        for (const auto& point : oc.curve) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", point.c, point.sse);
            out << buf;
        }
        if (!out) throw data_error("cannot write " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_intervals_csv(const ForecastPaths& paths, const ForecastResult& fc,
                         const Dataset& data, const std::filesystem::path& path) {
    auto quantile = [](std::vector<double>& values, double q) {
        std::sort(values.begin(), values.end());
        const double pos = q * (values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (pos - lo) * (values[hi] - values[lo]);
    };
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << "day,date,inf_p05,inf_p50,inf_p95";
        const bool with_hosp = !paths.hospitalizations.empty();
        if (with_hosp) out << ",hosp_p05,hosp_p50,hosp_p95";
        out << '\n';
        std::vector<double> column(paths.infections.size());
        for (int s = 0; s < fc.horizon; ++s) {
            const int day = fc.t_star + s + 1;
            const Date date = data.infections.start_date + (day - 1);
            out << day << ',' << date.to_iso();
            for (std::size_t p = 0; p < paths.infections.size(); ++p)
                column[p] = paths.infections[p][s];
            out << ',' << quantile(column, 0.05) << ',' << quantile(column, 0.5) << ','
                << quantile(column, 0.95);
            if (with_hosp) {
                for (std::size_t p = 0; p < paths.hospitalizations.size(); ++p)
                    column[p] = paths.hospitalizations[p][s];
                out << ',' << quantile(column, 0.05) << ',' << quantile(column, 0.5) << ','
                    << quantile(column, 0.95);
            }
            out << '\n';
        }
        if (!out) throw data_error("cannot write " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

void run(const ForecastCmdOptions& opts, const CLI::App& cmd) {
    const auto out_dir = ensure_out_dir(opts.common);
    const Dataset data = load_counts(opts.input.input_path, opts.input.columns);
    const auto series = data.infections.as_doubles();

    // resolve t*
    int t_star = opts.t_star_index;
    if (!opts.t_star_date.empty())
        t_star = data.infections.day_index(Date::from_iso(opts.t_star_date));
    if (t_star < 1)
        throw config_error("forecast needs --t-star (date) or --t-star-index (day)");
    if (opts.horizon < 1) throw config_error("forecast needs --h >= 1");

    // exactly one source of C
    const int c_sources = (opts.c_value > 0.0 ? 1 : 0) + (opts.r_target > 0.0 ? 1 : 0) +
                          (opts.calibrate ? 1 : 0);
    if (c_sources != 1)
        throw config_error("exactly one of --c, --r-target or --calibrate is required");

    // surfaces: load or re-estimate
    IntensitySurface mu1;
    std::optional<IntensitySurface> mu2;
    if (opts.chain_estimate) {
        Dataset window = data;
        window.infections.counts.resize(t_star);
        if (window.hospitalizations) window.hospitalizations->counts.resize(t_star);
        mu1 = estimate_target(window, opts.est, false).surface;
        if (window.hospitalizations) mu2 = estimate_target(window, opts.est, true).surface;
    } else {
        if (opts.mu1_surface_path.empty())
            throw config_error("forecast needs --mu1-surface (or --estimate)");
        mu1 = read_surface_csv(opts.mu1_surface_path);
        if (!opts.mu2_surface_path.empty()) mu2 = read_surface_csv(opts.mu2_surface_path);
    }
    if (mu1.horizon_days < t_star)
        throw data_error("mu1 surface does not reach t*");

    // choose C
    double c = opts.c_value;
    OptimalCResult calibration;
    if (opts.r_target > 0.0) {
        const int r_day = t_star - opts.shift_days;
        if (r_day < 1 || r_day > mu1.horizon_days)
            throw config_error("--shift-days moves the reproduction day outside the surface");
        c = c_from_r(reproduction_number(mu1, r_day), opts.r_target);
    } else if (opts.calibrate) {
        const CalibrationObjective objective = opts.objective == "hospitalizations"
                                                   ? CalibrationObjective::hospitalizations
                                                   : CalibrationObjective::infections;
        const CountSeries* observed_series = nullptr;
        if (objective == CalibrationObjective::infections) {
            observed_series = &data.infections;
        } else {
            if (!data.hospitalizations)
                throw config_error("hospitalizations objective needs a hospitalization column");
            observed_series = &data.hospitalizations.value();
        }
        if (observed_series->size() < t_star + opts.horizon)
            throw data_error("calibration needs observed counts through t* + h");
        std::vector<double> observed(opts.horizon);
        for (int s = 1; s <= opts.horizon; ++s)
            observed[s - 1] =
                static_cast<double>(observed_series->counts[t_star + s - 1]);
        calibration = optimal_c(observed, mu1, mu2 ? &*mu2 : nullptr, series, t_star,
                                opts.horizon, objective,
                                {opts.grid_lo, opts.grid_hi, opts.grid_step});
        c = calibration.c;
        write_curve_csv(calibration, out_dir / "c_curve.csv");
    }

    const Mu1Extension ext = extrapolate_mu1(mu1, t_star, opts.horizon, c);
    const ForecastResult fc = forecast_counts(ext, mu2 ? &*mu2 : nullptr, series, t_star,
                                              opts.rho_cutoff);
    write_forecast_csv(fc, data, out_dir / "forecast.csv");
    write_surface_csv(ext.to_surface(), out_dir / "mu1_extension.csv");

    if (opts.replicates > 0) {
        const ForecastPaths paths = sample_forecast_paths(
            ext, mu2 ? &*mu2 : nullptr, series, t_star, opts.replicates, opts.seed);
        write_intervals_csv(paths, fc, data, out_dir / "forecast_intervals.csv");
    }

    {
        const std::filesystem::path path = out_dir / "diagnostics.txt";
        const std::filesystem::path tmp = path.string() + ".tmp";
        std::ofstream out(tmp, std::ios::trunc);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c);
        out << "c_used = " << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.17g", fc.r_at_tstar);
        out << "r_at_tstar = " << buf << "\n";
        out << "t_star_index = " << t_star << "\n";
        out << "immigration_warning = " << (fc.immigration_warning ? "true" : "false") << "\n";
        if (opts.calibrate) {
            std::snprintf(buf, sizeof buf, "%.17g", calibration.sse);
            out << "calibration_sse = " << buf << "\n";
        }
        out.close();
        std::filesystem::rename(tmp, path);
    }
    write_manifest(cmd, out_dir);

    std::cout << "forecast: t*=" << t_star << " h=" << opts.horizon << " C=" << c
              << " R(t*)=" << fc.r_at_tstar;
    if (fc.immigration_warning)
        std::cout << " [warning: t* inside the active immigration window]";
    std::cout << "\n";
}

} // namespace

void register_forecast(CLI::App& app) {
    auto opts = std::make_shared<ForecastCmdOptions>();
    CLI::App* cmd = app.add_subcommand(
        "forecast", "Extrapolate the infection rate by a change factor C and project counts");
    cmd->set_help_flag("--help", "Print this help message and exit"); // frees -h for --h
    add_common_options(*cmd, opts->common);
    add_input_options(*cmd, opts->input);
    cmd->add_option("--mu1-surface", opts->mu1_surface_path, "Estimated mu1 surface CSV");
    cmd->add_option("--mu2-surface", opts->mu2_surface_path, "Estimated mu2 surface CSV");
    cmd->add_flag("--estimate", opts->chain_estimate,
                  "Re-estimate the surfaces from the input before forecasting");
    add_estimate_options(*cmd, opts->est);
    cmd->add_option("--t-star", opts->t_star_date, "Last estimation day (YYYY-MM-DD)");
    cmd->add_option("--t-star-index", opts->t_star_index, "Last estimation day (1-based index)");
    cmd->add_option("--h,--horizon", opts->horizon, "Forecast horizon in days")->required();
    cmd->add_option("--c", opts->c_value, "Expert change factor C");
    cmd->add_option("--r-target", opts->r_target,
                    "Reproduction-number target at the end of the horizon");
    cmd->add_flag("--calibrate", opts->calibrate,
                  "Choose C by minimizing the retrospective prediction error");
    cmd->add_option("--objective", opts->objective, "Calibration objective")
        ->check(CLI::IsMember({"infections", "hospitalizations"}));
    cmd->add_option("--shift-days", opts->shift_days,
                    "Evaluate the reproduction number this many days before t* "
                    "(published-R alignment)");
    cmd->add_option("--c-grid-lo", opts->grid_lo, "Calibration grid lower bound");
    cmd->add_option("--c-grid-hi", opts->grid_hi, "Calibration grid upper bound");
    cmd->add_option("--c-grid-step", opts->grid_step, "Calibration grid step");
    cmd->add_option("--replicates", opts->replicates,
                    "Sample this many Poisson forecast paths for intervals");
    cmd->add_option("--seed", opts->seed, "Seed for the forecast paths");
    cmd->add_option("--d-prime", opts->rho_cutoff,
                    "Known immigration cutoff day (arms a warning when t* is inside)");

    cmd->callback([opts, cmd] { run(*opts, *cmd); });
}

} // namespace excli
