#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "exhawkes/errors.hpp"
#include "exhawkes/scenarios.hpp"
#include "exhawkes/simulate.hpp"
#include "exhawkes/surface.hpp"

namespace excli {

using namespace exhawkes;

namespace {

struct SimulateOptions {
    CommonOptions common;
    std::string scenario;
    std::string mu1_file, mu2_file, rho1_file, rho2_file;
    ScenarioParams params;
    std::uint64_t seed = 1;
    std::string start_date = "2020-01-01";
    double explosion_cap = 1e7;
};

std::vector<double> read_rho_csv(const std::filesystem::path& path, int horizon) {
    // day,value rows; missing days are zero
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path.string());
    std::string line;
    std::getline(in, line); // header
    std::vector<double> rho(horizon, 0.0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw data_error("bad rho row in " + path.string());
        const int day = std::stoi(line.substr(0, comma));
        const double value = std::stod(line.substr(comma + 1));
        if (day >= 1 && day <= horizon) rho[day - 1] = value;
    }
    return rho;
}

GroundTruth truth_from_options(const SimulateOptions& opts) {
    if (!opts.scenario.empty()) {
        if (!is_scenario_name(opts.scenario))
            throw config_error("unknown scenario '" + opts.scenario + "'");
        return make_scenario(opts.scenario, opts.params);
    }
    if (opts.mu1_file.empty())
        throw config_error("simulate needs either --scenario or --mu1-file");

    // gridded ground truth from surface CSVs
    const IntensitySurface mu1 = read_surface_csv(opts.mu1_file);
    GroundTruth gt;
    gt.horizon_days = mu1.horizon_days;
    gt.lag_cutoff1 = mu1.lag_cutoff;
    gt.n_scale = opts.params.n_scale;
    gt.mu1 = mu1.values;
    if (!opts.mu2_file.empty()) {
        const IntensitySurface mu2 = read_surface_csv(opts.mu2_file);
        if (mu2.horizon_days != gt.horizon_days)
            throw data_error("--mu2-file horizon differs from --mu1-file");
        gt.lag_cutoff2 = mu2.lag_cutoff;
        gt.mu2 = mu2.values;
        gt.rho2.assign(gt.horizon_days, 0.0);
    }
    if (!opts.rho1_file.empty()) {
        gt.rho1 = read_rho_csv(opts.rho1_file, gt.horizon_days);
        gt.rho1_cutoff = gt.horizon_days;
        while (gt.rho1_cutoff > 0 && gt.rho1[gt.rho1_cutoff - 1] == 0.0) --gt.rho1_cutoff;
    } else {
        gt.rho1.assign(gt.horizon_days, 0.0);
        gt.rho1_cutoff = std::min(opts.params.immigration_days, gt.horizon_days);
        for (int t = 1; t <= gt.rho1_cutoff; ++t)
            gt.rho1[t - 1] = opts.params.immigration_level;
    }
    if (!opts.rho2_file.empty()) {
        gt.rho2 = read_rho_csv(opts.rho2_file, gt.horizon_days);
        gt.rho2_cutoff = gt.horizon_days;
        while (gt.rho2_cutoff > 0 && gt.rho2[gt.rho2_cutoff - 1] == 0.0) --gt.rho2_cutoff;
    }
    return gt;
}

void run(const SimulateOptions& opts, const CLI::App& cmd) {
    const auto out_dir = ensure_out_dir(opts.common);

    GroundTruth gt = truth_from_options(opts);
    SimOptions sim_options;
    sim_options.explosion_cap = opts.explosion_cap;
    sim_options.start_date = Date::from_iso(opts.start_date);

    const SimOutput out = simulate(gt, opts.seed, sim_options);

    Dataset data;
    data.infections = out.infections;
    data.hospitalizations = out.hospitalizations;
    data.n_scale = gt.n_scale;
    write_counts(data, out_dir / "counts.csv");
    out.infection_pairs.write_csv(out_dir / "pairs_infection.csv");
    if (out.hospitalizations) out.hospital_pairs.write_csv(out_dir / "pairs_hospital.csv");
    write_manifest(cmd, out_dir);

    std::cout << "simulate: T=" << gt.horizon_days << " days, "
              << out.infections.total() << " infections";
    if (out.hospitalizations)
        std::cout << ", " << out.hospitalizations->total() << " hospitalizations";
    std::cout << " -> " << out_dir.string() << "\n";
}

} // namespace

void register_simulate(CLI::App& app) {
    auto opts = std::make_shared<SimulateOptions>();
    CLI::App* cmd = app.add_subcommand(
        "simulate", "Draw a synthetic epidemic from a built-in scenario or a gridded model");
    add_common_options(*cmd, opts->common);

    std::string scenarios;
    for (const auto& name : scenario_names()) scenarios += (scenarios.empty() ? "" : ", ") + name;
    cmd->add_option("--scenario", opts->scenario, "Built-in scenario (" + scenarios + ")");
    cmd->add_option("--mu1-file", opts->mu1_file,
                    "Gridded mu1 surface CSV (day,lag,value) instead of a scenario");
    cmd->add_option("--mu2-file", opts->mu2_file, "Gridded mu2 surface CSV");
    cmd->add_option("--rho1-file", opts->rho1_file, "Immigration sequence CSV (day,value)");
    cmd->add_option("--rho2-file", opts->rho2_file,
                    "Hospitalization baseline sequence CSV (day,value)");
    cmd->add_option("--t-days", opts->params.horizon_days, "Scenario horizon in days");
    cmd->add_option("--n-scale", opts->params.n_scale, "Population scale factor n");
    cmd->add_option("--branching", opts->params.branching,
                    "Base reproduction number of the scenario");
    cmd->add_option("--d1", opts->params.lag_cutoff1, "Scenario infection lag support");
    cmd->add_option("--d2", opts->params.lag_cutoff2,
                    "Scenario hospitalization lag support (0 disables)");
    cmd->add_option("--immigration-days", opts->params.immigration_days,
                    "Days with active baseline immigration");
    cmd->add_option("--immigration-level", opts->params.immigration_level,
                    "Per-day baseline immigration level (per n)");
    cmd->add_option("--p-hosp", opts->params.p_hosp,
                    "Total infection-to-hospitalization probability");
    cmd->add_option("--ramp-days", opts->params.ramp_days, "Ramp length (ramp-up-1.5x)");
    cmd->add_option("--seed", opts->seed, "Random seed");
    cmd->add_option("--start-date", opts->start_date, "Calendar date of day 1");
    cmd->add_option("--explosion-cap", opts->explosion_cap,
                    "Abort when a day's expected count exceeds this");

    cmd->callback([opts, cmd] { run(*opts, *cmd); });
}

} // namespace excli
