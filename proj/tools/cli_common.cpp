#include "cli_common.hpp"

#include <cstdlib>
#include <fstream>

#include "exhawkes/errors.hpp"
#include "exhawkes/version.hpp"

namespace excli {

using namespace exhawkes;

void add_common_options(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("-o,--out", opts.out_dir, "Output directory (created if missing)")
        ->required();
    cmd.add_option("--threads", opts.threads,
                   "Worker thread cap (also via EXPOSURE_HAWKES_THREADS)");
    cmd.configurable(); // reachable from a [subcommand] section in --config files
}

std::filesystem::path ensure_out_dir(const CommonOptions& opts) {
    if (opts.threads > 0) {
        // thread_limit() reads the environment once, before any parallel work
        setenv("EXPOSURE_HAWKES_THREADS", std::to_string(opts.threads).c_str(), 1);
    }
    std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_manifest(const CLI::App& cmd, const std::filesystem::path& out_dir) {
    const CLI::App* root = &cmd;
    while (root->get_parent() != nullptr) root = root->get_parent();
    const std::filesystem::path target = out_dir / "manifest.txt";
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << "# exhawkes " << version_string << " manifest\n";
        out << "# subcommand: " << cmd.get_name() << "\n";
        out << root->config_to_str(true, false);
        if (!out) throw data_error("cannot write manifest in " + out_dir.string());
    }
    std::filesystem::rename(tmp, target);
}

void add_input_options(CLI::App& cmd, InputOptions& opts) {
    cmd.add_option("--input", opts.input_path, "Daily counts CSV")->required();
    cmd.add_option("--date-col", opts.columns.date, "Name of the date column");
    cmd.add_option("--positives-col", opts.columns.positives,
                   "Name of the daily new-positives column");
    cmd.add_option("--hosp-col", opts.columns.hospitalized,
                   "Name of the daily new-hospitalized column");
}

void add_estimate_options(CLI::App& cmd, EstimateOptions& opts) {
    cmd.add_option("--mode", opts.mode, "Estimation mode")
        ->check(CLI::IsMember({"missing-link", "full-info"}));
    cmd.add_option("--target", opts.target, "Which intensity to estimate")
        ->check(CLI::IsMember({"mu1", "mu2", "both"}));
    cmd.add_option("--pairs", opts.pairs_path,
                   "Observed infection pair counts CSV (full-info mode)");
    cmd.add_option("--pairs-hosp", opts.pairs_hosp_path,
                   "Observed hospitalization pair counts CSV (full-info mode)");
    cmd.add_option("--d1", opts.lag_cutoff1, "Lag support cutoff for mu1 (days)");
    cmd.add_option("--d2", opts.lag_cutoff2, "Lag support cutoff for mu2 (days)");
    cmd.add_option("--b1", opts.b1, "Calendar-time bandwidth (fraction of the horizon)");
    cmd.add_option("--b2", opts.b2, "Lag bandwidth (days)");
    cmd.add_flag("--cv", opts.run_cv, "Select bandwidths by cross-validation");
    cmd.add_flag("--fast", opts.cv_fast,
                 "CV: reuse pilot responsibilities instead of refitting per candidate");
    cmd.add_option("--b1-grid", opts.b1_grid, "CV candidates for b1")->delimiter(',');
    cmd.add_option("--b2-grid", opts.b2_grid, "CV candidates for b2")->delimiter(',');
    cmd.add_option("--kernel", opts.kernel, "Kernel family for both axes")
        ->check(CLI::IsMember({"epanechnikov", "quartic", "gaussian-truncated"}));
    cmd.add_option("--tol", opts.tol, "Missing-link stopping tolerance");
    cmd.add_option("--max-iter", opts.max_iter, "Missing-link iteration cap");
}

namespace {

EstimationConfig base_config(const EstimateOptions& opts, bool mu2) {
    EstimationConfig config;
    config.lag_cutoff = mu2 ? opts.lag_cutoff2 : opts.lag_cutoff1;
    config.bw = {opts.b1, opts.b2};
    const KernelFamily family = kernel_family_from_name(opts.kernel);
    config.kernels = {family, family};
    return config;
}

} // namespace

EstimatedTarget estimate_target(const Dataset& data, const EstimateOptions& opts, bool mu2) {
    const auto exposure = data.infections.as_doubles();
    std::vector<double> offspring;
    if (mu2) {
        if (!data.hospitalizations)
            throw config_error("mu2 estimation needs a hospitalization column");
        offspring = data.hospitalizations->as_doubles();
    } else {
        offspring = exposure;
    }

    EstimatedTarget result;
    EstimationConfig config = base_config(opts, mu2);
    const bool full_info = opts.mode == "full-info";

    PairCounts pairs;
    if (full_info) {
        const std::string& path = mu2 ? opts.pairs_hosp_path : opts.pairs_path;
        if (path.empty())
            throw config_error(std::string("full-info mode needs --pairs") +
                               (mu2 ? "-hosp" : ""));
        pairs = PairCounts::read_csv(path, static_cast<int>(exposure.size()),
                                     config.lag_cutoff);
    }

    if (opts.run_cv) {
        BandwidthGrid grid = BandwidthGrid::default_grid();
        if (!opts.b1_grid.empty()) grid.b1_candidates = opts.b1_grid;
        if (!opts.b2_grid.empty()) grid.b2_candidates = opts.b2_grid;
        // keep b2 candidates within the lag support
        std::erase_if(grid.b2_candidates,
                      [&](double b2) { return b2 > config.lag_cutoff; });
        CvOptions cv;
        cv.mode = full_info ? CvMode::full_info : CvMode::missing_link;
        cv.lag_cutoff = config.lag_cutoff;
        cv.kernels = config.kernels;
        cv.pairs = full_info ? &pairs : nullptr;
        cv.tol = opts.tol;
        cv.max_iter = opts.max_iter;
        cv.fast = opts.cv_fast;
        result.cv = select_bandwidths(exposure, offspring, grid, cv);
        config.bw = result.cv->selected;
    }
    result.bandwidths = config.bw;

    if (full_info) {
        result.surface = estimate_full_info(pairs, exposure, config);
    } else {
        MissingLinkConfig ml;
        ml.est = config;
        ml.tol = opts.tol;
        ml.max_iter = opts.max_iter;
        MissingLinkResult fit = estimate_missing_link(exposure, offspring, ml);
        result.surface = std::move(fit.surface);
        result.diagnostics = std::move(fit.diagnostics);
    }
    return result;
}

void write_estimate_outputs(const EstimatedTarget& target, const Dataset& data,
                            const std::string& name,
                            const std::vector<std::string>& slice_dates,
                            const std::filesystem::path& out_dir, std::string& diagnostics) {
    write_surface_csv(target.surface, out_dir / (name + "_surface.csv"));
    if (target.cv) write_cv_table(*target.cv, out_dir / ("cv_" + name + ".csv"));

    if (!slice_dates.empty()) {
        // one column per onset date: the intensity of the cohort infected on
        // that date, as a function of the elapsed lag
        const std::filesystem::path path = out_dir / ("slices_" + name + ".csv");
        const std::filesystem::path tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << "lag";
            std::vector<int> onsets;
            for (const auto& text : slice_dates) {
                const Date d = Date::from_iso(text);
                onsets.push_back(data.infections.day_index(d));
                out << ',' << text;
            }
            out << '\n';
            char buf[48];
            for (int w = 1; w <= target.surface.lag_cutoff; ++w) {
                out << w;
                for (int onset : onsets) {
                    const int t = onset + w;
                    out << ',';
                    if (t <= target.surface.horizon_days) {
                        std::snprintf(buf, sizeof buf, "%.17g", target.surface.at(t, w));
                        out << buf;
                    }
                }
                out << '\n';
            }
            if (!out) throw data_error("cannot write " + path.string());
        }
        std::filesystem::rename(tmp, path);
    }

    diagnostics += name + ".b1 = " + std::to_string(target.bandwidths.b1) + "\n";
    diagnostics += name + ".b2 = " + std::to_string(target.bandwidths.b2) + "\n";
    diagnostics += name + ".clipped_cells = " + std::to_string(target.surface.clipped_cells) + "\n";
    if (target.diagnostics) {
        const auto& d = *target.diagnostics;
        diagnostics += name + ".converged = " + (d.converged ? "true" : "false") + "\n";
        diagnostics += name + ".iterations = " + std::to_string(d.iterations_run) + "\n";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", d.final_residual);
        diagnostics += name + ".final_residual = " + std::string(buf) + "\n";
        diagnostics += name + ".skipped_days = " + std::to_string(d.skipped_days.size()) + "\n";
    }
}

} // namespace excli
