#include <fstream>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "exhawkes/errors.hpp"

namespace excli {

using namespace exhawkes;

namespace {

struct EstimateCmdOptions {
    CommonOptions common;
    InputOptions input;
    EstimateOptions est;
    std::vector<std::string> slices;
    bool compare = false;
};

double interior_l2(const IntensitySurface& a, const IntensitySurface& b) {
    const int t_lo = static_cast<int>(std::ceil(0.2 * a.horizon_days));
    const int t_hi = static_cast<int>(std::floor(0.8 * a.horizon_days));
    double diff2 = 0.0, ref2 = 0.0;
    for (int t = t_lo; t <= t_hi; ++t) {
        for (int w = 2; w <= a.lag_cutoff - 1; ++w) {
            const double d = a.at(t, w) - b.at(t, w);
            diff2 += d * d;
            ref2 += b.at(t, w) * b.at(t, w);
        }
    }
    return ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
}

void run(const EstimateCmdOptions& opts, const CLI::App& cmd) {
    const auto out_dir = ensure_out_dir(opts.common);
    const Dataset data = load_counts(opts.input.input_path, opts.input.columns);

    const bool want_mu1 = opts.est.target == "mu1" || opts.est.target == "both";
    const bool want_mu2 = opts.est.target == "mu2" || opts.est.target == "both";

    std::string diagnostics;
    if (want_mu1) {
        const EstimatedTarget mu1 = estimate_target(data, opts.est, false);
        write_estimate_outputs(mu1, data, "mu1", opts.slices, out_dir, diagnostics);
        std::cout << "mu1: b1=" << mu1.bandwidths.b1 << " b2=" << mu1.bandwidths.b2;
        if (mu1.diagnostics)
            std::cout << (mu1.diagnostics->converged ? ", converged in " : ", stopped after ")
                      << mu1.diagnostics->iterations_run << " iterations";
        std::cout << "\n";

        if (opts.compare && opts.est.mode == "full-info") {
            EstimateOptions ml_opts = opts.est;
            ml_opts.mode = "missing-link";
            ml_opts.b1 = mu1.bandwidths.b1;
            ml_opts.b2 = mu1.bandwidths.b2;
            ml_opts.run_cv = false;
            const EstimatedTarget ml = estimate_target(data, ml_opts, false);
            const double l2 = interior_l2(ml.surface, mu1.surface);
            std::cout << "full-info vs missing-link interior relative L2 distance: " << l2
                      << "\n";
            diagnostics += "mu1.compare_interior_l2 = " + std::to_string(l2) + "\n";
            write_surface_csv(ml.surface, out_dir / "mu1_surface_missing_link.csv");
        }
    }
    if (want_mu2) {
        const EstimatedTarget mu2 = estimate_target(data, opts.est, true);
        write_estimate_outputs(mu2, data, "mu2", opts.slices, out_dir, diagnostics);
        std::cout << "mu2: b1=" << mu2.bandwidths.b1 << " b2=" << mu2.bandwidths.b2;
        if (mu2.diagnostics)
            std::cout << (mu2.diagnostics->converged ? ", converged in " : ", stopped after ")
                      << mu2.diagnostics->iterations_run << " iterations";
        std::cout << "\n";
    }

    {
        const std::filesystem::path path = out_dir / "diagnostics.txt";
        const std::filesystem::path tmp = path.string() + ".tmp";
        std::ofstream out(tmp, std::ios::trunc);
        out << diagnostics;
        out.close();
        std::filesystem::rename(tmp, path);
    }
    write_manifest(cmd, out_dir);
}

} // namespace

void register_estimate(CLI::App& app) {
    auto opts = std::make_shared<EstimateCmdOptions>();
    CLI::App* cmd = app.add_subcommand(
        "estimate", "Estimate the infection and hospitalization intensity surfaces");
    add_common_options(*cmd, opts->common);
    add_input_options(*cmd, opts->input);
    add_estimate_options(*cmd, opts->est);
    cmd->add_option("--slices", opts->slices,
                    "Onset dates (YYYY-MM-DD) for per-cohort intensity slices")
        ->delimiter(',');
    cmd->add_flag("--compare", opts->compare,
                  "Full-info mode: also fit the missing-link estimator and report the "
                  "interior L2 distance");

    cmd->callback([opts, cmd] { run(*opts, *cmd); });
}

} // namespace excli
