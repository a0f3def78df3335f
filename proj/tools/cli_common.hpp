#pragma once

// Shared plumbing for the exhawkes subcommands: option structs, manifest
// output and small file helpers.

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "exhawkes/bandwidth.hpp"
#include "exhawkes/estimation.hpp"
#include "exhawkes/timeline.hpp"

namespace excli {

struct CommonOptions {
    std::string out_dir;
    unsigned threads = 0; // 0 = library default
};

void add_common_options(CLI::App& cmd, CommonOptions& opts);

/// Creates the output directory (and parents) if missing.
std::filesystem::path ensure_out_dir(const CommonOptions& opts);

/// Writes manifest.txt: a config-file-compatible echo of every effective
/// option of the parsed subcommand, sufficient to reproduce the run.
void write_manifest(const CLI::App& cmd, const std::filesystem::path& out_dir);

/// Column remapping flags shared by estimate and forecast.
struct InputOptions {
    std::string input_path;
    exhawkes::ColumnMap columns;
};

void add_input_options(CLI::App& cmd, InputOptions& opts);

/// Estimation controls shared by `estimate` and `forecast --estimate`.
struct EstimateOptions {
    std::string mode = "missing-link";
    std::string target = "mu1";
    std::string pairs_path;      // observed infection pairs (full-info)
    std::string pairs_hosp_path; // observed hospitalization pairs (full-info)
    int lag_cutoff1 = 14;
    int lag_cutoff2 = 28;
    double b1 = 0.1;
    double b2 = 3.0;
    bool run_cv = false;
    bool cv_fast = false;
    std::vector<double> b1_grid;
    std::vector<double> b2_grid;
    std::string kernel = "epanechnikov";
    double tol = 1e-4;
    int max_iter = 100;
};

void add_estimate_options(CLI::App& cmd, EstimateOptions& opts);

/// One estimated target: the surface plus everything worth reporting.
struct EstimatedTarget {
    exhawkes::IntensitySurface surface;
    std::optional<exhawkes::IterationDiagnostics> diagnostics; // missing-link only
    std::optional<exhawkes::CvResult> cv;
    exhawkes::Bandwidths bandwidths;
};

/// Runs the configured estimation for mu1 or mu2 on the loaded dataset.
EstimatedTarget estimate_target(const exhawkes::Dataset& data, const EstimateOptions& opts,
                                bool mu2);

/// Writes the per-target estimation outputs (surface, CV table, slice file,
/// diagnostics block) into out_dir. slice_dates may be empty.
void write_estimate_outputs(const EstimatedTarget& target, const exhawkes::Dataset& data,
                            const std::string& name,
                            const std::vector<std::string>& slice_dates,
                            const std::filesystem::path& out_dir, std::string& diagnostics);

void register_simulate(CLI::App& app);
void register_estimate(CLI::App& app);
void register_forecast(CLI::App& app);

} // namespace excli
