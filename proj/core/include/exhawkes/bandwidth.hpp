#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "exhawkes/estimation.hpp"

namespace exhawkes {

struct BandwidthGrid {
    std::vector<double> b1_candidates; // fractions of T, strictly increasing
    std::vector<double> b2_candidates; // days, strictly increasing

    static BandwidthGrid default_grid(); // {0.05,0.1,0.15,0.2,0.3} x {2,3,5,7,10}
    void validate(int lag_cutoff) const; // throws std::invalid_argument
};

/// Least-squares cross-validation score for the intensity smoother:
///   Q = sum_cells mu^2(t,w) * exposure[t-w]
///       - 2 * sum_pairs mu^{(-u)}(u, u-v) * pairs(u, v)
/// where mu^{(-u)} removes offspring day u's occurrences from the
/// numerator. Smaller is better.
double cv_score(std::span<const double> exposure, const PairCounts& pairs,
                const EstimationConfig& config);

enum class CvMode { full_info, missing_link };

struct CvOptions {
    CvMode mode = CvMode::missing_link;
    int lag_cutoff = 14;
    KernelSpec kernels;
    /// full_info mode scores these observed pairs at every candidate.
    const PairCounts* pairs = nullptr;
    /// missing_link iteration controls.
    double tol = 1e-4;
    int max_iter = 100;
    /// Reuse the responsibilities from one pilot fit (grid midpoint) instead
    /// of re-running the iteration per candidate.
    bool fast = false;
};

struct CvEntry {
    double b1 = 0.0;
    double b2 = 0.0;
    double score = 0.0;
};

struct CvResult {
    Bandwidths selected;
    std::vector<CvEntry> table; // all grid cells, b1-major
};

/// Joint grid search minimizing cv_score. Ties break toward the larger
/// (smoother) candidate, b1 first. Deterministic given its inputs.
CvResult select_bandwidths(std::span<const double> exposure, std::span<const double> offspring,
                           const BandwidthGrid& grid, const CvOptions& options);

/// CSV with header b1,b2,score.
void write_cv_table(const CvResult& result, const std::filesystem::path& path);

} // namespace exhawkes
