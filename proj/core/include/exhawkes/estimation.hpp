#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "exhawkes/kernels.hpp"
#include "exhawkes/pair_counts.hpp"
#include "exhawkes/surface.hpp"

namespace exhawkes {

struct EstimationConfig {
    Bandwidths bw;
    int lag_cutoff = 14; // D
    KernelSpec kernels;
    /// Skip the C1 correction everywhere (local-constant smoothing). All
    /// weights are then non-negative, so no cell is ever clipped.
    bool local_constant = false;
};

/// Precomputed local-linear machinery for one (exposure, bandwidth, kernel)
/// combination: per evaluation cell the moment solve, the fallback flag and
/// the exposure denominator. Surfaces for different pair counts (the
/// missing-link iterations, CV scoring) then cost one numerator pass each.
/// Immutable after construction; evaluation methods are const and
/// thread-safe.
class LocalLinearEngine {
public:
    LocalLinearEngine(std::span<const double> exposure, const EstimationConfig& config);

    int horizon() const { return horizon_days_; }
    int lag_cutoff() const { return config_.lag_cutoff; }
    const EstimationConfig& config() const { return config_; }

    double denominator(int t, int w) const;
    bool local_linear_at(int t, int w) const;
    /// C1 weight at cell (t, w) for a design/pair point with offspring day u
    /// and lag d = u - v.
    double c1(int t, int w, int u, int d) const;

    /// Local-linear occurrence sum at (t, w) over the given pairs.
    double numerator(int t, int w, const PairCounts& pairs) const;
    /// Contribution of offspring day u's pairs to numerator(t, w); used for
    /// leave-one-day-out cross-validation.
    double day_contribution(int t, int w, const PairCounts& pairs, int u) const;

    /// Clipped ratio surface over the full grid.
    IntensitySurface ratio_surface(const PairCounts& pairs) const;

    /// Kernel table lookups (zero outside support).
    double k1_of_day_offset(int t_minus_u) const;
    double k2_of_lag_offset(int w_minus_d) const;
    int k1_reach() const { return k1_reach_; }
    int k2_reach() const { return k2_reach_; }

private:
    EstimationConfig config_;
    int horizon_days_ = 0;
    int k1_reach_ = 0; // |t-u| beyond this has K1 = 0
    int k2_reach_ = 0;
    std::vector<double> exposure_;
    std::vector<double> k1_table_; // index |t-u|
    std::vector<double> k2_table_; // index k2_reach_ + (w-d)
    // per cell, (t-1)*D + (w-1)
    std::vector<double> solve1_, solve2_, den_;
    std::vector<std::uint8_t> ll_flag_;

    std::size_t cell(int t, int w) const {
        return static_cast<std::size_t>(t - 1) * config_.lag_cutoff + (w - 1);
    }
};

/// Local-linear ratio estimator from observed pair counts: an occurrence
/// smooth over an exposure smooth, both carrying the C1 correction. Cells
/// with non-positive denominator get value 0 and evaluated = false; negative
/// ratios are clipped to 0 and counted in clipped_cells.
IntensitySurface estimate_full_info(const PairCounts& pairs, std::span<const double> exposure,
                                    const EstimationConfig& config);

/// Same smoother applied to soft (reconstructed) pair counts.
IntensitySurface update_surface(const PairCounts& pairs, std::span<const double> exposure,
                                const EstimationConfig& config);

/// Soft attribution of each day's offspring count to candidate parent days,
/// proportional to surface(u, u-v) * exposure[v]. Days whose weight sum is
/// zero but whose offspring count is positive are skipped and listed.
struct Responsibilities {
    PairCounts pairs;
    std::vector<int> skipped_days;
};

Responsibilities responsibilities(const IntensitySurface& surface,
                                  std::span<const double> offspring,
                                  std::span<const double> exposure);

struct IterationDiagnostics {
    int iterations_run = 0;
    std::vector<double> sup_relative_change; // one entry per iteration
    bool converged = false;
    double final_residual = 0.0; // last sup relative change
    std::vector<int> skipped_days; // from the final responsibility pass
};

struct MissingLinkConfig {
    EstimationConfig est;
    double tol = 1e-4;
    int max_iter = 100;
    std::optional<IntensitySurface> init; // default: uniform 1/D over the lag support
};

struct MissingLinkResult {
    IntensitySurface surface;
    IterationDiagnostics diagnostics;
    PairCounts responsibilities; // converged soft pairs
};

/// Iterative missing-link estimator: alternate responsibilities and the
/// surface update until the sup relative change drops below tol or max_iter
/// is reached. Non-convergence is reported, not thrown. For mu1 pass the
/// infection counts as both exposure and offspring; for mu2 pass infections
/// as exposure and hospitalizations as offspring.
MissingLinkResult estimate_missing_link(std::span<const double> exposure,
                                        std::span<const double> offspring,
                                        const MissingLinkConfig& config);

/// Sup-norm relative distance between the surface and one iteration step
/// applied to it: sup |mu - OneStep(mu)| / (sup mu + eps). Zero at an exact
/// fixed point of the update equation.
double fixed_point_residual(const IntensitySurface& surface,
                            std::span<const double> exposure,
                            std::span<const double> offspring,
                            const EstimationConfig& config);

} // namespace exhawkes
