#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "exhawkes/pair_counts.hpp"
#include "exhawkes/timeline.hpp"

namespace exhawkes {

/// True model for the simulator: gridded intensities mu1 (infection ->
/// infection) and mu2 (infection -> hospitalization), baseline immigration
/// sequences rho1/rho2 that vanish after their cutoffs, and the population
/// scale n. mu2 may be absent (lag_cutoff2 == 0).
struct GroundTruth {
    int horizon_days = 0;   // T
    int lag_cutoff1 = 0;    // D1
    int lag_cutoff2 = 0;    // D2; 0 disables the hospitalization process
    int rho1_cutoff = 0;    // D1': rho1[t] = 0 for t > D1'
    int rho2_cutoff = 0;
    double n_scale = 1.0;
    std::vector<double> mu1;  // horizon_days x lag_cutoff1, row-major by day
    std::vector<double> mu2;  // horizon_days x lag_cutoff2
    std::vector<double> rho1; // per day 1..T
    std::vector<double> rho2;

    double mu1_at(int t, int w) const {
        if (t < 1 || t > horizon_days || w < 1 || w > lag_cutoff1) return 0.0;
        return mu1[static_cast<std::size_t>(t - 1) * lag_cutoff1 + (w - 1)];
    }
    double mu2_at(int t, int w) const {
        if (t < 1 || t > horizon_days || w < 1 || w > lag_cutoff2) return 0.0;
        return mu2[static_cast<std::size_t>(t - 1) * lag_cutoff2 + (w - 1)];
    }
    double rho1_at(int t) const {
        return (t >= 1 && t <= horizon_days && t <= rho1_cutoff) ? rho1[t - 1] : 0.0;
    }
    double rho2_at(int t) const {
        return (t >= 1 && t <= horizon_days && t <= rho2_cutoff) ? rho2[t - 1] : 0.0;
    }

    /// Checks dimensions, non-negativity and the support cutoffs.
    void validate() const; // throws std::invalid_argument
};

/// Builds rho1 from a pre-sample history: rho[t] = sum_i mu1(t/T, t+i) * presample[i],
/// where presample[i] is the per-n count on day -i (i = 0 is day 0). The
/// returned sequence is zero after lag_cutoff1 by the support of mu1.
std::vector<double> rho_from_presample(const GroundTruth& gt,
                                       std::span<const double> presample);

struct SimOptions {
    double explosion_cap = 1e7; // abort when a day's expected count exceeds this
    Date start_date = Date::from_civil(2020, 1, 1);
    /// Continuation mode: days 1..continue_from_day take their infection
    /// counts from fixed_infections instead of being simulated. Fixed days
    /// act as parents but get no parent attribution of their own.
    int continue_from_day = 0;
    std::vector<std::int64_t> fixed_infections;
};

struct SimOutput {
    CountSeries infections;
    std::optional<CountSeries> hospitalizations;
    PairCounts infection_pairs;  // infection -> infection links
    PairCounts hospital_pairs;   // infection -> hospitalization links
    std::vector<std::int64_t> infection_immigrants; // baseline-caused, per day
    std::vector<std::int64_t> hospital_immigrants;
    std::uint64_t seed = 0;
};

/// Discrete-time branching draw of the two count processes. Each day t
/// draws infections ~ Poisson(sum_v mu1(t/T, t-v) * N1[v] + n * rho1[t]) and
/// attributes every event to a parent day (or to immigration)
/// multinomially; hospitalizations follow the same scheme against the
/// realized infections. Deterministic given the seed. Throws data_error
/// when a day's expected count exceeds options.explosion_cap.
SimOutput simulate(const GroundTruth& gt, std::uint64_t seed, const SimOptions& options = {});

/// Truncated chi-series evaluation of the expected intensities:
/// Lambda1[t] = sum_{k=0..k_max} conv_k[t] with conv_0 = n*rho1 and
/// conv_k = mu1 * conv_{k-1} (day-grid convolution). lambda2 applies mu2 and
/// rho2 to Lambda1. tail_sup reports the largest k_max-order term so the
/// caller can bound the truncation error; the series is non-decreasing in
/// k_max.
struct ExpectedIntensity {
    std::vector<double> lambda1;
    std::vector<double> lambda2; // empty when gt has no mu2
    double tail_sup = 0.0;
    int k_max = 0;
};

ExpectedIntensity expected_intensity(const GroundTruth& gt, int k_max);

} // namespace exhawkes
