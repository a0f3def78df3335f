#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "exhawkes/surface.hpp"

namespace exhawkes {

/// mu1 extrapolated beyond the last estimation day t*: row s of the
/// extension is the t* row times factor(s) = 1 + (C - 1) * s / h, so the
/// terminal row is exactly C times the t* row. Stored as the base row plus
/// the factor, which keeps the row-sum identity
/// R(t*+s) = factor(s) * R(t*) exact.
struct Mu1Extension {
    int t_star = 0;
    int horizon = 0; // h
    double change_factor = 1.0; // C
    std::vector<double> base_row; // mu1(t*, w), lags 1..D
    double base_reproduction = 0.0; // sum of base_row

    int lag_cutoff() const { return static_cast<int>(base_row.size()); }
    double factor(int s) const {
        return 1.0 + (change_factor - 1.0) * (static_cast<double>(s) / horizon);
    }
    double value(int s, int w) const {
        if (w < 1 || w > lag_cutoff()) return 0.0;
        return factor(s) * base_row[w - 1];
    }
    double reproduction(int s) const { return factor(s) * base_reproduction; }

    /// Materializes days t*+1..t*+h as surface rows (for CSV output).
    IntensitySurface to_surface() const;
};

/// Throws std::invalid_argument when c <= 0, h < 1 or t_star is outside the
/// surface.
Mu1Extension extrapolate_mu1(const IntensitySurface& mu1, int t_star, int h, double c);

/// R(t) = sum_w mu1(t, w): expected offspring per event at day t.
double reproduction_number(const IntensitySurface& surface, int t);

/// C such that the extrapolated reproduction number at s = h equals
/// r_target: C = r_target / r_at_tstar. Throws when r_at_tstar <= 0.
double c_from_r(double r_at_tstar, double r_target);

struct ForecastResult {
    int t_star = 0;
    int horizon = 0;
    double c_used = 1.0;
    double r_at_tstar = 0.0;
    std::vector<double> infections;       // expected counts, days t*+1..t*+h
    std::vector<double> hospitalizations; // empty without a mu2 surface
    bool immigration_warning = false; // t* inside the active immigration window
};

/// Deterministic expected-value recursion: each forecast day's infection
/// intensity sums the extended mu1 row against observed history and the
/// forecasts already made; hospitalizations apply the mu2 row frozen at t*.
/// Baseline immigration is treated as zero in the forecast window;
/// rho_active_cutoff (max of the rho cutoffs, 0 when unknown) only arms the
/// warning flag.
ForecastResult forecast_counts(const Mu1Extension& mu1_ext, const IntensitySurface* mu2,
                               std::span<const double> history_infections, int t_star,
                               int rho_active_cutoff = 0);

/// Poisson-sampled forecast paths around the expected-value recursion, for
/// predictive intervals. Each path redraws the infections sequentially and
/// feeds the draws forward.
struct ForecastPaths {
    std::vector<std::vector<double>> infections;       // n_paths x h
    std::vector<std::vector<double>> hospitalizations; // empty without mu2
};

ForecastPaths sample_forecast_paths(const Mu1Extension& mu1_ext, const IntensitySurface* mu2,
                                    std::span<const double> history_infections, int t_star,
                                    int n_paths, std::uint64_t seed);

enum class CalibrationObjective { infections, hospitalizations };

struct CGrid {
    double lo = 0.2;
    double hi = 3.0;
    double step = 0.01;
};

struct CCurvePoint {
    double c = 0.0;
    double sse = 0.0;
};

struct OptimalCResult {
    double c = 1.0;
    double sse = 0.0;
    std::vector<CCurvePoint> curve;
};

/// Retrospective calibration: grid search over C minimizing the sum of
/// squared daily errors between the forecast and the observed horizon
/// (length h, days t*+1..t*+h) for the chosen objective. Ties break toward
/// the C nearest 1. Throws std::invalid_argument on an empty grid or when
/// the objective needs a missing mu2 surface.
OptimalCResult optimal_c(std::span<const double> observed_horizon,
                         const IntensitySurface& mu1, const IntensitySurface* mu2,
                         std::span<const double> history_infections, int t_star, int h,
                         CalibrationObjective objective, const CGrid& grid = {});

} // namespace exhawkes
