#include "exhawkes/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "exhawkes/rng.hpp"

namespace exhawkes {

IntensitySurface Mu1Extension::to_surface() const {
    IntensitySurface s = IntensitySurface::zeros(horizon, lag_cutoff());
    for (int step = 1; step <= horizon; ++step)
        for (int w = 1; w <= lag_cutoff(); ++w) s.set(step, w, value(step, w), true);
    return s;
}

Mu1Extension extrapolate_mu1(const IntensitySurface& mu1, int t_star, int h, double c) {
    // factor(s) = 1 + (C-1)s/h >= min(1, C) > 0 for 0 <= s <= h, so the
    // extension can never go negative once C > 0 is checked here
    if (!(c > 0.0)) throw std::invalid_argument("extrapolate_mu1: C must be positive");
    if (h < 1) throw std::invalid_argument("extrapolate_mu1: horizon must be >= 1");
    if (t_star < 1 || t_star > mu1.horizon_days)
        throw std::invalid_argument("extrapolate_mu1: t_star outside the surface");

    Mu1Extension ext;
    ext.t_star = t_star;
    ext.horizon = h;
    ext.change_factor = c;
    ext.base_row.assign(mu1.row(t_star).begin(), mu1.row(t_star).end());
    ext.base_reproduction = mu1.row_sum(t_star);
    return ext;
}

double reproduction_number(const IntensitySurface& surface, int t) {
    if (t < 1 || t > surface.horizon_days)
        throw std::invalid_argument("reproduction_number: day outside the surface");
    return surface.row_sum(t);
}

double c_from_r(double r_at_tstar, double r_target) {
    if (!(r_at_tstar > 0.0))
        throw std::invalid_argument("c_from_r: estimated reproduction number must be positive");
    if (!(r_target > 0.0))
        throw std::invalid_argument("c_from_r: target reproduction number must be positive");
    return r_target / r_at_tstar;
}

namespace {

/// Expected infections on forecast day t*+step given the (observed +
/// already-forecast) series, with the extended mu1 row for that day.
double infection_intensity(const Mu1Extension& ext, std::span<const double> series,
                           int day, int step) {
    const int D = ext.lag_cutoff();
    const double f = ext.factor(step);
    const int v_lo = std::max(1, day - D);
    double sum = 0.0;
    for (int v = v_lo; v <= day - 1; ++v)
        sum += ext.base_row[day - v - 1] * series[static_cast<std::size_t>(v - 1)];
    return f * sum;
}

double hospital_intensity(std::span<const double> mu2_row, std::span<const double> series,
                          int day) {
    const int D = static_cast<int>(mu2_row.size());
    const int v_lo = std::max(1, day - D);
    double sum = 0.0;
    for (int v = v_lo; v <= day - 1; ++v)
        sum += mu2_row[day - v - 1] * series[static_cast<std::size_t>(v - 1)];
    return sum;
}

} // namespace

ForecastResult forecast_counts(const Mu1Extension& mu1_ext, const IntensitySurface* mu2,
                               std::span<const double> history_infections, int t_star,
                               int rho_active_cutoff) {
    if (t_star != mu1_ext.t_star)
        throw std::invalid_argument("forecast_counts: t_star does not match the extension");
    if (static_cast<int>(history_infections.size()) < t_star)
        throw std::invalid_argument("forecast_counts: history shorter than t_star");
    if (mu2 && mu2->horizon_days < t_star)
        throw std::invalid_argument("forecast_counts: mu2 surface shorter than t_star");

    const int h = mu1_ext.horizon;
    ForecastResult out;
    out.t_star = t_star;
    out.horizon = h;
    out.c_used = mu1_ext.change_factor;
    out.r_at_tstar = mu1_ext.base_reproduction;
    out.immigration_warning = t_star <= rho_active_cutoff;

    // series = observed history up to t*, then the forecasts feed forward
    std::vector<double> series(history_infections.begin(),
                               history_infections.begin() + t_star);
    series.resize(static_cast<std::size_t>(t_star + h), 0.0);

    out.infections.resize(h);
    for (int step = 1; step <= h; ++step) {
        const int day = t_star + step;
        const double value = infection_intensity(mu1_ext, series, day, step);
        out.infections[step - 1] = value;
        series[static_cast<std::size_t>(day - 1)] = value;
    }

    if (mu2) {
        const auto mu2_row = mu2->row(t_star); // frozen at t*
        out.hospitalizations.resize(h);
        for (int step = 1; step <= h; ++step)
            out.hospitalizations[step - 1] =
                hospital_intensity(mu2_row, series, t_star + step);
    }
    return out;
}

ForecastPaths sample_forecast_paths(const Mu1Extension& mu1_ext, const IntensitySurface* mu2,
                                    std::span<const double> history_infections, int t_star,
                                    int n_paths, std::uint64_t seed) {
    if (n_paths < 1) throw std::invalid_argument("sample_forecast_paths: need n_paths >= 1");
    const int h = mu1_ext.horizon;

    ForecastPaths paths;
    paths.infections.resize(n_paths);
    if (mu2) paths.hospitalizations.resize(n_paths);

    Rng rng(seed);
    std::vector<double> series;
    for (int p = 0; p < n_paths; ++p) {
        series.assign(history_infections.begin(), history_infections.begin() + t_star);
        series.resize(static_cast<std::size_t>(t_star + h), 0.0);
        auto& inf = paths.infections[p];
        inf.resize(h);
        for (int step = 1; step <= h; ++step) {
            const int day = t_star + step;
            const double mean = infection_intensity(mu1_ext, series, day, step);
            const double draw = static_cast<double>(rng.poisson(mean));
            inf[step - 1] = draw;
            series[static_cast<std::size_t>(day - 1)] = draw;
        }
        if (mu2) {
            const auto mu2_row = mu2->row(t_star);
            auto& hosp = paths.hospitalizations[p];
            hosp.resize(h);
            for (int step = 1; step <= h; ++step)
                hosp[step - 1] = static_cast<double>(
                    rng.poisson(hospital_intensity(mu2_row, series, t_star + step)));
        }
    }
    return paths;
}

OptimalCResult optimal_c(std::span<const double> observed_horizon,
                         const IntensitySurface& mu1, const IntensitySurface* mu2,
                         std::span<const double> history_infections, int t_star, int h,
                         CalibrationObjective objective, const CGrid& grid) {
    if (!(grid.step > 0.0) || grid.hi < grid.lo)
        throw std::invalid_argument("optimal_c: empty C grid");
    if (static_cast<int>(observed_horizon.size()) != h)
        throw std::invalid_argument("optimal_c: observed horizon must have h entries");
    if (objective == CalibrationObjective::hospitalizations && mu2 == nullptr)
        throw std::invalid_argument("optimal_c: hospitalizations objective needs a mu2 surface");

    const int n_steps = static_cast<int>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9));

    OptimalCResult result;
    result.curve.reserve(n_steps + 1);
    bool have_best = false;

    for (int i = 0; i <= n_steps; ++i) {
        const double c = grid.lo + grid.step * i;
        const Mu1Extension ext = extrapolate_mu1(mu1, t_star, h, c);
        const ForecastResult fc = forecast_counts(ext, mu2, history_infections, t_star);
        const auto& predicted = objective == CalibrationObjective::infections
                                    ? fc.infections
                                    : fc.hospitalizations;
        double sse = 0.0;
        for (int s = 0; s < h; ++s) {
            const double err = predicted[s] - observed_horizon[s];
            sse += err * err;
        }
        result.curve.push_back({c, sse});

        const bool better =
            !have_best || sse < result.sse ||
            (sse == result.sse && std::fabs(c - 1.0) < std::fabs(result.c - 1.0));
        if (better) {
            have_best = true;
            result.c = c;
            result.sse = sse;
        }
    }
    return result;
}

} // namespace exhawkes
