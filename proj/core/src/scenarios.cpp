#include "exhawkes/scenarios.hpp"

#include <cmath>
#include <stdexcept>

#include "exhawkes/errors.hpp"

namespace exhawkes {

std::vector<std::string> scenario_names() {
    return {"stationary-subcritical", "ramp-up-1.5x", "lockdown-drop"};
}

bool is_scenario_name(const std::string& name) {
    for (const auto& n : scenario_names())
        if (n == name) return true;
    return false;
}

namespace {

/// Humped infection-to-hospitalization lag profile summing to p_hosp.
std::vector<double> hosp_profile(int lag_cutoff, double p_hosp) {
    std::vector<double> g(lag_cutoff);
    double sum = 0.0;
    for (int w = 1; w <= lag_cutoff; ++w) {
        g[w - 1] = w * std::exp(-w / 2.5);
        sum += g[w - 1];
    }
    for (double& v : g) v *= p_hosp / sum;
    return g;
}

GroundTruth base_truth(const ScenarioParams& p) {
    if (p.horizon_days < 2 * p.lag_cutoff1)
        throw std::invalid_argument("scenario horizon too short for the lag support");
    if (!(p.branching > 0.0) || p.lag_cutoff1 < 1 || p.immigration_days < 1)
        throw std::invalid_argument("bad scenario parameters");

    GroundTruth gt;
    gt.horizon_days = p.horizon_days;
    gt.lag_cutoff1 = p.lag_cutoff1;
    gt.rho1_cutoff = std::min(p.immigration_days, p.horizon_days);
    gt.n_scale = p.n_scale;

    const double level = p.branching / p.lag_cutoff1;
    gt.mu1.assign(static_cast<std::size_t>(p.horizon_days) * p.lag_cutoff1, level);

    gt.rho1.assign(p.horizon_days, 0.0);
    for (int t = 1; t <= gt.rho1_cutoff; ++t) gt.rho1[t - 1] = p.immigration_level;

    if (p.lag_cutoff2 > 0) {
        gt.lag_cutoff2 = p.lag_cutoff2;
        const auto profile = hosp_profile(p.lag_cutoff2, p.p_hosp);
        gt.mu2.resize(static_cast<std::size_t>(p.horizon_days) * p.lag_cutoff2);
        for (int t = 1; t <= p.horizon_days; ++t)
            for (int w = 1; w <= p.lag_cutoff2; ++w)
                gt.mu2[static_cast<std::size_t>(t - 1) * p.lag_cutoff2 + (w - 1)] =
                    profile[w - 1];
        gt.rho2.assign(p.horizon_days, 0.0);
        gt.rho2_cutoff = 0;
    }
    return gt;
}

void scale_mu1_day(GroundTruth& gt, int t, double factor) {
    for (int w = 1; w <= gt.lag_cutoff1; ++w)
        gt.mu1[static_cast<std::size_t>(t - 1) * gt.lag_cutoff1 + (w - 1)] *= factor;
}

} // namespace

GroundTruth make_scenario(const std::string& name, const ScenarioParams& params) {
    if (name == "stationary-subcritical") {
        return base_truth(params);
    }
    if (name == "ramp-up-1.5x") {
        GroundTruth gt = base_truth(params);
        const int ramp = std::min(params.ramp_days, gt.horizon_days - 1);
        const int t_star = gt.horizon_days - ramp;
        for (int t = t_star + 1; t <= gt.horizon_days; ++t)
            scale_mu1_day(gt, t, 1.0 + 0.5 * static_cast<double>(t - t_star) / ramp);
        return gt;
    }
    if (name == "lockdown-drop") {
        GroundTruth gt = base_truth(params);
        for (int t = gt.horizon_days / 2 + 1; t <= gt.horizon_days; ++t)
            scale_mu1_day(gt, t, 0.5);
        return gt;
    }
    throw config_error("unknown scenario '" + name + "'");
}

} // namespace exhawkes
