#pragma once

#include <string>
#include <vector>

#include "exhawkes/simulate.hpp"

namespace exhawkes {

/// Named ground truths for demos and tests.
///
///   stationary-subcritical  flat mu1 = branching/D1 on lags 1..D1, constant
///                           immigration on days 1..D1', mu2 a humped lag
///                           profile with total hospitalization probability
///                           p_hosp; time-constant throughout.
///   ramp-up-1.5x            stationary base whose mu1 rises linearly to
///                           1.5x over the final ramp_days days.
///   lockdown-drop           stationary base with mu1 halved from mid-sample
///                           on.
struct ScenarioParams {
    int horizon_days = 300;
    double n_scale = 1000.0;
    double branching = 0.8; // reproduction number of the flat base
    int lag_cutoff1 = 14;
    int immigration_days = 14; // D1'
    double immigration_level = 1.0;
    int lag_cutoff2 = 10;
    double p_hosp = 0.04; // total infection -> hospitalization probability
    int ramp_days = 21;   // ramp-up-1.5x only
};

std::vector<std::string> scenario_names();
bool is_scenario_name(const std::string& name);

/// Throws config_error for an unknown name, std::invalid_argument for bad
/// parameters.
GroundTruth make_scenario(const std::string& name, const ScenarioParams& params = {});

} // namespace exhawkes
