#include "exhawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "exhawkes/errors.hpp"
#include "exhawkes/rng.hpp"

namespace exhawkes {

namespace {

void check_grid(const std::vector<double>& grid, int T, int D, const char* name) {
    if (static_cast<std::size_t>(T) * D != grid.size())
        throw std::invalid_argument(std::string(name) + " grid size does not match T x D");
    for (double v : grid)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
}

void check_rho(const std::vector<double>& rho, int T, int cutoff, const char* name) {
    if (static_cast<int>(rho.size()) != T)
        throw std::invalid_argument(std::string(name) + " must have one entry per day");
    for (int t = 1; t <= T; ++t) {
        const double v = rho[t - 1];
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
        if (t > cutoff && v != 0.0)
            throw std::invalid_argument(std::string(name) + " must vanish after day " +
                                        std::to_string(cutoff));
    }
}

} // namespace

void GroundTruth::validate() const {
    if (horizon_days < 1) throw std::invalid_argument("GroundTruth: horizon must be >= 1");
    if (lag_cutoff1 < 1) throw std::invalid_argument("GroundTruth: D1 must be >= 1");
    if (!(n_scale > 0.0)) throw std::invalid_argument("GroundTruth: n_scale must be positive");
    check_grid(mu1, horizon_days, lag_cutoff1, "mu1");
    check_rho(rho1, horizon_days, rho1_cutoff, "rho1");
    if (lag_cutoff2 > 0) {
        check_grid(mu2, horizon_days, lag_cutoff2, "mu2");
        check_rho(rho2, horizon_days, rho2_cutoff, "rho2");
    }
}

std::vector<double> rho_from_presample(const GroundTruth& gt,
                                       std::span<const double> presample) {
    std::vector<double> rho(gt.horizon_days, 0.0);
    for (int t = 1; t <= gt.horizon_days; ++t) {
        double sum = 0.0;
        // day -i contributes at lag t + i
        for (std::size_t i = 0; i < presample.size(); ++i) {
            const int lag = t + static_cast<int>(i);
            if (lag > gt.lag_cutoff1) break;
            sum += gt.mu1_at(t, lag) * presample[i];
        }
        rho[t - 1] = sum;
    }
    return rho;
}

namespace {

/// Draws a parent day for one event: weights[i] is the weight of parent day
/// days_lo + i, immigrant_weight sits at the end. Returns -1 for immigrant.
int pick_parent(Rng& rng, std::span<const double> cumulative, int days_lo, double total) {
    const double x = rng.next_double() * total;
    // binary search over the cumulative weights
    std::size_t lo = 0, hi = cumulative.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cumulative[mid] > x)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (lo >= cumulative.size() - 1) return -1; // final slot = immigration
    return days_lo + static_cast<int>(lo);
}

} // namespace

SimOutput simulate(const GroundTruth& gt, std::uint64_t seed, const SimOptions& options) {
    gt.validate();
    const int T = gt.horizon_days;
    if (options.continue_from_day > 0 &&
        static_cast<int>(options.fixed_infections.size()) < options.continue_from_day)
        throw std::invalid_argument("simulate: fixed_infections shorter than continue_from_day");

    SimOutput out;
    out.seed = seed;
    out.infections.start_date = options.start_date;
    out.infections.label = "new_positives";
    out.infections.counts.assign(T, 0);
    out.infection_immigrants.assign(T, 0);
    out.infection_pairs = PairCounts(T, gt.lag_cutoff1);

    const bool with_hosp = gt.lag_cutoff2 > 0;
    if (with_hosp) {
        CountSeries hosp;
        hosp.start_date = options.start_date;
        hosp.label = "new_hospitalized";
        hosp.counts.assign(T, 0);
        out.hospitalizations = std::move(hosp);
        out.hospital_immigrants.assign(T, 0);
        out.hospital_pairs = PairCounts(T, gt.lag_cutoff2);
    }

    Rng rng(seed);
    std::vector<double> weights;   // parent-day weights for the current day
    std::vector<double> cumulative;

    auto draw_day = [&](int t, int lag_cutoff, auto mu_at, double immigration,
                        std::vector<std::int64_t>& counts, PairCounts& pairs,
                        std::vector<std::int64_t>& immigrants, const char* process) {
        const int v_lo = std::max(1, t - lag_cutoff);
        const int v_hi = t - 1;
        weights.clear();
        double excitation = 0.0;
        for (int v = v_lo; v <= v_hi; ++v) {
            const double w = mu_at(t, t - v) * static_cast<double>(out.infections.counts[v - 1]);
            weights.push_back(w);
            excitation += w;
        }
        const double mean = excitation + immigration;
        if (mean > options.explosion_cap)
            throw data_error(std::string("simulate: expected ") + process + " count " +
                             std::to_string(mean) + " exceeds cap " +
                             std::to_string(options.explosion_cap) + " at day " +
                             std::to_string(t));
        const std::int64_t n_events = rng.poisson(mean);
        counts[t - 1] = n_events;
        if (n_events == 0) return;

        weights.push_back(immigration);
        cumulative.resize(weights.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            cumulative[i] = acc;
        }
        for (std::int64_t e = 0; e < n_events; ++e) {
            const int parent = pick_parent(rng, cumulative, v_lo, acc);
            if (parent < 0)
                ++immigrants[t - 1];
            else
                pairs.add(t, parent, 1.0);
        }
    };

    for (int t = 1; t <= T; ++t) {
        if (t <= options.continue_from_day) {
            out.infections.counts[t - 1] = options.fixed_infections[t - 1];
        } else {
            draw_day(
                t, gt.lag_cutoff1, [&](int tt, int w) { return gt.mu1_at(tt, w); },
                gt.n_scale * gt.rho1_at(t), out.infections.counts, out.infection_pairs,
                out.infection_immigrants, "infection");
        }
        if (with_hosp) {
            draw_day(
                t, gt.lag_cutoff2, [&](int tt, int w) { return gt.mu2_at(tt, w); },
                gt.n_scale * gt.rho2_at(t), out.hospitalizations->counts, out.hospital_pairs,
                out.hospital_immigrants, "hospitalization");
        }
    }
    return out;
}

ExpectedIntensity expected_intensity(const GroundTruth& gt, int k_max) {
    gt.validate();
    if (k_max < 0) throw std::invalid_argument("expected_intensity: k_max must be >= 0");
    const int T = gt.horizon_days;

    ExpectedIntensity out;
    out.k_max = k_max;

    // term_0 = n * rho1; term_k = mu1 * term_{k-1} (daily convolution).
    std::vector<double> term(T);
    for (int t = 1; t <= T; ++t) term[t - 1] = gt.n_scale * gt.rho1_at(t);
    out.lambda1 = term;

    std::vector<double> next(T);
    for (int k = 1; k <= k_max; ++k) {
        for (int t = 1; t <= T; ++t) {
            double sum = 0.0;
            const int v_lo = std::max(1, t - gt.lag_cutoff1);
            for (int v = v_lo; v <= t - 1; ++v) sum += gt.mu1_at(t, t - v) * term[v - 1];
            next[t - 1] = sum;
        }
        term.swap(next);
        for (int t = 0; t < T; ++t) out.lambda1[t] += term[t];
    }
    for (double v : term) out.tail_sup = std::max(out.tail_sup, v);

    if (gt.lag_cutoff2 > 0) {
        out.lambda2.assign(T, 0.0);
        for (int t = 1; t <= T; ++t) {
            double sum = gt.n_scale * gt.rho2_at(t);
            const int v_lo = std::max(1, t - gt.lag_cutoff2);
            for (int v = v_lo; v <= t - 1; ++v)
                sum += gt.mu2_at(t, t - v) * out.lambda1[v - 1];
            out.lambda2[t - 1] = sum;
        }
    }
    return out;
}

} // namespace exhawkes
