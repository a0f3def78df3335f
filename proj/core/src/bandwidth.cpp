#include "exhawkes/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csv_util.hpp"

namespace exhawkes {

BandwidthGrid BandwidthGrid::default_grid() {
    return {{0.05, 0.1, 0.15, 0.2, 0.3}, {2.0, 3.0, 5.0, 7.0, 10.0}};
}

void BandwidthGrid::validate(int lag_cutoff) const {
    if (b1_candidates.empty() || b2_candidates.empty())
        throw std::invalid_argument("bandwidth grid must be non-empty");
    if (!std::is_sorted(b1_candidates.begin(), b1_candidates.end(), std::less_equal<>()))
        throw std::invalid_argument("b1 candidates must be strictly increasing");
    if (!std::is_sorted(b2_candidates.begin(), b2_candidates.end(), std::less_equal<>()))
        throw std::invalid_argument("b2 candidates must be strictly increasing");
    for (double b1 : b1_candidates) validate_bandwidths({b1, b2_candidates.front()}, 0);
    for (double b2 : b2_candidates) validate_bandwidths({b1_candidates.front(), b2}, lag_cutoff);
}

namespace {

double score_with_engine(const LocalLinearEngine& engine, std::span<const double> exposure,
                         const PairCounts& pairs) {
    const int T = engine.horizon();
    const int D = engine.lag_cutoff();
    const IntensitySurface surface = engine.ratio_surface(pairs);

    // sum_cells mu^2 against the exposure design measure (mass exposure[s]
    // at cell (t, w), s = t - w)
    double term1 = 0.0;
    for (int t = 1; t <= T; ++t) {
        for (int w = 1; w <= D; ++w) {
            const int s = t - w;
            if (s < 1) continue;
            const double mu = surface.at(t, w);
            if (mu == 0.0) continue;
            term1 += mu * mu * exposure[static_cast<std::size_t>(s - 1)];
        }
    }

    // cross term with the offspring day deleted from the numerator
    double term2 = 0.0;
    pairs.for_each([&](int u, int v, double count) {
        const int w = u - v;
        if (u > T || w > D) return;
        const double den = engine.denominator(u, w);
        if (!(den > 0.0)) return;
        const double num_loo =
            engine.numerator(u, w, pairs) - engine.day_contribution(u, w, pairs, u);
        const double mu_loo = std::max(0.0, num_loo / den);
        term2 += mu_loo * count;
    });

    return term1 - 2.0 * term2;
}

} // namespace

double cv_score(std::span<const double> exposure, const PairCounts& pairs,
                const EstimationConfig& config) {
    LocalLinearEngine engine(exposure, config);
    return score_with_engine(engine, exposure, pairs);
}

CvResult select_bandwidths(std::span<const double> exposure, std::span<const double> offspring,
                           const BandwidthGrid& grid, const CvOptions& options) {
    grid.validate(options.lag_cutoff);
    if (options.mode == CvMode::full_info && options.pairs == nullptr)
        throw std::invalid_argument("select_bandwidths: full-info mode needs observed pairs");

    // Fast mode freezes the responsibilities of one pilot fit (grid midpoint).
    PairCounts pilot_pairs;
    if (options.mode == CvMode::missing_link && options.fast) {
        MissingLinkConfig pilot;
        pilot.est.bw = {grid.b1_candidates[grid.b1_candidates.size() / 2],
                        grid.b2_candidates[grid.b2_candidates.size() / 2]};
        pilot.est.lag_cutoff = options.lag_cutoff;
        pilot.est.kernels = options.kernels;
        pilot.tol = options.tol;
        pilot.max_iter = options.max_iter;
        pilot_pairs = estimate_missing_link(exposure, offspring, pilot).responsibilities;
    }

    CvResult result;
    result.table.reserve(grid.b1_candidates.size() * grid.b2_candidates.size());
    bool have_best = false;
    Bandwidths best;
    double best_score = 0.0;

    for (double b1 : grid.b1_candidates) {
        for (double b2 : grid.b2_candidates) {
            EstimationConfig config{{b1, b2}, options.lag_cutoff, options.kernels};
            double score = 0.0;
            switch (options.mode) {
                case CvMode::full_info:
                    score = cv_score(exposure, *options.pairs, config);
                    break;
                case CvMode::missing_link: {
                    if (options.fast) {
                        score = cv_score(exposure, pilot_pairs, config);
                    } else {
                        MissingLinkConfig ml;
                        ml.est = config;
                        ml.tol = options.tol;
                        ml.max_iter = options.max_iter;
                        auto fit = estimate_missing_link(exposure, offspring, ml);
                        score = cv_score(exposure, fit.responsibilities, config);
                    }
                    break;
                }
            }
            result.table.push_back({b1, b2, score});
            // ties break toward the smoother candidate; the loop runs in
            // increasing (b1, b2) order so >= keeps the larger one
            if (!have_best || score <= best_score) {
                have_best = true;
                best_score = score;
                best = {b1, b2};
            }
        }
    }
    result.selected = best;
    return result;
}

void write_cv_table(const CvResult& result, const std::filesystem::path& path) {
    csv::AtomicWriter writer(path);
    auto& out = writer.stream();
    out << "b1,b2,score\n";
    char buf[96];
    for (const auto& entry : result.table) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", entry.b1, entry.b2, entry.score);
        out << buf;
    }
    writer.commit();
}

} // namespace exhawkes
