#include <doctest.h>

#include <cmath>
#include <vector>

#include "exhawkes/bandwidth.hpp"
#include "exhawkes/scenarios.hpp"
#include "exhawkes/simulate.hpp"
#include "test_support.hpp"

using namespace exhawkes;

TEST_SUITE_BEGIN("bandwidth");

namespace {

/// Flat lag profile with a seasonal factor on the time axis; curvature in
/// time makes oversmoothing genuinely costly.
GroundTruth seasonal(int T, double n, double amp, double period) {
    ScenarioParams p;
    p.horizon_days = T;
    p.n_scale = n;
    p.branching = 1.0;
    p.immigration_days = 14;
    GroundTruth gt = make_scenario("stationary-subcritical", p);
    for (int t = 1; t <= T; ++t) {
        const double f = 1.0 + amp * std::sin(2.0 * M_PI * t / period);
        for (int w = 1; w <= gt.lag_cutoff1; ++w)
            gt.mu1[static_cast<std::size_t>(t - 1) * gt.lag_cutoff1 + (w - 1)] *= f;
    }
    return gt;
}

/// Seasonal scenario with a humped serial-interval-like lag profile, so the
/// optimal b2 is interior as well.
GroundTruth seasonal_humped(int T, double n, double amp, double period) {
    GroundTruth gt = seasonal(T, n, amp, period);
    const int D = gt.lag_cutoff1;
    std::vector<double> g(D);
    double sum = 0.0;
    for (int w = 1; w <= D; ++w) {
        g[w - 1] = std::exp(-0.5 * (w - 5.0) * (w - 5.0) / 25.0);
        sum += g[w - 1];
    }
    for (int t = 1; t <= T; ++t)
        for (int w = 1; w <= D; ++w)
            gt.mu1[static_cast<std::size_t>(t - 1) * D + (w - 1)] *= D * g[w - 1] / sum;
    return gt;
}

double interior_mise(const IntensitySurface& s, const GroundTruth& gt) {
    const auto in = testsup::Interior::of(s.horizon_days, s.lag_cutoff);
    double sum = 0.0;
    int cells = 0;
    for (int t = in.t_lo; t <= in.t_hi; ++t) {
        for (int w = in.w_lo; w <= in.w_hi; ++w) {
            const double d = s.at(t, w) - gt.mu1_at(t, w);
            sum += d * d;
            ++cells;
        }
    }
    return sum / cells;
}

} // namespace

TEST_CASE("grid validation") {
    const BandwidthGrid empty_b1{{}, {2.0}};
    const BandwidthGrid repeated{{0.1, 0.1}, {2.0}};
    const BandwidthGrid beyond_lag{{0.1}, {2.0, 20.0}};
    CHECK_THROWS_AS(empty_b1.validate(14), std::invalid_argument);
    CHECK_THROWS_AS(repeated.validate(14), std::invalid_argument);
    CHECK_THROWS_AS(beyond_lag.validate(14), std::invalid_argument);
    CHECK_NOTHROW(BandwidthGrid::default_grid().validate(14));
}

TEST_CASE("zero pairs score zero at any bandwidth") {
    std::vector<double> exposure(60, 3.0);
    const PairCounts empty(60, 8);
    for (double b1 : {0.1, 0.3}) {
        for (double b2 : {2.0, 6.0}) {
            CHECK(cv_score(exposure, empty, {{b1, b2}, 8, {}}) == 0.0);
        }
    }
}

TEST_CASE("single-cell grid selects that cell") {
    const GroundTruth gt = testsup::stationary(80, 10.0);
    const SimOutput sim = simulate(gt, 21);
    auto expo = sim.infections.as_doubles();
    CvOptions opt;
    opt.mode = CvMode::full_info;
    opt.lag_cutoff = 14;
    opt.pairs = &sim.infection_pairs;
    const CvResult cv = select_bandwidths(expo, expo, {{0.17}, {4.0}}, opt);
    CHECK(cv.selected.b1 == 0.17);
    CHECK(cv.selected.b2 == 4.0);
    CHECK(cv.table.size() == 1);
}

TEST_CASE("cv minimizer tracks the interior MISE within a factor of two") {
    const GroundTruth gt = seasonal(900, 20.0, 0.3, 150.0);
    const SimOutput sim = simulate(gt, 4242);
    auto expo = sim.infections.as_doubles();

    CvOptions opt;
    opt.mode = CvMode::full_info;
    opt.lag_cutoff = 14;
    opt.pairs = &sim.infection_pairs;
    const CvResult cv = select_bandwidths(expo, expo, BandwidthGrid::default_grid(), opt);

    double best_mise = 1e300, selected_mise = 0.0, best_score = 1e300;
    for (const auto& entry : cv.table) {
        const IntensitySurface s =
            estimate_full_info(sim.infection_pairs, expo, {{entry.b1, entry.b2}, 14, {}});
        const double mise = interior_mise(s, gt);
        best_mise = std::min(best_mise, mise);
        if (entry.b1 == cv.selected.b1 && entry.b2 == cv.selected.b2) selected_mise = mise;
        best_score = std::min(best_score, entry.score);
    }
    CHECK(selected_mise <= 2.0 * best_mise);

    // extreme oversmoothing scores no better than the selected cell
    const double q_over = cv_score(expo, sim.infection_pairs, {{1.0, 14.0}, 14, {}});
    CHECK(q_over >= best_score);
}

TEST_CASE("selection is deterministic and fast mode agrees on an easy case") {
    ScenarioParams p;
    p.horizon_days = 250;
    p.n_scale = 3.0;
    p.branching = 0.95;
    p.immigration_days = 250;
    const GroundTruth gt = make_scenario("stationary-subcritical", p);
    const SimOutput sim = simulate(gt, 77);
    auto expo = sim.infections.as_doubles();

    const BandwidthGrid grid{{0.1, 0.15, 0.2}, {5.0, 10.0, 14.0}};
    CvOptions opt;
    opt.mode = CvMode::missing_link;
    opt.lag_cutoff = 14;
    opt.max_iter = 40;
    const CvResult a = select_bandwidths(expo, expo, grid, opt);
    const CvResult b = select_bandwidths(expo, expo, grid, opt);
    CHECK(a.selected.b1 == b.selected.b1);
    CHECK(a.selected.b2 == b.selected.b2);
    REQUIRE(a.table.size() == b.table.size());
    for (std::size_t i = 0; i < a.table.size(); ++i) CHECK(a.table[i].score == b.table[i].score);

    // fast mode approximates the score with pilot responsibilities; it must
    // stay deterministic and pick a grid cell, not necessarily the same one
    opt.fast = true;
    const CvResult fast1 = select_bandwidths(expo, expo, grid, opt);
    const CvResult fast2 = select_bandwidths(expo, expo, grid, opt);
    CHECK(fast1.selected.b1 == fast2.selected.b1);
    CHECK(fast1.selected.b2 == fast2.selected.b2);
    CHECK(fast1.table.size() == grid.b1_candidates.size() * grid.b2_candidates.size());
}

TEST_CASE("selected bandwidths fall inside a grid that brackets the optimum") {
    // grid designed from a pilot run on this scenario family
    const GroundTruth gt = seasonal_humped(900, 20.0, 0.3, 150.0);
    const SimOutput sim = simulate(gt, 31);
    auto expo = sim.infections.as_doubles();

    CvOptions opt;
    opt.mode = CvMode::full_info;
    opt.lag_cutoff = 14;
    opt.pairs = &sim.infection_pairs;
    const BandwidthGrid grid{{0.02, 0.05, 0.1, 0.25}, {1.5, 3.0, 6.0, 12.0}};
    const CvResult cv = select_bandwidths(expo, expo, grid, opt);
    CAPTURE(cv.selected.b1);
    CAPTURE(cv.selected.b2);
    CHECK(cv.selected.b1 > grid.b1_candidates.front());
    CHECK(cv.selected.b1 < grid.b1_candidates.back());
    CHECK(cv.selected.b2 > grid.b2_candidates.front());
    CHECK(cv.selected.b2 < grid.b2_candidates.back());
}

TEST_CASE("ties break toward the smoother candidate") {
    // zero pairs make every score 0, so the largest cell must win
    std::vector<double> exposure(40, 2.0);
    const PairCounts empty(40, 6);
    CvOptions opt;
    opt.mode = CvMode::full_info;
    opt.lag_cutoff = 6;
    opt.pairs = &empty;
    const BandwidthGrid grid{{0.1, 0.2, 0.3}, {2.0, 4.0}};
    const CvResult cv = select_bandwidths(exposure, exposure, grid, opt);
    CHECK(cv.selected.b1 == 0.3);
    CHECK(cv.selected.b2 == 4.0);
}

TEST_SUITE_END();
