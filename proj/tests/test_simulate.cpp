#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>
#include <vector>

#include "exhawkes/errors.hpp"
#include "exhawkes/rng.hpp"
#include "exhawkes/scenarios.hpp"
#include "exhawkes/simulate.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace exhawkes;

TEST_SUITE_BEGIN("simulate");

namespace {

GroundTruth empty_truth(int T, int D) {
    GroundTruth gt;
    gt.horizon_days = T;
    gt.lag_cutoff1 = D;
    gt.mu1.assign(static_cast<std::size_t>(T) * D, 0.0);
    gt.rho1.assign(T, 0.0);
    return gt;
}

} // namespace

TEST_CASE("no sources means no events") {
    const GroundTruth gt = empty_truth(50, 5);
    const SimOutput out = simulate(gt, 1);
    CHECK(out.infections.total() == 0);
    CHECK(out.infection_pairs.total() == 0.0);
}

TEST_CASE("pure Poisson immigration has the right mean") {
    GroundTruth gt = empty_truth(10, 5);
    gt.rho1_cutoff = 5;
    for (int t = 1; t <= 5; ++t) gt.rho1[t - 1] = 2.0;

    const int replicates = 1000;
    double sum = 0.0, sum2 = 0.0;
    std::int64_t after = 0;
    for (int r = 0; r < replicates; ++r) {
        const SimOutput out = simulate(gt, 1000 + r);
        for (int t = 1; t <= 5; ++t) {
            const double x = static_cast<double>(out.infections.counts[t - 1]);
            sum += x;
            sum2 += x * x;
        }
        for (int t = 6; t <= 10; ++t) after += out.infections.counts[t - 1];
    }
    CHECK(after == 0);
    const double n = 5.0 * replicates;
    const double mean = sum / n;
    const double sd = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::fabs(mean - 2.0) <= 3.0 * sd);
}

TEST_CASE("accounting identity holds for every day and seed") {
    const GroundTruth gt = testsup::stationary(120, 20.0);
    for (std::uint64_t seed : {7ULL, 8ULL, 99ULL}) {
        const SimOutput out = simulate(gt, seed);
        for (int u = 1; u <= gt.horizon_days; ++u) {
            std::int64_t offspring = 0;
            for (int v = std::max(1, u - gt.lag_cutoff1); v < u; ++v)
                offspring += static_cast<std::int64_t>(out.infection_pairs.at(u, v));
            CHECK(out.infections.counts[u - 1] == out.infection_immigrants[u - 1] + offspring);
        }
        REQUIRE(out.hospitalizations.has_value());
        for (int u = 1; u <= gt.horizon_days; ++u) {
            std::int64_t offspring = 0;
            for (int v = std::max(1, u - gt.lag_cutoff2); v < u; ++v)
                offspring += static_cast<std::int64_t>(out.hospital_pairs.at(u, v));
            CHECK(out.hospitalizations->counts[u - 1] ==
                  out.hospital_immigrants[u - 1] + offspring);
        }
    }
}

TEST_CASE("same seed reproduces the draw bit for bit") {
    const GroundTruth gt = testsup::stationary(100, 30.0);
    const SimOutput a = simulate(gt, 424242);
    const SimOutput b = simulate(gt, 424242);
    CHECK(a.infections.counts == b.infections.counts);
    CHECK(a.hospitalizations->counts == b.hospitalizations->counts);
    bool pairs_equal = true;
    a.infection_pairs.for_each([&](int u, int v, double c) {
        if (b.infection_pairs.at(u, v) != c) pairs_equal = false;
    });
    CHECK(pairs_equal);

    const SimOutput c = simulate(gt, 424243);
    CHECK(a.infections.counts != c.infections.counts);
}

TEST_CASE("pair support cutoffs are never violated") {
    const GroundTruth gt = testsup::stationary(150, 50.0);
    const SimOutput out = simulate(gt, 5);
    out.infection_pairs.for_each([&](int u, int v, double) {
        CHECK(v >= 1);
        CHECK(v < u);
        CHECK(u - v <= gt.lag_cutoff1);
    });
    out.hospital_pairs.for_each([&](int u, int v, double) {
        CHECK(v < u);
        CHECK(u - v <= gt.lag_cutoff2);
    });
}

TEST_CASE("supercritical run aborts with the day in the message") {
    ScenarioParams p;
    p.horizon_days = 200;
    p.n_scale = 100.0;
    p.branching = 3.0; // explosive
    GroundTruth gt = make_scenario("stationary-subcritical", p);
    SimOptions options;
    options.explosion_cap = 1e4;
    CHECK_THROWS_AS(simulate(gt, 11, options), data_error);
    try {
        simulate(gt, 11, options);
    } catch (const data_error& e) {
        CHECK(std::string(e.what()).find("day") != std::string::npos);
        CHECK(std::string(e.what()).find("exceeds cap") != std::string::npos);
    }
}

TEST_CASE("expected intensity: empty series equals the immigration term") {
    GroundTruth gt = empty_truth(20, 5);
    gt.rho1_cutoff = 3;
    gt.n_scale = 7.0;
    gt.rho1[0] = 1.5;
    gt.rho1[1] = 0.5;
    gt.rho1[2] = 2.0;
    const ExpectedIntensity ei = expected_intensity(gt, 0);
    for (int t = 1; t <= 20; ++t)
        CHECK(ei.lambda1[t - 1] == doctest::Approx(7.0 * gt.rho1_at(t)).epsilon(1e-15));
    CHECK(ei.tail_sup == doctest::Approx(7.0 * 2.0));
}

TEST_CASE("expected intensity: one series term is a single convolution") {
    const GroundTruth gt = testsup::stationary(60, 5.0);
    const ExpectedIntensity ei = expected_intensity(gt, 1);
    for (int t = 1; t <= 60; ++t) {
        double hand = gt.n_scale * gt.rho1_at(t);
        for (int u = 1; u < t; ++u) hand += gt.mu1_at(t, t - u) * gt.n_scale * gt.rho1_at(u);
        CHECK(ei.lambda1[t - 1] == doctest::Approx(hand).epsilon(1e-12));
    }
}

TEST_CASE("chi series matches the materialized-convolution oracle") {
    const GroundTruth gt = testsup::stationary(60, 5.0);
    for (int k_max : {0, 1, 2, 5, 12}) {
        CAPTURE(k_max);
        const ExpectedIntensity ei = expected_intensity(gt, k_max);
        const std::vector<double> expect = oracle::lambda_chi_series(gt, k_max);
        for (int t = 1; t <= 60; ++t)
            CHECK(ei.lambda1[t - 1] == doctest::Approx(expect[t - 1]).epsilon(1e-9));
    }
}

TEST_CASE("chi series is monotone in the truncation order and reaches the recursion") {
    const GroundTruth gt = testsup::stationary(120, 10.0);
    const std::vector<double> recursion = oracle::lambda_recursion(gt);
    std::vector<double> prev(120, 0.0);
    for (int k_max : {0, 2, 5, 10, 25, 60}) {
        const ExpectedIntensity ei = expected_intensity(gt, k_max);
        for (int t = 0; t < 120; ++t) {
            CHECK(ei.lambda1[t] >= prev[t] - 1e-12);
            CHECK(ei.lambda1[t] <= recursion[t] + 1e-9);
        }
        prev = ei.lambda1;
    }
    const ExpectedIntensity deep = expected_intensity(gt, 80);
    CHECK(deep.tail_sup <= 1e-6);
    for (int t = 0; t < 120; ++t)
        CHECK(deep.lambda1[t] == doctest::Approx(recursion[t]).epsilon(1e-8));
}

TEST_CASE("replicate mean tracks the expected intensity beyond burn-in") {
    const GroundTruth gt = testsup::stationary(120, 25.0);
    const ExpectedIntensity ei = expected_intensity(gt, 200);

    const int replicates = 300;
    const int T = gt.horizon_days;
    std::vector<double> sum(T, 0.0), sum2(T, 0.0);
    for (int r = 0; r < replicates; ++r) {
        const SimOutput out = simulate(gt, 31337 + r);
        for (int t = 0; t < T; ++t) {
            const double x = static_cast<double>(out.infections.counts[t]);
            sum[t] += x;
            sum2[t] += x * x;
        }
    }
    const int burn_in = gt.rho1_cutoff + gt.lag_cutoff1;
    int checked = 0;
    for (int t = burn_in; t < T; ++t) {
        const double mean = sum[t] / replicates;
        const double var = sum2[t] / replicates - mean * mean;
        const double se = std::sqrt(std::max(var, 1e-12) / replicates);
        CHECK(std::fabs(mean - ei.lambda1[t]) <= 4.0 * se);
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("hospitalization intensity follows the infection history") {
    const GroundTruth gt = testsup::stationary(100, 40.0);
    const ExpectedIntensity ei = expected_intensity(gt, 150);
    REQUIRE_FALSE(ei.lambda2.empty());

    const int replicates = 300;
    std::vector<double> sum(100, 0.0), sum2(100, 0.0);
    for (int r = 0; r < replicates; ++r) {
        const SimOutput out = simulate(gt, 555 + r);
        for (int t = 0; t < 100; ++t) {
            const double x = static_cast<double>(out.hospitalizations->counts[t]);
            sum[t] += x;
            sum2[t] += x * x;
        }
    }
    for (int t = gt.rho1_cutoff + gt.lag_cutoff1; t < 100; ++t) {
        const double mean = sum[t] / replicates;
        const double var = sum2[t] / replicates - mean * mean;
        const double se = std::sqrt(std::max(var, 1e-12) / replicates);
        CHECK(std::fabs(mean - ei.lambda2[t]) <= 4.0 * se);
    }
}

TEST_CASE("rho from presample vanishes after the lag support") {
    const GroundTruth gt = testsup::stationary(60, 1.0);
    std::vector<double> presample(5, 2.0); // days 0..-4 at level 2 per n
    const std::vector<double> rho = rho_from_presample(gt, presample);
    // day 1 sees presample days at lags 1..5
    double hand = 0.0;
    for (int i = 0; i < 5; ++i) hand += gt.mu1_at(1, 1 + i) * 2.0;
    CHECK(rho[0] == doctest::Approx(hand).epsilon(1e-12));
    for (int t = gt.lag_cutoff1 + 1; t <= 60; ++t) CHECK(rho[t - 1] == 0.0);
}

TEST_CASE("continuation keeps the fixed prefix and reseeds the tail") {
    const GroundTruth gt = testsup::stationary(100, 30.0);
    const SimOutput base = simulate(gt, 900);

    SimOptions options;
    options.continue_from_day = 60;
    options.fixed_infections.assign(base.infections.counts.begin(),
                                    base.infections.counts.begin() + 60);
    const SimOutput contA = simulate(gt, 901, options);
    const SimOutput contB = simulate(gt, 901, options);
    const SimOutput contC = simulate(gt, 902, options);

    for (int t = 1; t <= 60; ++t)
        CHECK(contA.infections.counts[t - 1] == base.infections.counts[t - 1]);
    CHECK(contA.infections.counts == contB.infections.counts);
    CHECK(contA.infections.counts != contC.infections.counts);
}

TEST_CASE("poisson sampler is unbiased across the mean range") {
    // spot check inversion (<10) and PTRS (>=10) regimes
    for (double mean : {0.5, 4.0, 12.0, 80.0, 1500.0}) {
        CAPTURE(mean);
        Rng rng(6000 + static_cast<std::uint64_t>(mean));
        const int n = 40000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = static_cast<double>(rng.poisson(mean));
            sum += x;
            sum2 += x * x;
        }
        const double sample_mean = sum / n;
        const double sample_var = sum2 / n - sample_mean * sample_mean;
        const double se = std::sqrt(mean / n);
        CHECK(std::fabs(sample_mean - mean) <= 4.0 * se);
        // variance should also be near the mean
        CHECK(sample_var == doctest::Approx(mean).epsilon(0.1));
    }
}

TEST_CASE("pair counts survive the CSV round trip") {
    Rng rng(8400);
    PairCounts pairs(60, 9);
    for (int u = 2; u <= 60; ++u) {
        for (int d = 1; d <= std::min(9, u - 1); ++d) {
            if (rng.next_double() < 0.3)
                pairs.add(u, u - d, std::floor(rng.next_double() * 40.0) + 0.25);
        }
    }
    const auto path = std::filesystem::temp_directory_path() / "pairs_roundtrip.csv";
    pairs.write_csv(path);
    const PairCounts back = PairCounts::read_csv(path);
    CHECK(back.total() == pairs.total());
    bool all_equal = true;
    pairs.for_each([&](int u, int v, double count) {
        if (back.at(u, v) != count) all_equal = false;
    });
    CHECK(all_equal);
}

TEST_SUITE_END();
