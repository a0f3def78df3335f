#include "exhawkes/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "exhawkes/parallel.hpp"

namespace exhawkes {

LocalLinearEngine::LocalLinearEngine(std::span<const double> exposure,
                                     const EstimationConfig& config)
    : config_(config), horizon_days_(static_cast<int>(exposure.size())),
      exposure_(exposure.begin(), exposure.end()) {
    if (horizon_days_ < 1)
        throw std::invalid_argument("LocalLinearEngine: exposure must be non-empty");
    if (config_.lag_cutoff < 1)
        throw std::invalid_argument("LocalLinearEngine: lag cutoff must be >= 1");
    validate_bandwidths(config_.bw, config_.lag_cutoff);
    for (double c : exposure_)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument("LocalLinearEngine: exposure must be finite and >= 0");

    const int T = horizon_days_;
    const int D = config_.lag_cutoff;

    // Kernel arguments are integer day offsets, so tabulate once.
    k1_reach_ = static_cast<int>(std::ceil(config_.bw.b1 * T));
    k2_reach_ = static_cast<int>(std::ceil(config_.bw.b2));
    k1_table_.resize(k1_reach_ + 1);
    for (int j = 0; j <= k1_reach_; ++j)
        k1_table_[j] = kernel_eval(config_.kernels.time, config_.bw.b1,
                                   static_cast<double>(j) / T);
    k2_table_.resize(2 * k2_reach_ + 1);
    for (int j = -k2_reach_; j <= k2_reach_; ++j)
        k2_table_[k2_reach_ + j] =
            kernel_eval(config_.kernels.lag, config_.bw.b2, static_cast<double>(j));

    const std::size_t n_cells = static_cast<std::size_t>(T) * D;
    solve1_.assign(n_cells, 0.0);
    solve2_.assign(n_cells, 0.0);
    den_.assign(n_cells, 0.0);
    ll_flag_.assign(n_cells, 0);

    // Per cell: moment sums, the 2x2 solve, then the C1-weighted exposure
    // denominator. Cells are independent.
    parallel_for(n_cells, [&](std::size_t idx) {
        const int t = static_cast<int>(idx / D) + 1;
        const int w = static_cast<int>(idx % D) + 1;

        MomentSet m;
        m.day = t;
        m.lag = w;
        const int u_lo = std::max(1, t - k1_reach_);
        const int u_hi = std::min(T, t + k1_reach_);
        for (int u = u_lo; u <= u_hi; ++u) {
            const double k1 = k1_table_[std::abs(t - u)];
            if (k1 == 0.0) continue;
            const double z1 = static_cast<double>(t - u) / T;
            const int d_lo = std::max(1, w - k2_reach_);
            const int d_hi = std::min({u - 1, w + k2_reach_, D});
            for (int d = d_lo; d <= d_hi; ++d) {
                const double c = exposure_[static_cast<std::size_t>(u - d - 1)];
                if (c == 0.0) continue;
                const double k2 = k2_table_[k2_reach_ + (w - d)];
                if (k2 == 0.0) continue;
                const double weight = k1 * k2 * c;
                const double z2 = static_cast<double>(w - d);
                m.a1 += weight * z1;
                m.a2 += weight * z2;
                m.a11 += weight * z1 * z1;
                m.a12 += weight * z1 * z2;
                m.a22 += weight * z2 * z2;
            }
        }

        const MomentSolve solve =
            config_.local_constant ? MomentSolve{} : solve_moments(m);
        solve1_[idx] = solve.x1;
        solve2_[idx] = solve.x2;
        ll_flag_[idx] = solve.local_linear ? 1 : 0;

        double den = 0.0;
        for (int u = u_lo; u <= u_hi; ++u) {
            const double k1 = k1_table_[std::abs(t - u)];
            if (k1 == 0.0) continue;
            const double z1 = static_cast<double>(t - u) / T;
            const int d_lo = std::max(1, w - k2_reach_);
            const int d_hi = std::min({u - 1, w + k2_reach_, D});
            for (int d = d_lo; d <= d_hi; ++d) {
                const double c = exposure_[static_cast<std::size_t>(u - d - 1)];
                if (c == 0.0) continue;
                const double k2 = k2_table_[k2_reach_ + (w - d)];
                if (k2 == 0.0) continue;
                const double z2 = static_cast<double>(w - d);
                const double c1 = 1.0 - (z1 * solve.x1 + z2 * solve.x2);
                den += c1 * k1 * k2 * c;
            }
        }
        den_[idx] = den;
    });
}

double LocalLinearEngine::denominator(int t, int w) const {
    return den_[cell(t, w)];
}

bool LocalLinearEngine::local_linear_at(int t, int w) const {
    return ll_flag_[cell(t, w)] != 0;
}

double LocalLinearEngine::k1_of_day_offset(int t_minus_u) const {
    const int j = std::abs(t_minus_u);
    return j <= k1_reach_ ? k1_table_[j] : 0.0;
}

double LocalLinearEngine::k2_of_lag_offset(int w_minus_d) const {
    return std::abs(w_minus_d) <= k2_reach_ ? k2_table_[k2_reach_ + w_minus_d] : 0.0;
}

double LocalLinearEngine::c1(int t, int w, int u, int d) const {
    const std::size_t idx = cell(t, w);
    if (ll_flag_[idx] == 0) return 1.0;
    const double z1 = static_cast<double>(t - u) / horizon_days_;
    const double z2 = static_cast<double>(w - d);
    return 1.0 - (z1 * solve1_[idx] + z2 * solve2_[idx]);
}

double LocalLinearEngine::numerator(int t, int w, const PairCounts& pairs) const {
    const std::size_t idx = cell(t, w);
    const double x1 = solve1_[idx];
    const double x2 = solve2_[idx];
    const int T = horizon_days_;
    const int u_lo = std::max(2, t - k1_reach_);
    const int u_hi = std::min({T, t + k1_reach_, pairs.horizon()});
    double num = 0.0;
    for (int u = u_lo; u <= u_hi; ++u) {
        const double k1 = k1_table_[std::abs(t - u)];
        if (k1 == 0.0) continue;
        const double z1 = static_cast<double>(t - u) / T;
        const auto row = pairs.row(u);
        const int d_lo = std::max(1, w - k2_reach_);
        const int d_hi = std::min({u - 1, w + k2_reach_, pairs.max_lag()});
        for (int d = d_lo; d <= d_hi; ++d) {
            const double count = row[d - 1];
            if (count == 0.0) continue;
            const double k2 = k2_table_[k2_reach_ + (w - d)];
            if (k2 == 0.0) continue;
            const double z2 = static_cast<double>(w - d);
            const double c1 = 1.0 - (z1 * x1 + z2 * x2);
            num += c1 * k1 * k2 * count;
        }
    }
    return num;
}

double LocalLinearEngine::day_contribution(int t, int w, const PairCounts& pairs, int u) const {
    if (u < 2 || u > pairs.horizon() || std::abs(t - u) > k1_reach_) return 0.0;
    const double k1 = k1_table_[std::abs(t - u)];
    if (k1 == 0.0) return 0.0;
    const std::size_t idx = cell(t, w);
    const double x1 = solve1_[idx];
    const double x2 = solve2_[idx];
    const double z1 = static_cast<double>(t - u) / horizon_days_;
    const auto row = pairs.row(u);
    const int d_lo = std::max(1, w - k2_reach_);
    const int d_hi = std::min({u - 1, w + k2_reach_, pairs.max_lag()});
    double sum = 0.0;
    for (int d = d_lo; d <= d_hi; ++d) {
        const double count = row[d - 1];
        if (count == 0.0) continue;
        const double k2 = k2_table_[k2_reach_ + (w - d)];
        if (k2 == 0.0) continue;
        const double z2 = static_cast<double>(w - d);
        const double c1 = 1.0 - (z1 * x1 + z2 * x2);
        sum += c1 * k1 * k2 * count;
    }
    return sum;
}

IntensitySurface LocalLinearEngine::ratio_surface(const PairCounts& pairs) const {
    const int T = horizon_days_;
    const int D = config_.lag_cutoff;
    IntensitySurface s = IntensitySurface::zeros(T, D);
    const std::size_t n_cells = s.values.size();

    // fixed chunking keeps the clip counter deterministic
    constexpr std::size_t chunk_cells = 4096;
    const std::size_t n_chunks = (n_cells + chunk_cells - 1) / chunk_cells;
    std::vector<std::int64_t> clipped(n_chunks, 0);

    parallel_for(n_chunks, [&](std::size_t c) {
        const std::size_t lo = c * chunk_cells;
        const std::size_t hi = std::min(n_cells, lo + chunk_cells);
        for (std::size_t idx = lo; idx < hi; ++idx) {
            const int t = static_cast<int>(idx / D) + 1;
            const int w = static_cast<int>(idx % D) + 1;
            const double den = den_[idx];
            if (!(den > 0.0)) continue; // value 0, evaluated stays false
            double value = numerator(t, w, pairs) / den;
            if (value < 0.0) {
                value = 0.0;
                ++clipped[c];
            }
            s.values[idx] = value;
            s.evaluated[idx] = 1;
        }
    });
    for (std::int64_t c : clipped) s.clipped_cells += c;
    return s;
}

IntensitySurface estimate_full_info(const PairCounts& pairs, std::span<const double> exposure,
                                    const EstimationConfig& config) {
    LocalLinearEngine engine(exposure, config);
    return engine.ratio_surface(pairs);
}

IntensitySurface update_surface(const PairCounts& pairs, std::span<const double> exposure,
                                const EstimationConfig& config) {
    return estimate_full_info(pairs, exposure, config);
}

Responsibilities responsibilities(const IntensitySurface& surface,
                                  std::span<const double> offspring,
                                  std::span<const double> exposure) {
    const int T = static_cast<int>(offspring.size());
    if (static_cast<int>(exposure.size()) != T)
        throw std::invalid_argument("responsibilities: series lengths differ");
    if (surface.horizon_days < T)
        throw std::invalid_argument("responsibilities: surface shorter than the series");
    const int D = surface.lag_cutoff;

    Responsibilities out{PairCounts(T, D), {}};
    for (int u = 1; u <= T; ++u) {
        const double count = offspring[u - 1];
        if (count == 0.0) continue;
        const int v_lo = std::max(1, u - D);
        double total = 0.0;
        for (int v = v_lo; v <= u - 1; ++v)
            total += surface.at(u, u - v) * exposure[v - 1];
        if (!(total > 0.0)) {
            out.skipped_days.push_back(u);
            continue;
        }
        auto row = out.pairs.row(u);
        for (int v = v_lo; v <= u - 1; ++v) {
            const double weight = surface.at(u, u - v) * exposure[v - 1];
            if (weight != 0.0) row[u - v - 1] = count * (weight / total);
        }
    }
    return out;
}

namespace {

/// sup-relative distance used for both the stopping rule and the residual:
/// max |a - b| over cells, divided by (max a + eps).
double sup_relative_change(const IntensitySurface& prev, const IntensitySurface& next) {
    constexpr double eps = 1e-12;
    double max_diff = 0.0;
    for (std::size_t i = 0; i < prev.values.size(); ++i)
        max_diff = std::max(max_diff, std::fabs(next.values[i] - prev.values[i]));
    return max_diff / (prev.max_value() + eps);
}

} // namespace

MissingLinkResult estimate_missing_link(std::span<const double> exposure,
                                        std::span<const double> offspring,
                                        const MissingLinkConfig& config) {
    if (!(config.tol > 0.0))
        throw std::invalid_argument("estimate_missing_link: tol must be positive");
    if (config.max_iter < 1)
        throw std::invalid_argument("estimate_missing_link: max_iter must be >= 1");
    if (exposure.size() != offspring.size())
        throw std::invalid_argument("estimate_missing_link: series lengths differ");

    const int T = static_cast<int>(exposure.size());
    const int D = config.est.lag_cutoff;

    IntensitySurface current =
        config.init ? *config.init : IntensitySurface::uniform(T, D, 1.0 / D);
    if (current.horizon_days != T || current.lag_cutoff != D)
        throw std::invalid_argument("estimate_missing_link: init surface has wrong shape");

    MissingLinkResult result;
    result.responsibilities = PairCounts(T, D);

    // Degenerate input: with no exposure there is nothing to attribute or
    // smooth; report the initial surface as a trivial fixed point.
    const bool no_exposure = std::all_of(exposure.begin(), exposure.end(),
                                         [](double c) { return c == 0.0; });
    if (no_exposure) {
        auto resp = responsibilities(current, offspring, exposure);
        result.surface = std::move(current);
        result.diagnostics.iterations_run = 1;
        result.diagnostics.sup_relative_change.push_back(0.0);
        result.diagnostics.converged = true;
        result.diagnostics.final_residual = 0.0;
        result.diagnostics.skipped_days = std::move(resp.skipped_days);
        result.responsibilities = std::move(resp.pairs);
        return result;
    }

    LocalLinearEngine engine(exposure, config.est);
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        auto resp = responsibilities(current, offspring, exposure);
        IntensitySurface next = engine.ratio_surface(resp.pairs);

        const double change = sup_relative_change(current, next);
        result.diagnostics.iterations_run = iter;
        result.diagnostics.sup_relative_change.push_back(change);
        result.diagnostics.skipped_days = std::move(resp.skipped_days);
        result.responsibilities = std::move(resp.pairs);
        current = std::move(next);

        if (change <= config.tol) {
            result.diagnostics.converged = true;
            break;
        }
    }
    result.diagnostics.final_residual = result.diagnostics.sup_relative_change.back();
    result.surface = std::move(current);
    return result;
}

double fixed_point_residual(const IntensitySurface& surface,
                            std::span<const double> exposure,
                            std::span<const double> offspring,
                            const EstimationConfig& config) {
    auto resp = responsibilities(surface, offspring, exposure);
    IntensitySurface stepped = update_surface(resp.pairs, exposure, config);
    return sup_relative_change(surface, stepped);
}

} // namespace exhawkes
