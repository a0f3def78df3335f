#include "oracles.hpp"

#include <cmath>

namespace oracle {

double epanechnikov(double x) {
    return std::fabs(x) > 1.0 ? 0.0 : 0.75 * (1.0 - x * x);
}

double scaled_kernel(double b, double x) {
    return epanechnikov(x / b) / b;
}

Moments moments(int t, int w, std::span<const double> exposure, double b1, double b2,
                int lag_cutoff, int T) {
    Moments m;
    const int s = t - w;
    for (int u = 1; u <= T; ++u) {
        for (int v = 1; v < u; ++v) {
            if (u - v > lag_cutoff) continue;
            const double k1 = scaled_kernel(b1, static_cast<double>(t - u) / T);
            const double k2 = scaled_kernel(b2, static_cast<double>(t - s - (u - v)));
            const double weight = k1 * k2 * exposure[static_cast<std::size_t>(v - 1)];
            if (weight == 0.0) continue;
            const double z1 = static_cast<double>(t - u) / T;
            const double z2 = static_cast<double>(t - s - (u - v));
            m.a1 += weight * z1;
            m.a2 += weight * z2;
            m.a11 += weight * z1 * z1;
            m.a12 += weight * z1 * z2;
            m.a22 += weight * z2 * z2;
        }
    }
    return m;
}

double c1(int t, int w, int v, int u, std::span<const double> exposure, double b1, double b2,
          int lag_cutoff, int T) {
    const Moments m = moments(t, w, exposure, b1, b2, lag_cutoff, T);
    const double det = m.a11 * m.a22 - m.a12 * m.a12;
    const double scale = std::max({std::fabs(m.a11), std::fabs(m.a22), std::fabs(m.a12)});
    if (scale == 0.0 || std::fabs(det) < 1e-10 * scale * scale) return 1.0;
    // A^{-1} a by the adjugate formula
    const double x1 = (m.a22 * m.a1 - m.a12 * m.a2) / det;
    const double x2 = (m.a11 * m.a2 - m.a12 * m.a1) / det;
    const int s = t - w;
    const double z1 = static_cast<double>(t - u) / T;
    const double z2 = static_cast<double>(t - s - (u - v));
    return 1.0 - (z1 * x1 + z2 * x2);
}

double numerator_cell(int t, int w, std::span<const Pair> pairs,
                      std::span<const double> exposure, double b1, double b2, int lag_cutoff,
                      int T) {
    const int s = t - w;
    double num = 0.0;
    for (const Pair& p : pairs) {
        if (p.u - p.v > lag_cutoff) continue;
        const double k1 = scaled_kernel(b1, static_cast<double>(t - p.u) / T);
        const double k2 = scaled_kernel(b2, static_cast<double>(t - s - (p.u - p.v)));
        if (k1 == 0.0 || k2 == 0.0) continue;
        num += c1(t, w, p.v, p.u, exposure, b1, b2, lag_cutoff, T) * k1 * k2 * p.count;
    }
    return num;
}

double denominator_cell(int t, int w, std::span<const double> exposure, double b1, double b2,
                        int lag_cutoff, int T) {
    const int s = t - w;
    double den = 0.0;
    for (int u = 1; u <= T; ++u) {
        for (int v = 1; v < u; ++v) {
            if (u - v > lag_cutoff) continue;
            const double k1 = scaled_kernel(b1, static_cast<double>(t - u) / T);
            const double k2 = scaled_kernel(b2, static_cast<double>(t - s - (u - v)));
            if (k1 == 0.0 || k2 == 0.0) continue;
            const double c = exposure[static_cast<std::size_t>(v - 1)];
            if (c == 0.0) continue;
            den += c1(t, w, v, u, exposure, b1, b2, lag_cutoff, T) * k1 * k2 * c;
        }
    }
    return den;
}

double mu_cell(int t, int w, std::span<const Pair> pairs, std::span<const double> exposure,
               double b1, double b2, int lag_cutoff, int T) {
    const double den = denominator_cell(t, w, exposure, b1, b2, lag_cutoff, T);
    if (!(den > 0.0)) return 0.0;
    const double value = numerator_cell(t, w, pairs, exposure, b1, b2, lag_cutoff, T) / den;
    return value < 0.0 ? 0.0 : value;
}

std::vector<double> lambda_recursion(const exhawkes::GroundTruth& gt) {
    const int T = gt.horizon_days;
    std::vector<double> lambda(T, 0.0);
    for (int t = 1; t <= T; ++t) {
        double sum = gt.n_scale * gt.rho1_at(t);
        for (int v = 1; v < t; ++v) sum += gt.mu1_at(t, t - v) * lambda[v - 1];
        lambda[t - 1] = sum;
    }
    return lambda;
}

std::vector<double> lambda_chi_series(const exhawkes::GroundTruth& gt, int k_max) {
    const int T = gt.horizon_days;
    // conv[(t-1)*T + (s-1)] = mu^{(*k)}(t, s), s < t
    auto idx = [T](int t, int s) { return static_cast<std::size_t>(t - 1) * T + (s - 1); };
    std::vector<double> chi(static_cast<std::size_t>(T) * T, 0.0);
    std::vector<double> conv(chi.size(), 0.0);
    for (int t = 1; t <= T; ++t)
        for (int s = 1; s < t; ++s) conv[idx(t, s)] = gt.mu1_at(t, t - s);
    for (std::size_t i = 0; i < chi.size(); ++i) chi[i] = conv[i];

    std::vector<double> next(conv.size(), 0.0);
    for (int k = 2; k <= k_max; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int t = 1; t <= T; ++t) {
            for (int s = 1; s < t; ++s) {
                double sum = 0.0;
                for (int v = s + 1; v < t; ++v)
                    sum += gt.mu1_at(t, t - v) * conv[idx(v, s)];
                next[idx(t, s)] = sum;
            }
        }
        conv.swap(next);
        for (std::size_t i = 0; i < chi.size(); ++i) chi[i] += conv[i];
    }

    std::vector<double> lambda(T, 0.0);
    for (int t = 1; t <= T; ++t) {
        double sum = gt.n_scale * gt.rho1_at(t);
        if (k_max >= 1)
            for (int u = 1; u < t; ++u) sum += chi[idx(t, u)] * gt.n_scale * gt.rho1_at(u);
        lambda[t - 1] = sum;
    }
    return lambda;
}

} // namespace oracle
