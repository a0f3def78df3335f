#include "exhawkes/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "exhawkes/errors.hpp"

namespace exhawkes {

namespace {
// Mass of the standard normal on [-1, 1]; normalizes the truncated Gaussian.
const double gauss_trunc_norm = std::erf(1.0 / std::sqrt(2.0));
const double inv_sqrt_2pi = 0.3989422804014326779;
} // namespace

KernelFamily kernel_family_from_name(const std::string& name) {
    if (name == "epanechnikov") return KernelFamily::epanechnikov;
    if (name == "quartic") return KernelFamily::quartic;
    if (name == "gaussian-truncated") return KernelFamily::gaussian_truncated;
    throw config_error("unknown kernel family '" + name +
                       "' (expected epanechnikov, quartic or gaussian-truncated)");
}

const char* kernel_family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::epanechnikov: return "epanechnikov";
        case KernelFamily::quartic: return "quartic";
        case KernelFamily::gaussian_truncated: return "gaussian-truncated";
    }
    return "?";
}

double kernel_value(KernelFamily family, double x) {
    if (std::fabs(x) > 1.0) return 0.0;
    switch (family) {
        case KernelFamily::epanechnikov:
            return 0.75 * (1.0 - x * x);
        case KernelFamily::quartic: {
            const double u = 1.0 - x * x;
            return (15.0 / 16.0) * u * u;
        }
        case KernelFamily::gaussian_truncated:
            return inv_sqrt_2pi * std::exp(-0.5 * x * x) / gauss_trunc_norm;
    }
    return 0.0;
}

double kernel_eval(KernelFamily family, double b, double x) {
    if (!(b > 0.0)) throw std::invalid_argument("kernel_eval: bandwidth must be positive");
    return kernel_value(family, x / b) / b;
}

void validate_bandwidths(const Bandwidths& bw, int lag_cutoff) {
    if (!(bw.b1 > 0.0) || !(bw.b1 <= 1.0))
        throw std::invalid_argument("bandwidth b1 must be in (0, 1], got " +
                                    std::to_string(bw.b1));
    if (!(bw.b2 > 0.0))
        throw std::invalid_argument("bandwidth b2 must be positive, got " +
                                    std::to_string(bw.b2));
    if (lag_cutoff > 0 && bw.b2 > lag_cutoff)
        throw std::invalid_argument("bandwidth b2 must not exceed the lag cutoff D = " +
                                    std::to_string(lag_cutoff));
}

MomentSet local_moments(int t, int w, std::span<const double> exposure,
                        const KernelSpec& kernels, const Bandwidths& bw, int lag_cutoff,
                        int T) {
    if (t < 1 || t > T) throw std::invalid_argument("local_moments: day out of range");
    if (w < 1 || w > lag_cutoff)
        throw std::invalid_argument("local_moments: lag must be in 1..lag_cutoff");
    validate_bandwidths(bw, lag_cutoff);

    MomentSet m;
    m.day = t;
    m.lag = w;

    const int u_reach = static_cast<int>(std::ceil(bw.b1 * T));
    const int d_reach = static_cast<int>(std::ceil(bw.b2));
    const int u_lo = std::max(1, t - u_reach);
    const int u_hi = std::min(T, t + u_reach);

    for (int u = u_lo; u <= u_hi; ++u) {
        const double z1 = static_cast<double>(t - u) / T;
        const double k1 = kernel_eval(kernels.time, bw.b1, z1);
        if (k1 == 0.0) continue;
        const int d_lo = std::max(1, w - d_reach);
        const int d_hi = std::min({u - 1, w + d_reach, lag_cutoff});
        for (int d = d_lo; d <= d_hi; ++d) {
            const int v = u - d;
            const double c = exposure[static_cast<std::size_t>(v - 1)];
            if (c == 0.0) continue;
            const double z2 = static_cast<double>(w - d);
            const double k2 = kernel_eval(kernels.lag, bw.b2, z2);
            if (k2 == 0.0) continue;
            const double weight = k1 * k2 * c;
            m.a1 += weight * z1;
            m.a2 += weight * z2;
            m.a11 += weight * z1 * z1;
            m.a12 += weight * z1 * z2;
            m.a22 += weight * z2 * z2;
        }
    }
    return m;
}

MomentSolve solve_moments(const MomentSet& m) {
    // Eigenvalues of the symmetric 2x2 second-moment matrix.
    const double tr = m.a11 + m.a22;
    const double gap = std::sqrt(std::max(0.0, (m.a11 - m.a22) * (m.a11 - m.a22) +
                                                   4.0 * m.a12 * m.a12));
    const double eig_max = 0.5 * (tr + gap);
    const double eig_min = 0.5 * (tr - gap);

    MomentSolve solve;
    if (!(eig_max > 0.0) || eig_min < 1e-10 * eig_max) return solve; // local-constant fallback

    const double det = m.a11 * m.a22 - m.a12 * m.a12;
    solve.x1 = (m.a22 * m.a1 - m.a12 * m.a2) / det;
    solve.x2 = (m.a11 * m.a2 - m.a12 * m.a1) / det;
    solve.local_linear = true;
    return solve;
}

double c1_weight(int t, int w, int v, int u, const MomentSolve& solve, int T) {
    if (!solve.local_linear) return 1.0;
    const double z1 = static_cast<double>(t - u) / T;
    const double z2 = static_cast<double>(w - (u - v));
    return 1.0 - (z1 * solve.x1 + z2 * solve.x2);
}

double c1_weight(int t, int w, int v, int u, const MomentSet& m, int T) {
    return c1_weight(t, w, v, u, solve_moments(m), T);
}

} // namespace exhawkes
