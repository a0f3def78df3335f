#pragma once

#include <string>
#include <span>

namespace exhawkes {

/// One-dimensional kernels with support [-1, 1], each integrating to 1.
enum class KernelFamily {
    epanechnikov,
    quartic,
    gaussian_truncated,
};

KernelFamily kernel_family_from_name(const std::string& name); // throws config_error
const char* kernel_family_name(KernelFamily family);

/// K(x): zero for |x| > 1.
double kernel_value(KernelFamily family, double x);

/// Scaled kernel K(x/b)/b; b must be positive.
double kernel_eval(KernelFamily family, double b, double x);

/// Kernel pair for the two smoothing axes: K1 acts on rescaled calendar
/// time (t-u)/T, K2 on the lag offset in days.
struct KernelSpec {
    KernelFamily time = KernelFamily::epanechnikov;
    KernelFamily lag = KernelFamily::epanechnikov;
};

/// b1 is a fraction of the horizon T; b2 is in days.
struct Bandwidths {
    double b1 = 0.1;
    double b2 = 3.0;
};

/// Enforces 0 < b1 <= 1 and 0 < b2 <= lag_cutoff; throws std::invalid_argument.
void validate_bandwidths(const Bandwidths& bw, int lag_cutoff);

/// First and second local moments of the smoothing design around an
/// evaluation point (day, lag). The design measure places mass exposure[v]
/// at every ordered day pair (u, v), v < u, with coordinates
/// z1 = (t-u)/T and z2 = lag - (u-v).
struct MomentSet {
    double a1 = 0.0, a2 = 0.0;          // first moments
    double a11 = 0.0, a12 = 0.0, a22 = 0.0; // symmetric second-moment matrix
    int day = 0;
    int lag = 0;
};

/// Discrete moment sums at (t, w); exposure holds counts for days 1..T.
/// Sum ranges are cut to the kernel supports, |t-u| <= b1*T and
/// |w-(u-v)| <= b2, and to the lag support 1 <= u-v <= lag_cutoff: the
/// design lives where the estimand can be non-zero, which keeps the
/// boundary rows of the grid corrected instead of diluted.
MomentSet local_moments(int t, int w, std::span<const double> exposure,
                        const KernelSpec& kernels, const Bandwidths& bw, int lag_cutoff,
                        int T);

/// Result of solving A x = a for the local-linear tilt. When A is
/// numerically singular (smallest eigenvalue < 1e-10 times the largest, or
/// the largest is zero) the estimator falls back to local-constant
/// weights: local_linear = false and x = 0, so the C1 weight is 1.
struct MomentSolve {
    double x1 = 0.0;
    double x2 = 0.0;
    bool local_linear = false;
};

MomentSolve solve_moments(const MomentSet& m);

/// Local-linear correction weight C1 = 1 - z' A^{-1} a for the design point
/// (u, v) seen from the evaluation point stored in m.
double c1_weight(int t, int w, int v, int u, const MomentSet& m, int T);
double c1_weight(int t, int w, int v, int u, const MomentSolve& solve, int T);

} // namespace exhawkes
