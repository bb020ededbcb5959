#pragma once

// Mean-field model: the scalar ODE u' = phi(u) = lambda * e^{a u} u (1 - u) - u
// describing the homogeneously mixing (complete graph) limit.
//
// The origin is a fixed point for every parameter pair and its stability is
// the sign of lambda - 1, independent of the payoff. For lambda < 1 the
// system turns bistable once a exceeds the critical payoff
// a_c(lambda) = 1 + x_lambda, where x_lambda is the unique positive solution
// of lambda e^x = 1 + x; the double root at the tangency is
// u0 = 1 - e^{-x_lambda} / lambda. Fixed points have no closed form in
// general, so interior roots are located by dense-grid bracketing refined by
// bisection.
//
// All functions are pure and safe to call concurrently.

#include <cmath>
#include <vector>

#include "dcp/errors.hpp"

namespace dcp {
namespace meanfield {

inline double phi(double lambda, double a, double u) {
    return lambda * std::exp(a * u) * u * (1.0 - u) - u;
}

// Closed-form derivative of phi with respect to u.
inline double dphi(double lambda, double a, double u) {
    return lambda * std::exp(a * u) * (a * u * (1.0 - u) + 1.0 - 2.0 * u) - 1.0;
}

// Unique positive solution of lambda e^x = 1 + x, for 0 < lambda <= 1
// (x_1 = 0 as the limiting case).
inline double x_lambda(double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw DomainError("x_lambda: requires 0 < lambda <= 1");
    if (lambda == 1.0) return 0.0;
    auto g = [lambda](double x) { return lambda * std::exp(x) - (1.0 + x); };
    double hi = 1.0;
    while (g(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw DomainError("x_lambda: no sign change found");
    }
    double lo = 0.0;  // g(0) = lambda - 1 < 0
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double a_critical(double lambda) { return 1.0 + x_lambda(lambda); }

enum class Stability { Stable, Unstable, Degenerate };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Degenerate: return "degenerate";
    }
    return "?";
}

enum class Regime { GlobalExtinction, Bistable, InteriorStable };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::GlobalExtinction: return "global-extinction";
        case Regime::Bistable: return "bistable";
        case Regime::InteriorStable: return "interior-stable";
    }
    return "?";
}

struct FixedPoint {
    double u = 0.0;
    Stability stability = Stability::Stable;
};

struct MeanFieldReport {
    double lambda = 0.0;
    double a = 0.0;
    std::vector<FixedPoint> fixed_points;  // ascending in u, origin first
    Regime regime = Regime::GlobalExtinction;
};

// Tangency data for lambda < 1: the double root u0 and critical payoff.
struct BistabilityPoint {
    double lambda = 0.0;
    double x_lambda = 0.0;
    double u0 = 0.0;
    double a_c = 0.0;
};

inline BistabilityPoint bistability_point(double lambda) {
    BistabilityPoint p;
    p.lambda = lambda;
    p.x_lambda = x_lambda(lambda);
    p.u0 = 1.0 - std::exp(-p.x_lambda) / lambda;
    p.a_c = 1.0 + p.x_lambda;
    return p;
}

namespace detail {

constexpr int kGridPoints = 10000;
constexpr double kRootTolerance = 1e-12;
constexpr double kMergeTolerance = 1e-6;

inline double bisect_root(double lambda, double a, double lo, double hi) {
    double flo = phi(lambda, a, lo);
    while (hi - lo > kRootTolerance) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = phi(lambda, a, mid);
        if (fmid == 0.0) return mid;
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// All fixed points of phi on [0, 1) with stability labels and the regime
// classification. Interior roots closer than ~1/kGridPoints to 0, to each
// other, or to 1 are beyond the scan resolution.
inline MeanFieldReport fixed_points(double lambda, double a) {
    if (!(lambda > 0.0)) throw DomainError("fixed_points: lambda must be positive");
    MeanFieldReport report;
    report.lambda = lambda;
    report.a = a;

    FixedPoint origin;
    origin.u = 0.0;
    origin.stability = lambda > 1.0   ? Stability::Unstable
                       : lambda < 1.0 ? Stability::Stable
                                      : Stability::Degenerate;
    report.fixed_points.push_back(origin);

    std::vector<double> roots;
    const double h = 1.0 / detail::kGridPoints;
    double u_prev = h;
    double f_prev = phi(lambda, a, u_prev);
    for (int i = 2; i < detail::kGridPoints; ++i) {
        const double u = i * h;
        const double f = phi(lambda, a, u);
        if (f == 0.0) {
            roots.push_back(u);
        } else if (f_prev != 0.0 && (f_prev < 0.0) != (f < 0.0)) {
            roots.push_back(detail::bisect_root(lambda, a, u_prev, u));
        }
        u_prev = u;
        f_prev = f;
    }

    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (i + 1 < roots.size() && roots[i + 1] - roots[i] < detail::kMergeTolerance) {
            report.fixed_points.push_back({0.5 * (roots[i] + roots[i + 1]), Stability::Degenerate});
            ++i;
            continue;
        }
        const double d = dphi(lambda, a, roots[i]);
        report.fixed_points.push_back(
            {roots[i], d < 0.0 ? Stability::Stable : Stability::Unstable});
    }

    if (lambda > 1.0) {
        report.regime = Regime::InteriorStable;
    } else {
        report.regime = a > a_critical(lambda) ? Regime::Bistable : Regime::GlobalExtinction;
    }
    return report;
}

struct TrajectoryPoint {
    double t = 0.0;
    double u = 0.0;
};

// Classical fixed-step 4th-order integration of u' = phi(u), values clamped
// to [0, 1] after each step.
inline std::vector<TrajectoryPoint> integrate(double lambda, double a, double u0,
                                              double t_end, double step) {
    if (!(step > 0.0)) throw DomainError("integrate: step must be positive");
    if (u0 < 0.0 || u0 > 1.0) throw DomainError("integrate: u0 must lie in [0,1]");
    auto f = [lambda, a](double u) { return phi(lambda, a, u); };
    auto clamp01 = [](double u) { return u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u); };
    std::vector<TrajectoryPoint> traj;
    traj.push_back({0.0, u0});
    double t = 0.0;
    double u = u0;
    while (t < t_end) {
        const double hh = std::min(step, t_end - t);
        const double k1 = f(u);
        const double k2 = f(u + 0.5 * hh * k1);
        const double k3 = f(u + 0.5 * hh * k2);
        const double k4 = f(u + hh * k3);
        u = clamp01(u + hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        t += hh;
        traj.push_back({t, u});
    }
    return traj;
}

}  // namespace meanfield
}  // namespace dcp
