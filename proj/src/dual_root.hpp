#pragma once

// Safeguarded Newton/bisection root finder for the nonincreasing dual
// residuals of the grouped projections. Shared by GSP and WGSP.

#include <cmath>
#include <functional>
#include <limits>

#include "sparseproj/errors.hpp"
#include "sparseproj/gsp.hpp"

namespace sparseproj::detail {

struct RootOutcome {
    double mu = 0.0;
    double mu_lo = 0.0;
    double mu_hi = 0.0;
    int iterations = 0;
    bool discontinuous = false;
    std::vector<IterationRecord> trace;
};

/// Finds mu in [0, mu_hi] with |g(mu)| <= tol. Requires g(0) > tol and
/// g(mu_hi) <= 0.
///
/// `near_jump(mu)` decides whether a collapsed bracket around mu is a known
/// discontinuity of g. In that case the bracket end with the smaller |g| is
/// returned and the outcome is flagged.
inline RootOutcome find_dual_root(const std::function<DualValue(double)>& g, DualValue g0,
                                  double mu_hi, double tol, const ProjectionConfig& cfg,
                                  const std::function<bool(double)>& near_jump) {
    RootOutcome out;
    double lo = 0.0;
    double hi = mu_hi;
    double mu = 0.0;
    DualValue cur = g0;
    double delta = hi - lo;
    double g_lo = g0.value;
    double g_hi = g(hi).value;

    auto update_bracket = [&](double at, double value) {
        if (value > 0.0) {
            lo = at;
            g_lo = value;
        } else {
            hi = at;
            g_hi = value;
        }
    };

    while (std::abs(cur.value) > tol) {
        if (out.iterations >= cfg.max_iters) {
            throw ConvergenceError("dual root: iteration limit reached", lo, hi);
        }
        ++out.iterations;
        const double mu_old = mu;
        const double g_old = cur.value;
        bool bisected = false;

        // Newton step for the root of g.
        mu = mu - cur.value / cur.derivative;
        if (!std::isfinite(mu) || mu < lo || mu > hi) {
            mu = 0.5 * (lo + hi);
            bisected = true;
        }
        cur = g(mu);
        update_bracket(mu, cur.value);

        // Newton is stalling: neither the bracket nor the residual contracted
        // by r_l. One-sided Newton convergence keeps the bracket wide, so the
        // residual test is what separates it from stagnation.
        if (hi - lo > cfg.safeguard_ratio * delta &&
            std::abs(mu_old - mu) < (1.0 - cfg.safeguard_ratio) * delta &&
            std::abs(cur.value) > cfg.safeguard_ratio * std::abs(g_old)) {
            mu = 0.5 * (lo + hi);
            bisected = true;
            cur = g(mu);
            update_bracket(mu, cur.value);
        }
        delta = hi - lo;
        out.trace.push_back({mu, cur.value, lo, hi, bisected});

        if (std::abs(cur.value) <= tol) {
            break;
        }
        // g jumps across the bracket: the target is not attainable.
        const bool collapsed = delta < cfg.epsilon * mu && near_jump(mu);
        const bool exhausted = delta <= 4.0 * std::numeric_limits<double>::epsilon() * hi;
        if (collapsed || exhausted) {
            out.discontinuous = true;
            mu = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
            break;
        }
    }
    out.mu = mu;
    out.mu_lo = lo;
    out.mu_hi = hi;
    return out;
}

}  // namespace sparseproj::detail
