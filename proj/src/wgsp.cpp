#include "sparseproj/wgsp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dual_root.hpp"
#include "sparseproj/errors.hpp"

namespace sparseproj {

namespace {

// Upper-bound doublings before giving up; g_w reaches r(s-1) <= 0 at a
// finite mu, so this only trips on absurd dynamic ranges.
constexpr int kMaxDoublings = 2000;

std::vector<Vector> magnitudes(const VectorGroup& g) {
    std::vector<Vector> abs;
    abs.reserve(g.size());
    for (const auto& v : g) {
        abs.emplace_back(v.cwiseAbs());
    }
    return abs;
}

Eigen::Index residual_argmax(const Vector& a, const Vector& w, double t) {
    Eigen::Index best = 0;
    double best_value = a[0] - t * w[0];
    for (Eigen::Index j = 1; j < a.size(); ++j) {
        const double v = a[j] - t * w[j];
        if (v > best_value) {
            best_value = v;
            best = j;
        }
    }
    return best;
}

DualValue term(const Vector& a, const Vector& w, double beta, double mu) {
    const double t = mu * beta;
    double wy = 0.0;
    double sq = 0.0;
    double w_sq = 0.0;
    bool any = false;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        const double y = a[j] - t * w[j];
        if (y > 0.0) {
            wy += w[j] * y;
            sq += y * y;
            w_sq += w[j] * w[j];
            any = true;
        }
    }
    if (!any) {
        return {beta * w[residual_argmax(a, w, t)], 0.0};
    }
    const double norm = std::sqrt(sq);
    return {beta * wy / norm, -beta * beta * (w_sq * sq - wy * wy) / (sq * norm)};
}

DualValue residual(const std::vector<Vector>& abs, const WeightGroup& w,
                   const WeightedConstants& consts, double mu) {
    DualValue total{-consts.k_s, 0.0};
    for (std::size_t i = 0; i < abs.size(); ++i) {
        const DualValue d = term(abs[i], w[i].entries(), consts.beta[i], mu);
        total.value += d.value;
        total.derivative += d.derivative;
    }
    return total;
}

double weighted_sparsity(const std::vector<Vector>& directions, const WeightGroup& w) {
    double total = 0.0;
    for (std::size_t i = 0; i < directions.size(); ++i) {
        total += spar_weighted(directions[i], w[i]);
    }
    return total / static_cast<double>(directions.size());
}

std::vector<Vector> directions_at(const std::vector<Vector>& abs, const WeightGroup& w,
                                  const WeightedConstants& consts, double mu) {
    std::vector<Vector> dirs;
    dirs.reserve(abs.size());
    for (std::size_t i = 0; i < abs.size(); ++i) {
        dirs.push_back(candidate_direction_weighted(abs[i], w[i], mu, consts.beta[i]));
    }
    return dirs;
}

}  // namespace

WeightGroup::WeightGroup(std::vector<WeightVector> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw DomainError("WeightGroup: needs at least one weight vector");
    }
}

WeightGroup WeightGroup::ones_like(const VectorGroup& g) {
    std::vector<WeightVector> w;
    w.reserve(g.size());
    for (const auto& v : g) {
        w.emplace_back(Vector::Ones(v.size()));
    }
    return WeightGroup(std::move(w));
}

WeightGroup WeightGroup::replicate(const WeightVector& w, std::size_t count) {
    return WeightGroup(std::vector<WeightVector>(count, w));
}

void WeightGroup::check_shape(const VectorGroup& g) const {
    if (g.size() != weights_.size()) {
        throw DomainError("WeightGroup: expected " + std::to_string(g.size()) +
                          " weight vectors, got " + std::to_string(weights_.size()));
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].size() != weights_[i].size()) {
            throw DomainError("WeightGroup[" + std::to_string(i) + "]: length mismatch");
        }
    }
}

WeightedConstants WeightedConstants::compute(const WeightGroup& w, double s_w) {
    WeightedConstants c;
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double beta = 1.0 / (w[i].norm() - w[i].min());
        c.beta.push_back(beta);
        sum += w[i].norm() * beta;
    }
    c.k_s = sum - static_cast<double>(w.size()) * s_w;
    return c;
}

Vector candidate_direction_weighted(const Vector& x_abs, const WeightVector& w, double mu,
                                    double beta) {
    const double t = mu * beta;
    Vector y = (x_abs - t * w.entries()).cwiseMax(0.0);
    const double norm = y.norm();
    if (norm > 0.0) {
        return y / norm;
    }
    Vector e = Vector::Zero(x_abs.size());
    e[residual_argmax(x_abs, w.entries(), t)] = 1.0;
    return e;
}

DualValue gw_eval(const VectorGroup& g, const WeightGroup& w, const WeightedConstants& consts,
                  double mu) {
    w.check_shape(g);
    return residual(magnitudes(g), w, consts, mu);
}

double mu_tilde_weighted(const VectorGroup& g, const WeightGroup& w,
                         const WeightedConstants& consts) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vector& x = g[i];
        const Vector& wi = w[i].entries();
        double first = 0.0;
        double second = 0.0;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            if (wi[j] <= 0.0) {
                continue;
            }
            const double ratio = std::abs(x[j]) / (consts.beta[i] * wi[j]);
            if (ratio > first) {
                second = first;
                first = ratio;
            } else if (ratio > second) {
                second = ratio;
            }
        }
        best = std::max(best, second);
    }
    return best;
}

double average_weighted_sparsity(const VectorGroup& g, const WeightGroup& w) {
    w.check_shape(g);
    return weighted_sparsity(g.vectors(), w);
}

ProjectionResult project_group_weighted(const VectorGroup& g, const WeightGroup& w,
                                        const ProjectionConfig& cfg) {
    cfg.validate();
    w.check_shape(g);
    const auto consts = WeightedConstants::compute(w, cfg.s);
    const auto abs = magnitudes(g);
    const double r = static_cast<double>(g.size());
    auto eval = [&](double at) { return residual(abs, w, consts, at); };

    ProjectionResult res;
    const DualValue g0 = eval(0.0);
    double mu = 0.0;

    // Within accuracy of the target already counts as feasible.
    if (g0.value <= r * cfg.epsilon) {
        res.feasible_at_zero = true;
    } else {
        // Past mu_tilde the residual is piecewise constant and may still be
        // positive until every 1-sparse index sits on a smallest weight.
        double upper = mu_tilde_weighted(g, w, consts);
        if (!(upper > 0.0)) {
            upper = 1.0;
        }
        const double tol = r * cfg.epsilon;
        int doublings = 0;
        double g_upper = eval(upper).value;
        while (g_upper > tol) {
            if (++doublings > kMaxDoublings) {
                throw ConvergenceError("weighted projection: target sparsity is unreachable", 0.0,
                                       upper);
            }
            upper *= 2.0;
            g_upper = eval(upper).value;
        }
        if (g_upper > 0.0) {
            // Only reachable on the final plateau, e.g. s = 1.
            mu = upper;
            res.mu_lo = res.mu_hi = upper;
        } else {
            // Any collapse of the bracket with g_w jumping across it is a
            // discontinuity (tied maxima or an argmax switch in the 1-sparse regime).
            auto near_jump = [](double) { return true; };
            auto root = detail::find_dual_root(eval, g0, upper, tol, cfg, near_jump);
            mu = root.mu;
            res.iterations = root.iterations;
            res.discontinuous = root.discontinuous;
            res.mu_lo = root.mu_lo;
            res.mu_hi = root.mu_hi;
            res.trace = std::move(root.trace);
        }
    }

    res.mu_star = mu;
    if (res.feasible_at_zero) {
        res.projected = g.vectors();
        for (const auto& v : g) {
            res.unit_directions.emplace_back(v.cwiseAbs() / v.norm());
            res.scales.push_back(v.norm());
        }
    } else {
        res.unit_directions = directions_at(abs, w, consts, mu);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Vector& dir = res.unit_directions[i];
            const double alpha = abs[i].dot(dir);
            res.scales.push_back(alpha);
            Vector out(dir.size());
            for (Eigen::Index j = 0; j < dir.size(); ++j) {
                out[j] = dir[j] > 0.0 ? std::copysign(alpha * dir[j], g[i][j]) : 0.0;
            }
            res.projected.push_back(std::move(out));
        }
    }
    res.achieved_sparsity = weighted_sparsity(res.unit_directions, w);
    if (res.discontinuous) {
        res.sparsity_band = {weighted_sparsity(directions_at(abs, w, consts, res.mu_lo), w),
                             weighted_sparsity(directions_at(abs, w, consts, res.mu_hi), w)};
    } else {
        res.sparsity_band = {res.achieved_sparsity, res.achieved_sparsity};
    }
    return res;
}

}  // namespace sparseproj
