#include "sparseproj/gsp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dual_root.hpp"
#include "sparseproj/errors.hpp"

namespace sparseproj {

namespace {

constexpr double kTieTolerance = 1e-12;

std::vector<Vector> magnitudes(const VectorGroup& g) {
    std::vector<Vector> abs;
    abs.reserve(g.size());
    for (const auto& v : g) {
        abs.emplace_back(v.cwiseAbs());
    }
    return abs;
}

// Contribution of one vector to g and g'.
DualValue term(const Vector& a, double beta, double mu) {
    const double t = mu * beta;
    double sum = 0.0;
    double sq = 0.0;
    Eigen::Index support = 0;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        const double y = a[j] - t;
        if (y > 0.0) {
            sum += y;
            sq += y * y;
            ++support;
        }
    }
    if (support == 0) {
        return {beta, 0.0};
    }
    const double norm = std::sqrt(sq);
    const double value = beta * sum / norm;
    const double derivative =
        -beta * beta * (static_cast<double>(support) * sq - sum * sum) / (sq * norm);
    return {value, derivative};
}

DualValue residual(const std::vector<Vector>& abs, const GroupConstants& consts, double mu) {
    DualValue total{-consts.k_s, 0.0};
    for (std::size_t i = 0; i < abs.size(); ++i) {
        const DualValue d = term(abs[i], consts.beta[i], mu);
        total.value += d.value;
        total.derivative += d.derivative;
    }
    return total;
}

// Second largest entry counting multiplicity.
double second_largest(const Vector& a) {
    double first = -1.0;
    double second = -1.0;
    for (double v : a) {
        if (v > first) {
            second = first;
            first = v;
        } else if (v > second) {
            second = v;
        }
    }
    return second;
}

// alpha * sign(x) o dir, with +0 wherever dir vanishes.
Vector signed_scale(const Vector& x, const Vector& dir, double alpha) {
    Vector out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        out[j] = dir[j] > 0.0 ? std::copysign(alpha * dir[j], x[j]) : 0.0;
    }
    return out;
}

double group_sparsity(const std::vector<Vector>& directions) {
    double total = 0.0;
    for (const auto& d : directions) {
        total += spar(d);
    }
    return total / static_cast<double>(directions.size());
}

std::vector<Vector> directions_at(const std::vector<Vector>& abs, const GroupConstants& consts,
                                  double mu) {
    std::vector<Vector> dirs;
    dirs.reserve(abs.size());
    for (std::size_t i = 0; i < abs.size(); ++i) {
        dirs.push_back(candidate_direction(abs[i], mu, consts.beta[i]));
    }
    return dirs;
}

}  // namespace

void ProjectionConfig::validate() const {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw DomainError("target sparsity s must lie in [0, 1]");
    }
    if (!(epsilon > 0.0)) {
        throw DomainError("accuracy epsilon must be > 0");
    }
    if (!(safeguard_ratio >= 0.5 && safeguard_ratio < 1.0)) {
        throw DomainError("safeguard ratio must lie in [1/2, 1)");
    }
    if (max_iters < 1) {
        throw DomainError("max_iters must be positive");
    }
}

GroupConstants GroupConstants::compute(const VectorGroup& g, double s) {
    GroupConstants c;
    c.beta.reserve(g.size());
    double sum = 0.0;
    for (const auto& v : g) {
        const double sqrt_n = std::sqrt(static_cast<double>(v.size()));
        c.beta.push_back(1.0 / (sqrt_n - 1.0));
        sum += sqrt_n / (sqrt_n - 1.0);
    }
    c.k_s = sum - static_cast<double>(g.size()) * s;
    return c;
}

Matrix ProjectionResult::as_rows() const {
    if (projected.empty()) {
        return {};
    }
    Matrix m(static_cast<Eigen::Index>(projected.size()), projected.front().size());
    for (std::size_t i = 0; i < projected.size(); ++i) {
        if (projected[i].size() != m.cols()) {
            throw DomainError("as_rows: vectors have different lengths");
        }
        m.row(static_cast<Eigen::Index>(i)) = projected[i].transpose();
    }
    return m;
}

Matrix ProjectionResult::as_columns() const {
    return as_rows().transpose();
}

Vector candidate_direction(const Vector& x_abs, double mu, double beta) {
    const double t = mu * beta;
    Vector y = (x_abs.array() - t).cwiseMax(0.0);
    const double norm = y.norm();
    if (norm > 0.0) {
        return y / norm;
    }
    Eigen::Index best = 0;
    x_abs.maxCoeff(&best);  // first index on ties
    Vector e = Vector::Zero(x_abs.size());
    e[best] = 1.0;
    return e;
}

DualValue g_eval(const VectorGroup& g, const GroupConstants& consts, double mu) {
    return residual(magnitudes(g), consts, mu);
}

double mu_tilde(const VectorGroup& g, const GroupConstants& consts) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        best = std::max(best, second_largest(g[i].cwiseAbs()) / consts.beta[i]);
    }
    return best;
}

std::vector<double> discontinuity_points(const VectorGroup& g, const GroupConstants& consts) {
    std::vector<double> points;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vector a = g[i].cwiseAbs();
        const double top = a.maxCoeff();
        const auto ties = (a.array() >= top * (1.0 - kTieTolerance)).count();
        if (ties >= 2) {
            points.push_back(top / consts.beta[i]);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

ProjectionResult project_group(const VectorGroup& g, const ProjectionConfig& cfg) {
    cfg.validate();
    const auto consts = GroupConstants::compute(g, cfg.s);
    const auto abs = magnitudes(g);
    const double r = static_cast<double>(g.size());

    ProjectionResult res;
    const DualValue g0 = residual(abs, consts, 0.0);
    const double upper = mu_tilde(g, consts);
    double mu = 0.0;

    // Within accuracy of the target already counts as feasible.
    if (g0.value <= r * cfg.epsilon) {
        res.feasible_at_zero = true;
    } else if (cfg.s == 1.0) {
        mu = upper;
        res.mu_lo = res.mu_hi = upper;
    } else {
        const auto jumps = discontinuity_points(g, consts);
        auto near_jump = [&](double at) {
            return std::any_of(jumps.begin(), jumps.end(), [&](double d) {
                return std::abs(at - d) < cfg.epsilon * at;
            });
        };
        auto eval = [&](double at) { return residual(abs, consts, at); };
        auto root = detail::find_dual_root(eval, g0, upper, r * cfg.epsilon, cfg, near_jump);
        mu = root.mu;
        res.iterations = root.iterations;
        res.discontinuous = root.discontinuous;
        res.mu_lo = root.mu_lo;
        res.mu_hi = root.mu_hi;
        res.trace = std::move(root.trace);
    }

    res.mu_star = mu;
    if (res.feasible_at_zero) {
        res.projected = g.vectors();
        for (const auto& v : g) {
            res.unit_directions.emplace_back(v.cwiseAbs() / v.norm());
            res.scales.push_back(v.norm());
        }
    } else {
        res.unit_directions = directions_at(abs, consts, mu);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Vector& dir = res.unit_directions[i];
            const double alpha = abs[i].dot(dir);
            res.scales.push_back(alpha);
            res.projected.emplace_back(signed_scale(g[i], dir, alpha));
        }
    }
    res.achieved_sparsity = group_sparsity(res.unit_directions);
    if (res.discontinuous) {
        res.sparsity_band = {group_sparsity(directions_at(abs, consts, res.mu_lo)),
                             group_sparsity(directions_at(abs, consts, res.mu_hi))};
    } else {
        res.sparsity_band = {res.achieved_sparsity, res.achieved_sparsity};
    }
    return res;
}

Vector project_single(const Vector& x, const ProjectionConfig& cfg) {
    return project_group(VectorGroup({x}), cfg).projected.front();
}

ProjectionResult project_group_relative(const VectorGroup& g, const ProjectionConfig& cfg) {
    std::vector<Vector> unit;
    std::vector<double> norms;
    for (const auto& v : g) {
        norms.push_back(v.norm());
        unit.emplace_back(v / norms.back());
    }
    ProjectionResult res = project_group(VectorGroup(std::move(unit)), cfg);
    for (std::size_t i = 0; i < norms.size(); ++i) {
        res.projected[i] *= norms[i];
        res.scales[i] *= norms[i];
    }
    return res;
}

}  // namespace sparseproj
