#pragma once

#include <utility>
#include <vector>

#include "sparseproj/sparsity.hpp"

namespace sparseproj {

/// Solver settings shared by the grouped projections.
struct ProjectionConfig {
    double s = 0.0;                 ///< target average sparsity in [0, 1]
    double epsilon = 1e-4;          ///< accuracy on the average sparsity
    double safeguard_ratio = 0.9;   ///< minimum bracket contraction r_l in [1/2, 1)
    int max_iters = 100;

    /// Throws DomainError on out-of-range fields.
    void validate() const;
};

/// Per-group constants of the dual residual: beta_i = 1/(sqrt(n_i) - 1) and
/// k_s = sum_i sqrt(n_i)/(sqrt(n_i) - 1) - r*s.
struct GroupConstants {
    std::vector<double> beta;
    double k_s = 0.0;

    static GroupConstants compute(const VectorGroup& g, double s);
};

/// Value and right-sided derivative of the dual residual at one mu.
struct DualValue {
    double value = 0.0;
    double derivative = 0.0;
};

/// One pass of the safeguarded Newton loop.
struct IterationRecord {
    double mu = 0.0;
    double value = 0.0;  ///< residual at mu
    double mu_lo = 0.0;
    double mu_hi = 0.0;
    bool bisection = false;
};

struct ProjectionResult {
    std::vector<Vector> projected;        ///< reconstructed vectors, signs of the input kept
    std::vector<Vector> unit_directions;  ///< nonnegative, unit l2 norm
    std::vector<double> scales;           ///< optimal alpha_i = ||projected_i||_2
    double mu_star = 0.0;
    int iterations = 0;
    double achieved_sparsity = 0.0;
    bool feasible_at_zero = false;  ///< input already within epsilon of the target or above
    bool discontinuous = false;
    double mu_lo = 0.0;
    double mu_hi = 0.0;
    /// Average sparsity on either side of the jump when `discontinuous` is
    /// set: targets strictly inside this band cannot be reached.
    std::pair<double, double> sparsity_band{0.0, 0.0};
    std::vector<IterationRecord> trace;

    Matrix as_rows() const;
    Matrix as_columns() const;
};

/// Maximizer of v^T |x| over unit nonnegative v for multiplier mu:
/// the normalized soft threshold of x_abs at mu*beta, or the 1-sparse
/// indicator at the (lowest-index) largest entry once everything is thresholded.
Vector candidate_direction(const Vector& x_abs, double mu, double beta);

/// g(mu) = sum_i beta_i e^T xbar_i(mu) - k_s, with its analytic derivative.
DualValue g_eval(const VectorGroup& g, const GroupConstants& consts, double mu);

/// Smallest mu beyond which every candidate direction is 1-sparse.
double mu_tilde(const VectorGroup& g, const GroupConstants& consts);

/// Sorted jump locations of g: max|x_i| / beta_i for every vector whose
/// largest magnitude is attained more than once (relative tolerance 1e-12).
std::vector<double> discontinuity_points(const VectorGroup& g, const GroupConstants& consts);

/// Grouped sparse projection: the closest set of vectors (sum of inner
/// products with |x_i| over unit directions) whose average sparsity is s.
ProjectionResult project_group(const VectorGroup& g, const ProjectionConfig& cfg);

/// Sparse projection of a single vector.
Vector project_single(const Vector& x, const ProjectionConfig& cfg);

/// Grouped projection minimizing relative errors ||x_i - y_i|| / ||x_i||.
ProjectionResult project_group_relative(const VectorGroup& g, const ProjectionConfig& cfg);

}  // namespace sparseproj
