#pragma once

#include <vector>

#include "sparseproj/gsp.hpp"

namespace sparseproj {

/// One weight vector per member of a VectorGroup.
class WeightGroup {
public:
    explicit WeightGroup(std::vector<WeightVector> weights);

    /// All-ones weights shaped like `g`; reduces weighted sparsity to spar.
    static WeightGroup ones_like(const VectorGroup& g);
    /// The same weight vector for every member of `g`.
    static WeightGroup replicate(const WeightVector& w, std::size_t count);

    std::size_t size() const noexcept { return weights_.size(); }
    const WeightVector& operator[](std::size_t i) const { return weights_[i]; }

    /// Throws DomainError unless sizes match `g` member by member.
    void check_shape(const VectorGroup& g) const;

private:
    std::vector<WeightVector> weights_;
};

/// beta_i = 1/(||w_i||_2 - min w_i), k = sum_i ||w_i||_2 * beta_i - r*s_w.
struct WeightedConstants {
    std::vector<double> beta;
    double k_s = 0.0;

    static WeightedConstants compute(const WeightGroup& w, double s_w);
};

/// Normalized [x_abs - mu*beta*w]_+, or the 1-sparse indicator at the
/// (lowest-index) argmax of x_abs - mu*beta*w when nothing survives.
Vector candidate_direction_weighted(const Vector& x_abs, const WeightVector& w, double mu,
                                    double beta);

/// g_w(mu) = sum_i beta_i w_i^T xbar_i(mu) - k, with its analytic derivative.
DualValue gw_eval(const VectorGroup& g, const WeightGroup& w, const WeightedConstants& consts,
                  double mu);

/// max_i of the second largest |x_i(j)| / (beta_i w_i(j)) over w_i(j) > 0.
/// Past this point every vector is in its 1-sparse (piecewise-constant) regime.
double mu_tilde_weighted(const VectorGroup& g, const WeightGroup& w,
                         const WeightedConstants& consts);

double average_weighted_sparsity(const VectorGroup& g, const WeightGroup& w);

/// Grouped projection onto an average weighted-sparsity target cfg.s.
/// `achieved_sparsity` and `sparsity_band` are weighted sparsities.
ProjectionResult project_group_weighted(const VectorGroup& g, const WeightGroup& w,
                                        const ProjectionConfig& cfg);

}  // namespace sparseproj
