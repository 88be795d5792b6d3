#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sparseproj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Throws DomainError if any entry is NaN or infinite.
void require_finite(const Vector& x, const char* what);
void require_finite(const Matrix& x, const char* what);

/// Ordered set of nonzero, finite vectors of length >= 2.
///
/// This is the input of every grouped projection. Vectors may have
/// different lengths.
class VectorGroup {
public:
    explicit VectorGroup(std::vector<Vector> vectors);

    static VectorGroup from_rows(const Matrix& m);
    static VectorGroup from_columns(const Matrix& m);

    std::size_t size() const noexcept { return vectors_.size(); }
    std::size_t total_length() const noexcept { return total_length_; }
    const Vector& operator[](std::size_t i) const { return vectors_[i]; }
    const std::vector<Vector>& vectors() const noexcept { return vectors_; }
    auto begin() const noexcept { return vectors_.begin(); }
    auto end() const noexcept { return vectors_.end(); }

private:
    std::vector<Vector> vectors_;
    std::size_t total_length_ = 0;
};

/// Nonnegative, nonzero weights of length >= 2. Caches ||w||_2 and min_j w(j).
class WeightVector {
public:
    explicit WeightVector(Vector w);

    const Vector& entries() const noexcept { return w_; }
    Eigen::Index size() const noexcept { return w_.size(); }
    double norm() const noexcept { return norm_; }
    double min() const noexcept { return min_; }

private:
    Vector w_;
    double norm_;
    double min_;
};

/// Hoyer sparsity (sqrt(n) - ||x||_1/||x||_2) / (sqrt(n) - 1), in [0, 1].
double spar(const Vector& x);

/// Weighted sparsity (||w||_2 - w^T|x| / ||x||_2) / (||w||_2 - min w).
/// Equals spar(x) when w is all ones.
double spar_weighted(const Vector& x, const WeightVector& w);

/// sign(x) o max(|x| - lambda, 0).
Vector soft_threshold(const Vector& x, double lambda);

/// Mean of spar over the group.
double average_sparsity(const VectorGroup& g);

}  // namespace sparseproj
