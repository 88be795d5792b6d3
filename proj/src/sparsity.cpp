#include "sparseproj/sparsity.hpp"

#include <cmath>
#include <string>

#include "sparseproj/errors.hpp"

namespace sparseproj {

void require_finite(const Vector& x, const char* what) {
    if (!x.allFinite()) {
        throw DomainError(std::string(what) + ": non-finite entry");
    }
}

void require_finite(const Matrix& x, const char* what) {
    if (!x.allFinite()) {
        throw DomainError(std::string(what) + ": non-finite entry");
    }
}

VectorGroup::VectorGroup(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
    if (vectors_.empty()) {
        throw DomainError("VectorGroup: needs at least one vector");
    }
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        const Vector& v = vectors_[i];
        const std::string tag = "VectorGroup[" + std::to_string(i) + "]";
        if (v.size() < 2) {
            throw DomainError(tag + ": length must be >= 2");
        }
        require_finite(v, tag.c_str());
        if (v.cwiseAbs().maxCoeff() == 0.0) {
            throw DomainError(tag + ": zero vector");
        }
        total_length_ += static_cast<std::size_t>(v.size());
    }
}

VectorGroup VectorGroup::from_rows(const Matrix& m) {
    std::vector<Vector> rows;
    rows.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows.emplace_back(m.row(i).transpose());
    }
    return VectorGroup(std::move(rows));
}

VectorGroup VectorGroup::from_columns(const Matrix& m) {
    std::vector<Vector> cols;
    cols.reserve(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        cols.emplace_back(m.col(j));
    }
    return VectorGroup(std::move(cols));
}

WeightVector::WeightVector(Vector w) : w_(std::move(w)) {
    if (w_.size() < 2) {
        throw DomainError("WeightVector: length must be >= 2");
    }
    require_finite(w_, "WeightVector");
    if (w_.minCoeff() < 0.0) {
        throw DomainError("WeightVector: negative weight");
    }
    norm_ = w_.norm();
    min_ = w_.minCoeff();
    if (norm_ == 0.0) {
        throw DomainError("WeightVector: zero weights");
    }
}

double spar(const Vector& x) {
    const auto n = x.size();
    if (n < 2) {
        throw DomainError("spar: length must be >= 2");
    }
    const double l2 = x.norm();
    if (!(l2 > 0.0)) {
        throw DomainError("spar: zero vector");
    }
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    return (sqrt_n - x.lpNorm<1>() / l2) / (sqrt_n - 1.0);
}

double spar_weighted(const Vector& x, const WeightVector& w) {
    if (x.size() != w.size()) {
        throw DomainError("spar_weighted: length mismatch");
    }
    const double l2 = x.norm();
    if (!(l2 > 0.0)) {
        throw DomainError("spar_weighted: zero vector");
    }
    const double weighted_l1 = w.entries().dot(x.cwiseAbs());
    return (w.norm() - weighted_l1 / l2) / (w.norm() - w.min());
}

Vector soft_threshold(const Vector& x, double lambda) {
    if (!(lambda >= 0.0)) {
        throw DomainError("soft_threshold: lambda must be >= 0");
    }
    return x.unaryExpr([lambda](double v) {
        const double shrunk = std::abs(v) - lambda;
        return shrunk > 0.0 ? std::copysign(shrunk, v) : 0.0;
    });
}

double average_sparsity(const VectorGroup& g) {
    double total = 0.0;
    for (const auto& v : g) {
        total += spar(v);
    }
    return total / static_cast<double>(g.size());
}

}  // namespace sparseproj
