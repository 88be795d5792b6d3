#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sparseproj/random.hpp"
#include "sparseproj/sparsity.hpp"
#include "sparseproj/training.hpp"

namespace testing {

using sparseproj::Matrix;
using sparseproj::Rng;
using sparseproj::Vector;

// Rows are the three vectors of the 3x10 worked example.
inline Matrix worked_example() {
    Matrix m(3, 10);
    m << 1, 2, 14, 9, -14, 9, -1, 5, -11, 7,
         8, 2, -6, -13, -24, -13, -6, 1, 4, -11,
         -3, -2, 3, -1, -6, 3, 18, -2, -2, -19;
    return m;
}

inline Vector normal_vector(Rng& rng, Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
    return v;
}

// Random group with lengths in [lo, hi].
inline std::vector<Vector> random_vectors(Rng& rng, int count, int lo, int hi) {
    std::vector<Vector> out;
    for (int i = 0; i < count; ++i) {
        const int n = lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
        out.push_back(normal_vector(rng, n));
    }
    return out;
}

inline bool close(double a, double b, double rel, double abs = 0.0) {
    return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

// Two unit-variance Gaussian blobs in `dim` dimensions centred at -offset
// and +offset in every coordinate; labels alternate.
inline sparseproj::Dataset blobs(std::uint64_t seed, int per_class, int dim = 2,
                                 double offset = 1.5) {
    Rng rng(seed);
    sparseproj::Dataset d;
    d.features.resize(dim, 2 * per_class);
    std::vector<int> labels;
    for (int i = 0; i < 2 * per_class; ++i) {
        const int label = i % 2;
        const double c = label == 0 ? -offset : offset;
        for (int k = 0; k < dim; ++k) d.features(k, i) = c + rng.normal();
        labels.push_back(label);
    }
    d.labels = labels;
    return d;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace testing
