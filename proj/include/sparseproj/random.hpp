#pragma once

#include <cstdint>
#include <random>

#include "sparseproj/sparsity.hpp"

namespace sparseproj {

/// Portable seeded generator for every randomized path in the library.
///
/// Engine: std::mt19937_64 seeded with the 64-bit seed as-is (its output
/// sequence is fixed by the C++ standard). Uniform draws take the top 53
/// bits; normals use the Box-Muller transform with a cached spare. The std
/// distribution classes are avoided because their algorithms are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal.
    double normal();

    Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols);
    Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sparseproj
