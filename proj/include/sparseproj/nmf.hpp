#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparseproj/wgsp.hpp"

namespace sparseproj {

enum class NmfVariant { NeNMF, AHALS, PSNMF, CPSNMF, L1AHALS, WSNMF };

std::optional<NmfVariant> parse_variant(std::string_view name);
std::string_view variant_name(NmfVariant v);

/// Which factor a HALS sweep updates.
enum class Factor { X, H };

/// Feasible set for the factor updated by the fast gradient method.
struct FactorProjector {
    enum class Kind {
        None,             ///< unconstrained
        Nonnegative,      ///< max(0, X)
        GroupSparse,      ///< nonnegative with average column sparsity s
        ColumnSparse,     ///< nonnegative with every column at sparsity s
        WeightedSparse,   ///< nonnegative with average weighted column sparsity s
    };

    Kind kind = Kind::Nonnegative;
    double s = 0.0;
    double epsilon = 1e-4;
    const WeightGroup* weights = nullptr;  ///< required for WeightedSparse

    static FactorProjector nonnegative() { return {}; }
    static FactorProjector group_sparse(double s, double eps = 1e-4) {
        return {Kind::GroupSparse, s, eps, nullptr};
    }
    static FactorProjector column_sparse(double s, double eps = 1e-4) {
        return {Kind::ColumnSparse, s, eps, nullptr};
    }
    static FactorProjector weighted_sparse(const WeightGroup& w, double s, double eps = 1e-4) {
        return {Kind::WeightedSparse, s, eps, &w};
    }

    bool convex() const noexcept { return kind == Kind::None || kind == Kind::Nonnegative; }
    Matrix apply(const Matrix& z) const;
};

struct NmfProblem {
    Matrix Y;
    int rank = 1;
    NmfVariant variant = NmfVariant::PSNMF;
    double s = 0.0;                       ///< sparsity target for the sparse variants
    double epsilon = 1e-4;                ///< projection accuracy
    std::optional<WeightGroup> weights;   ///< WSNMF only: one weight vector per column of X
    int outer_iters = 500;
    std::uint64_t seed = 0;
    int hals_sweeps = 2;                  ///< inner HALS sweeps per factor update
    int fgm_iters = 10;                   ///< inner fast-gradient iterations per X update
    /// Optional warm start; drawn uniform on [0, 1] from `seed` otherwise.
    std::optional<Matrix> X0;
    std::optional<Matrix> H0;

    /// Throws ConfigError / DomainError.
    void validate() const;
};

struct NmfResult {
    /// Best iterate for the projection-based variants (PSNMF, CPSNMF, WSNMF),
    /// last iterate otherwise.
    Matrix X;
    Matrix H;
    std::vector<double> error_trace;     ///< relative error after each outer iteration
    std::vector<double> sparsity_trace;  ///< column-average spar(X) after each outer iteration
    double best_error = 0.0;  ///< min over error_trace
    int best_iteration = -1;
};

/// ||Y - XH||_F / ||Y||_F.
double relative_error(const Matrix& Y, const Matrix& X, const Matrix& H);

/// Average spar over the columns of X. All-zero columns count as fully sparse.
double column_sparsity(const Matrix& X);

/// HALS: `sweeps` passes of exact column-wise (Factor::X) or row-wise
/// (Factor::H) nonnegative least-squares updates. `l1` optionally adds the
/// penalty sum_k l1[k] (HH^T)_kk ||x_k||_1, so l1[k] is the soft threshold
/// applied to the unpenalized column update (X side only).
Matrix hals_update(const Matrix& Y, const Matrix& X, const Matrix& H, Factor side,
                   int sweeps = 1, std::span<const double> l1 = {});

/// Accelerated projected gradient on 0.5 ||Y - XH||_F^2 over X with step 1/L,
/// L the largest eigenvalue of HH^T. Returns the best iterate by objective.
Matrix fgm_update(const Matrix& Y, const Matrix& H, const Matrix& X0, int inner_iters,
                  const FactorProjector& projector);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double largest_eigenvalue(const Matrix& A, int iters = 50, double tol = 1e-8);

/// Multiplicative l1 weight control: lambda_k grows by 1.05 when column k is
/// below s - 0.01 and shrinks by 1/1.05 when above s + 0.01.
std::vector<double> l1_tune_lambdas(const Matrix& X, double s, std::span<const double> lambda_prev);

NmfResult run_nmf(const NmfProblem& p);

}  // namespace sparseproj
