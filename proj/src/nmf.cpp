#include "sparseproj/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparseproj/errors.hpp"
#include "sparseproj/random.hpp"

namespace sparseproj {

namespace {

constexpr double kDiagonalFloor = 1e-16;
constexpr double kLambdaStep = 1.05;
constexpr double kLambdaDeadband = 0.01;
constexpr double kLambdaInit = 1e-2;
constexpr double kKeepFraction = 0.99;

// Column k of X has lost its partner row in H: restart it from the positive
// part of the worst-fit residual column plus a small offset.
void reinit_column(Matrix& F, Eigen::Index k, const Matrix& residual) {
    Eigen::Index worst = 0;
    residual.colwise().squaredNorm().maxCoeff(&worst);
    Vector col = residual.col(worst).cwiseMax(0.0);
    const double scale = std::max(col.maxCoeff(), 1.0);
    F.col(k) = col.array() + 1e-8 * scale;
}

// One or more HALS sweeps over the columns of F for min ||Y - F G||_F, F >= 0,
// given YG = Y G^T and GG = G G^T.
void hals_columns(Matrix& F, const Matrix& YG, const Matrix& GG, int sweeps,
                  std::span<const double> l1, const Matrix& Y, const Matrix& G) {
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (Eigen::Index k = 0; k < F.cols(); ++k) {
            const double d = GG(k, k);
            if (d < kDiagonalFloor) {
                reinit_column(F, k, Y - F * G);
                continue;
            }
            Vector target = F.col(k) + (YG.col(k) - F * GG.col(k)) / d;
            if (!l1.empty()) {
                // Threshold relative to the largest entry; never empties the column.
                const double frac = std::min(l1[static_cast<std::size_t>(k)], kKeepFraction);
                target.array() -= frac * std::max(target.maxCoeff(), 0.0);
            }
            F.col(k) = target.cwiseMax(0.0);
        }
    }
}

// f(X) - 0.5||Y||^2 for f = 0.5||Y - XH||_F^2, from the cached products.
double shifted_objective(const Matrix& X, const Matrix& YHt, const Matrix& HHt) {
    return 0.5 * (X * HHt).cwiseProduct(X).sum() - X.cwiseProduct(YHt).sum();
}

Matrix nonneg_nonzero_columns(const Matrix& z) {
    Matrix p = z.cwiseMax(0.0);
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
        if (p.col(k).maxCoeff() == 0.0) {
            // No positive entry left: the projection still needs a nonzero
            // vector, so fall back to a negligible constant column.
            p.col(k).setConstant(1e-12);
        }
    }
    return p;
}

}  // namespace

std::optional<NmfVariant> parse_variant(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "nenmf") return NmfVariant::NeNMF;
    if (lower == "ahals") return NmfVariant::AHALS;
    if (lower == "psnmf") return NmfVariant::PSNMF;
    if (lower == "cpsnmf") return NmfVariant::CPSNMF;
    if (lower == "l1ahals") return NmfVariant::L1AHALS;
    if (lower == "wsnmf") return NmfVariant::WSNMF;
    return std::nullopt;
}

std::string_view variant_name(NmfVariant v) {
    switch (v) {
        case NmfVariant::NeNMF: return "nenmf";
        case NmfVariant::AHALS: return "ahals";
        case NmfVariant::PSNMF: return "psnmf";
        case NmfVariant::CPSNMF: return "cpsnmf";
        case NmfVariant::L1AHALS: return "l1ahals";
        case NmfVariant::WSNMF: return "wsnmf";
    }
    return "unknown";
}

Matrix FactorProjector::apply(const Matrix& z) const {
    ProjectionConfig cfg;
    cfg.s = s;
    cfg.epsilon = epsilon;
    switch (kind) {
        case Kind::None:
            return z;
        case Kind::Nonnegative:
            return z.cwiseMax(0.0);
        case Kind::GroupSparse:
            return project_group(VectorGroup::from_columns(nonneg_nonzero_columns(z)), cfg)
                .as_columns();
        case Kind::ColumnSparse: {
            Matrix p = nonneg_nonzero_columns(z);
            for (Eigen::Index k = 0; k < p.cols(); ++k) {
                p.col(k) = project_single(p.col(k), cfg);
            }
            return p;
        }
        case Kind::WeightedSparse: {
            if (weights == nullptr) {
                throw ConfigError("weighted projector without weights");
            }
            const auto g = VectorGroup::from_columns(nonneg_nonzero_columns(z));
            return project_group_weighted(g, *weights, cfg).as_columns();
        }
    }
    return z;
}

void NmfProblem::validate() const {
    if (Y.size() == 0) {
        throw DomainError("NMF: empty data matrix");
    }
    require_finite(Y, "NMF data");
    if (Y.minCoeff() < 0.0) {
        throw DomainError("NMF: data matrix has negative entries");
    }
    if (rank < 1 || rank > std::min(Y.rows(), Y.cols())) {
        throw ConfigError("NMF: rank must lie in [1, min(m, n)]");
    }
    if (outer_iters < 1 || hals_sweeps < 1 || fgm_iters < 1) {
        throw ConfigError("NMF: iteration counts must be positive");
    }
    const bool sparse = variant == NmfVariant::PSNMF || variant == NmfVariant::CPSNMF ||
                        variant == NmfVariant::L1AHALS || variant == NmfVariant::WSNMF;
    if (sparse) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw ConfigError("NMF: sparsity target must lie in [0, 1]");
        }
        if (Y.rows() < 2) {
            throw ConfigError("NMF: sparse variants need at least 2 rows");
        }
    }
    if (variant == NmfVariant::WSNMF) {
        if (!weights) {
            throw ConfigError("NMF: wsnmf requires a weight map");
        }
        if (weights->size() != static_cast<std::size_t>(rank)) {
            throw ConfigError("NMF: need one weight vector per basis column");
        }
        for (std::size_t k = 0; k < weights->size(); ++k) {
            if ((*weights)[k].size() != Y.rows()) {
                throw ConfigError("NMF: weight vector length must equal the row count");
            }
        }
    }
    if (X0 && (X0->rows() != Y.rows() || X0->cols() != rank)) {
        throw ConfigError("NMF: X0 has the wrong shape");
    }
    if (H0 && (H0->rows() != rank || H0->cols() != Y.cols())) {
        throw ConfigError("NMF: H0 has the wrong shape");
    }
}

double relative_error(const Matrix& Y, const Matrix& X, const Matrix& H) {
    if (X.rows() != Y.rows() || H.cols() != Y.cols() || X.cols() != H.rows()) {
        throw DomainError("relative_error: shape mismatch");
    }
    const double denom = Y.norm();
    if (!(denom > 0.0)) {
        throw DomainError("relative_error: zero data matrix");
    }
    return (Y - X * H).norm() / denom;
}

double column_sparsity(const Matrix& X) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < X.cols(); ++k) {
        total += X.col(k).cwiseAbs().maxCoeff() > 0.0 ? spar(X.col(k)) : 1.0;
    }
    return total / static_cast<double>(X.cols());
}

Matrix hals_update(const Matrix& Y, const Matrix& X, const Matrix& H, Factor side, int sweeps,
                   std::span<const double> l1) {
    if (X.rows() != Y.rows() || H.cols() != Y.cols() || X.cols() != H.rows()) {
        throw DomainError("hals_update: shape mismatch");
    }
    if (side == Factor::X) {
        if (!l1.empty() && l1.size() != static_cast<std::size_t>(X.cols())) {
            throw DomainError("hals_update: one l1 weight per column required");
        }
        Matrix out = X;
        hals_columns(out, Y * H.transpose(), H * H.transpose(), sweeps, l1, Y, H);
        return out;
    }
    // Rows of H are the columns of H^T in the transposed problem Y^T ~ H^T X^T.
    Matrix Ht = H.transpose();
    const Matrix Yt = Y.transpose();
    const Matrix Xt = X.transpose();
    hals_columns(Ht, Yt * X, Xt * X, sweeps, {}, Yt, Xt);
    return Ht.transpose();
}

double largest_eigenvalue(const Matrix& A, int iters, double tol) {
    Vector v = Vector::Ones(A.rows()) / std::sqrt(static_cast<double>(A.rows()));
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        Vector w = A * v;
        const double norm = w.norm();
        if (norm == 0.0) {
            return 0.0;
        }
        const double next = v.dot(w);
        v = w / norm;
        if (std::abs(next - lambda) <= tol * std::abs(next)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    // The Rayleigh quotient undershoots; the norm ratio bounds from above for
    // PSD matrices and keeps 1/L a safe step.
    return std::max(lambda, (A * v).norm());
}

Matrix fgm_update(const Matrix& Y, const Matrix& H, const Matrix& X0, int inner_iters,
                  const FactorProjector& projector) {
    const Matrix YHt = Y * H.transpose();
    const Matrix HHt = H * H.transpose();
    const double L = largest_eigenvalue(HHt);
    if (!(L > 0.0)) {
        throw DomainError("fgm_update: degenerate H (zero Lipschitz constant)");
    }

    Matrix best;
    double best_obj = std::numeric_limits<double>::infinity();
    if (projector.convex() && (projector.kind == FactorProjector::Kind::None || X0.minCoeff() >= 0.0)) {
        best = X0;
        best_obj = shifted_objective(X0, YHt, HHt);
    }

    Matrix X = X0;
    Matrix Z = X0;
    double a = 1.0;
    for (int k = 0; k < inner_iters; ++k) {
        Matrix next = projector.apply(Z - (Z * HHt - YHt) / L);
        const double a_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * a * a));
        Z = next + ((a - 1.0) / a_next) * (next - X);
        X = std::move(next);
        a = a_next;
        const double obj = shifted_objective(X, YHt, HHt);
        if (obj < best_obj) {
            best_obj = obj;
            best = X;
        }
    }
    return best.size() == 0 ? X : best;
}

std::vector<double> l1_tune_lambdas(const Matrix& X, double s, std::span<const double> lambda_prev) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw DomainError("l1_tune_lambdas: s must lie in [0, 1]");
    }
    if (lambda_prev.size() != static_cast<std::size_t>(X.cols())) {
        throw DomainError("l1_tune_lambdas: one lambda per column required");
    }
    std::vector<double> lambda(lambda_prev.begin(), lambda_prev.end());
    for (Eigen::Index k = 0; k < X.cols(); ++k) {
        const auto col = X.col(k);
        const double sp = col.cwiseAbs().maxCoeff() > 0.0 ? spar(col) : 1.0;
        auto& l = lambda[static_cast<std::size_t>(k)];
        if (sp < s - kLambdaDeadband) {
            l *= kLambdaStep;
        } else if (sp > s + kLambdaDeadband) {
            l /= kLambdaStep;
        }
    }
    return lambda;
}

NmfResult run_nmf(const NmfProblem& p) {
    p.validate();
    const Eigen::Index m = p.Y.rows();
    const Eigen::Index n = p.Y.cols();
    const Eigen::Index r = p.rank;

    Rng rng(p.seed);
    Matrix X = p.X0 ? *p.X0 : rng.uniform_matrix(m, r);
    Matrix H = p.H0 ? *p.H0 : rng.uniform_matrix(r, n);
    if (!p.X0 && !p.H0) {
        // Match the scale of Y: argmin_a ||Y - a XH||_F, split evenly.
        const Matrix XH = X * H;
        const double a = p.Y.cwiseProduct(XH).sum() / XH.squaredNorm();
        if (a > 0.0) {
            X *= std::sqrt(a);
            H *= std::sqrt(a);
        }
    }

    FactorProjector projector;
    switch (p.variant) {
        case NmfVariant::PSNMF:
            projector = FactorProjector::group_sparse(p.s, p.epsilon);
            break;
        case NmfVariant::CPSNMF:
            projector = FactorProjector::column_sparse(p.s, p.epsilon);
            break;
        case NmfVariant::WSNMF:
            projector = FactorProjector::weighted_sparse(*p.weights, p.s, p.epsilon);
            break;
        default:
            projector = FactorProjector::nonnegative();
            break;
    }

    std::vector<double> lambda;
    if (p.variant == NmfVariant::L1AHALS) {
        lambda.assign(static_cast<std::size_t>(r), kLambdaInit);
    }

    // Projected variants are not monotone, so their best iterate is returned.
    const bool keep_best = !projector.convex();

    NmfResult res;
    res.error_trace.reserve(static_cast<std::size_t>(p.outer_iters));
    res.sparsity_trace.reserve(static_cast<std::size_t>(p.outer_iters));
    res.best_error = std::numeric_limits<double>::infinity();

    for (int it = 0; it < p.outer_iters; ++it) {
        switch (p.variant) {
            case NmfVariant::AHALS:
                X = hals_update(p.Y, X, H, Factor::X, p.hals_sweeps);
                break;
            case NmfVariant::L1AHALS:
                X = hals_update(p.Y, X, H, Factor::X, p.hals_sweeps, lambda);
                break;
            default:
                X = fgm_update(p.Y, H, X, p.fgm_iters, projector);
                break;
        }
        H = hals_update(p.Y, X, H, Factor::H, p.hals_sweeps);

        if (p.variant == NmfVariant::L1AHALS) {
            // Unit-norm columns keep the penalty from leaking into H's scale.
            for (Eigen::Index k = 0; k < r; ++k) {
                const double norm = X.col(k).norm();
                if (norm > 0.0) {
                    X.col(k) /= norm;
                    H.row(k) *= norm;
                }
            }
            lambda = l1_tune_lambdas(X, p.s, lambda);
        }

        const double err = relative_error(p.Y, X, H);
        res.error_trace.push_back(err);
        res.sparsity_trace.push_back(column_sparsity(X));
        if (err < res.best_error) {
            res.best_error = err;
            res.best_iteration = it;
            if (keep_best) {
                res.X = X;
                res.H = H;
            }
        }
    }
    if (!keep_best) {
        res.X = std::move(X);
        res.H = std::move(H);
    }
    return res;
}

}  // namespace sparseproj
