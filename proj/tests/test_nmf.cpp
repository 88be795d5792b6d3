#include <doctest.h>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "sparseproj/data_io.hpp"
#include "sparseproj/errors.hpp"
#include "sparseproj/nmf.hpp"
#include "support.hpp"

using namespace sparseproj;

namespace {

double objective(const Matrix& Y, const Matrix& X, const Matrix& H) {
    return 0.5 * (Y - X * H).squaredNorm();
}

NmfProblem small_problem(NmfVariant v, std::uint64_t seed, int iters = 60) {
    const auto inst = gen_synthetic_nmf(30, 40, 4, 500 + seed);
    NmfProblem p;
    p.Y = inst.Y;
    p.rank = 4;
    p.variant = v;
    p.s = inst.true_sparsity;
    p.seed = seed;
    p.outer_iters = iters;
    return p;
}

const NmfVariant kAll[] = {NmfVariant::NeNMF, NmfVariant::AHALS,   NmfVariant::PSNMF,
                           NmfVariant::CPSNMF, NmfVariant::L1AHALS, NmfVariant::WSNMF};

}  // namespace

TEST_CASE("variant names round trip") {
    for (auto v : kAll) {
        CHECK(parse_variant(variant_name(v)) == v);
    }
    CHECK(parse_variant("PSNMF") == NmfVariant::PSNMF);
    CHECK_FALSE(parse_variant("kmeans").has_value());
}

TEST_CASE("relative_error") {
    Rng rng(41);
    const Matrix X = rng.uniform_matrix(5, 2);
    const Matrix H = rng.uniform_matrix(2, 5);
    const Matrix Y = X * H;
    CHECK(relative_error(Y, X, H) == doctest::Approx(0.0).scale(1.0));
    CHECK(relative_error(Y, Matrix::Zero(5, 2), H) == doctest::Approx(1.0));
    CHECK(relative_error(Y, X, Matrix::Zero(2, 5)) == doctest::Approx(1.0));

    const Matrix Z = rng.uniform_matrix(5, 5);
    const Matrix A = rng.uniform_matrix(5, 3);
    const Matrix B = rng.uniform_matrix(3, 5);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            double fit = 0.0;
            for (int k = 0; k < 3; ++k) fit += A(i, k) * B(k, j);
            num += (Z(i, j) - fit) * (Z(i, j) - fit);
            den += Z(i, j) * Z(i, j);
        }
    }
    CHECK(std::abs(relative_error(Z, A, B) - std::sqrt(num / den)) <= 1e-12);

    CHECK_THROWS_AS(relative_error(Matrix::Zero(5, 5), A, B), DomainError);
    CHECK_THROWS_AS(relative_error(Z, A, X.transpose()), DomainError);
}

TEST_CASE("column_sparsity averages columns") {
    Matrix X(3, 2);
    X << 1, 0, 1, 0, 1, 5;
    CHECK(column_sparsity(X) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(column_sparsity(Matrix::Zero(3, 2)) == 1.0);
}

TEST_CASE("HALS sweeps never increase the objective") {
    Rng rng(42);
    for (int t = 0; t < 100; ++t) {
        const Matrix Y = rng.uniform_matrix(12, 9);
        Matrix X = rng.uniform_matrix(12, 3);
        Matrix H = rng.uniform_matrix(3, 9);
        for (int k = 0; k < 5; ++k) {
            const double before = objective(Y, X, H);
            X = hals_update(Y, X, H, Factor::X);
            CHECK(X.minCoeff() >= 0.0);
            const double mid = objective(Y, X, H);
            CHECK(mid <= before * (1.0 + 1e-12));
            H = hals_update(Y, X, H, Factor::H);
            CHECK(H.minCoeff() >= 0.0);
            CHECK(objective(Y, X, H) <= mid * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("HALS keeps an exact positive factorization fixed") {
    Rng rng(43);
    const Matrix X = rng.uniform_matrix(8, 3).array() + 0.1;
    const Matrix H = rng.uniform_matrix(3, 6).array() + 0.1;
    const Matrix Y = X * H;
    CHECK((hals_update(Y, X, H, Factor::X) - X).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((hals_update(Y, X, H, Factor::H) - H).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("HALS reaches the leading singular pair on positive data") {
    Rng rng(44);
    const Matrix Y = rng.uniform_matrix(10, 7).array() + 0.5;
    Matrix X = rng.uniform_matrix(10, 1);
    Matrix H = rng.uniform_matrix(1, 7);
    for (int k = 0; k < 200; ++k) {
        X = hals_update(Y, X, H, Factor::X);
        H = hals_update(Y, X, H, Factor::H);
    }
    Eigen::JacobiSVD<Matrix> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix best = svd.singularValues()(0) * svd.matrixU().col(0) *
                        svd.matrixV().col(0).transpose();
    CHECK((X * H - best).norm() / best.norm() <= 1e-6);
}

TEST_CASE("HALS restarts a column whose partner row vanished") {
    Rng rng(45);
    const Matrix Y = rng.uniform_matrix(6, 5);
    const Matrix X = rng.uniform_matrix(6, 2);
    Matrix H = rng.uniform_matrix(2, 5);
    H.row(1).setZero();
    const Matrix Xn = hals_update(Y, X, H, Factor::X);
    CHECK(Xn.allFinite());
    CHECK(Xn.col(1).maxCoeff() > 0.0);
}

TEST_CASE("largest_eigenvalue against a direct eigen solve") {
    Rng rng(46);
    for (int t = 0; t < 50; ++t) {
        const Matrix A = rng.uniform_matrix(6, 4);
        const Matrix S = A.transpose() * A;
        Eigen::SelfAdjointEigenSolver<Matrix> es(S);
        const double top = es.eigenvalues().maxCoeff();
        const double L = largest_eigenvalue(S);
        CHECK(L >= top * (1.0 - 1e-10));
        CHECK(L <= top * (1.0 + 1e-6));
    }
}

TEST_CASE("fgm_update fixed point and degenerate input") {
    Rng rng(47);
    const Matrix X = rng.uniform_matrix(7, 3);
    const Matrix H = rng.uniform_matrix(3, 9);
    const Matrix Y = X * H;
    const Matrix out = fgm_update(Y, H, X, 10, FactorProjector::nonnegative());
    CHECK((out - X).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_THROWS_AS(fgm_update(Y, Matrix::Zero(3, 9), X, 10, FactorProjector::nonnegative()),
                    DomainError);
}

TEST_CASE("first projected step decreases the objective") {
    Rng rng(48);
    for (int t = 0; t < 100; ++t) {
        const Matrix Y = rng.uniform_matrix(15, 12);
        const Matrix H = rng.uniform_matrix(3, 12);
        const double s = rng.uniform(0.3, 0.8);
        for (const auto& proj : {FactorProjector::group_sparse(s), FactorProjector::column_sparse(s)}) {
            const Matrix X0 = proj.apply(rng.uniform_matrix(15, 3));
            const Matrix X1 = fgm_update(Y, H, X0, 1, proj);
            CHECK(objective(Y, X1, H) <= objective(Y, X0, H) * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("projectors meet their constraints") {
    Rng rng(49);
    for (int t = 0; t < 100; ++t) {
        const Matrix Z = rng.normal_matrix(20, 4);
        const double s = rng.uniform(0.2, 0.9);
        const Matrix G = FactorProjector::group_sparse(s).apply(Z);
        CHECK(G.minCoeff() >= 0.0);
        CHECK(column_sparsity(G) >= s - 1e-4 - 1e-12);
        const Matrix C = FactorProjector::column_sparse(s).apply(Z);
        CHECK(C.minCoeff() >= 0.0);
        for (Eigen::Index k = 0; k < C.cols(); ++k) {
            CHECK(spar(C.col(k)) >= s - 1e-4 - 1e-12);
        }
    }
    const Matrix negative = -Matrix::Ones(5, 2);
    const Matrix P = FactorProjector::group_sparse(0.5).apply(negative);
    CHECK(P.allFinite());
    CHECK(P.minCoeff() >= 0.0);
}

TEST_CASE("l1 lambda control rule") {
    Matrix X(4, 3);
    X << 1, 1, 1,
         1, 0, 0.1,
         1, 0, 0.1,
         1, 0, 0.1;
    const std::vector<double> prev{0.2, 0.2, 0.2};
    const double mid = spar(X.col(2));
    auto same = l1_tune_lambdas(X, mid, prev);
    CHECK(same[2] == 0.2);
    CHECK(same[0] == doctest::Approx(0.2 * 1.05));
    CHECK(same[1] == doctest::Approx(0.2 / 1.05));

    const Matrix Z = Matrix::Zero(4, 3);
    const auto zero = l1_tune_lambdas(Z, 0.5, prev);
    CHECK(zero[0] == doctest::Approx(0.2 / 1.05));
    CHECK_THROWS_AS(l1_tune_lambdas(X, 1.5, prev), DomainError);
    CHECK_THROWS_AS(l1_tune_lambdas(X, 0.5, std::vector<double>{0.1}), DomainError);
}

TEST_CASE("l1 tuning drives median column sparsity to the target") {
    for (double s : {0.5, 0.6}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto inst = gen_synthetic_nmf(100, 100, 10, 1000 + seed);
            NmfProblem p;
            p.Y = inst.Y;
            p.rank = 10;
            p.variant = NmfVariant::L1AHALS;
            p.s = s;
            p.seed = seed;
            const auto r = run_nmf(p);
            std::vector<double> sp;
            for (Eigen::Index k = 0; k < r.X.cols(); ++k) {
                sp.push_back(r.X.col(k).maxCoeff() > 0.0 ? spar(r.X.col(k)) : 1.0);
            }
            CHECK(std::abs(testing::median(sp) - s) <= 0.05);
        }
    }
}

TEST_CASE("run_nmf invariants for every variant") {
    for (auto v : kAll) {
        CAPTURE(variant_name(v));
        auto p = small_problem(v, 3);
        if (v == NmfVariant::WSNMF) {
            p.weights = WeightGroup::replicate(WeightVector(radial_weights(6, 5, 3.0)), 4);
        }
        const auto r = run_nmf(p);
        REQUIRE(r.error_trace.size() == 60);
        REQUIRE(r.sparsity_trace.size() == 60);
        CHECK(r.X.minCoeff() >= 0.0);
        CHECK(r.H.minCoeff() >= 0.0);
        for (double e : r.error_trace) CHECK(e >= 0.0);
        const auto best = std::min_element(r.error_trace.begin(), r.error_trace.end());
        CHECK(r.best_error == *best);
        CHECK(r.best_iteration == best - r.error_trace.begin());
        if (v == NmfVariant::NeNMF || v == NmfVariant::AHALS) {
            for (std::size_t i = 1; i < r.error_trace.size(); ++i) {
                CHECK(r.error_trace[i] <= r.error_trace[i - 1] * (1.0 + 1e-12));
            }
        }
        if (v == NmfVariant::PSNMF) {
            for (double sp : r.sparsity_trace) CHECK(std::abs(sp - p.s) <= 1e-4 + 1e-12);
            CHECK(relative_error(p.Y, r.X, r.H) == doctest::Approx(r.best_error));
        }
        if (v == NmfVariant::WSNMF) {
            const auto cols = VectorGroup::from_columns(r.X);
            CHECK(std::abs(average_weighted_sparsity(cols, *p.weights) - p.s) <= 1e-4 + 1e-12);
        }
        const auto again = run_nmf(p);
        CHECK(again.error_trace == r.error_trace);
        CHECK(again.X == r.X);
    }
}

TEST_CASE("exact factors as initialization stay exact") {
    const auto inst = gen_synthetic_nmf(20, 15, 3, 9);
    for (auto v : {NmfVariant::NeNMF, NmfVariant::AHALS}) {
        NmfProblem p;
        p.Y = inst.Y;
        p.rank = 3;
        p.variant = v;
        p.outer_iters = 20;
        p.X0 = inst.X_true;
        p.H0 = inst.H_true;
        const auto r = run_nmf(p);
        for (double e : r.error_trace) CHECK(e <= 1e-12);
    }
}

TEST_CASE("run_nmf configuration errors") {
    auto p = small_problem(NmfVariant::WSNMF, 0);
    CHECK_THROWS_AS(run_nmf(p), ConfigError);
    p.variant = NmfVariant::PSNMF;
    p.rank = 50;
    CHECK_THROWS_AS(run_nmf(p), ConfigError);
    p.rank = 4;
    p.s = 1.5;
    CHECK_THROWS_AS(run_nmf(p), ConfigError);
    p.s = 0.5;
    p.Y(0, 0) = -1.0;
    CHECK_THROWS_AS(run_nmf(p), DomainError);
    p.Y(0, 0) = 1.0;
    p.X0 = Matrix::Ones(3, 3);
    CHECK_THROWS_AS(run_nmf(p), ConfigError);
    p.X0.reset();
    p.weights = WeightGroup::replicate(WeightVector(Vector::Ones(7)), 4);
    p.variant = NmfVariant::WSNMF;
    CHECK_THROWS_AS(run_nmf(p), ConfigError);
}
