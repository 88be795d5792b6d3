#include <doctest.h>

#include <cmath>

#include "sparseproj/errors.hpp"
#include "sparseproj/wgsp.hpp"
#include "support.hpp"

using namespace sparseproj;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

ProjectionConfig config(double s) {
    ProjectionConfig c;
    c.s = s;
    return c;
}

Vector positive_weights(Rng& rng, Eigen::Index n) {
    Vector w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = rng.uniform(0.1, 3.0);
    return w;
}

WeightGroup random_weights(Rng& rng, const VectorGroup& g) {
    std::vector<WeightVector> ws;
    for (const auto& v : g) ws.emplace_back(positive_weights(rng, v.size()));
    return WeightGroup(ws);
}

}  // namespace

TEST_CASE("weighted candidate direction examples") {
    const Vector x = vec({3, 1});
    const WeightVector heavy(vec({10, 1}));
    CHECK(candidate_direction_weighted(x, heavy, 0.4, 1.0) == vec({0, 1}));
    CHECK(candidate_direction_weighted(vec({5, 4, 3}), WeightVector(vec({2, 3, 1})), 1e6, 1.0) ==
          vec({0, 0, 1}));

    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        const Vector v = testing::normal_vector(rng, 2 + static_cast<Eigen::Index>(rng.next() % 10))
                             .cwiseAbs();
        const WeightVector ones(Vector::Ones(v.size()));
        const double beta = rng.uniform(0.2, 3.0);
        const double mu = rng.uniform(0.0, 2.0);
        CHECK(candidate_direction_weighted(v, ones, mu, beta)
                  .isApprox(candidate_direction(v, mu, beta), 1e-14));
    }
}

TEST_CASE("weighted constants and weight groups") {
    const WeightGroup w({WeightVector(vec({3, 4})), WeightVector(vec({1, 1, 1, 1}))});
    const auto c = WeightedConstants::compute(w, 0.5);
    CHECK(c.beta[0] == doctest::Approx(0.5));
    CHECK(c.beta[1] == doctest::Approx(1.0));
    CHECK(c.k_s == doctest::Approx(2.5 + 2.0 - 1.0));

    const VectorGroup g({vec({1, 2}), vec({1, 2, 3})});
    CHECK_THROWS_AS(w.check_shape(g), DomainError);
}

TEST_CASE("gw_eval with unit weights equals g_eval") {
    Rng rng(32);
    for (int t = 0; t < 1000; ++t) {
        const VectorGroup g(testing::random_vectors(rng, 4, 2, 20));
        const double s = rng.uniform();
        const auto w = WeightGroup::ones_like(g);
        const auto cw = WeightedConstants::compute(w, s);
        const auto c = GroupConstants::compute(g, s);
        const double mu = rng.uniform(0.0, 1.2 * mu_tilde(g, c));
        const auto a = gw_eval(g, w, cw, mu);
        const auto b = g_eval(g, c, mu);
        CHECK(std::abs(a.value - b.value) <= 1e-12 * std::max(1.0, std::abs(b.value)));
        CHECK(testing::close(a.derivative, b.derivative, 1e-10, 1e-12));
    }
}

TEST_CASE("gw_eval is flat in the one-entry regime") {
    const VectorGroup g({vec({3, 1, 2}), vec({4, 1})});
    const WeightGroup w({WeightVector(vec({1, 2, 3})), WeightVector(vec({1, 1}))});
    const auto c = WeightedConstants::compute(w, 0.6);
    const double mt = mu_tilde_weighted(g, w, c);
    const auto a = gw_eval(g, w, c, 1.1 * mt);
    const auto b = gw_eval(g, w, c, 1.3 * mt);
    CHECK(a.derivative == 0.0);
    CHECK(a.value == doctest::Approx(b.value));
}

TEST_CASE("gw_eval derivative matches central differences") {
    Rng rng(33);
    int checked = 0;
    while (checked < 1000) {
        const VectorGroup g(testing::random_vectors(rng, 3, 2, 15));
        const auto w = random_weights(rng, g);
        const auto c = WeightedConstants::compute(w, 0.7);
        const double mu = rng.uniform(0.0, mu_tilde_weighted(g, w, c));
        const double h = 1e-6 * std::max(mu, 1.0);
        bool smooth = mu >= 2.0 * h;
        for (std::size_t i = 0; i < g.size() && smooth; ++i) {
            for (Eigen::Index j = 0; j < g[i].size(); ++j) {
                const double knot = std::abs(g[i](j)) / (c.beta[i] * w[i].entries()(j));
                if (std::abs(knot - mu) <= 2.0 * h) smooth = false;
            }
        }
        if (!smooth) continue;
        const double fd = (gw_eval(g, w, c, mu + h).value - gw_eval(g, w, c, mu - h).value) / (2.0 * h);
        CHECK(testing::close(gw_eval(g, w, c, mu).derivative, fd, 1e-4, 1e-7));
        ++checked;
    }
}

TEST_CASE("weighted fit decreases strictly before the one-entry regime") {
    Rng rng(34);
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next() % 10);
        const Vector x = testing::normal_vector(rng, n).cwiseAbs();
        const WeightVector w(positive_weights(rng, n));
        Vector ratio = x.cwiseQuotient(w.entries());
        std::sort(ratio.data(), ratio.data() + n, std::greater<>());
        const double gamma_tilde = ratio(1);
        double prev = w.entries().dot(candidate_direction_weighted(x, w, 0.0, 1.0));
        for (int k = 1; k < 50; ++k) {
            const double gamma = gamma_tilde * k / 50.0;
            const double f = w.entries().dot(candidate_direction_weighted(x, w, gamma, 1.0));
            CHECK(f < prev);
            prev = f;
        }
        for (int k = 0; k < 20; ++k) {
            const double gamma = gamma_tilde * (1.0 + k / 5.0);
            const double f = w.entries().dot(candidate_direction_weighted(x, w, gamma, 1.0));
            CHECK(f <= prev + 1e-12);
            prev = f;
        }
    }
}

TEST_CASE("weighted fit is constant when x is proportional to w") {
    Rng rng(35);
    for (int t = 0; t < 200; ++t) {
        const Vector wv = positive_weights(rng, 5);
        const WeightVector w(wv);
        const Vector x = rng.uniform(0.5, 4.0) * wv;
        const double f0 = wv.dot(candidate_direction_weighted(x, w, 0.0, 1.0));
        for (double gamma : {0.1, 0.3, 0.45}) {
            const double scale = x(0) / wv(0);
            CHECK(wv.dot(candidate_direction_weighted(x, w, gamma * scale, 1.0)) ==
                  doctest::Approx(f0).epsilon(1e-12));
        }
    }
}

TEST_CASE("g_w is nonincreasing on a grid") {
    Rng rng(36);
    for (int t = 0; t < 1000; ++t) {
        const VectorGroup g(testing::random_vectors(rng, 3, 2, 12));
        const auto w = random_weights(rng, g);
        const auto c = WeightedConstants::compute(w, 0.5);
        const double top = 1.5 * mu_tilde_weighted(g, w, c);
        double prev = gw_eval(g, w, c, 0.0).value;
        for (int k = 1; k <= 150; ++k) {
            const double v = gw_eval(g, w, c, top * k / 150.0).value;
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("weighted projection with unit weights matches the plain projection") {
    Rng rng(37);
    for (int t = 0; t < 100; ++t) {
        const VectorGroup g(testing::random_vectors(rng, 1 + static_cast<int>(rng.next() % 5), 2, 40));
        const double s = rng.uniform(0.1, 0.95);
        const auto a = project_group(g, config(s));
        const auto b = project_group_weighted(g, WeightGroup::ones_like(g), config(s));
        CHECK(std::abs(a.achieved_sparsity - b.achieved_sparsity) <= 1e-4);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK((a.projected[i] - b.projected[i]).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
}

TEST_CASE("weighted projection examples") {
    const VectorGroup single({vec({3, 1})});
    const WeightGroup heavy({WeightVector(vec({10, 1}))});
    const auto r = project_group_weighted(single, heavy, config(0.9));
    const Vector& y = r.projected[0];
    CHECK(std::abs(r.achieved_sparsity - 0.9) <= 1e-4);
    CHECK(y(1) > y(0));
    const auto full = project_group_weighted(single, heavy, config(1.0));
    CHECK(full.projected[0](0) == 0.0);
    CHECK(full.projected[0](1) == doctest::Approx(1.0));

    const VectorGroup sparse({vec({0, 5, 0}), vec({1, 0})});
    const auto w = WeightGroup::ones_like(sparse);
    const auto unchanged = project_group_weighted(sparse, w, config(0.8));
    CHECK(unchanged.feasible_at_zero);
    CHECK(unchanged.projected[0] == sparse[0]);
    CHECK(unchanged.projected[1] == sparse[1]);
}

TEST_CASE("weighted projection properties on random groups") {
    Rng rng(38);
    for (int t = 0; t < 1000; ++t) {
        const VectorGroup g(testing::random_vectors(rng, 1 + static_cast<int>(rng.next() % 4), 2, 25));
        const auto w = random_weights(rng, g);
        const double s = rng.uniform(0.05, 0.95);
        const auto r = project_group_weighted(g, w, config(s));
        const auto c = WeightedConstants::compute(w, s);
        if (!r.discontinuous && !r.feasible_at_zero) {
            CHECK(std::abs(r.achieved_sparsity - s) <= 1e-4);
        }
        for (const auto& rec : r.trace) {
            CHECK(gw_eval(g, w, c, rec.mu_lo).value > 0.0);
            CHECK(gw_eval(g, w, c, rec.mu_hi).value <= 0.0);
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(r.unit_directions[i].minCoeff() >= 0.0);
            CHECK(r.unit_directions[i].norm() == doctest::Approx(1.0));
            CHECK((r.projected[i].array() * g[i].array() >= 0.0).all());
        }
    }
}

TEST_CASE("zero weights never threshold their entries") {
    const VectorGroup g({vec({0.1, 5, 4, 3})});
    const WeightGroup w({WeightVector(vec({0, 1, 1, 1}))});
    const auto r = project_group_weighted(g, w, config(0.9));
    CHECK(r.projected[0](0) > 0.0);
}
