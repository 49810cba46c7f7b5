#include <doctest.h>

#include <random>

#include "grace/adaptive.hpp"
#include "grace/error.hpp"
#include "grace/laplacian.hpp"
#include "grace/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace grace;
using support::code_of;
using support::dataset_of;
using support::random_unit_graph;

namespace {

Dataset random_dataset(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    oracle::random_standardized(rng, n, p, X, y);
    return dataset_of(X, y);
}

std::vector<int> random_signs(std::mt19937_64& rng, std::size_t p, bool allow_zero) {
    std::uniform_int_distribution<int> pick(allow_zero ? -1 : 0, 1);
    std::vector<int> s(p);
    for (int& v : s) {
        v = pick(rng);
        if (!allow_zero && v == 0) v = -1;
    }
    return s;
}

}  // namespace

TEST_CASE("initial estimate by least squares") {
    const SignEstimate est = initial_estimate(support::orthonormal_design());
    CHECK(est.method == InitialMethod::ols);
    CHECK(est.beta_tilde[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(est.beta_tilde[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(est.signs == std::vector<int>{1, 1});
    CHECK(est.warning.empty());

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const Dataset ds = random_dataset(rng, 50, 6);
        const Eigen::MatrixXd gram = ds.X.transpose() * ds.X;
        const Eigen::VectorXd want = gram.llt().solve(ds.X.transpose() * ds.y);
        const SignEstimate got = initial_estimate(ds);
        CHECK((got.beta_tilde - want).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(got.signs == sign_vector(got.beta_tilde));
    }
}

TEST_CASE("rank-deficient least squares falls back to jitter") {
    std::mt19937_64 rng(22);
    Dataset ds = random_dataset(rng, 30, 4);
    ds.X.col(3) = ds.X.col(0);
    const SignEstimate est = initial_estimate(ds);
    CHECK(est.method == InitialMethod::ols);
    CHECK_FALSE(est.warning.empty());
    CHECK(est.beta_tilde.allFinite());
    // the jitter splits the duplicated coefficient evenly
    CHECK(est.beta_tilde[0] == doctest::Approx(est.beta_tilde[3]).epsilon(1e-6));
}

TEST_CASE("p >= n uses the elastic net") {
    std::mt19937_64 rng(23);
    const Dataset ds = random_dataset(rng, 10, 12);

    AdaptiveOptions fixed;
    fixed.enet = PenaltyConfig{1.0, 5.0};
    const SignEstimate a = initial_estimate(ds, fixed);
    CHECK(a.method == InitialMethod::enet);
    const FitResult direct = fit_grace(ds, identity_penalty(12), *fixed.enet);
    CHECK((a.beta_tilde - direct.beta).cwiseAbs().maxCoeff() == 0.0);

    AdaptiveOptions tuned;
    tuned.cv.nlambda = 10;
    const SignEstimate b = initial_estimate(ds, tuned);
    CHECK(b.method == InitialMethod::enet);
    CHECK(b.signs == sign_vector(b.beta_tilde));

    AdaptiveOptions dense;
    dense.tuning = SignTuning::dense_end;
    const SignEstimate c = initial_estimate(ds, dense);
    CHECK(c.method == InitialMethod::enet);
    const auto nonzero = std::count_if(c.signs.begin(), c.signs.end(), [](int s) { return s != 0; });
    CHECK(nonzero >= 10);
}

TEST_CASE("all-positive signs reduce aGrace to Grace") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        const Dataset ds = random_dataset(rng, 40, 6);
        const WeightedGraph g = random_unit_graph(rng, 6);
        const std::vector<int> plus(6, 1);
        CHECK(signed_laplacian(g, plus).dense() == laplacian(g).dense());
        SignEstimate est;
        est.signs = plus;
        const PenaltyConfig cfg{2.0, 20.0};
        const FitResult a = fit_agrace(ds, g, cfg, est);
        const FitResult b = fit_grace(ds, laplacian(g), cfg);
        CHECK(a.beta == b.beta);
        REQUIRE(a.signs);
        CHECK(*a.signs == plus);
    }
}

TEST_CASE("opposite signs on one edge penalize the sum") {
    std::mt19937_64 rng(25);
    const Dataset ds = random_dataset(rng, 30, 2);
    const WeightedGraph g = WeightedGraph::build(std::vector<Edge>{{0, 1, 1.0}}, 2);
    const std::vector<int> signs{1, -1};
    const LaplacianMatrix Ls = signed_laplacian(g, signs);
    Eigen::MatrixXd P(2, 2);
    P << 1, 1, 1, 1;
    std::normal_distribution<double> nd;
    for (int k = 0; k < 20; ++k) {
        const Eigen::Vector2d b(nd(rng), nd(rng));
        CHECK(objective(ds, Ls, b, 3.0, 7.0) == doctest::Approx(oracle::q_objective(ds.X, ds.y, P, b, 3.0, 7.0)));
        CHECK(quadratic_form(Ls, b) == doctest::Approx((b[0] + b[1]) * (b[0] + b[1])));
    }
    SignEstimate est;
    est.signs = signs;
    const FitResult fit = fit_agrace(ds, g, {3.0, 7.0}, est);
    const Eigen::VectorXd want = oracle::sign_pattern_minimizer(ds.X, ds.y, P, 3.0, 7.0);
    CHECK((fit.beta - want).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("sign-flip equivariance") {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        const Dataset ds = random_dataset(rng, 40, 5);
        const WeightedGraph g = random_unit_graph(rng, 5);
        SignEstimate est;
        est.signs = random_signs(rng, 5, false);
        const PenaltyConfig cfg{1.5, 15.0};
        const FitResult a = fit_agrace(ds, g, cfg, est);

        const std::size_t u = static_cast<std::size_t>(trial % 5);
        Dataset flipped = ds;
        flipped.X.col(u) *= -1.0;
        SignEstimate est_flipped = est;
        est_flipped.signs[u] *= -1;
        const FitResult b = fit_agrace(flipped, g, cfg, est_flipped);

        Eigen::VectorXd expect = a.beta;
        expect[u] *= -1.0;
        CHECK((b.beta - expect).cwiseAbs().maxCoeff() < 1e-6);
        CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-9));
    }
}

TEST_CASE("aGrace without smoothing is the lasso") {
    std::mt19937_64 rng(27);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        const Dataset ds = random_dataset(rng, 30, 3);
        const WeightedGraph g = random_unit_graph(rng, 3, 0.8);
        SignEstimate est;
        est.signs = random_signs(rng, 3, true);
        const FitResult fit = fit_agrace(ds, g, {4.0, 0.0}, est);
        const Eigen::VectorXd lasso = oracle::sign_pattern_minimizer(ds.X, ds.y, zero, 4.0, 0.0);
        CHECK((fit.beta - lasso).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("end-to-end adaptive fit") {
    std::mt19937_64 rng(28);
    const Dataset ds = random_dataset(rng, 40, 4);
    const WeightedGraph g = WeightedGraph::build(std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}}, 4);
    const FitResult fit = fit_agrace(ds, g, {1.0, 10.0});
    REQUIRE(fit.signs);
    CHECK(*fit.signs == initial_estimate(ds).signs);
    CHECK(fit.converged);
    CHECK(code_of([&] { fit_agrace(ds, random_unit_graph(rng, 5), {1.0, 1.0}); }) == ErrorCode::dimension_mismatch);
}
