#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "grace/error.hpp"
#include "grace/simbench.hpp"
#include "support.hpp"

using namespace grace;
using support::code_of;

namespace {

SimulationSpec tiny_spec() {
    SimulationSpec s;
    s.n_modules = 6;
    s.genes_per_tf = 4;
    s.n_active_modules = 2;
    s.sign_flips_per_module = 1;
    s.n_train = 40;
    s.n_valid = 40;
    s.n_test = 40;
    return s;
}

PathResult path_of(const std::vector<Eigen::VectorXd>& betas) {
    PathResult path;
    path.betas = betas;
    for (std::size_t k = 0; k < betas.size(); ++k) path.lambdas.push_back(static_cast<double>(betas.size() - k));
    return path;
}

/// Shoelace area of the polygon (0,0), envelope vertices, (1, last), (1,0).
double polygon_auc(std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> poly{{0.0, 0.0}};
    double running = 0.0;
    for (auto [x, y] : pts) {
        running = std::max(running, y);
        poly.emplace_back(x, running);
    }
    poly.emplace_back(1.0, running);
    poly.emplace_back(1.0, 0.0);
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        twice += a.first * b.second - b.first * a.second;
    }
    return std::abs(twice) / 2.0;
}

double sample_corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::ArrayXd x = a.array() - a.mean();
    const Eigen::ArrayXd y = b.array() - b.mean();
    return (x * y).sum() / std::sqrt((x * x).sum() * (y * y).sum());
}

}  // namespace

TEST_CASE("module graph") {
    const SimulationSpec full;
    const WeightedGraph g = build_module_graph(full);
    CHECK(g.size() == 2200);
    CHECK(g.edges().size() == 2000);
    for (std::size_t m = 0; m < full.n_modules; ++m) {
        const std::size_t tf = tf_index(full, m);
        CHECK(g.degree(tf) == 10.0);
        for (std::size_t k = 1; k <= 10; ++k) CHECK(g.degree(tf + k) == 1.0);
    }

    SimulationSpec one;
    one.n_modules = 1;
    one.genes_per_tf = 2;
    one.n_active_modules = 1;
    one.sign_flips_per_module = 0;
    const WeightedGraph small = build_module_graph(one);
    CHECK(small.size() == 3);
    CHECK(small.edges().size() == 2);
    CHECK(small.degree(0) == 2.0);
    CHECK(covariate_names(one) == std::vector<std::string>{"tf0", "tf0_gene1", "tf0_gene2"});
}

TEST_CASE("model coefficients") {
    SimulationSpec spec;
    const Eigen::VectorXd b1 = model_coefficients(spec);
    REQUIRE(b1.size() == 2200);
    CHECK(b1.squaredNorm() == doctest::Approx(80.0).epsilon(1e-14));
    CHECK(noise_variance(b1) == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(b1[0] == 2.0);
    for (int k = 1; k <= 10; ++k) CHECK(b1[k] == doctest::Approx(2.0 / std::sqrt(10.0)).epsilon(1e-15));
    CHECK(b1[11] == -2.0);
    CHECK(b1[22] == 4.0);
    CHECK(b1[33] == -4.0);
    CHECK(b1.tail(2200 - 44).cwiseAbs().maxCoeff() == 0.0);

    spec.model = SimModel::model2;
    const Eigen::VectorXd b2 = model_coefficients(spec);
    CHECK(b2.squaredNorm() == doctest::Approx(80.0).epsilon(1e-14));
    CHECK(b2.cwiseAbs() == b1.cwiseAbs());
    for (std::size_t m = 0; m < 4; ++m) {
        const std::size_t tf = tf_index(spec, m);
        CHECK(b2[tf] == b1[tf]);
        for (std::size_t k = 1; k <= 10; ++k) CHECK(b2[tf + k] == (k <= 3 ? -b1[tf + k] : b1[tf + k]));
    }
}

TEST_CASE("simulated data") {
    SimulationSpec spec = tiny_spec();
    const SimulatedData a = simulate_dataset(spec, 5);
    CHECK(a.train.n() == 40);
    CHECK(a.valid.n() == 40);
    CHECK(a.test.n() == 40);
    CHECK(a.train.p() == 30);
    CHECK(a.support.size() == 10);
    CHECK(a.sigma == doctest::Approx(std::sqrt(noise_variance(a.beta))));
    CHECK(a.train.names == covariate_names(spec));

    const SimulatedData b = simulate_dataset(spec, 5);
    CHECK(a.train.X == b.train.X);
    CHECK(a.test.y == b.test.y);
    CHECK(simulate_dataset(spec, 6).train.X != a.train.X);

    spec.noiseless = true;
    const SimulatedData clean = simulate_dataset(spec, 5);
    CHECK(clean.sigma == 0.0);
    CHECK((clean.train.y - clean.train.X * clean.beta).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gene columns follow the TF correlation") {
    SimulationSpec spec;
    spec.n_modules = 2;
    spec.genes_per_tf = 3;
    spec.n_active_modules = 1;
    spec.sign_flips_per_module = 0;
    spec.n_train = 10000;
    spec.n_valid = 2;
    spec.n_test = 2;
    spec.correlation = 0.0;
    const SimulatedData zero = simulate_dataset(spec, 1);
    for (std::size_t k = 1; k <= 3; ++k)
        CHECK(std::abs(sample_corr(zero.train.X.col(0), zero.train.X.col(static_cast<Eigen::Index>(k)))) < 0.1);

    spec.correlation = 0.7;
    const SimulatedData high = simulate_dataset(spec, 1);
    for (Eigen::Index k = 1; k <= 3; ++k) {
        CHECK(sample_corr(high.train.X.col(0), high.train.X.col(k)) == doctest::Approx(0.7).epsilon(0.05));
        const Eigen::ArrayXd c = high.train.X.col(k).array() - high.train.X.col(k).mean();
        CHECK((c * c).mean() == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("noise variance matches sigma^2 at large n") {
    SimulationSpec spec = tiny_spec();
    spec.n_train = 100000;
    const SimulatedData d = simulate_dataset(spec, 3);
    const Eigen::VectorXd eps = d.train.y - d.train.X * d.beta;
    const double var = eps.squaredNorm() / static_cast<double>(eps.size());
    CHECK(var == doctest::Approx(d.sigma * d.sigma).epsilon(0.02));
}

TEST_CASE("ROC curve") {
    const std::vector<std::size_t> truth{0, 1};
    auto vec = [](std::initializer_list<double> v) {
        Eigen::VectorXd b(static_cast<Eigen::Index>(v.size()));
        std::copy(v.begin(), v.end(), b.data());
        return b;
    };
    const RocCurve perfect =
        roc_curve(path_of({vec({0, 0, 0, 0}), vec({1, 0, 0, 0}), vec({1, 1, 0, 0}), vec({1, 1, 1, 0})}), truth);
    CHECK(perfect.auc == doctest::Approx(1.0).epsilon(1e-15));

    const RocCurve zero = roc_curve(path_of({vec({0, 0, 0, 0}), vec({0, 0, 0, 0})}), truth);
    REQUIRE(zero.points.size() == 1);
    CHECK(zero.points[0].fpr == 0.0);
    CHECK(zero.points[0].tpr == 0.0);
    CHECK(zero.auc == 0.0);

    const RocCurve worst = roc_curve(path_of({vec({0, 0, 1, 1}), vec({1, 1, 1, 1})}), truth);
    CHECK(worst.auc == doctest::Approx(0.0));

    CHECK(code_of([&] { roc_curve(path_of({vec({0, 0, 0, 0})}), {}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { roc_curve(path_of({vec({0, 0})}), {0, 1}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { roc_curve(path_of({}), truth); }) == ErrorCode::empty_path);

    std::mt19937_64 rng(41);
    std::bernoulli_distribution coin(0.4);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t p = 12;
        std::vector<std::size_t> support{0, 3, 5, 7};
        std::vector<Eigen::VectorXd> betas;
        std::vector<std::pair<double, double>> pts;
        for (int k = 0; k < 8; ++k) {
            Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
            int tp = 0, fp = 0;
            for (std::size_t j = 0; j < p; ++j) {
                if (!coin(rng)) continue;
                b[static_cast<Eigen::Index>(j)] = 1.0;
                (std::find(support.begin(), support.end(), j) != support.end() ? tp : fp) += 1;
            }
            betas.push_back(b);
            pts.emplace_back(fp / 8.0, tp / 4.0);
        }
        const RocCurve roc = roc_curve(path_of(betas), support);
        CHECK(roc.auc == doctest::Approx(polygon_auc(pts)).epsilon(1e-12));
        for (std::size_t i = 1; i < roc.points.size(); ++i) CHECK(roc.points[i - 1].fpr <= roc.points[i].fpr);
        CHECK(roc.auc >= 0.0);
        CHECK(roc.auc <= 1.0);
    }
}

TEST_CASE("method names") {
    for (Method m : {Method::grace, Method::agrace, Method::enet, Method::lasso})
        CHECK(parse_method(method_name(m)) == m);
    CHECK(parse_method("AGRACE") == Method::agrace);
    CHECK(code_of([] { parse_method("ridge"); }) == ErrorCode::invalid_argument);
}

TEST_CASE("benchmark smoke run") {
    const SimulationSpec spec = tiny_spec();
    BenchOptions opt;
    opt.nlambda = 20;
    const std::vector<Method> methods{Method::grace, Method::agrace, Method::enet, Method::lasso};
    const BenchmarkTable a = run_benchmark(spec, methods, 3, 9, opt);
    REQUIRE(a.rows.size() == 4);
    for (const BenchmarkRow& r : a.rows) {
        CHECK(r.replicates == 3);
        CHECK(r.failures == 0);
        CHECK(r.mean_mse > 0.0);
        CHECK(r.mean_auc > 0.0);
        CHECK(r.model == SimModel::model1);
    }
    CHECK(a.row(Method::lasso).method == Method::lasso);
    for (const MethodOutcome& o : a.outcomes) {
        CHECK(o.test_mse.size() == 3);
        const double mean = (o.test_mse[0] + o.test_mse[1] + o.test_mse[2]) / 3.0;
        CHECK(a.row(o.method).mean_mse == doctest::Approx(mean));
    }
    for (double l2 : a.outcomes[3].chosen_lambda2) CHECK(l2 == 0.0);

    const BenchmarkTable b = run_benchmark(spec, methods, 3, 9, opt);
    opt.threads = 2;
    const BenchmarkTable c = run_benchmark(spec, methods, 3, 9, opt);
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        CHECK(a.outcomes[i].test_mse == b.outcomes[i].test_mse);
        CHECK(a.outcomes[i].test_mse == c.outcomes[i].test_mse);
        CHECK(a.outcomes[i].auc == c.outcomes[i].auc);
    }
    CHECK(code_of([&] { run_benchmark(spec, methods, 0, 9, opt); }) == ErrorCode::invalid_argument);
}

TEST_CASE("noiseless benchmark predicts almost exactly") {
    SimulationSpec spec = tiny_spec();
    spec.noiseless = true;
    spec.n_modules = 3;
    BenchOptions opt;
    opt.eps = 1e-6;
    opt.nlambda = 40;
    opt.lambda2_grid = {0.1};
    const BenchmarkTable t = run_benchmark(spec, {Method::lasso}, 2, 4, opt);
    CHECK(t.row(Method::lasso).mean_mse < 1e-6);
}

TEST_CASE("benchmark standard errors shrink with replicates") {
    SimulationSpec spec = tiny_spec();
    spec.n_modules = 4;
    BenchOptions opt;
    opt.nlambda = 15;
    const double se25 = run_benchmark(spec, {Method::lasso}, 25, 77, opt).row(Method::lasso).se;
    const double se100 = run_benchmark(spec, {Method::lasso}, 100, 77, opt).row(Method::lasso).se;
    const double ratio = se25 / se100;
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.7);
}
