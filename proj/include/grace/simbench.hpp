#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grace/dataset.hpp"
#include "grace/graph.hpp"
#include "grace/path.hpp"
#include "grace/solver.hpp"

namespace grace {

enum class SimModel { model1, model2 };

/// Transcription-factor module design: each module is one TF vertex
/// star-connected to `genes_per_tf` gene vertices, modules mutually
/// unconnected. The first `n_active_modules` modules carry the signal.
struct SimulationSpec {
    std::size_t n_modules = 200;
    std::size_t genes_per_tf = 10;
    std::size_t n_active_modules = 4;
    double correlation = 0.5;
    SimModel model = SimModel::model1;
    std::size_t sign_flips_per_module = 3;  ///< model2 only
    std::size_t n_train = 200;
    std::size_t n_valid = 200;
    std::size_t n_test = 200;
    bool noiseless = false;  ///< debug: sigma = 0

    void validate() const;
    std::size_t p() const { return n_modules * (1 + genes_per_tf); }
    std::size_t q() const { return n_active_modules * (1 + genes_per_tf); }
};

/// Vertex index of the TF of module m; its genes follow it contiguously.
inline std::size_t tf_index(const SimulationSpec& spec, std::size_t m) { return m * (1 + spec.genes_per_tf); }

WeightedGraph build_module_graph(const SimulationSpec& spec);

/// Active TF coefficients cycle through (2, -2, 4, -4); each gene gets its
/// TF's coefficient divided by sqrt(genes_per_tf). Model 2 flips the sign of
/// the first `sign_flips_per_module` genes of every active module.
Eigen::VectorXd model_coefficients(const SimulationSpec& spec);

/// sigma^2 = sum_u beta_u^2 / 4.
double noise_variance(const Eigen::VectorXd& beta);

std::vector<std::string> covariate_names(const SimulationSpec& spec);

struct SimulatedData {
    Dataset train;
    Dataset valid;
    Dataset test;
    Eigen::VectorXd beta;
    double sigma = 0.0;
    std::vector<std::size_t> support;
};

/// TF ~ N(0,1); gene = r TF + sqrt(1 - r^2) z; y = X beta + N(0, sigma^2).
/// Raw (unstandardized) datasets, bitwise reproducible in (spec, seed).
SimulatedData simulate_dataset(const SimulationSpec& spec, std::uint64_t seed);

enum class Method { grace, agrace, enet, lasso };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double lambda = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  ///< sorted by FPR, then TPR
    double auc = 0.0;
};

/// ROC of the active sets along a path against the true support. AUC is the
/// trapezoid area under the monotone upper envelope, starting at (0,0) and
/// extended horizontally to FPR = 1.
RocCurve roc_curve(const PathResult& path, const std::vector<std::size_t>& truth);

struct BenchOptions {
    std::vector<double> lambda2_grid{0.1, 1.0, 10.0, 100.0, 1000.0};
    double eps = 1e-3;
    std::size_t nlambda = 100;
    std::size_t threads = 1;
    SolverOptions solver;
};

struct MethodOutcome {
    Method method = Method::grace;
    std::vector<double> test_mse;  ///< successful replicates only
    std::vector<double> auc;
    std::vector<double> chosen_lambda1;
    std::vector<double> chosen_lambda2;
    std::size_t failures = 0;
    std::vector<std::string> errors;
};

struct BenchmarkRow {
    Method method = Method::grace;
    SimModel model = SimModel::model1;
    double correlation = 0.0;
    double mean_mse = 0.0;
    double se = 0.0;  ///< sample SD / sqrt(replicates)
    double mean_auc = 0.0;
    std::size_t replicates = 0;
    std::size_t failures = 0;
};

struct BenchmarkTable {
    std::vector<BenchmarkRow> rows;
    std::vector<MethodOutcome> outcomes;

    const BenchmarkRow& row(Method m) const;
};

/// Seed of replicate r.
std::uint64_t replicate_seed(std::uint64_t seed, std::size_t r);

/// Per replicate: fit every method on the training sample over the lambda2
/// grid and a lambda1 path, choose the pair with the smallest validation MSE,
/// and record test MSE and the ROC area of the chosen lambda2 path.
BenchmarkTable run_benchmark(const SimulationSpec& spec, const std::vector<Method>& methods,
                             std::size_t replicates, std::uint64_t seed, const BenchOptions& options = {});

}  // namespace grace
