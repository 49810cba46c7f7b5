#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "grace/dataset.hpp"
#include "grace/laplacian.hpp"
#include "grace/penalty.hpp"
#include "grace/solver.hpp"

namespace grace {

/// Which tuning parameter varies along a path.
enum class PathParameter {
    lambda,   ///< scaled lambda at fixed alpha
    lambda1,  ///< unscaled lambda1 at fixed lambda2
};

struct PathResult {
    PathParameter parameter = PathParameter::lambda;
    double fixed = 0.0;               ///< alpha or lambda2, whichever is held fixed
    std::vector<double> lambdas;      ///< strictly decreasing
    std::vector<PenaltyConfig> penalties;
    std::vector<Eigen::VectorXd> betas;
    std::vector<std::size_t> active_counts;
    std::vector<double> objectives;
    std::vector<bool> converged;
    std::vector<double> intercepts;
    std::vector<Eigen::VectorXd> betas_original;
};

/// max_l |<x_l, y>| / n; the scaled threshold above which beta = 0 is optimal.
double max_correlation(const Dataset& ds);

/// K values of lambda, log-equally spaced from lambda_max = max|<x,y>|/(n alpha)
/// down to eps * lambda_max.
std::vector<double> lambda_grid(const Dataset& ds, double alpha, double eps = 1e-3, std::size_t K = 100);

/// Same construction on the lambda1 scale: lambda1_max = 2 max|<x,y>|.
std::vector<double> lambda1_grid(const Dataset& ds, double eps = 1e-3, std::size_t K = 100);

/// Warm-started path over lambda at fixed alpha.
PathResult fit_path(const Dataset& ds, const LaplacianMatrix& L, double alpha, const std::vector<double>& grid,
                    const SolverOptions& options = {});

/// Warm-started path over lambda1 at fixed lambda2.
PathResult fit_path_lambda1(const Dataset& ds, const LaplacianMatrix& L, double lambda2,
                            const std::vector<double>& lambda1s, const SolverOptions& options = {});

/// intercept + X_new * beta_original.
Eigen::VectorXd predict(const FitResult& fit, const Eigen::MatrixXd& X_new);
Eigen::VectorXd predict(double intercept, const Eigen::VectorXd& beta_original, const Eigen::MatrixXd& X_new);

/// (1/m) sum (yhat_i - y_i)^2.
double prediction_mse(const Eigen::VectorXd& yhat, const Eigen::VectorXd& y);

}  // namespace grace
