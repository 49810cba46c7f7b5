#include "grace/path.hpp"

#include <cmath>
#include <string>

#include "grace/error.hpp"

namespace grace {

namespace {

std::vector<double> log_grid(double top, double eps, std::size_t K) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::invalid_argument, "eps must lie in (0, 1)");
    if (K == 0) throw Error(ErrorCode::invalid_argument, "grid needs at least one point");
    std::vector<double> grid(K);
    grid[0] = top;
    if (K == 1) return grid;
    const double log_step = std::log(eps) / static_cast<double>(K - 1);
    for (std::size_t k = 1; k < K; ++k) grid[k] = top * std::exp(log_step * static_cast<double>(k));
    return grid;
}

void check_decreasing(const std::vector<double>& grid) {
    if (grid.empty()) throw Error(ErrorCode::empty_path, "empty grid");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] < grid[k - 1])) {
            throw Error(ErrorCode::invalid_argument, "grid must be strictly decreasing");
        }
    }
}

PathResult run_path(const Dataset& ds, const LaplacianMatrix& L, std::vector<PenaltyConfig> penalties,
                    const SolverOptions& options) {
    PathResult path;
    path.penalties = std::move(penalties);
    std::optional<Eigen::VectorXd> warm;
    const double zero_threshold = max_correlation(ds);
    for (std::size_t k = 0; k < path.penalties.size(); ++k) {
        const PenaltyConfig& cfg = path.penalties[k];
        FitResult fit;
        // At or above the top of the grid the zero vector is the solution; the
        // relative slack absorbs rounding in the lambda <-> lambda1 conversion.
        if (sparsity_threshold(cfg, ds.n()) >= zero_threshold * (1.0 - 1e-12)) {
            fit.penalty = cfg;
            fit.beta = Eigen::VectorXd::Zero(ds.X.cols());
            fit.converged = true;
            summarize_fit(fit, ds, L);
        } else {
            fit = fit_grace(ds, L, cfg, warm, options);
        }
        warm = fit.beta;
        path.betas.push_back(fit.beta);
        path.betas_original.push_back(fit.beta_original);
        path.intercepts.push_back(fit.intercept);
        path.active_counts.push_back(fit.active_set.size());
        path.objectives.push_back(fit.objective);
        path.converged.push_back(fit.converged);
    }
    return path;
}

}  // namespace

double max_correlation(const Dataset& ds) {
    if (ds.n() == 0) throw Error(ErrorCode::invalid_argument, "dataset has no samples");
    if (ds.p() == 0) return 0.0;
    return (ds.X.transpose() * ds.y).cwiseAbs().maxCoeff() / static_cast<double>(ds.n());
}

std::vector<double> lambda_grid(const Dataset& ds, double alpha, double eps, std::size_t K) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 1] for a lambda grid");
    }
    const double top = max_correlation(ds) / alpha;
    if (!(top > 0.0)) throw Error(ErrorCode::empty_path, "empty path: lambda_max is 0");
    return log_grid(top, eps, K);
}

std::vector<double> lambda1_grid(const Dataset& ds, double eps, std::size_t K) {
    const double top = 2.0 * static_cast<double>(ds.n()) * max_correlation(ds);
    if (!(top > 0.0)) throw Error(ErrorCode::empty_path, "empty path: lambda1_max is 0");
    return log_grid(top, eps, K);
}

PathResult fit_path(const Dataset& ds, const LaplacianMatrix& L, double alpha, const std::vector<double>& grid,
                    const SolverOptions& options) {
    check_decreasing(grid);
    std::vector<PenaltyConfig> penalties;
    penalties.reserve(grid.size());
    for (double lambda : grid) penalties.push_back(PenaltyConfig::from_lambda_alpha(lambda, alpha, ds.n()));
    PathResult path = run_path(ds, L, std::move(penalties), options);
    path.parameter = PathParameter::lambda;
    path.fixed = alpha;
    path.lambdas = grid;
    return path;
}

PathResult fit_path_lambda1(const Dataset& ds, const LaplacianMatrix& L, double lambda2,
                            const std::vector<double>& lambda1s, const SolverOptions& options) {
    check_decreasing(lambda1s);
    std::vector<PenaltyConfig> penalties;
    penalties.reserve(lambda1s.size());
    for (double l1 : lambda1s) penalties.push_back({l1, lambda2});
    PathResult path = run_path(ds, L, std::move(penalties), options);
    path.parameter = PathParameter::lambda1;
    path.fixed = lambda2;
    path.lambdas = lambda1s;
    return path;
}

Eigen::VectorXd predict(double intercept, const Eigen::VectorXd& beta_original, const Eigen::MatrixXd& X_new) {
    if (X_new.cols() != beta_original.size()) {
        throw Error(ErrorCode::dimension_mismatch, "new design has " + std::to_string(X_new.cols()) +
                                                       " columns, model has " +
                                                       std::to_string(beta_original.size()));
    }
    Eigen::VectorXd yhat = X_new * beta_original;
    yhat.array() += intercept;
    return yhat;
}

Eigen::VectorXd predict(const FitResult& fit, const Eigen::MatrixXd& X_new) {
    return predict(fit.intercept, fit.beta_original, X_new);
}

double prediction_mse(const Eigen::VectorXd& yhat, const Eigen::VectorXd& y) {
    if (yhat.size() != y.size()) throw Error(ErrorCode::dimension_mismatch, "prediction and response lengths differ");
    if (y.size() == 0) throw Error(ErrorCode::invalid_argument, "cannot compute MSE of empty vectors");
    return (yhat - y).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace grace
