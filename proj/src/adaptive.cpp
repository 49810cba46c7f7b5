#include "grace/adaptive.hpp"
#include <algorithm>

#include "grace/error.hpp"
#include "grace/laplacian.hpp"
#include "grace/path.hpp"

namespace grace {

std::vector<int> sign_vector(const Eigen::VectorXd& beta) {
    std::vector<int> signs(static_cast<std::size_t>(beta.size()));
    for (Eigen::Index j = 0; j < beta.size(); ++j) signs[j] = (beta[j] > 0.0) - (beta[j] < 0.0);
    return signs;
}

SignEstimate initial_estimate(const Dataset& ds, const AdaptiveOptions& options) {
    SignEstimate est;
    if (ds.p() < ds.n()) {
        est.method = InitialMethod::ols;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ds.X);
        if (qr.rank() == ds.X.cols()) {
            est.beta_tilde = qr.solve(ds.y);
        } else {
            const double jitter = 1e-8;
            const Eigen::MatrixXd gram =
                ds.X.transpose() * ds.X +
                jitter * static_cast<double>(ds.n()) * Eigen::MatrixXd::Identity(ds.X.cols(), ds.X.cols());
            est.beta_tilde = gram.ldlt().solve(ds.X.transpose() * ds.y);
            est.warning = "design is rank deficient (rank " + std::to_string(qr.rank()) + " < p = " +
                          std::to_string(ds.p()) + "); used ridge jitter 1e-8";
        }
    } else {
        est.method = InitialMethod::enet;
        const LaplacianMatrix ridge = identity_penalty(ds.p());
        if (options.enet) {
            est.beta_tilde = fit_grace(ds, ridge, *options.enet, std::nullopt, options.solver).beta;
        } else if (options.tuning == SignTuning::prediction) {
            CvOptions cv = options.cv;
            cv.policy = CvPolicy::lambda2_lambda1;
            const PenaltyConfig cfg = kfold_cv(ds, ridge, cv).best_penalty(ds.n());
            est.beta_tilde = fit_grace(ds, ridge, cfg, std::nullopt, options.solver).beta;
        } else {
            const std::vector<double>& l2s = options.cv.lambda2_grid;
            if (l2s.empty()) throw Error(ErrorCode::invalid_argument, "lambda2 grid is empty");
            const double lambda2 = *std::max_element(l2s.begin(), l2s.end());
            const std::vector<double> grid = lambda1_grid(ds, options.cv.eps, options.cv.nlambda);
            est.beta_tilde = fit_path_lambda1(ds, ridge, lambda2, grid, options.solver).betas.back();
        }
    }
    est.signs = sign_vector(est.beta_tilde);
    return est;
}

FitResult fit_agrace(const Dataset& ds, const WeightedGraph& g, const PenaltyConfig& cfg,
                     const SignEstimate& estimate, const SolverOptions& solver,
                     const std::optional<Eigen::VectorXd>& init) {
    if (g.size() != ds.p()) throw Error(ErrorCode::dimension_mismatch, "graph size differs from p");
    const LaplacianMatrix signed_l = signed_laplacian(g, estimate.signs);
    FitResult fit = fit_grace(ds, signed_l, cfg, init, solver);
    fit.signs = estimate.signs;
    return fit;
}

FitResult fit_agrace(const Dataset& ds, const WeightedGraph& g, const PenaltyConfig& cfg,
                     const AdaptiveOptions& options) {
    return fit_agrace(ds, g, cfg, initial_estimate(ds, options), options.solver);
}

}  // namespace grace
