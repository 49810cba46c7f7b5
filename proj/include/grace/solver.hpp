#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "grace/dataset.hpp"
#include "grace/laplacian.hpp"
#include "grace/penalty.hpp"

namespace grace {

struct SolverOptions {
    /// Stop once the largest coordinate change in a full sweep is below `tol`
    /// and the KKT residual is below 10 * tol.
    double tol = 1e-7;
    std::size_t max_sweeps = 10000;
    /// Cycle over the nonzero coordinates between full sweeps.
    bool active_set = true;
    /// Record the objective after every sweep (for descent checks).
    bool record_objective = false;
};

struct FitResult {
    Eigen::VectorXd beta;           ///< standardized scale
    Eigen::VectorXd beta_original;  ///< raw scale
    double intercept = 0.0;
    std::vector<std::size_t> active_set;
    double objective = 0.0;  ///< unscaled objective at beta
    double kkt_residual = 0.0;
    std::size_t iterations = 0;  ///< sweeps, full or active-set
    bool converged = false;
    PenaltyConfig penalty;
    std::optional<std::vector<int>> signs;  ///< set by the adaptive fit
    std::vector<double> objective_trace;
};

/// sign(z) * max(|z| - gamma, 0).
inline double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

/// ||y - X beta||^2 + lambda1 ||beta||_1 + lambda2 beta^T L beta.
double objective(const Dataset& ds, const LaplacianMatrix& L, const Eigen::VectorXd& beta,
                 double lambda1, double lambda2);

/// Largest violation of the subgradient optimality conditions of the scaled
/// objective (1/2n)||y - X beta||^2 + (lambda1/2n)||beta||_1 + (lambda2/2n) beta^T L beta.
double kkt_residual(const Dataset& ds, const LaplacianMatrix& L, const PenaltyConfig& cfg,
                    const Eigen::VectorXd& beta);

/// Exact minimizer of the objective over coordinate u with the others held at
/// `beta`. `residual` must equal y - X beta.
double coordinate_update(std::size_t u, const Eigen::VectorXd& beta, const Eigen::VectorXd& residual,
                         const Dataset& ds, const LaplacianMatrix& L, const PenaltyConfig& cfg);

/// Cyclical coordinate descent for the graph-constrained objective.
/// With lambda2 = 0 this is the Lasso; with L = identity_penalty(p), the elastic net.
FitResult fit_grace(const Dataset& ds, const LaplacianMatrix& L, const PenaltyConfig& cfg,
                    const std::optional<Eigen::VectorXd>& init = std::nullopt,
                    const SolverOptions& options = {});

/// Fills the derived fields of a FitResult (raw-scale coefficients, active
/// set, objective, KKT residual) for a given coefficient vector.
void summarize_fit(FitResult& fit, const Dataset& ds, const LaplacianMatrix& L);

}  // namespace grace
