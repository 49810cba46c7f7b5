#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grace/cv.hpp"
#include "grace/dataset.hpp"
#include "grace/graph.hpp"
#include "grace/penalty.hpp"
#include "grace/solver.hpp"

namespace grace {

enum class InitialMethod { ols, enet };

/// Preliminary coefficients and their signs, sign(0) = 0.
struct SignEstimate {
    Eigen::VectorXd beta_tilde;
    std::vector<int> signs;
    InitialMethod method = InitialMethod::ols;
    std::string warning;  ///< non-empty when the OLS solve needed ridge jitter
};

std::vector<int> sign_vector(const Eigen::VectorXd& beta);

/// How the preliminary elastic net is tuned when no fixed penalty is given.
enum class SignTuning {
    /// Both parameters by CV for prediction; typically sparse.
    prediction,
    /// lambda1 at the bottom of the path (eps * lambda1_max) and the largest
    /// lambda2 of the grid. Nearly every coefficient is nonzero, so every edge
    /// gets a sign.
    dense_end,
};

struct AdaptiveOptions {
    /// Fixed elastic-net penalty for the preliminary fit when p >= n;
    /// tuned by cross-validation when empty.
    std::optional<PenaltyConfig> enet;
    SignTuning tuning = SignTuning::prediction;
    CvOptions cv;
    SolverOptions solver;
};

/// Least squares when p < n, elastic net otherwise. A rank-deficient design
/// with p < n falls back to a ridge solve with jitter 1e-8 and sets `warning`.
SignEstimate initial_estimate(const Dataset& ds, const AdaptiveOptions& options = {});

/// Adaptive fit from a given sign estimate: solves against signed_laplacian(g, signs).
FitResult fit_agrace(const Dataset& ds, const WeightedGraph& g, const PenaltyConfig& cfg,
                     const SignEstimate& estimate, const SolverOptions& solver = {},
                     const std::optional<Eigen::VectorXd>& init = std::nullopt);

/// Computes the sign estimate, then the adaptive fit.
FitResult fit_agrace(const Dataset& ds, const WeightedGraph& g, const PenaltyConfig& cfg,
                     const AdaptiveOptions& options = {});

}  // namespace grace
