#pragma once

#include <cstddef>

namespace grace {

/// Tuning parameters of the unscaled objective
///   ||y - X beta||^2 + lambda1 ||beta||_1 + lambda2 beta^T L beta.
///
/// The equivalent scaled form is
///   (1/2n) ||y - X beta||^2 + lambda * [ (1 - alpha)/2 beta^T L beta + alpha ||beta||_1 ]
/// with lambda = (lambda1 + 2 lambda2) / (2n) and alpha = lambda1 / (lambda1 + 2 lambda2).
struct PenaltyConfig {
    double lambda1 = 0.0;
    double lambda2 = 0.0;

    /// Throws unless both weights are finite and nonnegative.
    void validate() const;

    static PenaltyConfig from_lambda_alpha(double lambda, double alpha, std::size_t n);
};

struct ScaledPenalty {
    double lambda = 0.0;
    double alpha = 0.0;
};

/// (lambda1, lambda2) -> (lambda, alpha). Rejects lambda1 = lambda2 = 0.
ScaledPenalty reparameterize(const PenaltyConfig& cfg, std::size_t n);

/// Per-sample soft threshold lambda * alpha = lambda1 / (2n).
inline double sparsity_threshold(const PenaltyConfig& cfg, std::size_t n) {
    return cfg.lambda1 / (2.0 * static_cast<double>(n));
}

/// Per-sample smoothness weight lambda * (1 - alpha) = lambda2 / n.
inline double smoothness_weight(const PenaltyConfig& cfg, std::size_t n) {
    return cfg.lambda2 / static_cast<double>(n);
}

}  // namespace grace
