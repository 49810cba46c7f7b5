#include "grace/penalty.hpp"

#include <cmath>
#include <string>

#include "grace/error.hpp"

namespace grace {

void PenaltyConfig::validate() const {
    if (!std::isfinite(lambda1) || !std::isfinite(lambda2) || lambda1 < 0.0 || lambda2 < 0.0) {
        throw Error(ErrorCode::invalid_argument, "lambda1 and lambda2 must be finite and nonnegative (got " +
                                                     std::to_string(lambda1) + ", " + std::to_string(lambda2) + ")");
    }
}

PenaltyConfig PenaltyConfig::from_lambda_alpha(double lambda, double alpha, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::invalid_argument, "sample size must be positive");
    if (!std::isfinite(lambda) || lambda < 0.0) throw Error(ErrorCode::invalid_argument, "lambda must be >= 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in [0, 1]");
    const double total = 2.0 * static_cast<double>(n) * lambda;  // lambda1 + 2 lambda2
    return {alpha * total, (1.0 - alpha) * total / 2.0};
}

ScaledPenalty reparameterize(const PenaltyConfig& cfg, std::size_t n) {
    cfg.validate();
    if (n == 0) throw Error(ErrorCode::invalid_argument, "sample size must be positive");
    const double total = cfg.lambda1 + 2.0 * cfg.lambda2;
    if (total == 0.0) {
        throw Error(ErrorCode::invalid_argument, "lambda1 = lambda2 = 0 has no (lambda, alpha) form");
    }
    return {total / (2.0 * static_cast<double>(n)), cfg.lambda1 / total};
}

}  // namespace grace
