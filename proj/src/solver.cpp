#include "grace/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grace/error.hpp"

namespace grace {

namespace {

void check_dimensions(const Dataset& ds, const LaplacianMatrix& L) {
    if (ds.y.size() != ds.X.rows()) {
        throw Error(ErrorCode::dimension_mismatch, "response length differs from design row count");
    }
    if (L.size() != ds.p()) {
        throw Error(ErrorCode::dimension_mismatch, "Laplacian is " + std::to_string(L.size()) +
                                                       "-dimensional but the design has " +
                                                       std::to_string(ds.p()) + " columns");
    }
    if (ds.n() == 0) throw Error(ErrorCode::invalid_argument, "dataset has no samples");
}

/// Sum over neighbors of -L(u,v) beta_v.
double neighbor_pull(const LaplacianMatrix& L, std::size_t u, const Eigen::VectorXd& beta) {
    double s = 0.0;
    for (const auto& e : L.row(u)) s -= e.value * beta[static_cast<Eigen::Index>(e.col)];
    return s;
}

struct Kernel {
    const Dataset& ds;
    const LaplacianMatrix& L;
    double inv_n;
    double threshold;   // lambda * alpha
    double smoothness;  // lambda * (1 - alpha)
    Eigen::VectorXd col_ms;  // (1/n) ||x_u||^2

    Kernel(const Dataset& d, const LaplacianMatrix& lap, const PenaltyConfig& cfg)
        : ds(d),
          L(lap),
          inv_n(1.0 / static_cast<double>(d.n())),
          threshold(sparsity_threshold(cfg, d.n())),
          smoothness(smoothness_weight(cfg, d.n())),
          col_ms(d.X.colwise().squaredNorm().transpose() * (1.0 / static_cast<double>(d.n()))) {}

    double update(std::size_t u, const Eigen::VectorXd& beta, const Eigen::VectorXd& residual) const {
        const auto j = static_cast<Eigen::Index>(u);
        const double z = inv_n * ds.X.col(j).dot(residual) + col_ms[j] * beta[j];
        const double curvature = col_ms[j] + smoothness * L.diagonal(u);
        if (curvature <= 0.0) return 0.0;
        return soft_threshold(z + smoothness * neighbor_pull(L, u, beta), threshold) / curvature;
    }

    /// Updates coordinate u in place; returns |change|.
    double step(std::size_t u, Eigen::VectorXd& beta, Eigen::VectorXd& residual) const {
        const auto j = static_cast<Eigen::Index>(u);
        const double updated = update(u, beta, residual);
        if (!std::isfinite(updated)) {
            throw Error(ErrorCode::non_finite, "non-finite update for coefficient " + std::to_string(u));
        }
        const double delta = updated - beta[j];
        if (delta != 0.0) {
            residual.noalias() -= delta * ds.X.col(j);
            beta[j] = updated;
        }
        return std::abs(delta);
    }
};

}  // namespace

double objective(const Dataset& ds, const LaplacianMatrix& L, const Eigen::VectorXd& beta,
                 double lambda1, double lambda2) {
    check_dimensions(ds, L);
    if (beta.size() != ds.X.cols()) throw Error(ErrorCode::dimension_mismatch, "beta length differs from p");
    const double rss = (ds.y - ds.X * beta).squaredNorm();
    double value = rss;
    if (lambda1 != 0.0) value += lambda1 * beta.lpNorm<1>();
    if (lambda2 != 0.0) value += lambda2 * quadratic_form(L, beta);
    return value;
}

double kkt_residual(const Dataset& ds, const LaplacianMatrix& L, const PenaltyConfig& cfg,
                    const Eigen::VectorXd& beta) {
    check_dimensions(ds, L);
    const double inv_n = 1.0 / static_cast<double>(ds.n());
    const double threshold = sparsity_threshold(cfg, ds.n());
    const double smoothness = smoothness_weight(cfg, ds.n());
    const Eigen::VectorXd residual = ds.y - ds.X * beta;
    const Eigen::VectorXd loss_grad = -(ds.X.transpose() * residual) * inv_n;
    double worst = 0.0;
    for (std::size_t u = 0; u < ds.p(); ++u) {
        const auto j = static_cast<Eigen::Index>(u);
        const double lb = L.diagonal(u) * beta[j] - neighbor_pull(L, u, beta);
        const double g = loss_grad[j] + smoothness * lb;
        double violation;
        if (beta[j] != 0.0) {
            violation = std::abs(g + threshold * (beta[j] > 0.0 ? 1.0 : -1.0));
        } else {
            violation = std::max(0.0, std::abs(g) - threshold);
        }
        worst = std::max(worst, violation);
    }
    return worst;
}

double coordinate_update(std::size_t u, const Eigen::VectorXd& beta, const Eigen::VectorXd& residual,
                         const Dataset& ds, const LaplacianMatrix& L, const PenaltyConfig& cfg) {
    check_dimensions(ds, L);
    cfg.validate();
    if (u >= ds.p()) throw Error(ErrorCode::index_out_of_range, "coordinate index out of range");
    if (beta.size() != ds.X.cols() || residual.size() != ds.X.rows()) {
        throw Error(ErrorCode::dimension_mismatch, "state vectors do not match the dataset");
    }
    return Kernel(ds, L, cfg).update(u, beta, residual);
}

void summarize_fit(FitResult& fit, const Dataset& ds, const LaplacianMatrix& L) {
    fit.active_set.clear();
    for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
        if (fit.beta[j] != 0.0) fit.active_set.push_back(static_cast<std::size_t>(j));
    }
    if (ds.standardized && ds.x_scales.size() == fit.beta.size()) {
        fit.beta_original = fit.beta.array() / ds.x_scales.array();
        fit.intercept = ds.y_center - fit.beta_original.dot(ds.x_centers);
    } else {
        fit.beta_original = fit.beta;
        fit.intercept = 0.0;
    }
    fit.objective = objective(ds, L, fit.beta, fit.penalty.lambda1, fit.penalty.lambda2);
    fit.kkt_residual = kkt_residual(ds, L, fit.penalty, fit.beta);
}

FitResult fit_grace(const Dataset& ds, const LaplacianMatrix& L, const PenaltyConfig& cfg,
                    const std::optional<Eigen::VectorXd>& init, const SolverOptions& options) {
    check_dimensions(ds, L);
    cfg.validate();
    if (!(options.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
    if (cfg.lambda1 == 0.0 && cfg.lambda2 == 0.0 && ds.p() > ds.n()) {
        throw Error(ErrorCode::invalid_argument,
                    "lambda1 = lambda2 = 0 with p > n has no unique minimizer");
    }

    if (!ds.X.allFinite() || !ds.y.allFinite()) {
        throw Error(ErrorCode::non_finite, "design or response contains non-finite values");
    }

    const std::size_t p = ds.p();
    FitResult fit;
    fit.penalty = cfg;
    fit.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    if (init) {
        if (init->size() != fit.beta.size()) {
            throw Error(ErrorCode::dimension_mismatch, "initial beta length differs from p");
        }
        fit.beta = *init;
        if (!fit.beta.allFinite()) throw Error(ErrorCode::non_finite, "initial beta contains non-finite values");
    }
    Eigen::VectorXd residual = ds.y - ds.X * fit.beta;
    const Kernel kernel(ds, L, cfg);
    const double kkt_tol = 10.0 * options.tol;

    auto record = [&] {
        if (options.record_objective) {
            fit.objective_trace.push_back(objective(ds, L, fit.beta, cfg.lambda1, cfg.lambda2));
        }
    };
    auto full_sweep = [&] {
        double change = 0.0;
        for (std::size_t u = 0; u < p; ++u) change = std::max(change, kernel.step(u, fit.beta, residual));
        ++fit.iterations;
        record();
        return change;
    };

    record();
    std::vector<std::size_t> active;
    while (fit.iterations < options.max_sweeps) {
        const double change = full_sweep();
        if (change < options.tol) {
            residual = ds.y - ds.X * fit.beta;
            if (kkt_residual(ds, L, cfg, fit.beta) < kkt_tol) {
                fit.converged = true;
                break;
            }
            continue;
        }
        if (!options.active_set || fit.iterations < 2) continue;

        active.clear();
        for (std::size_t u = 0; u < p; ++u) {
            if (fit.beta[static_cast<Eigen::Index>(u)] != 0.0) active.push_back(u);
        }
        while (fit.iterations < options.max_sweeps) {
            double inner = 0.0;
            for (std::size_t u : active) inner = std::max(inner, kernel.step(u, fit.beta, residual));
            ++fit.iterations;
            record();
            if (inner < options.tol) break;
        }
    }

    summarize_fit(fit, ds, L);
    return fit;
}

}  // namespace grace
