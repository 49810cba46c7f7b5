#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "grace/dataset.hpp"
#include "grace/graph.hpp"
#include "grace/laplacian.hpp"
#include "grace/solver.hpp"

namespace grace {

/// Fixed-n quantities entering the risk bound and the graph-constrained
/// irrepresentable condition. Block "1" is the true support, block "2" its
/// complement, both in ascending index order.
///
/// Columns are assumed standardized to (1/n) sum x^2 = 1, which is the same as
/// normalizing each column to squared L2-norm n.
struct TheoryInputs {
    Eigen::MatrixXd C;  ///< (1/n) X^T X
    Eigen::MatrixXd L;  ///< dense Laplacian
    std::vector<std::size_t> support;
    Eigen::VectorXd beta1;  ///< true coefficients on the support
    double sigma = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::size_t n = 0;
    std::size_t p = 0;
    double w_max = 0.0;  ///< largest edge weight

    /// Throws unless shapes are consistent and support indices valid and distinct.
    void validate() const;
    std::vector<std::size_t> complement() const;
};

/// Builds inputs from a standardized design and the full true coefficient
/// vector; the support is the set of nonzero entries.
TheoryInputs make_theory_inputs(const Eigen::MatrixXd& X, const WeightedGraph& g, const LaplacianMatrix& L,
                                const Eigen::VectorXd& beta, double sigma, double lambda1, double lambda2);

/// Submatrix M[rows, cols].
Eigen::MatrixXd extract_block(const Eigen::MatrixXd& M, const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols);

/// Nonasymptotic bound on E||beta_hat - beta||^2:
/// [4 l2^2 Lmax(L)^2 ||beta1||^2 + 4 p n B sigma^2 + 2 l1^2 p] / [n^2 Lmin(C + (l2/n) L)^2].
double risk_bound(const TheoryInputs& inp);

struct GcIcResult {
    Eigen::VectorXd values;  ///< one entry per inactive covariate
    double margin = 0.0;     ///< 1 - max(values); the condition holds iff margin > 0
};

GcIcResult gc_ic_margin(const TheoryInputs& inp);

struct Regularity {
    double b = 0.0;   ///< smallest eigenvalue of C
    double B = 0.0;   ///< largest eigenvalue of C
    double a2 = 0.0;  ///< (1/n) max_i sum_j x_ij^2
};

Regularity regularity_check(const Dataset& ds);

struct Theorem33 {
    double rho = 0.0;
    double c_min = 0.0;
    double w_max = 0.0;
    /// lambda1^2 / (n log(p-q)) when L_12 = 0, otherwise
    /// lambda1^2 / (log(p-q) (n + lambda2^2 W_max^2 / (n C_min))). Should grow.
    double condition_a = 0.0;
    bool l12_zero = true;
    /// (1/rho) [sqrt(log q / (n C_min)) + (lambda1/n) ||(C11 + (l2/n) L11)^{-1} sign(beta1)||_inf]. Should vanish.
    double condition_b = 0.0;
};

Theorem33 theorem33_quantities(const TheoryInputs& inp);

/// Fixed design with known coefficients; each Monte Carlo replicate redraws
/// the noise only.
struct McDesign {
    Eigen::MatrixXd X;
    Eigen::VectorXd beta;
    double sigma = 1.0;
    LaplacianMatrix L;
};

struct McOptions {
    std::size_t reps = 100;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    SolverOptions solver;
};

/// y = X beta + sigma * eps for replicate r, seeded with seed + r.
Eigen::VectorXd mc_response(const McDesign& design, std::uint64_t seed);

/// Mean of ||beta_hat - beta||^2 over replicates.
double monte_carlo_risk(const McDesign& design, double lambda1, double lambda2, const McOptions& options);

/// Fraction of replicates with sign(beta_hat) == sign(beta) in every coordinate.
double sign_consistency_mc(const McDesign& design, double lambda1, double lambda2, const McOptions& options);

struct TheoryReport {
    double bound = 0.0;
    std::optional<double> mc_risk;
    std::optional<GcIcResult> gcic;
    Regularity regularity;
    std::optional<Theorem33> theorem33;
};

/// Evaluates every quantity that is defined for the inputs; the GC-IC and
/// Theorem 3.3 parts are skipped when lambda1 = 0 or the support is empty or full.
TheoryReport diagnose(const TheoryInputs& inp, const Dataset& standardized,
                      const std::optional<McDesign>& mc = std::nullopt, const McOptions& mc_options = {});

}  // namespace grace
