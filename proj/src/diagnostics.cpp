#include "grace/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "grace/error.hpp"
#include "grace/parallel.hpp"

namespace grace {

namespace {

constexpr double kMinRcond = 1e-12;

/// Cholesky factor of a symmetric positive-definite matrix; rejects
/// near-singular input by reciprocal condition estimate.
Eigen::LLT<Eigen::MatrixXd> spd_factor(const Eigen::MatrixXd& A, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinRcond)) {
        throw Error(ErrorCode::singular_matrix, std::string(what) + " is singular or not positive definite");
    }
    return llt;
}

Eigen::VectorXd signs_of(const Eigen::VectorXd& v) {
    return v.unaryExpr([](double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); });
}

}  // namespace

void TheoryInputs::validate() const {
    if (C.rows() != static_cast<Eigen::Index>(p) || C.cols() != static_cast<Eigen::Index>(p) ||
        L.rows() != C.rows() || L.cols() != C.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "C and L must both be p x p");
    }
    if (beta1.size() != static_cast<Eigen::Index>(support.size())) {
        throw Error(ErrorCode::dimension_mismatch, "beta1 length differs from support size");
    }
    std::set<std::size_t> seen;
    for (std::size_t s : support) {
        if (s >= p) throw Error(ErrorCode::index_out_of_range, "support index out of range");
        if (!seen.insert(s).second) throw Error(ErrorCode::invalid_argument, "support indices must be distinct");
    }
    if (n == 0) throw Error(ErrorCode::invalid_argument, "n must be positive");
    if (lambda1 < 0.0 || lambda2 < 0.0 || sigma < 0.0) {
        throw Error(ErrorCode::invalid_argument, "lambda1, lambda2 and sigma must be nonnegative");
    }
}

std::vector<std::size_t> TheoryInputs::complement() const {
    std::vector<bool> in(p, false);
    for (std::size_t s : support) in[s] = true;
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < p; ++j) {
        if (!in[j]) out.push_back(j);
    }
    return out;
}

Eigen::MatrixXd extract_block(const Eigen::MatrixXd& M, const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols) {
    for (std::size_t r : rows)
        if (r >= static_cast<std::size_t>(M.rows())) throw Error(ErrorCode::index_out_of_range, "block row out of range");
    for (std::size_t c : cols)
        if (c >= static_cast<std::size_t>(M.cols()))
            throw Error(ErrorCode::index_out_of_range, "block column out of range");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = M(rows[i], cols[j]);
    }
    return out;
}

TheoryInputs make_theory_inputs(const Eigen::MatrixXd& X, const WeightedGraph& g, const LaplacianMatrix& L,
                                const Eigen::VectorXd& beta, double sigma, double lambda1, double lambda2) {
    if (beta.size() != X.cols() || L.size() != static_cast<std::size_t>(X.cols())) {
        throw Error(ErrorCode::dimension_mismatch, "design, Laplacian and beta dimensions differ");
    }
    TheoryInputs inp;
    inp.n = static_cast<std::size_t>(X.rows());
    inp.p = static_cast<std::size_t>(X.cols());
    inp.C = X.transpose() * X / static_cast<double>(inp.n);
    inp.L = L.dense();
    std::vector<double> b1;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta[j] != 0.0) {
            inp.support.push_back(static_cast<std::size_t>(j));
            b1.push_back(beta[j]);
        }
    }
    inp.beta1 = Eigen::Map<Eigen::VectorXd>(b1.data(), static_cast<Eigen::Index>(b1.size()));
    inp.sigma = sigma;
    inp.lambda1 = lambda1;
    inp.lambda2 = lambda2;
    inp.w_max = g.max_weight();
    inp.validate();
    return inp;
}

double risk_bound(const TheoryInputs& inp) {
    inp.validate();
    const double n = static_cast<double>(inp.n);
    const double p = static_cast<double>(inp.p);
    const Eigen::MatrixXd A = inp.C + (inp.lambda2 / n) * inp.L;
    const EigenRange a_range = extreme_eigenvalues(A);
    const double a_min = a_range.min;
    if (!(a_min > kMinRcond * std::max(1.0, a_range.max))) {
        throw Error(ErrorCode::singular_matrix, "C + (lambda2/n) L is singular");
    }
    const double l_max = inp.L.size() ? extreme_eigenvalues(inp.L).max : 0.0;
    const double B = extreme_eigenvalues(inp.C).max;
    const double numerator = 4.0 * inp.lambda2 * inp.lambda2 * l_max * l_max * inp.beta1.squaredNorm() +
                             4.0 * p * n * B * inp.sigma * inp.sigma + 2.0 * inp.lambda1 * inp.lambda1 * p;
    return numerator / (n * n * a_min * a_min);
}

GcIcResult gc_ic_margin(const TheoryInputs& inp) {
    inp.validate();
    if (!(inp.lambda1 > 0.0)) throw Error(ErrorCode::invalid_argument, "GC-IC requires lambda1 > 0");
    if (inp.support.empty() || inp.support.size() >= inp.p) {
        throw Error(ErrorCode::invalid_argument, "GC-IC requires 0 < q < p");
    }
    const auto& s1 = inp.support;
    const auto s2 = inp.complement();
    const double shrink = inp.lambda2 / static_cast<double>(inp.n);
    const double ratio = 2.0 * inp.lambda2 / inp.lambda1;

    const Eigen::MatrixXd L11 = extract_block(inp.L, s1, s1);
    const Eigen::MatrixXd L21 = extract_block(inp.L, s2, s1);
    const Eigen::MatrixXd inner = extract_block(inp.C, s1, s1) + shrink * L11;
    const Eigen::MatrixXd cross = extract_block(inp.C, s2, s1) + shrink * L21;

    const Eigen::VectorXd rhs = signs_of(inp.beta1) + ratio * (L11 * inp.beta1);
    const Eigen::VectorXd solved = spd_factor(inner, "C11 + (lambda2/n) L11").solve(rhs);

    GcIcResult out;
    out.values = (cross * solved - ratio * (L21 * inp.beta1)).cwiseAbs();
    out.margin = 1.0 - out.values.maxCoeff();
    return out;
}

Regularity regularity_check(const Dataset& ds) {
    if (ds.n() == 0) throw Error(ErrorCode::invalid_argument, "dataset has no samples");
    const double n = static_cast<double>(ds.n());
    const Eigen::MatrixXd C = ds.X.transpose() * ds.X / n;
    const EigenRange range = extreme_eigenvalues(C);
    Regularity r;
    r.b = range.min;
    r.B = range.max;
    r.a2 = ds.X.rowwise().squaredNorm().maxCoeff() / n;
    return r;
}

Theorem33 theorem33_quantities(const TheoryInputs& inp) {
    inp.validate();
    if (inp.support.empty()) throw Error(ErrorCode::invalid_argument, "empty support");
    const auto& s1 = inp.support;
    const auto s2 = inp.complement();
    const double n = static_cast<double>(inp.n);
    const double q = static_cast<double>(s1.size());
    const double p = static_cast<double>(inp.p);

    const Eigen::MatrixXd C11 = extract_block(inp.C, s1, s1);
    const Eigen::MatrixXd inner = C11 + (inp.lambda2 / n) * extract_block(inp.L, s1, s1);
    const auto factor = spd_factor(inner, "C11 + (lambda2/n) L11");

    Theorem33 t;
    t.rho = factor.solve(C11 * inp.beta1).cwiseAbs().minCoeff();
    t.c_min = extreme_eigenvalues(C11).min;
    t.w_max = inp.w_max;
    t.l12_zero = s2.empty() || extract_block(inp.L, s1, s2).isZero(0.0);

    const double log_pq = std::log(p - q);
    if (t.l12_zero) {
        t.condition_a = inp.lambda1 * inp.lambda1 / (n * log_pq);
    } else {
        t.condition_a = inp.lambda1 * inp.lambda1 /
                        (log_pq * (n + inp.lambda2 * inp.lambda2 * t.w_max * t.w_max / (n * t.c_min)));
    }
    const double sign_term = factor.solve(signs_of(inp.beta1)).cwiseAbs().maxCoeff();
    t.condition_b = (std::sqrt(std::log(q) / (n * t.c_min)) + inp.lambda1 / n * sign_term) / t.rho;
    return t;
}

Eigen::VectorXd mc_response(const McDesign& design, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd y = design.X * design.beta;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += design.sigma * normal(rng);
    return y;
}

namespace {

template <class PerFit>
void run_replicates(const McDesign& design, double lambda1, double lambda2, const McOptions& options,
                    PerFit&& per_fit) {
    if (options.reps == 0) throw Error(ErrorCode::invalid_argument, "reps must be at least 1");
    if (design.beta.size() != design.X.cols() || design.L.size() != static_cast<std::size_t>(design.X.cols())) {
        throw Error(ErrorCode::dimension_mismatch, "Monte Carlo design dimensions differ");
    }
    const PenaltyConfig cfg{lambda1, lambda2};
    parallel_for(options.reps, options.threads, [&](std::size_t r) {
        Dataset ds;
        ds.X = design.X;
        ds.y = mc_response(design, options.seed + r);
        per_fit(r, fit_grace(ds, design.L, cfg, std::nullopt, options.solver));
    });
}

}  // namespace

double monte_carlo_risk(const McDesign& design, double lambda1, double lambda2, const McOptions& options) {
    std::vector<double> losses(options.reps);
    run_replicates(design, lambda1, lambda2, options, [&](std::size_t r, const FitResult& fit) {
        losses[r] = (fit.beta - design.beta).squaredNorm();
    });
    double sum = 0.0;
    for (double l : losses) sum += l;
    return sum / static_cast<double>(losses.size());
}

double sign_consistency_mc(const McDesign& design, double lambda1, double lambda2, const McOptions& options) {
    const Eigen::VectorXd truth = signs_of(design.beta);
    std::vector<char> hits(options.reps, 0);
    run_replicates(design, lambda1, lambda2, options, [&](std::size_t r, const FitResult& fit) {
        hits[r] = signs_of(fit.beta) == truth ? 1 : 0;
    });
    std::size_t count = 0;
    for (char h : hits) count += static_cast<std::size_t>(h);
    return static_cast<double>(count) / static_cast<double>(hits.size());
}

TheoryReport diagnose(const TheoryInputs& inp, const Dataset& standardized, const std::optional<McDesign>& mc,
                      const McOptions& mc_options) {
    TheoryReport report;
    report.bound = risk_bound(inp);
    report.regularity = regularity_check(standardized);
    if (mc) report.mc_risk = monte_carlo_risk(*mc, inp.lambda1, inp.lambda2, mc_options);
    const bool proper_support = !inp.support.empty() && inp.support.size() < inp.p;
    if (inp.lambda1 > 0.0 && proper_support) report.gcic = gc_ic_margin(inp);
    if (proper_support) report.theorem33 = theorem33_quantities(inp);
    return report;
}

}  // namespace grace
