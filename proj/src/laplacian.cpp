#include "grace/laplacian.hpp"

#include <cmath>

#include "grace/error.hpp"

namespace grace {

double LaplacianMatrix::operator()(std::size_t u, std::size_t v) const {
    if (u == v) return diag_.at(u);
    for (const Entry& e : rows_.at(u)) {
        if (e.col == v) return e.value;
    }
    return 0.0;
}

Eigen::MatrixXd LaplacianMatrix::dense() const {
    const auto p = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t u = 0; u < size(); ++u) {
        m(u, u) = diag_[u];
        for (const Entry& e : rows_[u]) m(u, e.col) = e.value;
    }
    return m;
}

LaplacianMatrix laplacian(const WeightedGraph& g) {
    const std::size_t p = g.size();
    const auto& d = g.degrees();
    LaplacianMatrix L;
    L.kind_ = LaplacianKind::standard;
    L.diag_.assign(p, 0.0);
    L.rows_.assign(p, {});
    for (std::size_t u = 0; u < p; ++u) L.diag_[u] = d[u] != 0.0 ? 1.0 : 0.0;
    for (const Edge& e : g.edges()) {
        const double value = -e.weight / std::sqrt(d[e.u] * d[e.v]);
        L.rows_[e.u].push_back({e.v, value});
        L.rows_[e.v].push_back({e.u, value});
    }
    return L;
}

LaplacianMatrix signed_laplacian(const WeightedGraph& g, std::span<const int> signs) {
    if (signs.size() != g.size()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "sign vector has length " + std::to_string(signs.size()) + ", graph has " +
                        std::to_string(g.size()) + " vertices");
    }
    for (int s : signs) {
        if (s < -1 || s > 1) throw Error(ErrorCode::invalid_argument, "signs must be -1, 0 or +1");
    }
    LaplacianMatrix L = laplacian(g);
    L.kind_ = LaplacianKind::sign_adjusted;
    L.signs_ = std::vector<int>(signs.begin(), signs.end());
    for (std::size_t u = 0; u < L.rows_.size(); ++u) {
        auto& row = L.rows_[u];
        std::vector<LaplacianMatrix::Entry> kept;
        kept.reserve(row.size());
        for (const auto& e : row) {
            const int product = signs[u] * signs[e.col];
            if (product != 0) kept.push_back({e.col, product * e.value});
        }
        row = std::move(kept);
    }
    return L;
}

LaplacianMatrix identity_penalty(std::size_t p) {
    LaplacianMatrix L;
    L.kind_ = LaplacianKind::identity;
    L.diag_.assign(p, 1.0);
    L.rows_.assign(p, {});
    return L;
}

double quadratic_form(const LaplacianMatrix& L, const Eigen::VectorXd& beta) {
    if (static_cast<std::size_t>(beta.size()) != L.size()) {
        throw Error(ErrorCode::dimension_mismatch, "beta length does not match Laplacian dimension");
    }
    double total = 0.0;
    for (std::size_t u = 0; u < L.size(); ++u) {
        double cross = 0.0;
        for (const auto& e : L.row(u)) cross += e.value * beta[e.col];
        total += beta[u] * (L.diagonal(u) * beta[u] + cross);
    }
    return total;
}

EigenRange extreme_eigenvalues(const Eigen::MatrixXd& symmetric) {
    if (symmetric.size() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::non_finite, "symmetric eigensolver failed to converge");
    }
    const auto& ev = solver.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

EigenRange extreme_eigenvalues(const LaplacianMatrix& L) { return extreme_eigenvalues(L.dense()); }

}  // namespace grace
