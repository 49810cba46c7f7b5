#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "grace/graph.hpp"

namespace grace {

enum class LaplacianKind { standard, sign_adjusted, identity };

/// Symmetric p x p penalty matrix used by the smoothness term beta^T L beta.
///
/// Stored as a diagonal plus per-row lists of nonzero off-diagonal entries,
/// which is what coordinate descent consumes. `dense()` materializes the full
/// matrix for eigen-analysis and the theory diagnostics.
class LaplacianMatrix {
public:
    struct Entry {
        std::size_t col;
        double value;
    };

    LaplacianMatrix() = default;

    std::size_t size() const noexcept { return diag_.size(); }
    LaplacianKind kind() const noexcept { return kind_; }
    const std::optional<std::vector<int>>& signs() const noexcept { return signs_; }

    double diagonal(std::size_t u) const { return diag_[u]; }
    std::span<const Entry> row(std::size_t u) const { return rows_[u]; }
    double operator()(std::size_t u, std::size_t v) const;

    Eigen::MatrixXd dense() const;

    friend LaplacianMatrix laplacian(const WeightedGraph& g);
    friend LaplacianMatrix signed_laplacian(const WeightedGraph& g, std::span<const int> signs);
    friend LaplacianMatrix identity_penalty(std::size_t p);

private:
    LaplacianKind kind_ = LaplacianKind::standard;
    std::vector<double> diag_;
    std::vector<std::vector<Entry>> rows_;
    std::optional<std::vector<int>> signs_;
};

/// Normalized Laplacian: L(u,u) = 1 for d_u > 0, L(u,v) = -w(u,v)/sqrt(d_u d_v).
/// Rows and columns of isolated vertices are zero.
LaplacianMatrix laplacian(const WeightedGraph& g);

/// Sign-adjusted Laplacian L*: off-diagonals multiplied by signs[u]*signs[v].
/// A zero sign removes the vertex's off-diagonal entries but keeps its diagonal.
LaplacianMatrix signed_laplacian(const WeightedGraph& g, std::span<const int> signs);

/// Identity matrix; with it the smoothness term is a ridge penalty (elastic net).
LaplacianMatrix identity_penalty(std::size_t p);

/// beta^T L beta, evaluated over the stored nonzeros.
double quadratic_form(const LaplacianMatrix& L, const Eigen::VectorXd& beta);

struct EigenRange {
    double min = 0.0;
    double max = 0.0;
};

EigenRange extreme_eigenvalues(const LaplacianMatrix& L);
EigenRange extreme_eigenvalues(const Eigen::MatrixXd& symmetric);

}  // namespace grace
