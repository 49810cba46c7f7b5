#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "grace/dataset.hpp"
#include "grace/laplacian.hpp"
#include "grace/solver.hpp"

namespace grace {

/// Shape of the tuning grid.
enum class CvPolicy {
    lambda2_lambda1,  ///< coarse lambda2 grid x lambda1 path (default)
    alpha_lambda,     ///< alpha grid x scaled lambda path
};

inline const std::vector<double>& default_lambda2_grid() {
    static const std::vector<double> grid{0.1, 1.0, 10.0, 100.0, 1000.0};
    return grid;
}

struct CvOptions {
    std::size_t folds = 5;
    std::uint64_t seed = 1;
    CvPolicy policy = CvPolicy::lambda2_lambda1;
    std::vector<double> lambda2_grid = default_lambda2_grid();
    std::vector<double> alpha_grid{0.1, 0.25, 0.5, 0.75, 1.0};
    double eps = 1e-3;
    std::size_t nlambda = 100;
    /// Standardize once on all samples instead of per training fold.
    bool global_standardize = false;
    std::size_t threads = 1;
    SolverOptions solver;
};

struct CvCell {
    double outer = 0.0;   ///< lambda2 or alpha
    double lambda = 0.0;  ///< lambda1 or scaled lambda
    double mean_error = 0.0;
    double se = 0.0;
    std::vector<double> fold_errors;
};

struct CvResult {
    CvPolicy policy = CvPolicy::lambda2_lambda1;
    std::vector<CvCell> cells;
    std::size_t best = 0;
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> fold_of;  ///< fold index per sample

    const CvCell& best_cell() const { return cells.at(best); }
    /// Best pair as (lambda1, lambda2) for a dataset with n samples.
    PenaltyConfig best_penalty(std::size_t n) const;
};

/// Seeded shuffle followed by contiguous blocks of near-equal size.
std::vector<std::size_t> assign_folds(std::size_t n, std::size_t k, std::uint64_t seed);

/// k-fold cross-validation of held-out prediction MSE over the configured grid.
/// `raw` is taken on its original scale; each training fold is standardized with
/// its own statistics unless `global_standardize` is set.
CvResult kfold_cv(const Dataset& raw, const LaplacianMatrix& L, const CvOptions& options = {});

/// Index of the best cell: smallest mean error, then larger lambda, then the
/// smoother outer value (larger lambda2, or smaller alpha).
std::size_t select_best(const std::vector<CvCell>& cells, CvPolicy policy);

}  // namespace grace
