#include "grace/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "grace/error.hpp"
#include "grace/parallel.hpp"
#include "grace/path.hpp"

namespace grace {

PenaltyConfig CvResult::best_penalty(std::size_t n) const {
    const CvCell& cell = best_cell();
    if (policy == CvPolicy::lambda2_lambda1) return {cell.lambda, cell.outer};
    return PenaltyConfig::from_lambda_alpha(cell.lambda, cell.outer, n);
}

std::vector<std::size_t> assign_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::invalid_argument, "cross-validation needs at least 2 folds");
    if (k > n) {
        throw Error(ErrorCode::invalid_argument, "fold count " + std::to_string(k) + " exceeds sample count " +
                                                     std::to_string(n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> fold_of(n);
    for (std::size_t pos = 0; pos < n; ++pos) fold_of[order[pos]] = pos * k / n;
    return fold_of;
}

std::size_t select_best(const std::vector<CvCell>& cells, CvPolicy policy) {
    if (cells.empty()) throw Error(ErrorCode::empty_path, "no cross-validation cells");
    auto better = [policy](const CvCell& a, const CvCell& b) {
        if (a.mean_error != b.mean_error) return a.mean_error < b.mean_error;
        if (a.lambda != b.lambda) return a.lambda > b.lambda;
        return policy == CvPolicy::lambda2_lambda1 ? a.outer > b.outer : a.outer < b.outer;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < cells.size(); ++i) {
        if (better(cells[i], cells[best])) best = i;
    }
    return best;
}

CvResult kfold_cv(const Dataset& raw, const LaplacianMatrix& L, const CvOptions& options) {
    const std::size_t n = raw.n();
    const std::size_t k = options.folds;
    if (L.size() != raw.p()) throw Error(ErrorCode::dimension_mismatch, "Laplacian dimension differs from p");

    CvResult result;
    result.policy = options.policy;
    result.folds = k;
    result.seed = options.seed;
    result.fold_of = assign_folds(n, k, options.seed);

    const std::vector<double>& outers =
        options.policy == CvPolicy::lambda2_lambda1 ? options.lambda2_grid : options.alpha_grid;
    if (outers.empty()) throw Error(ErrorCode::invalid_argument, "empty outer tuning grid");

    const Dataset global = standardize(raw);
    std::vector<std::vector<double>> inner_grids;
    for (double outer : outers) {
        if (options.policy == CvPolicy::lambda2_lambda1) {
            if (!(outer >= 0.0)) throw Error(ErrorCode::invalid_argument, "lambda2 grid values must be >= 0");
            inner_grids.push_back(lambda1_grid(global, options.eps, options.nlambda));
        } else {
            inner_grids.push_back(lambda_grid(global, outer, options.eps, options.nlambda));
        }
    }

    // Per-fold train/test splits. Statistics come from training rows only.
    struct Split {
        Dataset train;
        Eigen::MatrixXd test_X;
        Eigen::VectorXd test_y;
    };
    std::vector<Split> splits(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> train_rows;
        std::vector<std::size_t> test_rows;
        for (std::size_t i = 0; i < n; ++i) (result.fold_of[i] == f ? test_rows : train_rows).push_back(i);
        if (train_rows.size() < 2) {
            throw Error(ErrorCode::invalid_argument, "training fold smaller than 2 samples");
        }
        const Dataset train_raw = subset_rows(raw, train_rows);
        const Dataset test_raw = subset_rows(raw, test_rows);
        if (options.global_standardize) {
            const Standardization stats{global.x_centers, global.x_scales, global.y_center};
            splits[f].train = apply_standardization(train_raw, stats);
        } else {
            splits[f].train = standardize(train_raw);
        }
        splits[f].test_X = test_raw.X;
        splits[f].test_y = test_raw.y;
    }

    // errors[outer][fold][lambda index]
    const std::size_t n_outer = outers.size();
    std::vector<std::vector<std::vector<double>>> errors(n_outer, std::vector<std::vector<double>>(k));
    parallel_for(n_outer * k, options.threads, [&](std::size_t task) {
        const std::size_t o = task / k;
        const std::size_t f = task % k;
        const Split& split = splits[f];
        const PathResult path =
            options.policy == CvPolicy::lambda2_lambda1
                ? fit_path_lambda1(split.train, L, outers[o], inner_grids[o], options.solver)
                : fit_path(split.train, L, outers[o], inner_grids[o], options.solver);
        auto& out = errors[o][f];
        out.reserve(path.betas.size());
        for (std::size_t j = 0; j < path.betas.size(); ++j) {
            out.push_back(prediction_mse(predict(path.intercepts[j], path.betas_original[j], split.test_X),
                                         split.test_y));
        }
    });

    for (std::size_t o = 0; o < n_outer; ++o) {
        for (std::size_t j = 0; j < inner_grids[o].size(); ++j) {
            CvCell cell;
            cell.outer = outers[o];
            cell.lambda = inner_grids[o][j];
            for (std::size_t f = 0; f < k; ++f) cell.fold_errors.push_back(errors[o][f][j]);
            const double kd = static_cast<double>(k);
            cell.mean_error = std::accumulate(cell.fold_errors.begin(), cell.fold_errors.end(), 0.0) / kd;
            double ss = 0.0;
            for (double e : cell.fold_errors) ss += (e - cell.mean_error) * (e - cell.mean_error);
            cell.se = std::sqrt(ss / (kd - 1.0)) / std::sqrt(kd);
            result.cells.push_back(std::move(cell));
        }
    }
    result.best = select_best(result.cells, result.policy);
    return result;
}

}  // namespace grace
