#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace grace {

/// Design matrix X (n x p) and response y (n).
///
/// After `standardize`, y is centered and every column of X has mean 0 and
/// (1/n) sum x^2 = 1. `x_centers`, `x_scales` and `y_center` hold the raw
/// statistics so coefficients can be mapped back to the original scale.
struct Dataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    bool standardized = false;
    Eigen::VectorXd x_centers;
    Eigen::VectorXd x_scales;
    double y_center = 0.0;
    std::vector<std::string> names;

    std::size_t n() const noexcept { return static_cast<std::size_t>(X.rows()); }
    std::size_t p() const noexcept { return static_cast<std::size_t>(X.cols()); }
};

Dataset make_dataset(Eigen::MatrixXd X, Eigen::VectorXd y);

/// Column statistics estimated from one sample and applied to another.
struct Standardization {
    Eigen::VectorXd x_centers;
    Eigen::VectorXd x_scales;
    double y_center = 0.0;
};

/// Means and root-mean-square deviations of a raw dataset. Throws
/// ErrorCode::zero_variance naming the first constant column.
Standardization standardization_of(const Dataset& raw);

/// Applies previously estimated statistics (e.g. training-fold statistics to
/// a held-out fold). The result is flagged standardized with those statistics.
Dataset apply_standardization(const Dataset& raw, const Standardization& stats);

Dataset standardize(const Dataset& raw);

/// Rows of `ds` selected by `rows`, with raw values and no standardization.
Dataset subset_rows(const Dataset& ds, std::span<const std::size_t> rows);

}  // namespace grace
