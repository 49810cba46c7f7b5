#include "grace/dataset.hpp"

#include <cmath>

#include "grace/error.hpp"

namespace grace {

Dataset make_dataset(Eigen::MatrixXd X, Eigen::VectorXd y) {
    if (X.rows() != y.size()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "design has " + std::to_string(X.rows()) + " rows but response has " +
                        std::to_string(y.size()) + " entries");
    }
    Dataset ds;
    ds.X = std::move(X);
    ds.y = std::move(y);
    return ds;
}

Standardization standardization_of(const Dataset& raw) {
    const auto n = raw.X.rows();
    if (n < 2) throw Error(ErrorCode::invalid_argument, "standardization needs at least 2 samples");
    if (raw.y.size() != n) throw Error(ErrorCode::dimension_mismatch, "response length differs from row count");

    Standardization s;
    s.x_centers = raw.X.colwise().mean().transpose();
    s.x_scales.resize(raw.X.cols());
    for (Eigen::Index j = 0; j < raw.X.cols(); ++j) {
        const double ms = (raw.X.col(j).array() - s.x_centers[j]).square().sum() / static_cast<double>(n);
        const double scale = std::sqrt(ms);
        if (!(scale > 0.0) || scale <= 1e-12 * (1.0 + std::abs(s.x_centers[j]))) {
            std::string label = "column " + std::to_string(j);
            if (static_cast<std::size_t>(j) < raw.names.size()) label += " ('" + raw.names[j] + "')";
            throw Error(ErrorCode::zero_variance, label + " has zero variance");
        }
        s.x_scales[j] = scale;
    }
    s.y_center = raw.y.mean();
    return s;
}

Dataset apply_standardization(const Dataset& raw, const Standardization& stats) {
    if (stats.x_centers.size() != raw.X.cols() || stats.x_scales.size() != raw.X.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "standardization statistics do not match column count");
    }
    Dataset out;
    out.X = (raw.X.rowwise() - stats.x_centers.transpose()).array().rowwise() /
            stats.x_scales.transpose().array();
    out.y = raw.y.array() - stats.y_center;
    out.standardized = true;
    out.x_centers = stats.x_centers;
    out.x_scales = stats.x_scales;
    out.y_center = stats.y_center;
    out.names = raw.names;
    return out;
}

Dataset standardize(const Dataset& raw) { return apply_standardization(raw, standardization_of(raw)); }

Dataset subset_rows(const Dataset& ds, std::span<const std::size_t> rows) {
    Dataset out;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.X.cols());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(rows[i]);
        if (r >= ds.X.rows()) throw Error(ErrorCode::index_out_of_range, "row index out of range");
        out.X.row(static_cast<Eigen::Index>(i)) = ds.X.row(r);
        out.y[static_cast<Eigen::Index>(i)] = ds.y[r];
    }
    out.names = ds.names;
    return out;
}

}  // namespace grace
