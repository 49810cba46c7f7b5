#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "grace/adaptive.hpp"
#include "grace/cv.hpp"
#include "grace/dataset.hpp"
#include "grace/diagnostics.hpp"
#include "grace/graph.hpp"
#include "grace/path.hpp"
#include "grace/simbench.hpp"
#include "grace/solver.hpp"

namespace grace::io {

/// 17 significant digits; round-trips every double exactly.
std::string format_double(double v);

struct NumericTable {
    std::vector<std::string> header;  ///< empty when the file has no header
    Eigen::MatrixXd values;
};

/// Comma-separated numeric table. With `has_header`, the first line holds
/// column names. Ragged rows and non-numeric cells are rejected with their
/// 1-based line and column.
NumericTable read_numeric_csv(const std::string& path, bool has_header);
NumericTable parse_numeric_csv(const std::string& text, bool has_header, const std::string& source = "<memory>");

/// Design CSV (header of covariate names, one row per sample) plus a
/// single-column response CSV with an optional header line.
Dataset parse_design(const std::string& design_path, const std::string& response_path);

/// Single numeric column, optional header line.
Eigen::VectorXd read_vector_csv(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

std::string matrix_csv(const Eigen::MatrixXd& X, const std::vector<std::string>& names);
std::string vector_csv(const Eigen::VectorXd& v, const std::string& name);
std::string edge_list_tsv(const WeightedGraph& g);

nlohmann::json fit_json(const FitResult& fit, const std::vector<std::string>& names, std::size_t n);
std::string coefficients_csv(const FitResult& fit, const std::vector<std::string>& names);
std::string path_csv(const PathResult& path);
std::string cv_csv(const CvResult& cv);
nlohmann::json cv_json(const CvResult& cv, std::size_t n);
std::string benchmark_csv(const BenchmarkTable& table);
nlohmann::json benchmark_json(const BenchmarkTable& table);
std::string roc_csv(const RocCurve& roc);
nlohmann::json theory_json(const TheoryReport& report);

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// Minimal SVG line plot: axes with min/max tick labels, one polyline per series and a legend.
std::string line_plot_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<PlotSeries>& series);

}  // namespace grace::io
