#include "grace/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "grace/error.hpp"

namespace grace::io {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number(v[i]));
    return arr;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    for (auto& s : cells) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    return cells;
}

bool parse_number(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size()) return false;
    // ERANGE on underflow still yields the correctly rounded subnormal
    return errno != ERANGE || std::abs(out) != HUGE_VAL;
}

std::string location(const std::string& source, std::size_t line, std::size_t col) {
    return source + ": line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

NumericTable parse_numeric_csv(const std::string& text, bool has_header, const std::string& source) {
    NumericTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto cells = split_csv_line(line);
        if (header_pending) {
            table.header = std::move(cells);
            width = table.header.size();
            header_pending = false;
            continue;
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width) {
            throw Error(ErrorCode::parse_error, location(source, lineno, std::min(cells.size(), width) + 1) +
                                                    ": expected " + std::to_string(width) + " fields, found " +
                                                    std::to_string(cells.size()));
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (!parse_number(cells[c], row[c])) {
                throw Error(ErrorCode::parse_error,
                            location(source, lineno, c + 1) + ": non-numeric cell '" + cells[c] + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::parse_error, source + ": no samples");
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) table.values(i, j) = rows[i][j];
    }
    return table;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorCode::io_error, "write failed for '" + path + "'");
}

NumericTable read_numeric_csv(const std::string& path, bool has_header) {
    return parse_numeric_csv(read_text(path), has_header, path);
}

Eigen::VectorXd read_vector_csv(const std::string& path) {
    const std::string text = read_text(path);
    // A first line that does not parse as a number is a header.
    std::istringstream in(text);
    std::string first;
    while (std::getline(in, first) && first.find_first_not_of(" \t\r") == std::string::npos) {
    }
    if (!first.empty() && first.back() == '\r') first.pop_back();
    double ignored = 0.0;
    const auto cells = split_csv_line(first);
    const bool header = !(cells.size() == 1 && parse_number(cells[0], ignored));
    const NumericTable t = parse_numeric_csv(text, header, path);
    if (t.values.cols() != 1) {
        throw Error(ErrorCode::parse_error, path + ": expected a single column, found " +
                                                std::to_string(t.values.cols()));
    }
    return t.values.col(0);
}

Dataset parse_design(const std::string& design_path, const std::string& response_path) {
    NumericTable design = read_numeric_csv(design_path, true);
    const Eigen::VectorXd y = read_vector_csv(response_path);
    if (y.size() != design.values.rows()) {
        throw Error(ErrorCode::dimension_mismatch, "design '" + design_path + "' has " +
                                                       std::to_string(design.values.rows()) +
                                                       " samples but response '" + response_path + "' has " +
                                                       std::to_string(y.size()));
    }
    Dataset ds = make_dataset(std::move(design.values), y);
    ds.names = std::move(design.header);
    return ds;
}

std::string matrix_csv(const Eigen::MatrixXd& X, const std::vector<std::string>& names) {
    std::string out;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        if (j) out += ',';
        out += static_cast<std::size_t>(j) < names.size() ? names[j] : "x" + std::to_string(j);
    }
    out += '\n';
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            if (j) out += ',';
            out += format_double(X(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string vector_csv(const Eigen::VectorXd& v, const std::string& name) {
    std::string out = name + "\n";
    for (Eigen::Index i = 0; i < v.size(); ++i) out += format_double(v[i]) + "\n";
    return out;
}

std::string edge_list_tsv(const WeightedGraph& g) {
    std::string out = "# u\tv\tweight\n";
    for (const Edge& e : g.edges()) {
        out += std::to_string(e.u) + "\t" + std::to_string(e.v) + "\t" + format_double(e.weight) + "\n";
    }
    return out;
}

json fit_json(const FitResult& fit, const std::vector<std::string>& names, std::size_t n) {
    json j;
    j["lambda1"] = number(fit.penalty.lambda1);
    j["lambda2"] = number(fit.penalty.lambda2);
    if (fit.penalty.lambda1 + fit.penalty.lambda2 > 0.0 && n > 0) {
        const ScaledPenalty s = reparameterize(fit.penalty, n);
        j["lambda"] = number(s.lambda);
        j["alpha"] = number(s.alpha);
    } else {
        j["lambda"] = 0.0;
        j["alpha"] = nullptr;
    }
    j["beta"] = vector_json(fit.beta);
    j["beta_original"] = vector_json(fit.beta_original);
    j["intercept"] = number(fit.intercept);
    j["active_set"] = fit.active_set;
    j["objective"] = number(fit.objective);
    j["kkt_residual"] = number(fit.kkt_residual);
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    if (!names.empty()) j["names"] = names;
    if (fit.signs) j["signs"] = *fit.signs;
    return j;
}

std::string coefficients_csv(const FitResult& fit, const std::vector<std::string>& names) {
    std::string out = "name,beta_standardized,beta_original\n";
    out += "(intercept),0," + format_double(fit.intercept) + "\n";
    for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
        const std::string name = static_cast<std::size_t>(j) < names.size() ? names[j] : "x" + std::to_string(j);
        out += name + "," + format_double(fit.beta[j]) + "," + format_double(fit.beta_original[j]) + "\n";
    }
    return out;
}

std::string path_csv(const PathResult& path) {
    const bool l1 = path.parameter == PathParameter::lambda1;
    std::string out = std::string("index,") + (l1 ? "lambda1,lambda2" : "lambda,alpha") +
                      ",penalty_lambda1,penalty_lambda2,active_count,objective,converged,intercept";
    const Eigen::Index p = path.betas.empty() ? 0 : path.betas.front().size();
    for (Eigen::Index j = 0; j < p; ++j) out += ",beta" + std::to_string(j);
    out += '\n';
    for (std::size_t k = 0; k < path.lambdas.size(); ++k) {
        out += std::to_string(k) + "," + format_double(path.lambdas[k]) + "," + format_double(path.fixed) + "," +
               format_double(path.penalties[k].lambda1) + "," + format_double(path.penalties[k].lambda2) + "," +
               std::to_string(path.active_counts[k]) + "," + format_double(path.objectives[k]) + "," +
               (path.converged[k] ? "1" : "0") + "," + format_double(path.intercepts[k]);
        for (Eigen::Index j = 0; j < p; ++j) out += "," + format_double(path.betas_original[k][j]);
        out += '\n';
    }
    return out;
}

std::string cv_csv(const CvResult& cv) {
    const bool l1 = cv.policy == CvPolicy::lambda2_lambda1;
    std::string out = std::string(l1 ? "lambda2,lambda1" : "alpha,lambda") + ",mean_error,se";
    for (std::size_t f = 0; f < cv.folds; ++f) out += ",fold" + std::to_string(f);
    out += '\n';
    for (const CvCell& c : cv.cells) {
        out += format_double(c.outer) + "," + format_double(c.lambda) + "," + format_double(c.mean_error) + "," +
               format_double(c.se);
        for (double e : c.fold_errors) out += "," + format_double(e);
        out += '\n';
    }
    return out;
}

json cv_json(const CvResult& cv, std::size_t n) {
    json j;
    const CvCell& best = cv.best_cell();
    const PenaltyConfig pen = cv.best_penalty(n);
    j["policy"] = cv.policy == CvPolicy::lambda2_lambda1 ? "lambda2_lambda1" : "alpha_lambda";
    j["folds"] = cv.folds;
    j["seed"] = cv.seed;
    j["best"] = {{"lambda1", number(pen.lambda1)},
                 {"lambda2", number(pen.lambda2)},
                 {"mean_error", number(best.mean_error)},
                 {"se", number(best.se)},
                 {"fold_errors", best.fold_errors}};
    if (pen.lambda1 + pen.lambda2 > 0.0) {
        const ScaledPenalty s = reparameterize(pen, n);
        j["best"]["lambda"] = number(s.lambda);
        j["best"]["alpha"] = number(s.alpha);
    }
    j["fold_of"] = cv.fold_of;
    return j;
}

std::string benchmark_csv(const BenchmarkTable& table) {
    std::string out = "method,model,correlation,mean_mse,se,mean_auc,replicates,failures\n";
    for (const BenchmarkRow& r : table.rows) {
        out += method_name(r.method) + "," + (r.model == SimModel::model1 ? "1" : "2") + "," +
               format_double(r.correlation) + "," + format_double(r.mean_mse) + "," + format_double(r.se) + "," +
               format_double(r.mean_auc) + "," + std::to_string(r.replicates) + "," + std::to_string(r.failures) +
               "\n";
    }
    return out;
}

json benchmark_json(const BenchmarkTable& table) {
    json j = json::array();
    for (const MethodOutcome& o : table.outcomes) {
        json m;
        m["method"] = method_name(o.method);
        m["test_mse"] = o.test_mse;
        m["auc"] = o.auc;
        m["lambda1"] = o.chosen_lambda1;
        m["lambda2"] = o.chosen_lambda2;
        m["failures"] = o.failures;
        m["errors"] = o.errors;
        j.push_back(std::move(m));
    }
    return j;
}

std::string roc_csv(const RocCurve& roc) {
    std::string out = "fpr,tpr,lambda\n";
    for (const RocPoint& pt : roc.points) {
        out += format_double(pt.fpr) + "," + format_double(pt.tpr) + "," + format_double(pt.lambda) + "\n";
    }
    return out;
}

json theory_json(const TheoryReport& report) {
    json j;
    j["bound"] = number(report.bound);
    j["mc_risk"] = report.mc_risk ? number(*report.mc_risk) : json(nullptr);
    if (report.gcic) {
        j["gcic_vector"] = vector_json(report.gcic->values);
        j["gcic_margin"] = number(report.gcic->margin);
        j["gcic_holds"] = report.gcic->margin > 0.0;
    } else {
        j["gcic_vector"] = nullptr;
        j["gcic_margin"] = nullptr;
    }
    j["a1"] = {{"b", number(report.regularity.b)}, {"B", number(report.regularity.B)}};
    j["a2"] = number(report.regularity.a2);
    if (report.theorem33) {
        const Theorem33& t = *report.theorem33;
        j["rho"] = number(t.rho);
        j["c_min"] = number(t.c_min);
        j["w_max"] = number(t.w_max);
        j["condition_a"] = number(t.condition_a);
        j["condition_b"] = number(t.condition_b);
        j["l12_zero"] = t.l12_zero;
    }
    j["column_convention"] = "columns scaled to (1/n) sum x^2 = 1, i.e. squared L2-norm n";
    return j;
}

std::string line_plot_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<PlotSeries>& series) {
    constexpr double width = 640, height = 480, left = 70, right = 150, top = 40, bottom = 60;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double pw = width - left - right, ph = height - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return std::string(buf);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
        << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << num(xmin)
        << "</text>\n";
    svg << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << num(xmax)
        << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << top + ph << "\" text-anchor=\"end\">" << num(ymin)
        << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << num(ymax)
        << "</text>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 20 << "\" text-anchor=\"middle\">" << xlabel
        << "</text>\n";
    svg << "<text transform=\"translate(20," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel
        << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = colors[i % std::size(colors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : series[i].points) {
            if (std::isfinite(x) && std::isfinite(y)) svg << num(sx(x)) << "," << num(sy(y)) << " ";
        }
        svg << "\"/>\n";
        const double ly = top + 16 + 18 * static_cast<double>(i);
        svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 32 << "\" y2=\""
            << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly + 4 << "\">" << series[i].name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace grace::io
