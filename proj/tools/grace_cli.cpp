#include <algorithm>
#include <cctype>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grace/adaptive.hpp"
#include "grace/cv.hpp"
#include "grace/dataset.hpp"
#include "grace/diagnostics.hpp"
#include "grace/error.hpp"
#include "grace/graph.hpp"
#include "grace/io.hpp"
#include "grace/laplacian.hpp"
#include "grace/parallel.hpp"
#include "grace/path.hpp"
#include "grace/penalty.hpp"
#include "grace/simbench.hpp"
#include "grace/solver.hpp"

using namespace grace;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string out = ".";
    std::size_t threads = default_threads();
    std::uint64_t seed = 1;
    double eps = 1e-3;
    std::size_t nlambda = 100;
    bool svg = false;
    double tol = 1e-7;
};

struct Inputs {
    std::string design;
    std::string response;
    std::string graph;
};

struct Penalty {
    std::optional<double> lambda1;
    std::optional<double> lambda2;
    std::optional<double> lambda;
    std::optional<double> alpha;
};

struct SimFlags {
    int model = 1;
    double cor = 0.5;
    std::size_t modules = 200;
    std::size_t genes = 10;
    std::size_t active = 4;
    std::size_t flips = 3;
    std::size_t n = 200;
};

std::string env_name(const std::string& flag) {
    std::string name = "GRACE_";
    for (char c : flag) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return name;
}

/// Adds --flag with a GRACE_FLAG environment fallback.
template <class T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
    return app->add_option("--" + name, target, help)->envname(env_name(name));
}

CLI::Option* switch_flag(CLI::App* app, const std::string& name, bool& target, const std::string& help) {
    return app->add_flag("--" + name, target, help)->envname(env_name(name));
}

void add_common(CLI::App* app, Common& c) {
    flag(app, "out", c.out, "output directory")->capture_default_str();
    flag(app, "threads", c.threads, "worker threads for folds and replicates")->capture_default_str();
    flag(app, "seed", c.seed, "random seed")->capture_default_str();
    flag(app, "eps", c.eps, "smallest lambda as a fraction of lambda_max")->capture_default_str();
    flag(app, "nlambda", c.nlambda, "number of lambda values on a path")->capture_default_str();
    flag(app, "tol", c.tol, "coordinate descent tolerance")->capture_default_str();
    switch_flag(app, "svg", c.svg, "also write an SVG plot");
}

void add_inputs(CLI::App* app, Inputs& in, bool need_response) {
    flag(app, "design", in.design, "design CSV with a header of covariate names")->required();
    auto* r = flag(app, "response", in.response, "single-column response CSV");
    if (need_response) r->required();
    flag(app, "graph", in.graph, "edge-list TSV with 0-based vertex ids");
}

void add_penalty(CLI::App* app, Penalty& p) {
    auto* l1 = flag(app, "lambda1", p.lambda1, "sparsity weight");
    auto* l2 = flag(app, "lambda2", p.lambda2, "smoothness weight");
    auto* l = flag(app, "lambda", p.lambda, "scaled overall penalty");
    auto* a = flag(app, "alpha", p.alpha, "L1 share of the scaled penalty");
    l->excludes(l1)->excludes(l2);
    a->excludes(l1)->excludes(l2);
}

void add_sim(CLI::App* app, SimFlags& s) {
    flag(app, "model", s.model, "simulation model, 1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    flag(app, "cor", s.cor, "TF-gene correlation")->capture_default_str();
    flag(app, "modules", s.modules, "number of TF modules")->capture_default_str();
    flag(app, "genes", s.genes, "genes per TF")->capture_default_str();
    flag(app, "active", s.active, "active modules")->capture_default_str();
    flag(app, "flips", s.flips, "sign-flipped genes per active module (model 2)")->capture_default_str();
    flag(app, "n", s.n, "samples in each of train, validation and test")->capture_default_str();
}

SimulationSpec spec_of(const SimFlags& f) {
    SimulationSpec s;
    s.model = f.model == 2 ? SimModel::model2 : SimModel::model1;
    s.correlation = f.cor;
    s.n_modules = f.modules;
    s.genes_per_tf = f.genes;
    s.n_active_modules = f.active;
    s.sign_flips_per_module = f.flips;
    s.n_train = s.n_valid = s.n_test = f.n;
    s.validate();
    return s;
}

SolverOptions solver_of(const Common& c) {
    SolverOptions s;
    s.tol = c.tol;
    return s;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::parse_error, "bad value '" + item + "' in grid '" + text + "'");
        }
    }
    if (grid.empty()) throw Error(ErrorCode::invalid_argument, "empty grid");
    return grid;
}

WeightedGraph load_graph(const std::string& path, std::size_t p) {
    if (path.empty()) return WeightedGraph::build(std::vector<Edge>{}, p);
    const std::vector<Edge> edges = read_edge_list(path);
    return WeightedGraph::build(edges, p);
}

PenaltyConfig penalty_of(const Penalty& p, std::size_t n) {
    if (p.lambda || p.alpha) {
        if (!p.lambda || !p.alpha) throw Error(ErrorCode::invalid_argument, "--lambda and --alpha go together");
        return PenaltyConfig::from_lambda_alpha(*p.lambda, *p.alpha, n);
    }
    if (!p.lambda1 || !p.lambda2) {
        throw Error(ErrorCode::invalid_argument, "give --lambda1 and --lambda2, or --lambda and --alpha");
    }
    PenaltyConfig cfg{*p.lambda1, *p.lambda2};
    cfg.validate();
    return cfg;
}

struct Outputs {
    fs::path dir;
    std::vector<std::string> files;

    explicit Outputs(const std::string& out) : dir(out) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw Error(ErrorCode::io_error, "cannot create output directory " + out + ": " + ec.message());
    }
    void write(const std::string& name, const std::string& text) {
        const fs::path path = dir / name;
        io::write_text(path.string(), text);
        files.push_back(path.string());
    }
    void write(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
};

void report(const std::string& command, const Outputs& out, json extra = json::object()) {
    extra["command"] = command;
    extra["status"] = "ok";
    extra["files"] = out.files;
    std::cout << extra.dump() << "\n";
}

AdaptiveOptions adaptive_options(const Common& c, const std::string& tuning) {
    AdaptiveOptions opt;
    opt.tuning = tuning == "dense" ? SignTuning::dense_end : SignTuning::prediction;
    opt.cv.seed = c.seed;
    opt.cv.eps = c.eps;
    opt.cv.nlambda = c.nlambda;
    opt.cv.threads = c.threads;
    opt.solver = solver_of(c);
    return opt;
}

/// Laplacian to fit against: the graph Laplacian, or its sign-adjusted form
/// when an adaptive fit is requested.
LaplacianMatrix penalty_matrix(const Dataset& ds, const WeightedGraph& g, bool adaptive, const AdaptiveOptions& opt,
                               std::optional<SignEstimate>& estimate) {
    if (!adaptive) return laplacian(g);
    estimate = initial_estimate(ds, opt);
    return signed_laplacian(g, estimate->signs);
}

std::vector<io::PlotSeries> coefficient_series(const PathResult& path, std::size_t max_series) {
    std::vector<io::PlotSeries> series;
    if (path.betas.empty()) return series;
    const Eigen::VectorXd& last = path.betas.back();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(last.size()));
    for (Eigen::Index j = 0; j < last.size(); ++j) order[static_cast<std::size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(last[a]) > std::abs(last[b]); });
    for (std::size_t k = 0; k < std::min(max_series, order.size()); ++k) {
        const Eigen::Index j = order[k];
        if (last[j] == 0.0) break;
        io::PlotSeries s{"x" + std::to_string(j), {}};
        for (std::size_t i = 0; i < path.betas.size(); ++i)
            s.points.emplace_back(std::log10(path.lambdas[i]), path.betas[i][j]);
        series.push_back(std::move(s));
    }
    return series;
}

int run_fit(const Common& c, const Inputs& in, const Penalty& pen, bool adaptive, const std::string& tuning) {
    const Dataset raw = io::parse_design(in.design, in.response);
    const Dataset ds = standardize(raw);
    const WeightedGraph g = load_graph(in.graph, ds.p());
    const PenaltyConfig cfg = penalty_of(pen, ds.n());
    std::optional<SignEstimate> estimate;
    const LaplacianMatrix L = penalty_matrix(ds, g, adaptive, adaptive_options(c, tuning), estimate);
    FitResult fit = fit_grace(ds, L, cfg, std::nullopt, solver_of(c));
    summarize_fit(fit, ds, L);
    if (estimate) fit.signs = estimate->signs;

    Outputs out(c.out);
    json j = io::fit_json(fit, ds.names, ds.n());
    if (estimate) {
        j["initial_method"] = estimate->method == InitialMethod::ols ? "ols" : "enet";
        if (!estimate->warning.empty()) j["warning"] = estimate->warning;
    }
    out.write("fit.json", j);
    out.write("coefficients.csv", io::coefficients_csv(fit, ds.names));
    report("fit", out, {{"converged", fit.converged}, {"active", fit.active_set.size()}});
    return 0;
}

int run_path(const Common& c, const Inputs& in, const Penalty& pen, bool adaptive, const std::string& tuning) {
    const Dataset ds = standardize(io::parse_design(in.design, in.response));
    const WeightedGraph g = load_graph(in.graph, ds.p());
    std::optional<SignEstimate> estimate;
    const LaplacianMatrix L = penalty_matrix(ds, g, adaptive, adaptive_options(c, tuning), estimate);
    PathResult path;
    if (pen.alpha) {
        path = fit_path(ds, L, *pen.alpha, lambda_grid(ds, *pen.alpha, c.eps, c.nlambda), solver_of(c));
    } else {
        const double lambda2 = pen.lambda2.value_or(1.0);
        path = fit_path_lambda1(ds, L, lambda2, lambda1_grid(ds, c.eps, c.nlambda), solver_of(c));
    }
    Outputs out(c.out);
    out.write("path.csv", io::path_csv(path));
    if (c.svg) {
        out.write("path.svg", io::line_plot_svg("Coefficient path", "log10 lambda", "coefficient",
                                                coefficient_series(path, 20)));
    }
    report("path", out, {{"points", path.betas.size()}});
    return 0;
}

int run_cv(const Common& c, const Inputs& in, std::size_t folds, const std::string& grid, bool global_standardize,
           bool alpha_policy, bool adaptive, const std::string& tuning) {
    const Dataset raw = io::parse_design(in.design, in.response);
    const WeightedGraph g = load_graph(in.graph, raw.p());
    CvOptions opt;
    opt.folds = folds;
    opt.seed = c.seed;
    opt.eps = c.eps;
    opt.nlambda = c.nlambda;
    opt.threads = c.threads;
    opt.global_standardize = global_standardize;
    opt.solver = solver_of(c);
    if (alpha_policy) {
        opt.policy = CvPolicy::alpha_lambda;
    } else {
        opt.lambda2_grid = parse_grid(grid);
    }
    std::optional<SignEstimate> estimate;
    const LaplacianMatrix L = penalty_matrix(standardize(raw), g, adaptive, adaptive_options(c, tuning), estimate);
    const CvResult cv = kfold_cv(raw, L, opt);
    Outputs out(c.out);
    out.write("cv.csv", io::cv_csv(cv));
    out.write("cv.json", io::cv_json(cv, raw.n()));
    if (c.svg) {
        std::vector<io::PlotSeries> series;
        for (const CvCell& cell : cv.cells) {
            if (series.empty() || series.back().name != io::format_double(cell.outer))
                series.push_back({io::format_double(cell.outer), {}});
            series.back().points.emplace_back(std::log10(cell.lambda), cell.mean_error);
        }
        out.write("cv.svg", io::line_plot_svg("Cross-validation error", "log10 lambda", "mean squared error", series));
    }
    const PenaltyConfig best = cv.best_penalty(raw.n());
    report("cv", out, {{"lambda1", best.lambda1}, {"lambda2", best.lambda2}});
    return 0;
}

int run_simulate(const Common& c, const SimFlags& f, bool noiseless) {
    SimulationSpec spec = spec_of(f);
    spec.noiseless = noiseless;
    const SimulatedData d = simulate_dataset(spec, c.seed);
    Outputs out(c.out);
    const std::vector<std::string> names = covariate_names(spec);
    for (const auto& [tag, ds] : {std::pair<std::string, const Dataset*>{"train", &d.train},
                                  {"valid", &d.valid},
                                  {"test", &d.test}}) {
        out.write(tag + "_X.csv", io::matrix_csv(ds->X, names));
        out.write(tag + "_y.csv", io::vector_csv(ds->y, "y"));
    }
    out.write("beta.csv", io::vector_csv(d.beta, "beta"));
    out.write("graph.tsv", io::edge_list_tsv(build_module_graph(spec)));
    json truth;
    truth["seed"] = c.seed;
    truth["model"] = f.model;
    truth["correlation"] = spec.correlation;
    truth["p"] = spec.p();
    truth["sigma"] = d.sigma;
    truth["support"] = d.support;
    out.write("truth.json", truth);
    report("simulate", out, {{"p", spec.p()}, {"sigma", d.sigma}});
    return 0;
}

std::vector<Method> parse_methods(const std::string& text) {
    std::vector<Method> methods;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) methods.push_back(parse_method(item));
    if (methods.empty()) throw Error(ErrorCode::invalid_argument, "no methods requested");
    return methods;
}

int run_bench(const Common& c, const SimFlags& f, std::size_t reps, const std::string& methods,
              const std::string& grid) {
    const SimulationSpec spec = spec_of(f);
    BenchOptions opt;
    opt.lambda2_grid = parse_grid(grid);
    opt.eps = c.eps;
    opt.nlambda = c.nlambda;
    opt.threads = c.threads;
    opt.solver = solver_of(c);
    const BenchmarkTable table = run_benchmark(spec, parse_methods(methods), reps, c.seed, opt);
    Outputs out(c.out);
    out.write("benchmark.csv", io::benchmark_csv(table));
    out.write("benchmark.json", io::benchmark_json(table));
    if (c.svg) {
        std::vector<io::PlotSeries> series;
        for (const MethodOutcome& o : table.outcomes) {
            io::PlotSeries s{method_name(o.method), {}};
            for (std::size_t r = 0; r < o.test_mse.size(); ++r) s.points.emplace_back(static_cast<double>(r + 1), o.test_mse[r]);
            series.push_back(std::move(s));
        }
        out.write("benchmark.svg", io::line_plot_svg("Test prediction MSE", "replicate", "MSE", series));
    }
    json rows = json::array();
    for (const BenchmarkRow& r : table.rows)
        rows.push_back({{"method", method_name(r.method)}, {"mean_mse", r.mean_mse}, {"se", r.se}, {"failures", r.failures}});
    report("bench", out, {{"rows", rows}});
    return 0;
}

int run_roc(const Common& c, const SimFlags& f, const std::string& method_text, double lambda2,
            const std::string& tuning) {
    const SimulationSpec spec = spec_of(f);
    const SimulatedData d = simulate_dataset(spec, c.seed);
    const Dataset train = standardize(d.train);
    const WeightedGraph g = build_module_graph(spec);
    const Method method = parse_method(method_text);
    LaplacianMatrix L = laplacian(g);
    double l2 = lambda2;
    switch (method) {
        case Method::lasso:
            l2 = 0.0;
            break;
        case Method::enet:
            L = identity_penalty(spec.p());
            break;
        case Method::grace:
            break;
        case Method::agrace:
            L = signed_laplacian(g, initial_estimate(train, adaptive_options(c, tuning)).signs);
            break;
    }
    const PathResult path = fit_path_lambda1(train, L, l2, lambda1_grid(train, c.eps, c.nlambda), solver_of(c));
    const RocCurve roc = roc_curve(path, d.support);
    Outputs out(c.out);
    out.write("roc.csv", io::roc_csv(roc));
    if (c.svg) {
        io::PlotSeries s{method_name(method), {}};
        double envelope = 0.0;
        s.points.emplace_back(0.0, 0.0);
        for (const RocPoint& pt : roc.points) {
            envelope = std::max(envelope, pt.tpr);
            s.points.emplace_back(pt.fpr, envelope);
        }
        s.points.emplace_back(1.0, envelope);
        out.write("roc.svg", io::line_plot_svg("ROC", "false positive rate", "true positive rate", {s}));
    }
    report("roc", out, {{"auc", roc.auc}});
    return 0;
}

int run_diagnose(const Common& c, const Inputs& in, const std::string& beta_path, double sigma, const Penalty& pen,
                 std::size_t mc_reps) {
    const io::NumericTable design = io::read_numeric_csv(in.design, true);
    const Eigen::VectorXd beta = io::read_vector_csv(beta_path);
    Dataset raw = make_dataset(design.values, Eigen::VectorXd::Zero(design.values.rows()));
    raw.names = design.header;
    const Dataset ds = standardize(raw);
    const WeightedGraph g = load_graph(in.graph, ds.p());
    const LaplacianMatrix L = laplacian(g);
    const double lambda1 = pen.lambda1.value_or(0.0);
    const double lambda2 = pen.lambda2.value_or(0.0);
    const TheoryInputs inp = make_theory_inputs(ds.X, g, L, beta, sigma, lambda1, lambda2);
    std::optional<McDesign> mc;
    McOptions mc_opt;
    if (mc_reps > 0) {
        mc = McDesign{ds.X, beta, sigma, L};
        mc_opt.reps = mc_reps;
        mc_opt.seed = c.seed;
        mc_opt.threads = c.threads;
        mc_opt.solver = solver_of(c);
    }
    const TheoryReport r = diagnose(inp, ds, mc, mc_opt);
    json j = io::theory_json(r);
    if (mc && lambda1 > 0.0) j["sign_consistency_mc"] = sign_consistency_mc(*mc, lambda1, lambda2, mc_opt);
    Outputs out(c.out);
    out.write("theory.json", j);
    report("diagnose", out, {{"bound", r.bound}});
    return 0;
}

void print_error(const std::string& code, const std::string& message) {
    std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-constrained regularized regression (Grace and aGrace)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "grace 1.0.0");

    Common common;
    Inputs inputs;
    Penalty penalty;
    SimFlags sim;
    bool adaptive = false;
    std::string sign_tuning = "cv";
    std::size_t folds = 5;
    std::string lambda2_grid = "0.1,1,10,100,1000";
    bool global_standardize = false;
    bool alpha_policy = false;
    std::size_t reps = 20;
    std::string methods = "grace,agrace,enet,lasso";
    std::string method = "grace";
    double roc_lambda2 = 1.0;
    bool noiseless = false;
    std::string beta_path;
    double sigma = 1.0;
    std::size_t mc_reps = 0;

    auto add_adaptive = [&](CLI::App* sub) {
        switch_flag(sub, "adaptive", adaptive, "use the sign-adjusted Laplacian (aGrace)");
        flag(sub, "sign-tuning", sign_tuning, "preliminary elastic net tuning when p >= n: cv or dense")
            ->check(CLI::IsMember({"cv", "dense"}))
            ->capture_default_str();
    };

    auto* fit = app.add_subcommand("fit", "fit one penalty pair");
    add_common(fit, common);
    add_inputs(fit, inputs, true);
    add_penalty(fit, penalty);
    add_adaptive(fit);

    auto* path = app.add_subcommand("path", "fit a warm-started regularization path");
    add_common(path, common);
    add_inputs(path, inputs, true);
    add_penalty(path, penalty);
    add_adaptive(path);

    auto* cv = app.add_subcommand("cv", "k-fold cross-validation over the tuning grid");
    add_common(cv, common);
    add_inputs(cv, inputs, true);
    add_adaptive(cv);
    flag(cv, "folds", folds, "number of folds")->capture_default_str();
    flag(cv, "lambda2-grid", lambda2_grid, "comma-separated lambda2 values")->capture_default_str();
    switch_flag(cv, "paper-standardize", global_standardize, "standardize once on all samples");
    switch_flag(cv, "alpha-grid", alpha_policy, "tune (alpha, lambda) instead of (lambda2, lambda1)");

    auto* simulate = app.add_subcommand("simulate", "generate a TF-module simulation");
    add_common(simulate, common);
    add_sim(simulate, sim);
    switch_flag(simulate, "noiseless", noiseless, "sigma = 0");

    auto* bench = app.add_subcommand("bench", "benchmark methods on simulated data");
    add_common(bench, common);
    add_sim(bench, sim);
    flag(bench, "reps", reps, "replicates")->capture_default_str();
    flag(bench, "methods", methods, "comma-separated methods")->capture_default_str();
    flag(bench, "lambda2-grid", lambda2_grid, "comma-separated lambda2 values")->capture_default_str();

    auto* roc = app.add_subcommand("roc", "ROC of one lambda1 path on a simulated training set");
    add_common(roc, common);
    add_sim(roc, sim);
    add_adaptive(roc);
    flag(roc, "method", method, "grace, agrace, enet or lasso")->capture_default_str();
    flag(roc, "lambda2", roc_lambda2, "smoothness weight held fixed along the path")->capture_default_str();

    auto* diag = app.add_subcommand("diagnose", "risk bound, GC-IC and regularity diagnostics");
    add_common(diag, common);
    flag(diag, "design", inputs.design, "design CSV with a header of covariate names")->required();
    flag(diag, "graph", inputs.graph, "edge-list TSV with 0-based vertex ids");
    flag(diag, "beta", beta_path, "true coefficient CSV, one column")->required();
    flag(diag, "sigma", sigma, "noise standard deviation")->capture_default_str();
    flag(diag, "lambda1", penalty.lambda1, "sparsity weight");
    flag(diag, "lambda2", penalty.lambda2, "smoothness weight");
    flag(diag, "mc-reps", mc_reps, "Monte Carlo replicates, 0 to skip")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 2;
    }

    try {
        if (*fit) return run_fit(common, inputs, penalty, adaptive, sign_tuning);
        if (*path) return run_path(common, inputs, penalty, adaptive, sign_tuning);
        if (*cv) {
            return run_cv(common, inputs, folds, lambda2_grid, global_standardize, alpha_policy, adaptive,
                          sign_tuning);
        }
        if (*simulate) return run_simulate(common, sim, noiseless);
        if (*bench) return run_bench(common, sim, reps, methods, lambda2_grid);
        if (*roc) return run_roc(common, sim, method, roc_lambda2, sign_tuning);
        if (*diag) return run_diagnose(common, inputs, beta_path, sigma, penalty, mc_reps);
    } catch (const Error& e) {
        print_error(std::string(error_code_name(e.code())), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
    return 1;
}
