#include "grace/simbench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "grace/adaptive.hpp"
#include "grace/error.hpp"
#include "grace/laplacian.hpp"
#include "grace/parallel.hpp"

namespace grace {

void SimulationSpec::validate() const {
    if (n_modules == 0) throw Error(ErrorCode::invalid_argument, "need at least one module");
    if (n_active_modules > n_modules) throw Error(ErrorCode::invalid_argument, "more active modules than modules");
    if (!(correlation > -1.0 && correlation < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "correlation must lie in (-1, 1)");
    }
    if (model == SimModel::model2 && sign_flips_per_module > genes_per_tf) {
        throw Error(ErrorCode::invalid_argument, "more sign flips than genes per module");
    }
}

WeightedGraph build_module_graph(const SimulationSpec& spec) {
    spec.validate();
    std::vector<Edge> edges;
    edges.reserve(spec.n_modules * spec.genes_per_tf);
    for (std::size_t m = 0; m < spec.n_modules; ++m) {
        const std::size_t tf = tf_index(spec, m);
        for (std::size_t g = 1; g <= spec.genes_per_tf; ++g) edges.push_back({tf, tf + g, 1.0});
    }
    return WeightedGraph::build(edges, spec.p());
}

Eigen::VectorXd model_coefficients(const SimulationSpec& spec) {
    spec.validate();
    static constexpr double kTfCoefficients[] = {2.0, -2.0, 4.0, -4.0};
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.p()));
    const double gene_scale = spec.genes_per_tf ? 1.0 / std::sqrt(static_cast<double>(spec.genes_per_tf)) : 0.0;
    for (std::size_t m = 0; m < spec.n_active_modules; ++m) {
        const std::size_t tf = tf_index(spec, m);
        const double b = kTfCoefficients[m % 4];
        beta[tf] = b;
        for (std::size_t g = 1; g <= spec.genes_per_tf; ++g) {
            const bool flipped = spec.model == SimModel::model2 && g <= spec.sign_flips_per_module;
            beta[tf + g] = (flipped ? -b : b) * gene_scale;
        }
    }
    return beta;
}

double noise_variance(const Eigen::VectorXd& beta) { return beta.squaredNorm() / 4.0; }

std::vector<std::string> covariate_names(const SimulationSpec& spec) {
    std::vector<std::string> names;
    names.reserve(spec.p());
    for (std::size_t m = 0; m < spec.n_modules; ++m) {
        names.push_back("tf" + std::to_string(m));
        for (std::size_t g = 1; g <= spec.genes_per_tf; ++g) {
            names.push_back("tf" + std::to_string(m) + "_gene" + std::to_string(g));
        }
    }
    return names;
}

SimulatedData simulate_dataset(const SimulationSpec& spec, std::uint64_t seed) {
    spec.validate();
    SimulatedData data;
    data.beta = model_coefficients(spec);
    data.sigma = spec.noiseless ? 0.0 : std::sqrt(noise_variance(data.beta));
    for (Eigen::Index j = 0; j < data.beta.size(); ++j) {
        if (data.beta[j] != 0.0) data.support.push_back(static_cast<std::size_t>(j));
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double r = spec.correlation;
    const double resid = std::sqrt(1.0 - r * r);
    const auto names = covariate_names(spec);

    auto draw = [&](std::size_t n) {
        Dataset ds;
        ds.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.p()));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t m = 0; m < spec.n_modules; ++m) {
                const std::size_t tf = tf_index(spec, m);
                const double tf_value = normal(rng);
                ds.X(i, tf) = tf_value;
                for (std::size_t g = 1; g <= spec.genes_per_tf; ++g) {
                    ds.X(i, tf + g) = r * tf_value + resid * normal(rng);
                }
            }
        }
        ds.y = ds.X * data.beta;
        for (std::size_t i = 0; i < n; ++i) ds.y[i] += data.sigma * normal(rng);
        ds.names = names;
        return ds;
    };
    data.train = draw(spec.n_train);
    data.valid = draw(spec.n_valid);
    data.test = draw(spec.n_test);
    return data;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::grace: return "Grace";
        case Method::agrace: return "aGrace";
        case Method::enet: return "Enet";
        case Method::lasso: return "Lasso";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "grace") return Method::grace;
    if (lower == "agrace") return Method::agrace;
    if (lower == "enet") return Method::enet;
    if (lower == "lasso") return Method::lasso;
    throw Error(ErrorCode::invalid_argument, "unknown method '" + name + "'");
}

RocCurve roc_curve(const PathResult& path, const std::vector<std::size_t>& truth) {
    if (path.betas.empty()) throw Error(ErrorCode::empty_path, "ROC of an empty path");
    if (truth.empty()) throw Error(ErrorCode::invalid_argument, "ROC needs a nonempty true support");
    const auto p = static_cast<std::size_t>(path.betas.front().size());
    std::vector<bool> relevant(p, false);
    for (std::size_t t : truth) {
        if (t >= p) throw Error(ErrorCode::index_out_of_range, "true support index out of range");
        relevant[t] = true;
    }
    const auto q = static_cast<std::size_t>(std::count(relevant.begin(), relevant.end(), true));
    if (q == p) throw Error(ErrorCode::invalid_argument, "ROC needs at least one irrelevant covariate");

    RocCurve roc;
    for (std::size_t k = 0; k < path.betas.size(); ++k) {
        std::size_t tp = 0;
        std::size_t fp = 0;
        const auto& b = path.betas[k];
        for (std::size_t j = 0; j < p; ++j) {
            if (b[static_cast<Eigen::Index>(j)] == 0.0) continue;
            (relevant[j] ? tp : fp) += 1;
        }
        roc.points.push_back({static_cast<double>(fp) / static_cast<double>(p - q),
                              static_cast<double>(tp) / static_cast<double>(q), path.lambdas.at(k)});
    }
    std::stable_sort(roc.points.begin(), roc.points.end(), [](const RocPoint& a, const RocPoint& b) {
        return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
    });
    roc.points.erase(std::unique(roc.points.begin(), roc.points.end(),
                                 [](const RocPoint& a, const RocPoint& b) {
                                     return a.fpr == b.fpr && a.tpr == b.tpr;
                                 }),
                     roc.points.end());

    double area = 0.0;
    double last_fpr = 0.0;
    double envelope = 0.0;
    for (const RocPoint& pt : roc.points) {
        const double next = std::max(envelope, pt.tpr);
        area += (pt.fpr - last_fpr) * (envelope + next) / 2.0;
        last_fpr = pt.fpr;
        envelope = next;
    }
    area += (1.0 - last_fpr) * envelope;
    roc.auc = area;
    return roc;
}

const BenchmarkRow& BenchmarkTable::row(Method m) const {
    for (const auto& r : rows) {
        if (r.method == m) return r;
    }
    throw Error(ErrorCode::invalid_argument, "method " + method_name(m) + " not in benchmark");
}

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

namespace {

struct Selection {
    double valid_mse = std::numeric_limits<double>::infinity();
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double test_mse = 0.0;
    double auc = 0.0;
    Eigen::VectorXd beta;  ///< standardized scale
    /// Dense end of the path (smallest lambda1) at the largest lambda2; the
    /// aGrace sign estimate.
    Eigen::VectorXd dense_beta;
};

Selection tune_on_validation(const Dataset& train, const SimulatedData& data, const LaplacianMatrix& L,
                             const std::vector<double>& lambda2s, const std::vector<double>& lambda1s,
                             const SolverOptions& solver) {
    Selection best;
    std::optional<PathResult> best_path;
    std::size_t best_index = 0;
    const double dense_lambda2 = *std::max_element(lambda2s.begin(), lambda2s.end());
    for (double lambda2 : lambda2s) {
        PathResult path = fit_path_lambda1(train, L, lambda2, lambda1s, solver);
        bool improved = false;
        for (std::size_t k = 0; k < path.betas.size(); ++k) {
            const double mse =
                prediction_mse(predict(path.intercepts[k], path.betas_original[k], data.valid.X), data.valid.y);
            if (k + 1 == path.betas.size() && lambda2 == dense_lambda2) best.dense_beta = path.betas[k];
            // Strict improvement keeps the earlier (larger lambda1, then smaller
            // lambda2) choice on ties; lambda2 ties resolve toward the larger value.
            const bool tie = mse == best.valid_mse;
            if (mse < best.valid_mse || (tie && path.lambdas[k] > best.lambda1) ||
                (tie && path.lambdas[k] == best.lambda1 && lambda2 > best.lambda2)) {
                best.valid_mse = mse;
                best.lambda1 = path.lambdas[k];
                best.lambda2 = lambda2;
                best_index = k;
                improved = true;
            }
        }
        if (improved) best_path = std::move(path);
    }
    const PathResult& path = *best_path;
    best.beta = path.betas[best_index];
    best.test_mse = prediction_mse(
        predict(path.intercepts[best_index], path.betas_original[best_index], data.test.X), data.test.y);
    best.auc = roc_curve(path, data.support).auc;
    return best;
}

}  // namespace

BenchmarkTable run_benchmark(const SimulationSpec& spec, const std::vector<Method>& methods,
                             std::size_t replicates, std::uint64_t seed, const BenchOptions& options) {
    spec.validate();
    if (replicates == 0) throw Error(ErrorCode::invalid_argument, "replicates must be at least 1");
    if (methods.empty()) throw Error(ErrorCode::invalid_argument, "no methods requested");

    const WeightedGraph graph = build_module_graph(spec);
    const LaplacianMatrix standard = laplacian(graph);
    const LaplacianMatrix ridge = identity_penalty(spec.p());

    // results[r][method index]
    struct Cell {
        bool ok = false;
        Selection sel;
        std::string error;
    };
    std::vector<std::vector<Cell>> results(replicates, std::vector<Cell>(methods.size()));

    parallel_for(replicates, options.threads, [&](std::size_t r) {
        const SimulatedData data = simulate_dataset(spec, replicate_seed(seed, r));
        const Dataset train = standardize(data.train);
        const std::vector<double> lambda1s = lambda1_grid(train, options.eps, options.nlambda);

        std::optional<Selection> enet;
        std::string enet_error;
        auto run_enet = [&]() -> const Selection& {
            if (!enet) enet = tune_on_validation(train, data, ridge, options.lambda2_grid, lambda1s, options.solver);
            return *enet;
        };

        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            Cell& cell = results[r][mi];
            try {
                switch (methods[mi]) {
                    case Method::lasso:
                        cell.sel = tune_on_validation(train, data, standard, {0.0}, lambda1s, options.solver);
                        break;
                    case Method::enet:
                        cell.sel = run_enet();
                        break;
                    case Method::grace:
                        cell.sel =
                            tune_on_validation(train, data, standard, options.lambda2_grid, lambda1s, options.solver);
                        break;
                    case Method::agrace: {
                        const LaplacianMatrix adjusted =
                            signed_laplacian(graph, sign_vector(run_enet().dense_beta));
                        cell.sel =
                            tune_on_validation(train, data, adjusted, options.lambda2_grid, lambda1s, options.solver);
                        break;
                    }
                }
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = "replicate " + std::to_string(r) + ": " + e.what();
            }
        }
    });

    BenchmarkTable table;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        MethodOutcome out;
        out.method = methods[mi];
        for (std::size_t r = 0; r < replicates; ++r) {
            const Cell& cell = results[r][mi];
            if (!cell.ok) {
                ++out.failures;
                out.errors.push_back(cell.error);
                continue;
            }
            out.test_mse.push_back(cell.sel.test_mse);
            out.auc.push_back(cell.sel.auc);
            out.chosen_lambda1.push_back(cell.sel.lambda1);
            out.chosen_lambda2.push_back(cell.sel.lambda2);
        }
        BenchmarkRow row;
        row.method = methods[mi];
        row.model = spec.model;
        row.correlation = spec.correlation;
        row.replicates = out.test_mse.size();
        row.failures = out.failures;
        if (row.replicates > 0) {
            const double m = static_cast<double>(row.replicates);
            double sum = 0.0;
            double auc_sum = 0.0;
            for (std::size_t k = 0; k < out.test_mse.size(); ++k) {
                sum += out.test_mse[k];
                auc_sum += out.auc[k];
            }
            row.mean_mse = sum / m;
            row.mean_auc = auc_sum / m;
            if (row.replicates > 1) {
                double ss = 0.0;
                for (double v : out.test_mse) ss += (v - row.mean_mse) * (v - row.mean_mse);
                row.se = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
            }
        } else {
            row.mean_mse = std::numeric_limits<double>::quiet_NaN();
            row.mean_auc = std::numeric_limits<double>::quiet_NaN();
        }
        table.rows.push_back(row);
        table.outcomes.push_back(std::move(out));
    }
    return table;
}

}  // namespace grace
