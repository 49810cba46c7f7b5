#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "grace/error.hpp"
#include "grace/io.hpp"
#include "support.hpp"

using namespace grace;
using support::code_of;

namespace {

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / ("grace_io_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("numeric CSV parsing") {
    const io::NumericTable t = io::parse_numeric_csv("a,b\n1,2\n3,4.5\n-1e3,0\n", true);
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.values.rows() == 3);
    REQUIRE(t.values.cols() == 2);
    CHECK(t.values(1, 1) == 4.5);
    CHECK(t.values(2, 0) == -1000.0);

    const io::NumericTable bare = io::parse_numeric_csv("1,2\r\n3,4\r\n", false);
    CHECK(bare.header.empty());
    CHECK(bare.values(1, 0) == 3.0);

    CHECK(message_of([] { io::parse_numeric_csv("a,b\n", true, "x.csv"); }).find("no samples") != std::string::npos);
    CHECK(code_of([] { io::parse_numeric_csv("a,b\n", true); }) == ErrorCode::parse_error);

    const std::string ragged = message_of([] { io::parse_numeric_csv("a,b\n1,2\n3\n", true, "x.csv"); });
    CHECK(ragged.find("x.csv: line 3") != std::string::npos);
    const std::string word = message_of([] { io::parse_numeric_csv("a,b\n1,2\n3,abc\n", true, "x.csv"); });
    CHECK(word.find("line 3, column 2") != std::string::npos);
    CHECK(code_of([] { io::parse_numeric_csv("a,b\n1,2x\n", true); }) == ErrorCode::parse_error);
}

TEST_CASE("write-then-parse round trip is exact") {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<int> expo(-300, 300);
    Eigen::MatrixXd X(25, 6);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = nd(rng) * std::pow(10.0, expo(rng));
    X(0, 0) = std::numeric_limits<double>::denorm_min();
    X(0, 1) = std::numeric_limits<double>::max();
    X(0, 2) = -0.0;
    X(0, 3) = 0.1;
    const std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
    const io::NumericTable back = io::parse_numeric_csv(io::matrix_csv(X, names), true);
    CHECK(back.header == names);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j) CHECK(std::bit_cast<std::uint64_t>(back.values(i, j)) ==
                                                           std::bit_cast<std::uint64_t>(X(i, j)));
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(std::nan("")) == "nan");
    CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("design and response files") {
    TempDir dir;
    io::write_text(dir.file("X.csv"), "g1,g2\n1,2\n3,4\n5,7\n");
    io::write_text(dir.file("y.csv"), "y\n1\n2\n3\n");
    io::write_text(dir.file("y_bare.csv"), "1\n2\n3\n");
    io::write_text(dir.file("y_short.csv"), "1\n2\n");
    const Dataset ds = io::parse_design(dir.file("X.csv"), dir.file("y.csv"));
    CHECK(ds.n() == 3);
    CHECK(ds.p() == 2);
    CHECK_FALSE(ds.standardized);
    CHECK(ds.names == std::vector<std::string>{"g1", "g2"});
    CHECK(ds.X(2, 1) == 7.0);
    CHECK(io::parse_design(dir.file("X.csv"), dir.file("y_bare.csv")).y == ds.y);
    CHECK(code_of([&] { io::parse_design(dir.file("X.csv"), dir.file("y_short.csv")); }) ==
          ErrorCode::dimension_mismatch);
    CHECK(code_of([&] { io::parse_design(dir.file("missing.csv"), dir.file("y.csv")); }) == ErrorCode::io_error);
    CHECK(io::read_vector_csv(dir.file("y.csv")) == ds.y);
    io::write_text(dir.file("two.csv"), "1,2\n");
    CHECK(code_of([&] { io::read_vector_csv(dir.file("two.csv")); }) == ErrorCode::parse_error);
}

TEST_CASE("edge list serialization round trip") {
    const WeightedGraph g = WeightedGraph::build(std::vector<Edge>{{0, 1, 0.5}, {1, 3, 2.0}, {2, 3, 1.0}}, 5);
    std::istringstream in(io::edge_list_tsv(g));
    const std::vector<Edge> back = parse_edge_list(in);
    CHECK(back == g.edges());
}

TEST_CASE("result serialization") {
    const Dataset ds = support::orthonormal_design();
    FitResult fit = fit_grace(ds, identity_penalty(2), {4.0, 2.0});
    summarize_fit(fit, ds, identity_penalty(2));
    fit.signs = std::vector<int>{1, -1};
    const nlohmann::json j = io::fit_json(fit, {"u", "v"}, 4);
    CHECK(j["lambda1"] == 4.0);
    CHECK(j["lambda2"] == 2.0);
    CHECK(j["lambda"].get<double>() == doctest::Approx(1.0));
    CHECK(j["alpha"].get<double>() == doctest::Approx(0.5));
    CHECK(j["beta"].size() == 2);
    CHECK(j["signs"] == nlohmann::json::array({1, -1}));
    CHECK(j["names"][1] == "v");
    CHECK(nlohmann::json::parse(j.dump())["beta"][0].get<double>() == fit.beta[0]);

    const std::string coef = io::coefficients_csv(fit, {"u", "v"});
    CHECK(coef.rfind("name,", 0) == 0);
    CHECK(coef.find("\nu,") != std::string::npos);

    BenchmarkTable table;
    table.rows.push_back({Method::grace, SimModel::model2, 0.2, 1.5, 0.25, 0.9, 20, 0});
    const std::string csv = io::benchmark_csv(table);
    CHECK(csv.rfind("method,model,correlation,mean_mse,se,mean_auc,replicates,failures\n", 0) == 0);
    CHECK(csv.find("Grace,2,0.20000000000000001,1.5,0.25,0.90000000000000002,20,0") != std::string::npos);

    RocCurve roc;
    roc.points = {{0.0, 0.5, 3.0}, {0.25, 1.0, 1.0}};
    CHECK(io::roc_csv(roc) == "fpr,tpr,lambda\n0,0.5,3\n0.25,1,1\n");

    const std::string svg = io::line_plot_svg("t", "x", "y", {{"a", {{0, 0}, {1, 1}}}});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}
