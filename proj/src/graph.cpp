#include "grace/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "grace/error.hpp"

namespace grace {

WeightedGraph WeightedGraph::build(std::span<const Edge> edges, std::size_t p) {
    WeightedGraph g;
    g.p_ = p;
    g.degrees_.assign(p, 0.0);

    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const Edge& e : edges) {
        if (e.u >= p || e.v >= p) {
            throw Error(ErrorCode::index_out_of_range,
                        "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") out of range for p = " + std::to_string(p));
        }
        if (e.u == e.v) {
            throw Error(ErrorCode::self_loop, "self-loop at vertex " + std::to_string(e.u));
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw Error(ErrorCode::negative_weight,
                        "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") has invalid weight " + std::to_string(e.weight));
        }
        const auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second) {
            throw Error(ErrorCode::duplicate_edge, "duplicate edge (" + std::to_string(key.first) +
                                                       ", " + std::to_string(key.second) + ")");
        }
        if (e.weight == 0.0) continue;
        g.edges_.push_back({key.first, key.second, e.weight});
    }

    std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (const Edge& e : g.edges_) {
        g.degrees_[e.u] += e.weight;
        g.degrees_[e.v] += e.weight;
    }
    return g;
}

double WeightedGraph::max_weight() const noexcept {
    double w = 0.0;
    for (const Edge& e : edges_) w = std::max(w, e.weight);
    return w;
}

WeightedGraph WeightedGraph::relabeled(std::span<const std::size_t> perm) const {
    if (perm.size() != p_) {
        throw Error(ErrorCode::dimension_mismatch, "permutation length differs from vertex count");
    }
    std::vector<Edge> moved;
    moved.reserve(edges_.size());
    for (const Edge& e : edges_) moved.push_back({perm[e.u], perm[e.v], e.weight});
    return build(moved, p_);
}

std::vector<Edge> parse_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream fields(line);
        long long u = -1;
        long long v = -1;
        Edge e;
        if (!(fields >> u >> v) || u < 0 || v < 0) {
            throw Error(ErrorCode::parse_error,
                        "edge list line " + std::to_string(lineno) + ": expected two vertex ids");
        }
        e.u = static_cast<std::size_t>(u);
        e.v = static_cast<std::size_t>(v);
        std::string rest;
        if (fields >> rest) {
            std::size_t used = 0;
            try {
                e.weight = std::stod(rest, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != rest.size()) {
                throw Error(ErrorCode::parse_error,
                            "edge list line " + std::to_string(lineno) + ": bad weight '" + rest + "'");
            }
            if (fields >> rest) {
                throw Error(ErrorCode::parse_error,
                            "edge list line " + std::to_string(lineno) + ": too many fields");
            }
        }
        edges.push_back(e);
    }
    return edges;
}

std::vector<Edge> read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open edge list '" + path + "'");
    return parse_edge_list(in);
}

}  // namespace grace
