#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace grace {

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted covariate graph G = (V, E, W).
///
/// Edges are stored once with u < v, zero-weight edges are dropped and
/// degrees are the exact sums of incident weights. Immutable after build.
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// Validates and normalizes an edge list. Rejects self-loops, negative or
    /// non-finite weights, out-of-range indices and duplicate pairs (in either
    /// orientation).
    static WeightedGraph build(std::span<const Edge> edges, std::size_t p);

    std::size_t size() const noexcept { return p_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<double>& degrees() const noexcept { return degrees_; }
    double degree(std::size_t u) const { return degrees_.at(u); }
    bool isolated(std::size_t u) const { return degrees_.at(u) == 0.0; }

    /// Largest edge weight, 0 for an edgeless graph.
    double max_weight() const noexcept;

    /// Graph with vertices relabeled so that old vertex u becomes perm[u].
    WeightedGraph relabeled(std::span<const std::size_t> perm) const;

private:
    std::size_t p_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> degrees_;
};

/// Parses a TSV edge list: `u<TAB>v[<TAB>weight]` per line, 0-based ids,
/// missing weight means 1.0, blank lines and lines starting with '#' skipped.
std::vector<Edge> parse_edge_list(std::istream& in);

std::vector<Edge> read_edge_list(const std::string& path);

}  // namespace grace
