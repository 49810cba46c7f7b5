#pragma once

#include <doctest.h>

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "grace/dataset.hpp"
#include "grace/error.hpp"
#include "grace/graph.hpp"

namespace support {

/// Wraps an already standardized design.
inline grace::Dataset dataset_of(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    grace::Dataset ds = grace::make_dataset(X, y);
    ds.standardized = true;
    return ds;
}

inline grace::WeightedGraph random_unit_graph(std::mt19937_64& rng, std::size_t p, double density = 0.5) {
    std::vector<grace::Edge> edges;
    std::bernoulli_distribution coin(density);
    for (std::size_t u = 0; u < p; ++u)
        for (std::size_t v = u + 1; v < p; ++v)
            if (coin(rng)) edges.push_back({u, v, 1.0});
    return grace::WeightedGraph::build(edges, p);
}

/// Orthonormal standardized design: X^T X / n = I.
inline grace::Dataset orthonormal_design() {
    Eigen::MatrixXd X(4, 2);
    X << 1, 1, 1, -1, -1, 1, -1, -1;
    Eigen::VectorXd y(4);
    y << 3, 1, -1, -3;
    return dataset_of(X, y);
}

template <class F>
grace::ErrorCode code_of(F&& fn) {
    try {
        fn();
    } catch (const grace::Error& e) {
        return e.code();
    }
    FAIL("expected grace::Error");
    return grace::ErrorCode::invalid_argument;
}

}  // namespace support
