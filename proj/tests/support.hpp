#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "muxdyn/multiplex.hpp"

namespace muxdyn::test {

inline std::string data_path(const std::string& name) { return std::string(MUXDYN_TEST_DATA) + "/" + name; }

/// Layer A: path 1-2-3. Layer B: triangle. Both undirected.
inline Multiplex toy() {
    const std::vector<Edge> a{{0, 1, 1.0}, {1, 2, 1.0}};
    const std::vector<Edge> b{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    return Multiplex({LayerGraph::from_edges("A", 3, false, a), LayerGraph::from_edges("B", 3, false, b)},
                     {"1", "2", "3"});
}

inline LayerGraph random_layer(std::mt19937_64& rng, std::size_t n, double p, bool directed, bool weighted,
                               std::string name) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = directed ? 0 : a + 1; b < n; ++b) {
            if (a == b || u(rng) >= p) continue;
            const double x = weighted ? 0.5 + u(rng) : 1.0;
            w(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = x;
            if (!directed) w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = x;
        }
    }
    return {std::move(name), directed, std::move(w)};
}

/// Undirected layer containing a random spanning tree plus extra edges with probability p.
inline LayerGraph connected_layer(std::mt19937_64& rng, std::size_t n, double p, bool weighted, std::string name) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LayerGraph base = random_layer(rng, n, p, false, weighted, name);
    Matrix w = base.weights();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 1; i < n; ++i) {
        const auto a = static_cast<Eigen::Index>(order[i]);
        const auto b = static_cast<Eigen::Index>(order[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)]);
        if (w(a, b) == 0.0) w(a, b) = w(b, a) = weighted ? 0.5 + u(rng) : 1.0;
    }
    return {std::move(name), false, std::move(w)};
}

inline Multiplex random_multiplex_small(std::mt19937_64& rng, std::size_t n, std::size_t k, double p, bool directed,
                                        bool weighted) {
    std::vector<LayerGraph> layers;
    for (std::size_t i = 0; i < k; ++i) layers.push_back(random_layer(rng, n, p, directed, weighted, "L" + std::to_string(i)));
    return Multiplex(std::move(layers));
}

inline Multiplex connected_multiplex(std::mt19937_64& rng, std::size_t n, std::size_t k, double p, bool weighted) {
    std::vector<LayerGraph> layers;
    for (std::size_t i = 0; i < k; ++i) layers.push_back(connected_layer(rng, n, p, weighted, "L" + std::to_string(i)));
    return Multiplex(std::move(layers));
}

}  // namespace muxdyn::test
