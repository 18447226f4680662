#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muxdyn/multiplex.hpp"
#include "muxdyn/supra_matrix.hpp"

namespace muxdyn {

/**
 * Interlayer coupling coefficients.
 *
 * c(i, l, j) is the share of the quantity at node j in source layer l that is
 * passed to layer i; alpha(l, j) scales everything leaving copy (l, j).
 * Columns are normalized over the destination: sum_i c(i, l, j) = 1 for every
 * (l, j). The scheme is closed when every alpha is 1, in which case the
 * redistribution matrix is column-stochastic.
 */
class CouplingScheme {
public:
    static constexpr double kColumnTolerance = 1e-12;

    /// `coefficients` is indexed (i * k + l) * n + j. Throws InputError on invariant violations.
    CouplingScheme(std::size_t n, std::size_t k, std::vector<double> coefficients, Matrix alpha);

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    double c(std::size_t to_layer, std::size_t from_layer, std::size_t node) const {
        return c_[(to_layer * k_ + from_layer) * n_ + node];
    }
    double alpha(std::size_t layer, std::size_t node) const {
        return alpha_(static_cast<Eigen::Index>(layer), static_cast<Eigen::Index>(node));
    }
    const Matrix& alpha() const noexcept { return alpha_; }
    /// k x k matrix of coefficients at one node (rows: destination layer).
    Matrix at_node(std::size_t node) const;
    bool is_closed() const;

private:
    std::size_t n_;
    std::size_t k_;
    std::vector<double> c_;
    Matrix alpha_;
};

enum class HierarchyHeuristic { density, edge_ratio, global_proportion };
HierarchyHeuristic parse_heuristic(const std::string& s);

/// c = 1/k everywhere, closed.
CouplingScheme scheme_equidistribution(const Multiplex& m);

/// Node-independent coupling from a raw k x k matrix (rows: destination
/// layer), each column rescaled to sum to 1. Closed.
CouplingScheme scheme_hierarchical(const Multiplex& m, const Matrix& raw);
CouplingScheme scheme_hierarchical(const Multiplex& m, HierarchyHeuristic heuristic);

/// Source-independent redistribution: c(i, l, j) = share(i, j) for all l.
/// Each column of `share` (k x n) must sum to 1.
CouplingScheme scheme_unified_node(const Multiplex& m, const Matrix& alpha, const Matrix& share);

/// Decoupled layers: c(i, l, j) = [i == l].
CouplingScheme scheme_identity(const Multiplex& m);

/**
 * Coupling config:
 *   {"mode": "equidistribution" | "hierarchical" | "unified_node" | "explicit" | "identity",
 *    "heuristic": "density" | "edge_ratio" | "global_proportion",   (hierarchical)
 *    "c": k x k  or  n x k x k (per node, rows: destination),       (hierarchical / explicit)
 *    "share": k x n,                                                 (unified_node)
 *    "alpha": k x n}                                                 (optional, default all ones)
 */
CouplingScheme scheme_from_json(const Multiplex& m, const nlohmann::json& config);

/// Preset names ("equidistribution", "identity", "hierarchical:<heuristic>")
/// or a path to a JSON config file.
CouplingScheme scheme_from_spec(const Multiplex& m, const std::string& spec);

/// M: block (i, l) is diag(alpha(l, j) * c(i, l, j))_j.
SupraMatrix build_redistribution(const CouplingScheme& s, std::size_t dense_limit = kDenseLimit);

/**
 * D = diag(D_1, ..., D_k) with D_i the layer adjacency, its column-stochastic
 * walk matrix (dangling nodes get a unit self-loop) or its combinatorial
 * Laplacian. Laplacians of directed layers are rejected.
 */
SupraMatrix layer_dynamics(const Multiplex& m, DynamicsKind kind, std::size_t dense_limit = kDenseLimit);

/// The multiplex operator M * D; block (i, l) equals C^{i,l} D_l.
SupraMatrix build_operator(const SupraMatrix& redistribution, const SupraMatrix& dynamics);

struct MultiplexOperator {
    CouplingScheme scheme;
    SupraMatrix redistribution;
    SupraMatrix dynamics;
    SupraMatrix op;
};

MultiplexOperator make_operator(const Multiplex& m, const CouplingScheme& s, DynamicsKind kind,
                                std::size_t dense_limit = kDenseLimit);

struct NodeCopy {
    std::size_t layer = 0;
    std::size_t node = 0;
};

/**
 * One-step probability of moving from copy `from` to copy `to` under a
 * closed random-walk operator: c(to.layer, from.layer, to.node) times the
 * walk probability from.node -> to.node inside layer from.layer.
 */
double transition_probability(const MultiplexOperator& op, NodeCopy from, NodeCopy to);

}  // namespace muxdyn
