#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace muxdyn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Weighted arc. For undirected layers the orientation is irrelevant.
struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    double weight = 1.0;
};

/**
 * One layer of a multiplex: a weighted graph on n nodes.
 *
 * Weights are stored column-major by source: entry (a, b) is the weight of the
 * arc b -> a. Undirected layers are symmetric. This is the orientation under
 * which walk matrices are column-stochastic and act on column vectors.
 */
class LayerGraph {
public:
    LayerGraph() = default;
    LayerGraph(std::string name, bool directed, Matrix weights, bool allow_self_loops = false);

    /// Undirected edges are mirrored; repeated edges are rejected.
    static LayerGraph from_edges(std::string name, std::size_t n, bool directed,
                                 std::span<const Edge> edges, bool allow_self_loops = false);

    std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
    bool directed() const noexcept { return directed_; }
    const std::string& name() const noexcept { return name_; }
    const Matrix& weights() const noexcept { return weights_; }

    bool has_arc(std::size_t src, std::size_t dst) const {
        return weights_(static_cast<Eigen::Index>(dst), static_cast<Eigen::Index>(src)) > 0.0;
    }

    /// 0/1 pattern of the weights (weight > 0).
    Matrix binary() const;
    /// Pattern of the underlying undirected graph, zero diagonal.
    Matrix symmetrized() const;

    /// Number of nonzero off-diagonal entries (each undirected edge counts twice).
    std::size_t arc_count() const;
    /// Arcs for directed layers, edges for undirected ones.
    std::size_t edge_count() const { return directed_ ? arc_count() : arc_count() / 2; }

    /// Total weight leaving node b (column sum).
    double out_weight(std::size_t b) const;

    friend bool operator==(const LayerGraph& a, const LayerGraph& b) {
        return a.directed_ == b.directed_ && a.name_ == b.name_ && a.weights_ == b.weights_;
    }

private:
    std::string name_;
    bool directed_ = false;
    Matrix weights_;
};

/// Ordered layers over a shared node set. Immutable after construction.
class Multiplex {
public:
    Multiplex(std::vector<LayerGraph> layers, std::vector<std::string> node_labels = {});

    std::size_t size() const noexcept { return n_; }
    std::size_t layer_count() const noexcept { return layers_.size(); }
    const LayerGraph& layer(std::size_t i) const { return layers_.at(i); }
    const std::vector<LayerGraph>& layers() const noexcept { return layers_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    bool any_directed() const;

    friend bool operator==(const Multiplex& a, const Multiplex& b) {
        return a.layers_ == b.layers_ && a.labels_ == b.labels_;
    }

private:
    std::size_t n_ = 0;
    std::vector<LayerGraph> layers_;
    std::vector<std::string> labels_;
};

/**
 * Flat index convention for supra-vectors, 0-based: node j of layer i lives
 * at i * n + j. Layer blocks are contiguous.
 */
struct SupraIndex {
    std::size_t n = 0;
    std::size_t k = 0;

    std::size_t dim() const noexcept { return n * k; }
    std::size_t flatten(std::size_t layer, std::size_t node) const noexcept { return layer * n + node; }
    std::pair<std::size_t, std::size_t> unflatten(std::size_t flat) const noexcept {
        return {flat / n, flat % n};
    }
};

struct SupraVector {
    SupraIndex index;
    Vector values;

    SupraVector(SupraIndex idx, Vector v);
    static SupraVector zeros(SupraIndex idx) { return {idx, Vector::Zero(static_cast<Eigen::Index>(idx.dim()))}; }

    double& at(std::size_t layer, std::size_t node) {
        return values(static_cast<Eigen::Index>(index.flatten(layer, node)));
    }
    double at(std::size_t layer, std::size_t node) const {
        return values(static_cast<Eigen::Index>(index.flatten(layer, node)));
    }
    /// Copy w into every layer block.
    static SupraVector lift(const Vector& w, std::size_t k);
    /// Per-node mean over the k copies.
    Vector project_mean() const;
};

/// "layer:label" for each flat index.
std::vector<std::string> supra_labels(const Multiplex& m);

enum class AggregateMode { union_edges, weight_sum };

/// Single graph combining all layers; directed iff any layer is directed.
LayerGraph aggregate(const Multiplex& m, AggregateMode mode = AggregateMode::union_edges);

/// Graph on n*k nodes: the layers as diagonal blocks plus a unit-weight
/// bidirectional edge between every pair of copies of the same node.
LayerGraph matched_sum(const Multiplex& m);

}  // namespace muxdyn
