#include "muxdyn/multiplex.hpp"

#include <cmath>

#include "muxdyn/error.hpp"

namespace muxdyn {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

LayerGraph::LayerGraph(std::string name, bool directed, Matrix weights, bool allow_self_loops)
    : name_(std::move(name)), directed_(directed), weights_(std::move(weights)) {
    if (weights_.rows() != weights_.cols()) {
        throw InputError("layer '" + name_ + "': weight matrix is not square");
    }
    for (Eigen::Index b = 0; b < weights_.cols(); ++b) {
        for (Eigen::Index a = 0; a < weights_.rows(); ++a) {
            const double w = weights_(a, b);
            if (!std::isfinite(w) || w < 0.0) {
                throw InputError("layer '" + name_ + "': negative or non-finite weight");
            }
            if (a == b && w != 0.0 && !allow_self_loops) {
                throw InputError("layer '" + name_ + "': self-loop at node " + std::to_string(a));
            }
        }
    }
    if (!directed_ && weights_ != weights_.transpose()) {
        throw InputError("layer '" + name_ + "': undirected layer with asymmetric weights");
    }
}

LayerGraph LayerGraph::from_edges(std::string name, std::size_t n, bool directed,
                                  std::span<const Edge> edges, bool allow_self_loops) {
    Matrix w = Matrix::Zero(ix(n), ix(n));
    for (const Edge& e : edges) {
        if (e.src >= n || e.dst >= n) {
            throw InputError("layer '" + name + "': edge endpoint out of range");
        }
        if (w(ix(e.dst), ix(e.src)) != 0.0) {
            throw InputError("layer '" + name + "': duplicate edge " + std::to_string(e.src) + " -> " +
                             std::to_string(e.dst));
        }
        w(ix(e.dst), ix(e.src)) = e.weight;
        if (!directed) w(ix(e.src), ix(e.dst)) = e.weight;
    }
    return LayerGraph(std::move(name), directed, std::move(w), allow_self_loops);
}

Matrix LayerGraph::binary() const {
    return (weights_.array() > 0.0).cast<double>().matrix();
}

Matrix LayerGraph::symmetrized() const {
    Matrix b = binary();
    Matrix s = ((b + b.transpose()).array() > 0.0).cast<double>().matrix();
    s.diagonal().setZero();
    return s;
}

std::size_t LayerGraph::arc_count() const {
    std::size_t count = 0;
    for (Eigen::Index b = 0; b < weights_.cols(); ++b)
        for (Eigen::Index a = 0; a < weights_.rows(); ++a)
            if (a != b && weights_(a, b) > 0.0) ++count;
    return count;
}

double LayerGraph::out_weight(std::size_t b) const { return weights_.col(ix(b)).sum(); }

Multiplex::Multiplex(std::vector<LayerGraph> layers, std::vector<std::string> node_labels)
    : layers_(std::move(layers)), labels_(std::move(node_labels)) {
    if (layers_.empty()) throw InputError("multiplex needs at least one layer");
    n_ = layers_.front().size();
    for (const auto& layer : layers_) {
        if (layer.size() != n_) {
            throw InputError("layer '" + layer.name() + "' has " + std::to_string(layer.size()) +
                             " nodes, expected " + std::to_string(n_));
        }
    }
    if (labels_.empty()) {
        for (std::size_t j = 0; j < n_; ++j) labels_.push_back(std::to_string(j + 1));
    } else if (labels_.size() != n_) {
        throw InputError("node label count does not match layer size");
    }
}

bool Multiplex::any_directed() const {
    for (const auto& layer : layers_)
        if (layer.directed()) return true;
    return false;
}

SupraVector::SupraVector(SupraIndex idx, Vector v) : index(idx), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != index.dim()) {
        throw InputError("supra-vector length " + std::to_string(values.size()) + " does not match n*k = " +
                         std::to_string(index.dim()));
    }
}

SupraVector SupraVector::lift(const Vector& w, std::size_t k) {
    const SupraIndex idx{static_cast<std::size_t>(w.size()), k};
    Vector v(ix(idx.dim()));
    for (std::size_t i = 0; i < k; ++i) v.segment(ix(i * idx.n), w.size()) = w;
    return {idx, std::move(v)};
}

Vector SupraVector::project_mean() const {
    Vector w = Vector::Zero(ix(index.n));
    for (std::size_t i = 0; i < index.k; ++i) w += values.segment(ix(i * index.n), ix(index.n));
    return w / static_cast<double>(index.k);
}

std::vector<std::string> supra_labels(const Multiplex& m) {
    std::vector<std::string> out;
    out.reserve(m.size() * m.layer_count());
    for (const auto& layer : m.layers())
        for (const auto& label : m.labels()) out.push_back(layer.name() + ":" + label);
    return out;
}

LayerGraph aggregate(const Multiplex& m, AggregateMode mode) {
    const auto n = ix(m.size());
    Matrix w = Matrix::Zero(n, n);
    for (const auto& layer : m.layers()) {
        if (mode == AggregateMode::union_edges) {
            w = w.cwiseMax(layer.binary());
        } else {
            w += layer.weights();
        }
    }
    return LayerGraph("aggregate", m.any_directed(), std::move(w), true);
}

LayerGraph matched_sum(const Multiplex& m) {
    const SupraIndex idx{m.size(), m.layer_count()};
    const auto n = ix(idx.n);
    Matrix w = Matrix::Zero(ix(idx.dim()), ix(idx.dim()));
    for (std::size_t i = 0; i < idx.k; ++i) {
        w.block(ix(i) * n, ix(i) * n, n, n) = m.layer(i).weights();
    }
    for (std::size_t j = 0; j < idx.n; ++j) {
        for (std::size_t a = 0; a < idx.k; ++a) {
            for (std::size_t b = 0; b < idx.k; ++b) {
                if (a != b) w(ix(idx.flatten(a, j)), ix(idx.flatten(b, j))) = 1.0;
            }
        }
    }
    return LayerGraph("matched_sum", m.any_directed(), std::move(w), true);
}

}  // namespace muxdyn
