#include "muxdyn/coupling.hpp"

#include <cmath>
#include <fstream>

#include "muxdyn/error.hpp"
#include "muxdyn/stats.hpp"

namespace muxdyn {

namespace {

using nlohmann::json;

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

Matrix ones_alpha(const Multiplex& m) { return Matrix::Ones(ix(m.layer_count()), ix(m.size())); }

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
    if (!j.is_array() || j.size() != rows) {
        throw InputError("coupling '" + what + "' must have " + std::to_string(rows) + " rows");
    }
    Matrix out(ix(rows), ix(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw InputError("coupling '" + what + "' must have " + std::to_string(cols) + " columns");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) throw InputError("coupling '" + what + "' entries must be numbers");
            out(ix(r), ix(c)) = j[r][c].get<double>();
        }
    }
    return out;
}

std::vector<double> node_independent(const Matrix& c, std::size_t n) {
    const auto k = static_cast<std::size_t>(c.rows());
    std::vector<double> out(k * k * n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < n; ++j) out[(i * k + l) * n + j] = c(ix(i), ix(l));
    return out;
}

}  // namespace

CouplingScheme::CouplingScheme(std::size_t n, std::size_t k, std::vector<double> coefficients, Matrix alpha)
    : n_(n), k_(k), c_(std::move(coefficients)), alpha_(std::move(alpha)) {
    if (c_.size() != k_ * k_ * n_) throw InputError("coupling coefficient array has the wrong size");
    if (alpha_.rows() != ix(k_) || alpha_.cols() != ix(n_)) {
        throw InputError("alpha must be k x n (" + std::to_string(k_) + " x " + std::to_string(n_) + ")");
    }
    for (double v : c_) {
        if (!std::isfinite(v) || v < 0.0) throw InputError("coupling coefficients must be non-negative");
    }
    if (!alpha_.allFinite() || (alpha_.array() < 0.0).any()) throw InputError("alpha must be non-negative");
    for (std::size_t l = 0; l < k_; ++l) {
        for (std::size_t j = 0; j < n_; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < k_; ++i) sum += c(i, l, j);
            if (std::abs(sum - 1.0) > kColumnTolerance) {
                throw InputError("coupling column (layer " + std::to_string(l) + ", node " + std::to_string(j) +
                                 ") sums to " + std::to_string(sum) + ", expected 1");
            }
        }
    }
}

Matrix CouplingScheme::at_node(std::size_t node) const {
    Matrix out(ix(k_), ix(k_));
    for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t l = 0; l < k_; ++l) out(ix(i), ix(l)) = c(i, l, node);
    return out;
}

bool CouplingScheme::is_closed() const { return (alpha_.array() == 1.0).all(); }

HierarchyHeuristic parse_heuristic(const std::string& s) {
    if (s == "density") return HierarchyHeuristic::density;
    if (s == "edge_ratio") return HierarchyHeuristic::edge_ratio;
    if (s == "global_proportion") return HierarchyHeuristic::global_proportion;
    throw InputError("unknown hierarchy heuristic '" + s + "'");
}

CouplingScheme scheme_equidistribution(const Multiplex& m) {
    const std::size_t k = m.layer_count();
    return {m.size(), k, std::vector<double>(k * k * m.size(), 1.0 / static_cast<double>(k)), ones_alpha(m)};
}

CouplingScheme scheme_hierarchical(const Multiplex& m, const Matrix& raw) {
    const auto k = ix(m.layer_count());
    if (raw.rows() != k || raw.cols() != k) throw InputError("hierarchical coupling must be k x k");
    if (!raw.allFinite() || (raw.array() < 0.0).any()) throw InputError("hierarchical coupling must be non-negative");
    Matrix c = raw;
    for (Eigen::Index l = 0; l < k; ++l) {
        const double sum = c.col(l).sum();
        if (sum <= 0.0) throw InputError("hierarchical coupling column " + std::to_string(l) + " sums to zero");
        c.col(l) /= sum;
    }
    return {m.size(), m.layer_count(), node_independent(c, m.size()), ones_alpha(m)};
}

CouplingScheme scheme_hierarchical(const Multiplex& m, HierarchyHeuristic heuristic) {
    const std::size_t k = m.layer_count();
    Matrix raw(ix(k), ix(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            const auto ei = static_cast<double>(m.layer(i).edge_count());
            const auto el = static_cast<double>(m.layer(l).edge_count());
            double v = 0.0;
            switch (heuristic) {
                case HierarchyHeuristic::density: v = m.size() >= 2 ? density(m.layer(i)) : 0.0; break;
                case HierarchyHeuristic::edge_ratio: v = el > 0.0 ? ei / el : 0.0; break;
                case HierarchyHeuristic::global_proportion: v = ei; break;
            }
            raw(ix(i), ix(l)) = v;
        }
    }
    return scheme_hierarchical(m, raw);
}

CouplingScheme scheme_unified_node(const Multiplex& m, const Matrix& alpha, const Matrix& share) {
    const std::size_t k = m.layer_count(), n = m.size();
    if (share.rows() != ix(k) || share.cols() != ix(n)) throw InputError("share must be k x n");
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(share.col(ix(j)).sum() - 1.0) > CouplingScheme::kColumnTolerance) {
            throw InputError("share column for node " + std::to_string(j) + " does not sum to 1");
        }
    }
    std::vector<double> c(k * k * n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < n; ++j) c[(i * k + l) * n + j] = share(ix(i), ix(j));
    return {n, k, std::move(c), alpha};
}

CouplingScheme scheme_identity(const Multiplex& m) {
    const auto k = ix(m.layer_count());
    return {m.size(), m.layer_count(), node_independent(Matrix::Identity(k, k), m.size()), ones_alpha(m)};
}

CouplingScheme scheme_from_json(const Multiplex& m, const json& config) {
    const std::size_t k = m.layer_count(), n = m.size();
    if (!config.is_object() || !config.contains("mode")) throw InputError("coupling config needs a 'mode'");
    const std::string mode = config["mode"].get<std::string>();
    const Matrix alpha = config.contains("alpha") ? matrix_from_json(config["alpha"], k, n, "alpha") : ones_alpha(m);

    auto with_alpha = [&](const CouplingScheme& s) {
        std::vector<double> c(k * k * n);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t l = 0; l < k; ++l)
                for (std::size_t j = 0; j < n; ++j) c[(i * k + l) * n + j] = s.c(i, l, j);
        return CouplingScheme(n, k, std::move(c), alpha);
    };

    if (mode == "equidistribution") return with_alpha(scheme_equidistribution(m));
    if (mode == "identity") return with_alpha(scheme_identity(m));
    if (mode == "hierarchical") {
        if (config.contains("c")) return with_alpha(scheme_hierarchical(m, matrix_from_json(config["c"], k, k, "c")));
        return with_alpha(scheme_hierarchical(m, parse_heuristic(config.value("heuristic", "global_proportion"))));
    }
    if (mode == "unified_node") {
        if (!config.contains("share")) throw InputError("unified_node coupling needs 'share'");
        return scheme_unified_node(m, alpha, matrix_from_json(config["share"], k, n, "share"));
    }
    if (mode == "explicit") {
        if (!config.contains("c")) throw InputError("explicit coupling needs 'c'");
        const json& jc = config["c"];
        std::vector<double> c(k * k * n);
        const bool per_node = jc.is_array() && !jc.empty() && jc[0].is_array() && !jc[0].empty() && jc[0][0].is_array();
        if (per_node) {
            if (jc.size() != n) throw InputError("per-node explicit coupling must list n matrices");
            for (std::size_t j = 0; j < n; ++j) {
                const Matrix cj = matrix_from_json(jc[j], k, k, "c");
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t l = 0; l < k; ++l) c[(i * k + l) * n + j] = cj(ix(i), ix(l));
            }
        } else {
            c = node_independent(matrix_from_json(jc, k, k, "c"), n);
        }
        return {n, k, std::move(c), alpha};
    }
    throw InputError("unknown coupling mode '" + mode + "'");
}

CouplingScheme scheme_from_spec(const Multiplex& m, const std::string& spec) {
    if (spec == "equidistribution") return scheme_equidistribution(m);
    if (spec == "identity") return scheme_identity(m);
    if (spec.rfind("hierarchical:", 0) == 0) return scheme_hierarchical(m, parse_heuristic(spec.substr(13)));
    std::ifstream in(spec);
    if (!in) throw InputError("coupling '" + spec + "' is neither a preset nor a readable file");
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("coupling config '" + spec + "': " + e.what());
    }
    return scheme_from_json(m, config);
}

SupraMatrix build_redistribution(const CouplingScheme& s, std::size_t dense_limit) {
    const SupraIndex idx{s.n(), s.k()};
    std::vector<Triplet> t;
    t.reserve(s.k() * s.k() * s.n());
    for (std::size_t i = 0; i < s.k(); ++i)
        for (std::size_t l = 0; l < s.k(); ++l)
            for (std::size_t j = 0; j < s.n(); ++j) {
                const double v = s.alpha(l, j) * s.c(i, l, j);
                if (v != 0.0) t.emplace_back(ix(idx.flatten(i, j)), ix(idx.flatten(l, j)), v);
            }
    return SupraMatrix::from_triplets(idx, SupraKind::redistribution, t, dense_limit).with_closed(s.is_closed());
}

SupraMatrix layer_dynamics(const Multiplex& m, DynamicsKind kind, std::size_t dense_limit) {
    const SupraIndex idx{m.size(), m.layer_count()};
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < idx.k; ++i) {
        const LayerGraph& layer = m.layer(i);
        if (kind == DynamicsKind::laplacian && layer.directed()) {
            throw InputError("laplacian dynamics requested on directed layer '" + layer.name() + "'");
        }
        const Matrix& w = layer.weights();
        const auto off = ix(i * idx.n);
        for (Eigen::Index b = 0; b < w.cols(); ++b) {
            const double out = w.col(b).sum();
            if (kind == DynamicsKind::random_walk && out == 0.0) {
                t.emplace_back(off + b, off + b, 1.0);
                continue;
            }
            for (Eigen::Index a = 0; a < w.rows(); ++a) {
                if (w(a, b) == 0.0) continue;
                switch (kind) {
                    case DynamicsKind::adjacency: t.emplace_back(off + a, off + b, w(a, b)); break;
                    case DynamicsKind::random_walk: t.emplace_back(off + a, off + b, w(a, b) / out); break;
                    case DynamicsKind::laplacian: t.emplace_back(off + a, off + b, -w(a, b)); break;
                }
            }
            if (kind == DynamicsKind::laplacian && out != 0.0) t.emplace_back(off + b, off + b, out);
        }
    }
    return SupraMatrix::from_triplets(idx, SupraKind::layer_dynamics, t, dense_limit).with_dynamics(kind);
}

namespace {

// Diagonal blocks times a block-diagonal factor: block (i, l) = diag(M_il) D_l.
SupraMatrix blockwise_product(const SupraMatrix& redistribution, const SupraMatrix& dynamics) {
    const SupraIndex& idx = redistribution.index();
    const auto n = static_cast<Eigen::Index>(idx.n);
    const Matrix& m = redistribution.to_dense();
    const Matrix& d = dynamics.to_dense();
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (std::size_t l = 0; l < idx.k; ++l) {
        const auto c = static_cast<Eigen::Index>(l) * n;
        const auto dl = d.block(c, c, n, n);
        for (std::size_t i = 0; i < idx.k; ++i) {
            const auto r = static_cast<Eigen::Index>(i) * n;
            out.block(r, c, n, n) = m.block(r, c, n, n).diagonal().asDiagonal() * dl;
        }
    }
    return {idx, SupraKind::multiplex_operator, std::move(out)};
}

}  // namespace

SupraMatrix build_operator(const SupraMatrix& redistribution, const SupraMatrix& dynamics) {
    if (redistribution.kind() != SupraKind::redistribution) {
        throw InputError("build_operator: left factor must be a redistribution matrix");
    }
    if (dynamics.kind() != SupraKind::layer_dynamics) {
        throw InputError("build_operator: right factor must be a layer dynamics matrix");
    }
    SupraMatrix op = (redistribution.is_dense() && dynamics.is_dense())
                         ? blockwise_product(redistribution, dynamics)
                         : multiply(redistribution, dynamics, SupraKind::multiplex_operator);
    if (dynamics.dynamics()) op = op.with_dynamics(*dynamics.dynamics());
    if (redistribution.closed()) op = op.with_closed(*redistribution.closed());
    return op;
}

MultiplexOperator make_operator(const Multiplex& m, const CouplingScheme& s, DynamicsKind kind,
                                std::size_t dense_limit) {
    if (s.n() != m.size() || s.k() != m.layer_count()) throw InputError("coupling scheme does not fit the multiplex");
    SupraMatrix redistribution = build_redistribution(s, dense_limit);
    SupraMatrix dynamics = layer_dynamics(m, kind, dense_limit);
    SupraMatrix op = build_operator(redistribution, dynamics);
    return {s, std::move(redistribution), std::move(dynamics), std::move(op)};
}

double transition_probability(const MultiplexOperator& op, NodeCopy from, NodeCopy to) {
    const SupraIndex& idx = op.op.index();
    if (from.layer >= idx.k || to.layer >= idx.k || from.node >= idx.n || to.node >= idx.n) {
        throw InputError("transition_probability: copy index out of range");
    }
    if (op.op.dynamics() != DynamicsKind::random_walk || !op.scheme.is_closed()) {
        throw InputError("transition probabilities need a closed scheme with random-walk dynamics");
    }
    return op.op.coeff(idx.flatten(to.layer, to.node), idx.flatten(from.layer, from.node));
}

}  // namespace muxdyn
