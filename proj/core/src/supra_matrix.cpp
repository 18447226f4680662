#include "muxdyn/supra_matrix.hpp"

#include <cmath>

#include "muxdyn/error.hpp"

namespace muxdyn {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_square(const SupraIndex& index, Eigen::Index rows, Eigen::Index cols) {
    if (rows != cols || static_cast<std::size_t>(rows) != index.dim()) {
        throw InputError("supra-matrix is " + std::to_string(rows) + "x" + std::to_string(cols) + ", expected " +
                         std::to_string(index.dim()) + "x" + std::to_string(index.dim()));
    }
}

SupraMatrix from_layer(const LayerGraph& g, const SupraIndex& idx, SupraKind kind, bool laplacian,
                       std::size_t dense_limit) {
    std::vector<Triplet> t;
    const Matrix& w = g.weights();
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
        double col = 0.0;
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            if (w(r, c) == 0.0) continue;
            t.emplace_back(r, c, laplacian ? -w(r, c) : w(r, c));
            col += w(r, c);
        }
        if (laplacian && col != 0.0) t.emplace_back(c, c, col);
    }
    return SupraMatrix::from_triplets(idx, kind, t, dense_limit);
}

}  // namespace

const char* to_string(SupraKind kind) {
    switch (kind) {
        case SupraKind::redistribution: return "redistribution";
        case SupraKind::layer_dynamics: return "layer_dynamics";
        case SupraKind::multiplex_operator: return "multiplex_operator";
        case SupraKind::matched_sum_adjacency: return "matched_sum_adjacency";
        case SupraKind::supra_laplacian: return "supra_laplacian";
    }
    return "?";
}

const char* to_string(DynamicsKind kind) {
    switch (kind) {
        case DynamicsKind::adjacency: return "adjacency";
        case DynamicsKind::random_walk: return "random_walk";
        case DynamicsKind::laplacian: return "laplacian";
    }
    return "?";
}

DynamicsKind parse_dynamics(const std::string& s) {
    if (s == "adjacency") return DynamicsKind::adjacency;
    if (s == "random_walk") return DynamicsKind::random_walk;
    if (s == "laplacian") return DynamicsKind::laplacian;
    throw InputError("unknown dynamics '" + s + "' (expected adjacency, random_walk or laplacian)");
}

SupraMatrix::SupraMatrix(SupraIndex index, SupraKind kind, Matrix dense)
    : index_(index), kind_(kind), storage_(std::move(dense)) {
    const auto& d = std::get<Matrix>(storage_);
    check_square(index_, d.rows(), d.cols());
}

SupraMatrix::SupraMatrix(SupraIndex index, SupraKind kind, SparseMatrix sparse)
    : index_(index), kind_(kind), storage_(std::move(sparse)) {
    auto& s = std::get<SparseMatrix>(storage_);
    check_square(index_, s.rows(), s.cols());
    s.makeCompressed();
}

SupraMatrix SupraMatrix::from_triplets(SupraIndex index, SupraKind kind, const std::vector<Triplet>& entries,
                                       std::size_t dense_limit) {
    const auto dim = ix(index.dim());
    if (index.dim() <= dense_limit) {
        Matrix d = Matrix::Zero(dim, dim);
        for (const auto& t : entries) d(t.row(), t.col()) += t.value();
        return {index, kind, std::move(d)};
    }
    SparseMatrix s(dim, dim);
    s.setFromTriplets(entries.begin(), entries.end());
    return {index, kind, std::move(s)};
}

SupraMatrix SupraMatrix::with_dynamics(DynamicsKind d) const {
    SupraMatrix copy = *this;
    copy.dynamics_ = d;
    return copy;
}

SupraMatrix SupraMatrix::with_closed(bool c) const {
    SupraMatrix copy = *this;
    copy.closed_ = c;
    return copy;
}

double SupraMatrix::coeff(std::size_t row, std::size_t col) const {
    if (row >= dim() || col >= dim()) throw InputError("supra-matrix index out of range");
    if (const auto* d = std::get_if<Matrix>(&storage_)) return (*d)(ix(row), ix(col));
    return std::get<SparseMatrix>(storage_).coeff(ix(row), ix(col));
}

Vector SupraMatrix::apply(const Vector& v) const {
    if (static_cast<std::size_t>(v.size()) != dim()) throw InputError("vector length does not match operator");
    if (const auto* d = std::get_if<Matrix>(&storage_)) return (*d) * v;
    return std::get<SparseMatrix>(storage_) * v;
}

Matrix SupraMatrix::to_dense() const {
    if (const auto* d = std::get_if<Matrix>(&storage_)) return *d;
    return Matrix(std::get<SparseMatrix>(storage_));
}

SparseMatrix SupraMatrix::to_sparse() const {
    if (const auto* s = std::get_if<SparseMatrix>(&storage_)) return *s;
    return std::get<Matrix>(storage_).sparseView();
}

Vector SupraMatrix::column_sums() const {
    if (const auto* d = std::get_if<Matrix>(&storage_)) return d->colwise().sum().transpose();
    const auto& s = std::get<SparseMatrix>(storage_);
    return Eigen::RowVectorXd::Ones(s.rows()) * s;
}

Matrix SupraMatrix::block(std::size_t layer_row, std::size_t layer_col) const {
    if (layer_row >= index_.k || layer_col >= index_.k) throw InputError("block index out of range");
    const auto n = ix(index_.n);
    if (const auto* d = std::get_if<Matrix>(&storage_)) {
        return d->block(ix(layer_row) * n, ix(layer_col) * n, n, n);
    }
    return Matrix(std::get<SparseMatrix>(storage_).block(ix(layer_row) * n, ix(layer_col) * n, n, n));
}

double SupraMatrix::norm1() const {
    if (const auto* d = std::get_if<Matrix>(&storage_)) {
        return d->size() ? d->cwiseAbs().colwise().sum().maxCoeff() : 0.0;
    }
    const auto& s = std::get<SparseMatrix>(storage_);
    double best = 0.0;
    for (Eigen::Index c = 0; c < s.outerSize(); ++c) {
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(s, c); it; ++it) col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

bool SupraMatrix::nonnegative() const {
    bool ok = true;
    for_each_nonzero([&](std::size_t, std::size_t, double v) { ok = ok && v >= 0.0; });
    return ok;
}

SupraMatrix multiply(const SupraMatrix& lhs, const SupraMatrix& rhs, SupraKind kind) {
    if (lhs.index_.n != rhs.index_.n || lhs.index_.k != rhs.index_.k) {
        throw InputError("operator dimension mismatch: " + std::to_string(lhs.dim()) + " vs " +
                         std::to_string(rhs.dim()));
    }
    if (lhs.is_dense() && rhs.is_dense()) {
        return {lhs.index_, kind, Matrix(std::get<Matrix>(lhs.storage_) * std::get<Matrix>(rhs.storage_))};
    }
    SparseMatrix product = lhs.to_sparse() * rhs.to_sparse();
    return {lhs.index_, kind, std::move(product)};
}

SupraMatrix matched_sum_adjacency(const Multiplex& m, std::size_t dense_limit) {
    const SupraIndex idx{m.size(), m.layer_count()};
    return from_layer(matched_sum(m), idx, SupraKind::matched_sum_adjacency, false, dense_limit);
}

SupraMatrix supra_laplacian(const Multiplex& m, std::size_t dense_limit) {
    const SupraIndex idx{m.size(), m.layer_count()};
    return from_layer(matched_sum(m), idx, SupraKind::supra_laplacian, true, dense_limit);
}

}  // namespace muxdyn
