#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "muxdyn/multiplex.hpp"

namespace muxdyn {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Operators with n*k above this are stored sparse.
inline constexpr std::size_t kDenseLimit = 2000;

enum class SupraKind {
    redistribution,
    layer_dynamics,
    multiplex_operator,
    matched_sum_adjacency,
    supra_laplacian,
};

enum class DynamicsKind { adjacency, random_walk, laplacian };

const char* to_string(SupraKind kind);
const char* to_string(DynamicsKind kind);
DynamicsKind parse_dynamics(const std::string& s);

/// nk x nk operator over the supra-vector index space. Immutable.
class SupraMatrix {
public:
    SupraMatrix(SupraIndex index, SupraKind kind, Matrix dense);
    SupraMatrix(SupraIndex index, SupraKind kind, SparseMatrix sparse);

    /// Dense when dim <= dense_limit, sparse otherwise.
    static SupraMatrix from_triplets(SupraIndex index, SupraKind kind, const std::vector<Triplet>& entries,
                                     std::size_t dense_limit = kDenseLimit);

    const SupraIndex& index() const noexcept { return index_; }
    std::size_t dim() const noexcept { return index_.dim(); }
    SupraKind kind() const noexcept { return kind_; }
    bool is_dense() const noexcept { return std::holds_alternative<Matrix>(storage_); }

    /// Layer dynamics the operator was built from, when known.
    std::optional<DynamicsKind> dynamics() const noexcept { return dynamics_; }
    SupraMatrix with_dynamics(DynamicsKind d) const;
    /// Redistribution came from a closed scheme (all alpha = 1), when known.
    std::optional<bool> closed() const noexcept { return closed_; }
    SupraMatrix with_closed(bool c) const;

    double coeff(std::size_t row, std::size_t col) const;
    Vector apply(const Vector& v) const;
    Matrix to_dense() const;
    SparseMatrix to_sparse() const;
    Vector column_sums() const;
    /// Block (layer_row, layer_col) as a dense n x n matrix.
    Matrix block(std::size_t layer_row, std::size_t layer_col) const;
    /// Max absolute column sum.
    double norm1() const;
    bool nonnegative() const;

    /// Calls f(row, col, value) for every stored nonzero.
    template <class F>
    void for_each_nonzero(F&& f) const {
        if (const auto* d = std::get_if<Matrix>(&storage_)) {
            for (Eigen::Index c = 0; c < d->cols(); ++c)
                for (Eigen::Index r = 0; r < d->rows(); ++r)
                    if ((*d)(r, c) != 0.0) f(static_cast<std::size_t>(r), static_cast<std::size_t>(c), (*d)(r, c));
        } else {
            const auto& s = std::get<SparseMatrix>(storage_);
            for (Eigen::Index c = 0; c < s.outerSize(); ++c)
                for (SparseMatrix::InnerIterator it(s, c); it; ++it)
                    if (it.value() != 0.0)
                        f(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value());
        }
    }

    friend SupraMatrix multiply(const SupraMatrix& lhs, const SupraMatrix& rhs, SupraKind kind);

private:
    SupraIndex index_;
    SupraKind kind_;
    std::variant<Matrix, SparseMatrix> storage_;
    std::optional<DynamicsKind> dynamics_;
    std::optional<bool> closed_;
};

/// Product lhs * rhs; dense if both operands are dense.
SupraMatrix multiply(const SupraMatrix& lhs, const SupraMatrix& rhs, SupraKind kind);

/// Adjacency of the matched sum in supra-index order.
SupraMatrix matched_sum_adjacency(const Multiplex& m, std::size_t dense_limit = kDenseLimit);
/// Combinatorial Laplacian of the matched sum (the tensorial supra-Laplacian flattened).
SupraMatrix supra_laplacian(const Multiplex& m, std::size_t dense_limit = kDenseLimit);

}  // namespace muxdyn
