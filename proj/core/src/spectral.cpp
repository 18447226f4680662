#include "muxdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "muxdyn/error.hpp"

namespace muxdyn {

namespace {

using json = nlohmann::json;
using Graph = std::vector<std::vector<std::size_t>>;

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

bool descending(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

bool is_symmetric(const Matrix& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

double norm1(const Matrix& a) { return a.size() ? a.cwiseAbs().colwise().sum().maxCoeff() : 0.0; }

Vector oriented(Vector v) {
    double s = v.sum();
    if (std::abs(s) < 1e-12 * v.cwiseAbs().sum()) {
        Eigen::Index at = 0;
        v.cwiseAbs().maxCoeff(&at);
        s = v(at);
    }
    if (s < 0) v = -v;
    const double nrm = v.norm();
    return nrm > 0 ? Vector(v / nrm) : v;
}

std::vector<double> descending_real(const std::vector<Complex>& eig) {
    std::vector<double> out;
    out.reserve(eig.size());
    for (const auto& z : eig) out.push_back(z.real());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

/// Eigenvalues of a symmetric matrix, descending.
std::vector<double> symmetric_eigenvalues(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

Matrix dense_for_check(const SupraMatrix& a) {
    if (a.dim() > 2 * kDenseLimit) {
        throw InputError("operator of dimension " + std::to_string(a.dim()) + " is too large for a dense spectral check");
    }
    return a.to_dense();
}

Matrix layer_block_sum(const SupraMatrix& dynamics, const Vector& weights) {
    const auto n = ix(dynamics.index().n);
    Matrix r = Matrix::Zero(n, n);
    for (std::size_t l = 0; l < dynamics.index().k; ++l) r += weights(ix(l)) * dynamics.block(l, l);
    return r;
}

SpectralCheck compare_nonzero_spectrum(const SupraMatrix& op, const Matrix& reference, const std::string& claim,
                                       double tolerance) {
    SpectralCheck out;
    out.claim = claim;
    const Matrix dense = dense_for_check(op);
    out.operator_eigenvalues = sorted_eigenvalues(dense);
    out.reference_eigenvalues = sorted_eigenvalues(reference);
    auto padded = out.reference_eigenvalues;
    padded.resize(out.operator_eigenvalues.size(), Complex(0.0, 0.0));
    std::sort(padded.begin(), padded.end(), descending);
    out.tolerance = tolerance * std::max(1.0, norm1(dense));
    const auto match = match_spectra(out.operator_eigenvalues, padded, out.tolerance);
    out.passed = match.matched;
    out.max_error = match.max_error;
    return out;
}

Graph reversed(const Graph& g) {
    Graph r(g.size());
    for (std::size_t u = 0; u < g.size(); ++u)
        for (auto v : g[u]) r[v].push_back(u);
    return r;
}

std::vector<bool> reach(const Graph& g, std::size_t from) {
    std::vector<bool> seen(g.size(), false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto v : g[u]) {
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return seen;
}

/// Kosaraju; returns component id per vertex.
std::vector<std::size_t> components(const Graph& g, std::size_t& count) {
    const std::size_t n = g.size();
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<bool> seen(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
        seen[s] = true;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < g[u].size()) {
                const auto v = g[u][next++];
                if (!seen[v]) {
                    seen[v] = true;
                    stack.emplace_back(v, 0);
                }
            } else {
                order.push_back(u);
                stack.pop_back();
            }
        }
    }
    const Graph r = reversed(g);
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> comp(n, unset);
    count = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[*it] != unset) continue;
        std::vector<std::size_t> stack{*it};
        comp[*it] = count;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (auto v : r[u]) {
                if (comp[v] == unset) {
                    comp[v] = count;
                    stack.push_back(v);
                }
            }
        }
        ++count;
    }
    return comp;
}

/// Perron pair of a dense non-negative matrix.
std::pair<double, Vector> dense_perron(const Matrix& a) {
    if (a.rows() == 1) return {a(0, 0), Vector::Ones(1)};
    Eigen::EigenSolver<Matrix> es(a, true);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
    }
    Vector v = oriented(es.eigenvectors().col(best).real());
    v = v.cwiseMax(0.0);
    return {es.eigenvalues()(best).real(), v / v.sum()};
}

/// Iteration on the orthogonal complement of the component indicators of a symmetric Laplacian-type matrix.
double laplacian_fiedler_iterative(const SupraMatrix& a, double lead, const SpectrumOptions& options) {
    const auto pattern = nonzero_pattern(a);
    std::size_t count = 0;
    const auto comp = components(pattern, count);
    std::vector<double> sizes(count, 0.0);
    for (auto c : comp) sizes[c] += 1.0;
    const auto project = [&](Vector& v) {
        std::vector<double> mean(count, 0.0);
        for (std::size_t i = 0; i < comp.size(); ++i) mean[comp[i]] += v(ix(i));
        for (std::size_t i = 0; i < comp.size(); ++i) v(ix(i)) -= mean[comp[i]] / sizes[comp[i]];
    };
    const double shift = 1.01 * lead;
    Vector v = Vector::LinSpaced(ix(a.dim()), 1.0, 2.0).array().sin();
    project(v);
    if (v.norm() == 0.0) return 0.0;
    v.normalize();
    double value = 0.0;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        Vector w = shift * v - a.apply(v);
        project(w);
        const double nrm = w.norm();
        if (nrm == 0.0) throw NumericalError("fiedler iteration collapsed");
        w /= nrm;
        value = shift - nrm;
        if ((w - v).norm() < options.iteration_tolerance) return value;
        v = std::move(w);
    }
    throw NumericalError("fiedler iteration did not converge in " + std::to_string(options.max_iterations) +
                         " steps");
}

SpectralSummary iterative_spectrum(const SupraMatrix& a, const SpectrumOptions& options) {
    SpectralSummary s;
    s.complete = false;
    const double scale = std::max(1.0, a.norm1());
    s.zero_threshold = options.zero_tolerance * scale;
    const double shift = a.nonnegative() ? 0.5 * scale : 0.0;
    const Vector start = Vector::Ones(ix(a.dim())) + 0.01 * Vector::LinSpaced(ix(a.dim()), 0.0, 1.0);
    auto lead = power_iteration(a, shift, start, options.max_iterations, options.iteration_tolerance);
    s.eigenvalues.emplace_back(lead.value, 0.0);
    s.leading_vector = oriented(lead.vector);
    s.max_residual = (a.apply(lead.vector) - lead.value * lead.vector).norm() / scale;

    const Vector sums = a.column_sums();
    const bool laplacian_form = sums.cwiseAbs().maxCoeff() <= 1e-12 * scale;
    bool symmetric = laplacian_form;
    if (symmetric) {
        const SparseMatrix sp = a.to_sparse();
        symmetric = SparseMatrix(sp - SparseMatrix(sp.transpose())).norm() <= 1e-14 * scale;
    }
    if (symmetric) {
        const double f = laplacian_fiedler_iterative(a, lead.value, options);
        if (f > s.zero_threshold) {
            s.fiedler_value = f;
            s.eigenvalues.emplace_back(f, 0.0);
        }
    }
    if (s.max_residual > options.residual_tolerance) {
        throw NumericalError("leading eigenpair residual " + std::to_string(s.max_residual) + " exceeds tolerance");
    }
    return s;
}

json complex_list(const std::vector<Complex>& v) {
    json out = json::array();
    for (const auto& z : v) {
        if (z.imag() == 0.0) {
            out.push_back(z.real());
        } else {
            out.push_back({z.real(), z.imag()});
        }
    }
    return out;
}

}  // namespace

std::vector<Complex> sorted_eigenvalues(const Matrix& a) {
    std::vector<Complex> out;
    if (a.size() == 0) return out;
    if (is_symmetric(a)) {
        for (double x : symmetric_eigenvalues(a)) out.emplace_back(x, 0.0);
        return out;
    }
    Eigen::EigenSolver<Matrix> es(a, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    out.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end(), descending);
    return out;
}

SpectralSummary spectrum(const SupraMatrix& a, const SpectrumOptions& options) {
    if (a.dim() > options.dense_limit) return iterative_spectrum(a, options);

    SpectralSummary s;
    const Matrix d = a.to_dense();
    const double scale = std::max(1.0, norm1(d));
    s.zero_threshold = options.zero_tolerance * scale;

    std::vector<Complex> values;
    Eigen::MatrixXcd vectors;
    if (is_symmetric(d)) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(d);
        if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) values.emplace_back(es.eigenvalues()(i), 0.0);
        vectors = es.eigenvectors().cast<Complex>();
    } else {
        Eigen::EigenSolver<Matrix> es(d, true);
        if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
        values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        vectors = es.eigenvectors();
    }

    const Eigen::MatrixXcd dc = d.cast<Complex>();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto v = vectors.col(ix(i));
        const double nrm = v.norm();
        if (nrm == 0.0) continue;
        const double r = (dc * v - values[i] * v).norm() / (nrm * scale);
        s.max_residual = std::max(s.max_residual, r);
    }
    if (s.max_residual > options.residual_tolerance) {
        throw NumericalError("eigenpair residual " + std::to_string(s.max_residual) + " exceeds tolerance");
    }

    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return descending(values[x], values[y]); });
    for (auto i : order) s.eigenvalues.push_back(values[i]);

    const double thr = s.zero_threshold;
    s.rank_estimate = static_cast<std::size_t>(
        std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [&](const Complex& z) { return std::abs(z) > thr; }));

    if (!s.eigenvalues.empty()) {
        const Complex top = s.eigenvalues.front();
        const bool simple = s.eigenvalues.size() == 1 || std::abs(s.eigenvalues[1] - top) > thr;
        if (std::abs(top.imag()) <= thr && simple) s.leading_vector = oriented(vectors.col(ix(order.front())).real());

        const bool real_nonneg = std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(), [&](const Complex& z) {
            return std::abs(z.imag()) <= thr && z.real() >= -thr;
        });
        if (real_nonneg) {
            for (auto it = s.eigenvalues.rbegin(); it != s.eigenvalues.rend(); ++it) {
                if (it->real() > thr) {
                    s.fiedler_value = it->real();
                    break;
                }
            }
        }
    }
    return s;
}

SpectrumMatch match_spectra(std::vector<Complex> a, std::vector<Complex> b, double tolerance) {
    SpectrumMatch out;
    if (a.size() != b.size()) return out;
    const auto ascending = [](const Complex& x, const Complex& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    };
    std::sort(a.begin(), a.end(), ascending);
    std::sort(b.begin(), b.end(), ascending);
    std::vector<bool> used(b.size(), false);
    for (const auto& z : a) {
        std::size_t best = b.size();
        double dist = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(z - b[j]);
            if (best == b.size() || d < dist) {
                best = j;
                dist = d;
            }
        }
        used[best] = true;
        out.max_error = std::max(out.max_error, dist);
    }
    out.matched = out.max_error <= tolerance;
    return out;
}

SpectralCheck check_prop1(const Multiplex& m, DynamicsKind kind, double tolerance) {
    const auto op = make_operator(m, scheme_equidistribution(m), kind);
    const double k = static_cast<double>(m.layer_count());
    const Matrix ref = layer_block_sum(op.dynamics, Vector::Constant(ix(m.layer_count()), 1.0 / k));
    return compare_nonzero_spectrum(op.op, ref, std::string("equidistribution:") + to_string(kind), tolerance);
}

SpectralCheck check_hierarchical_spectrum(const Multiplex& m, const Vector& weights, DynamicsKind kind,
                                          double tolerance) {
    const auto k = m.layer_count();
    if (static_cast<std::size_t>(weights.size()) != k) throw InputError("need one weight per layer");
    if ((weights.array() < 0.0).any()) throw InputError("layer weights must be non-negative");
    if (std::abs(weights.sum() - 1.0) > CouplingScheme::kColumnTolerance) {
        throw InputError("layer weights must sum to 1");
    }
    Matrix raw(ix(k), ix(k));
    for (std::size_t l = 0; l < k; ++l) raw.col(ix(l)) = weights;
    const auto op = make_operator(m, scheme_hierarchical(m, raw), kind);
    const Matrix ref = layer_block_sum(op.dynamics, weights);
    return compare_nonzero_spectrum(op.op, ref, std::string("hierarchical:") + to_string(kind), tolerance);
}

Graph nonzero_pattern(const SupraMatrix& a) {
    Graph out(a.dim());
    a.for_each_nonzero([&](std::size_t r, std::size_t c, double) { out[c].push_back(r); });
    return out;
}

bool strongly_connected(const Graph& out) {
    if (out.empty()) return false;
    const auto fwd = reach(out, 0);
    const auto bwd = reach(reversed(out), 0);
    return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
           std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

std::size_t pattern_period(const Graph& out) {
    if (!strongly_connected(out)) return 0;
    constexpr long unset = -1;
    std::vector<long> level(out.size(), unset);
    std::vector<std::size_t> queue{0};
    level[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto u = queue[head];
        for (auto v : out[u]) {
            if (level[v] == unset) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    long g = 0;
    for (std::size_t u = 0; u < out.size(); ++u)
        for (auto v : out[u]) g = std::gcd(g, std::labs(level[u] + 1 - level[v]));
    return static_cast<std::size_t>(g);
}

bool primitive_by_powers(const Graph& out) {
    const std::size_t n = out.size();
    if (n == 0) return false;
    const std::size_t words = (n + 63) / 64;
    // rows[r] has bit c set when entry (r, c) is nonzero.
    std::vector<std::vector<std::uint64_t>> rows(n, std::vector<std::uint64_t>(words, 0));
    for (std::size_t c = 0; c < n; ++c)
        for (auto r : out[c]) rows[r][c / 64] |= std::uint64_t{1} << (c % 64);

    const std::size_t bound = n * n - 2 * n + 2;
    std::size_t power = 1;
    while (power < bound) {
        std::vector<std::vector<std::uint64_t>> next(n, std::vector<std::uint64_t>(words, 0));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                if (!(rows[r][c / 64] >> (c % 64) & 1U)) continue;
                for (std::size_t w = 0; w < words; ++w) next[r][w] |= rows[c][w];
            }
        }
        rows = std::move(next);
        power *= 2;
    }
    const std::uint64_t tail = n % 64 ? (std::uint64_t{1} << (n % 64)) - 1 : ~std::uint64_t{0};
    for (const auto& row : rows) {
        for (std::size_t w = 0; w + 1 < words; ++w)
            if (row[w] != ~std::uint64_t{0}) return false;
        if ((row[words - 1] & tail) != tail) return false;
    }
    return true;
}

MatrixProperties check_matrix_properties(const SupraMatrix& a) {
    MatrixProperties p;
    const Vector sums = a.column_sums();
    p.stochastic = a.nonnegative() && (sums.array() - 1.0).abs().maxCoeff() <= 1e-12;

    const auto pattern = nonzero_pattern(a);
    if (a.dim() == 1) {
        p.irreducible = true;
        p.primitive = !pattern[0].empty();
        p.period = 1;
    } else {
        p.irreducible = strongly_connected(pattern);
        if (p.irreducible) {
            p.period = pattern_period(pattern);
            p.primitive = a.dim() <= 300 ? primitive_by_powers(pattern) : p.period == 1;
        }
    }

    if (a.dim() <= kDenseLimit) {
        const Matrix d = a.to_dense();
        const double scale = std::max(1.0, norm1(d));
        const auto eig = sorted_eigenvalues(d);
        p.psd_spectrum = std::all_of(eig.begin(), eig.end(), [&](const Complex& z) {
            return std::abs(z.imag()) <= 1e-9 * scale && z.real() >= -1e-10 * scale;
        });
    }
    return p;
}

Prop3Result check_prop3(const Multiplex& m) {
    Prop3Result out;
    const auto op = make_operator(m, scheme_equidistribution(m), DynamicsKind::laplacian);
    const Matrix d = dense_for_check(op.op);
    const double scale = std::max(1.0, norm1(d));
    const double zero = 1e-8 * scale;

    Eigen::EigenSolver<Matrix> es(d, true);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    const auto& values = es.eigenvalues();

    out.min_eigenvalue = values.size() ? values(0).real() : 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out.max_imaginary = std::max(out.max_imaginary, std::abs(values(i).imag()));
        out.min_eigenvalue = std::min(out.min_eigenvalue, values(i).real());
        if (std::abs(values(i)) > zero) ++out.rank;
    }
    out.real_spectrum = out.max_imaginary <= 1e-9 * scale;

    const LayerGraph agg = aggregate(m);
    std::vector<std::vector<std::size_t>> adj(m.size());
    const Matrix pat = agg.symmetrized();
    for (Eigen::Index c = 0; c < pat.cols(); ++c)
        for (Eigen::Index r = 0; r < pat.rows(); ++r)
            if (pat(r, c) != 0.0) adj[static_cast<std::size_t>(c)].push_back(static_cast<std::size_t>(r));
    const auto seen = reach(adj, 0);
    out.aggregate_connected = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });

    const Eigen::MatrixXcd vectors = es.eigenvectors();
    std::vector<Eigen::Index> nonzero;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (std::abs(values(i)) > zero) nonzero.push_back(i);
    for (std::size_t x = 0; x < nonzero.size(); ++x) {
        for (std::size_t y = x + 1; y < nonzero.size(); ++y) {
            const auto a = nonzero[x];
            const auto b = nonzero[y];
            if (std::abs(values(a) - values(b)) <= 1e-6 * scale) continue;
            const auto va = vectors.col(a);
            const auto vb = vectors.col(b);
            const double defect = std::abs(va.dot(vb)) / (va.norm() * vb.norm());
            out.max_orthogonality_defect = std::max(out.max_orthogonality_defect, defect);
        }
    }

    out.passed = out.real_spectrum && out.min_eigenvalue >= -1e-10 * scale &&
                 (!out.aggregate_connected || out.rank + 1 == m.size()) && out.max_orthogonality_defect <= 1e-8;
    return out;
}

std::vector<BoundReport> check_prop4(const Multiplex& m, double tolerance) {
    const auto n = m.size();
    const auto k = m.layer_count();
    if (n < 2) throw InputError("bounds need at least two nodes");
    std::vector<std::vector<double>> layer_eig;
    const SupraMatrix dyn = layer_dynamics(m, DynamicsKind::laplacian);
    for (std::size_t i = 0; i < k; ++i) {
        layer_eig.push_back(symmetric_eigenvalues(dyn.block(i, i)));
        if (layer_eig.back()[n - 2] <= 1e-9 * std::max(1.0, layer_eig.back()[0])) {
            throw InputError("layer '" + m.layer(i).name() + "' is not connected");
        }
    }
    const auto op = make_operator(m, scheme_equidistribution(m), DynamicsKind::laplacian);
    const auto eig = descending_real(sorted_eigenvalues(dense_for_check(op.op)));
    const double kk = static_cast<double>(k);

    // lowest index wins ties, up to rounding
    std::size_t top = 0;
    for (std::size_t i = 1; i < k; ++i)
        if (layer_eig[i][0] > layer_eig[top][0] + 1e-9 * std::max(1.0, layer_eig[top][0])) top = i;

    BoundReport fiedler{"fiedler", 0.0, kk * eig[n - 2], layer_eig[top][n - 2], false};
    BoundReport leading{"leading", 0.0, kk * eig[0], 0.0, false};
    for (std::size_t i = 0; i < k; ++i) {
        fiedler.lower = std::max(fiedler.lower, layer_eig[i][n - 2]);
        leading.lower = std::max(leading.lower, layer_eig[i][0]);
        leading.upper += layer_eig[i][0];
        if (i != top) fiedler.upper += layer_eig[i][0];
    }
    for (auto* b : {&fiedler, &leading}) {
        const double slack = tolerance * std::max(1.0, std::abs(b->upper));
        b->holds = b->lower <= b->middle + slack && b->middle <= b->upper + slack;
    }
    return {fiedler, leading};
}

BoundReport check_general_bound(const Multiplex& m, std::size_t l, double tolerance) {
    const auto n = m.size();
    const auto k = m.layer_count();
    if (n > 5 || k > 3) throw InputError("general bound is limited to n <= 5 and k <= 3");
    if (l < 1 || l + 1 > n) throw InputError("index must lie in [1, n-1]");

    const SupraMatrix dyn = layer_dynamics(m, DynamicsKind::laplacian);
    std::vector<std::vector<double>> layer_eig;
    for (std::size_t i = 0; i < k; ++i) layer_eig.push_back(symmetric_eigenvalues(dyn.block(i, i)));
    const auto op = make_operator(m, scheme_equidistribution(m), DynamicsKind::laplacian);
    const auto eig = descending_real(sorted_eigenvalues(dense_for_check(op.op)));

    const std::size_t target = n - l;  // 1-based
    BoundReport b;
    b.claim = "general_l=" + std::to_string(l);
    b.middle = static_cast<double>(k) * eig[target - 1];
    for (std::size_t i = 0; i < k; ++i) b.lower = std::max(b.lower, layer_eig[i][target - 1]);

    const std::size_t total = n + k - (l + 1);
    std::vector<std::size_t> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::size_t> j(k, 1);
    bool found = false;
    double best = 0.0;
    // Enumerate j in [1, n]^k lexicographically, keeping those summing to total.
    while (true) {
        if (std::accumulate(j.begin(), j.end(), std::size_t{0}) == total) {
            auto perm = sigma;
            do {
                double s = 0.0;
                for (std::size_t i = 0; i < k; ++i) s += layer_eig[perm[i]][j[i] - 1];
                if (!found || s < best) {
                    best = s;
                    found = true;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        std::size_t pos = 0;
        while (pos < k && j[pos] == n) j[pos++] = 1;
        if (pos == k) break;
        ++j[pos];
    }
    b.upper = best;
    const double slack = tolerance * std::max(1.0, std::abs(b.upper));
    b.holds = found && b.lower <= b.middle + slack && b.middle <= b.upper + slack;
    return b;
}

EigenPair power_iteration(const SupraMatrix& a, double shift, const Vector& start, std::size_t max_iterations,
                          double tolerance) {
    if (static_cast<std::size_t>(start.size()) != a.dim()) throw InputError("start vector has the wrong length");
    Vector v = start;
    if (v.norm() == 0.0) throw InputError("start vector is zero");
    v.normalize();
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        Vector w = a.apply(v) + shift * v;
        const double nrm = w.norm();
        if (nrm == 0.0) return {0.0, v, it};
        const double sign = w.dot(v) < 0 ? -1.0 : 1.0;
        w *= sign / nrm;
        if ((w - v).norm() < tolerance) {
            const double value = w.dot(a.apply(w));
            return {value, w, it};
        }
        v = std::move(w);
    }
    throw NumericalError("power iteration did not converge in " + std::to_string(max_iterations) + " steps");
}

Centrality eigenvector_centrality(const Multiplex& m, const CouplingScheme& scheme, bool per_component,
                                  const SpectrumOptions& options) {
    const auto op = make_operator(m, scheme, DynamicsKind::adjacency, options.dense_limit);
    const auto& a = op.op;
    const auto dim = a.dim();
    const auto pattern = nonzero_pattern(a);
    std::size_t count = 0;
    const auto comp = components(pattern, count);
    if (count > 1 && !per_component) {
        throw InputError("operator is reducible (" + std::to_string(count) +
                         " strongly connected components); centrality is not unique");
    }

    Centrality out;
    out.supra = Vector::Zero(ix(dim));
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < dim; ++i)
            if (comp[i] == c) members.push_back(i);
        const auto s = members.size();
        double value = 0.0;
        Vector v;
        if (s <= options.dense_limit) {
            Matrix sub(ix(s), ix(s));
            for (std::size_t x = 0; x < s; ++x)
                for (std::size_t y = 0; y < s; ++y) sub(ix(x), ix(y)) = a.coeff(members[x], members[y]);
            std::tie(value, v) = dense_perron(sub);
        } else {
            std::vector<Triplet> t;
            std::vector<std::size_t> local(dim, 0);
            for (std::size_t x = 0; x < s; ++x) local[members[x]] = x;
            a.for_each_nonzero([&](std::size_t r, std::size_t col, double w) {
                if (comp[r] == c && comp[col] == c) t.emplace_back(ix(local[r]), ix(local[col]), w);
            });
            const auto sub = SupraMatrix::from_triplets({s, 1}, SupraKind::multiplex_operator, t, 0);
            const double shift = 0.5 * std::max(1.0, sub.norm1());
            auto pair = power_iteration(sub, shift, Vector::Ones(ix(s)), options.max_iterations,
                                        options.iteration_tolerance);
            value = pair.value;
            v = oriented(pair.vector).cwiseMax(0.0);
            v /= v.sum();
        }
        out.eigenvalue = std::max(out.eigenvalue, value);
        const double mass = static_cast<double>(s) / static_cast<double>(dim);
        for (std::size_t x = 0; x < s; ++x) out.supra(ix(members[x])) = mass * v(ix(x));
    }

    const auto n = m.size();
    out.per_node = Vector::Zero(ix(n));
    for (std::size_t i = 0; i < m.layer_count(); ++i) out.per_node += out.supra.segment(ix(i * n), ix(n));
    return out;
}

json to_json(const SpectralSummary& s) {
    json j;
    j["eigenvalues"] = complex_list(s.eigenvalues);
    j["complete"] = s.complete;
    j["rank_estimate"] = s.rank_estimate;
    j["zero_threshold"] = s.zero_threshold;
    j["max_residual"] = s.max_residual;
    j["fiedler_value"] = s.fiedler_value ? json(*s.fiedler_value) : json(nullptr);
    if (s.leading_vector) {
        j["leading_vector"] = std::vector<double>(s.leading_vector->data(),
                                                  s.leading_vector->data() + s.leading_vector->size());
    } else {
        j["leading_vector"] = nullptr;
    }
    return j;
}

json to_json(const SpectralCheck& c) {
    return {{"claim", c.claim},
            {"passed", c.passed},
            {"max_error", c.max_error},
            {"tolerance", c.tolerance},
            {"operator_eigenvalues", complex_list(c.operator_eigenvalues)},
            {"reference_eigenvalues", complex_list(c.reference_eigenvalues)}};
}

json to_json(const MatrixProperties& p) {
    return {{"stochastic", p.stochastic},
            {"irreducible", p.irreducible},
            {"primitive", p.primitive},
            {"period", p.period},
            {"psd_spectrum", p.psd_spectrum ? json(*p.psd_spectrum) : json(nullptr)}};
}

json to_json(const Prop3Result& p) {
    return {{"real_spectrum", p.real_spectrum},
            {"max_imaginary", p.max_imaginary},
            {"min_eigenvalue", p.min_eigenvalue},
            {"rank", p.rank},
            {"aggregate_connected", p.aggregate_connected},
            {"max_orthogonality_defect", p.max_orthogonality_defect},
            {"passed", p.passed}};
}

json to_json(const BoundReport& b) {
    return {{"claim", b.claim}, {"lower", b.lower}, {"middle", b.middle}, {"upper", b.upper}, {"holds", b.holds}};
}

}  // namespace muxdyn
