#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muxdyn/coupling.hpp"
#include "muxdyn/multiplex.hpp"
#include "muxdyn/supra_matrix.hpp"

namespace muxdyn {

using Complex = std::complex<double>;

struct SpectrumOptions {
    /// |lambda| <= zero_tolerance * max(1, ||A||_1) counts as zero.
    double zero_tolerance = 1e-8;
    /// Every reported pair must satisfy ||Av - lambda v|| <= residual_tolerance * max(1, ||A||_1) * ||v||.
    double residual_tolerance = 1e-8;
    /// Above this dimension only the leading and Fiedler pairs are computed, iteratively.
    std::size_t dense_limit = kDenseLimit;
    std::size_t max_iterations = 200000;
    double iteration_tolerance = 1e-12;
};

struct SpectralSummary {
    /// Sorted by descending real part, then descending imaginary part.
    std::vector<Complex> eigenvalues;
    /// False when only targeted pairs were computed.
    bool complete = true;
    /// Leading eigenvector when the leading eigenvalue is real and simple; unit 2-norm, positive sum.
    std::optional<Vector> leading_vector;
    /// Smallest nonzero eigenvalue when the spectrum is real and non-negative.
    std::optional<double> fiedler_value;
    std::size_t rank_estimate = 0;
    double zero_threshold = 0.0;
    /// Largest relative residual over the reported pairs.
    double max_residual = 0.0;
};

/// Full spectrum (dense) or leading/Fiedler pairs (iterative). Throws
/// NumericalError when a residual check or the iteration fails.
SpectralSummary spectrum(const SupraMatrix& a, const SpectrumOptions& options = {});

/// Eigenvalues of a dense matrix, sorted as in SpectralSummary.
std::vector<Complex> sorted_eigenvalues(const Matrix& a);

struct SpectrumMatch {
    bool matched = false;
    double max_error = 0.0;
};

/// Sort both multisets by (real, imag) and pair each value of `a` with the nearest unused value of `b`.
SpectrumMatch match_spectra(std::vector<Complex> a, std::vector<Complex> b, double tolerance);

/// Outcome of comparing the operator's spectrum with a reference spectrum.
struct SpectralCheck {
    std::string claim;
    bool passed = false;
    double max_error = 0.0;
    double tolerance = 0.0;
    std::vector<Complex> operator_eigenvalues;
    std::vector<Complex> reference_eigenvalues;
};

/// Nonzero spectrum of the equidistribution operator vs spectrum of (1/k) sum_l D_l.
SpectralCheck check_prop1(const Multiplex& m, DynamicsKind kind, double tolerance = 1e-8);

/// Same comparison for c(i, l, j) = weights(i): reference is sum_i weights(i) D_i. Weights must sum to 1.
SpectralCheck check_hierarchical_spectrum(const Multiplex& m, const Vector& weights, DynamicsKind kind,
                                          double tolerance = 1e-8);

struct MatrixProperties {
    bool stochastic = false;       ///< non-negative, columns sum to 1 within 1e-12
    bool irreducible = false;      ///< nonzero pattern strongly connected
    bool primitive = false;        ///< some power <= Wielandt bound is positive
    std::optional<bool> psd_spectrum;  ///< real spectrum, min >= -1e-10 (dense only)
    std::size_t period = 0;        ///< 0 when reducible
};

MatrixProperties check_matrix_properties(const SupraMatrix& a);

/// Nonzero pattern as adjacency lists: out[col] holds rows r with A(r, col) != 0.
std::vector<std::vector<std::size_t>> nonzero_pattern(const SupraMatrix& a);
bool strongly_connected(const std::vector<std::vector<std::size_t>>& out);
/// gcd of cycle lengths of a strongly connected pattern.
std::size_t pattern_period(const std::vector<std::vector<std::size_t>>& out);
/// Boolean powers up to the Wielandt bound dim^2 - 2 dim + 2. O(dim^3 log dim).
bool primitive_by_powers(const std::vector<std::vector<std::size_t>>& out);

struct Prop3Result {
    bool real_spectrum = false;
    double max_imaginary = 0.0;
    double min_eigenvalue = 0.0;
    std::size_t rank = 0;
    bool aggregate_connected = false;
    double max_orthogonality_defect = 0.0;
    bool passed = false;
};

/// Equidistribution operator with Laplacian layers: real non-negative spectrum,
/// rank n-1 when the aggregate is connected, orthogonal eigenvectors for distinct nonzero eigenvalues.
Prop3Result check_prop3(const Multiplex& m);

struct BoundReport {
    std::string claim;
    double lower = 0.0;
    double middle = 0.0;
    double upper = 0.0;
    bool holds = false;
};

/**
 * Weyl-type chains for the equidistribution operator with Laplacian layers:
 *   max_i fiedler_i <= k * fiedler <= fiedler_m + sum_{j != m} lead_j
 *   max_i lead_i    <= k * lead    <= sum_i lead_i
 * m is the layer with the largest leading eigenvalue (lowest index on ties).
 * Every layer must be undirected and connected.
 */
std::vector<BoundReport> check_prop4(const Multiplex& m, double tolerance = 1e-9);

/**
 * Brute-force general chain for index l in [1, n-1] (descending eigenvalue order):
 *   max_i lambda^i_{n-l} <= k lambda_{n-l}
 *     <= min over compositions (j_1..j_k) of n+k-(l+1) with 1 <= j_i <= n,
 *        min over layer permutations sigma, of sum_i lambda^{sigma(i)}_{j_i}.
 * Limited to n <= 5 and k <= 3.
 */
BoundReport check_general_bound(const Multiplex& m, std::size_t l, double tolerance = 1e-9);

struct Centrality {
    Vector supra;     ///< unit 1-norm, non-negative
    Vector per_node;  ///< sum over each node's copies
    double eigenvalue = 0.0;
};

/**
 * Perron vector of M * A for adjacency layer dynamics. A reducible operator is
 * rejected unless per_component is set, in which case each strongly connected
 * component gets its own Perron vector with mass proportional to its size.
 */
Centrality eigenvector_centrality(const Multiplex& m, const CouplingScheme& scheme, bool per_component = false,
                                  const SpectrumOptions& options = {});

struct EigenPair {
    double value = 0.0;
    Vector vector;
    std::size_t iterations = 0;
};

/// Power iteration on (A + shift I); returns the eigenpair of A. Throws NumericalError on non-convergence.
EigenPair power_iteration(const SupraMatrix& a, double shift, const Vector& start, std::size_t max_iterations,
                          double tolerance);

nlohmann::json to_json(const SpectralSummary& s);
nlohmann::json to_json(const SpectralCheck& c);
nlohmann::json to_json(const MatrixProperties& p);
nlohmann::json to_json(const Prop3Result& p);
nlohmann::json to_json(const BoundReport& b);

}  // namespace muxdyn
