#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muxdyn/multiplex.hpp"
#include "muxdyn/supra_matrix.hpp"

namespace muxdyn {

struct Trajectory {
    /// Step counts for walks, times for diffusion. Strictly increasing.
    std::vector<double> times;
    std::vector<Vector> states;
    /// Sum of each sampled state.
    std::vector<double> totals;
    /// Norm of the generator applied to each sampled state (diffusion only).
    std::vector<double> deviation;
    bool converged = false;
    double final_residual = 0.0;
    std::size_t steps = 0;
    /// Largest |sum(v_t) - sum(v_0)| over every step, sampled or not.
    double max_mass_drift = 0.0;
    std::optional<double> decay_rate;
};

struct WalkOptions {
    double tol = 1e-10;
    std::size_t max_steps = 1'000'000;
    std::size_t max_samples = 1000;
};

/// Iterates v <- A v until ||v_{t+1} - v_t||_1 <= tol. A must be
/// column-stochastic and v0 a probability vector. final_residual is ||A v - v||_1.
Trajectory walk_stationary(const SupraMatrix& a, const Vector& v0, const WalkOptions& options = {});

struct DiffusionOptions {
    double K = 1.0;
    double dt = 1e-3;
    double T = 10.0;
    std::size_t max_samples = 1000;
    /// Fraction of the trajectory (by time, from the end) used to fit the decay rate.
    double tail_fraction = 0.5;
};

/// Largest stable explicit-Euler step 1.9 / (K * max |lambda|).
double stability_limit(const SupraMatrix& a, double K);

/// Explicit Euler for dv/dt = -K A v with A built from Laplacian layer dynamics.
Trajectory diffuse(const SupraMatrix& a, const Vector& v0, const DiffusionOptions& options = {});

/// dw/dt = -(K/k) sum_l L_l w on the n node values. Layers must be undirected.
Trajectory diffuse_reduced(const Multiplex& m, const Vector& w0, const DiffusionOptions& options = {});

/// Least-squares slope of log(deviation) over the tail, negated. Empty when fewer than two usable samples.
std::optional<double> fit_decay_rate(const std::vector<double>& times, const std::vector<double>& deviation,
                                     double tail_fraction = 0.5);

/// Header `t,<labels...>,total`, one row per sampled state.
std::string to_csv(const Trajectory& t, const std::vector<std::string>& labels);
nlohmann::json summary_json(const Trajectory& t);

}  // namespace muxdyn
