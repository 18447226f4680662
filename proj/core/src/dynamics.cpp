#include "muxdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Eigenvalues>

#include "muxdyn/error.hpp"
#include "muxdyn/spectral.hpp"

namespace muxdyn {

namespace {

std::size_t stride_for(std::size_t steps, std::size_t samples) {
    samples = std::max<std::size_t>(samples, 1);
    return std::max<std::size_t>(1, (steps + samples - 1) / samples);
}

void check_finite(const Vector& v, double t) {
    if (!v.allFinite()) throw NumericalError("state became non-finite at t=" + std::to_string(t));
}

std::size_t step_count(const DiffusionOptions& o) {
    if (!(o.K > 0.0) || !(o.dt > 0.0) || !(o.T > 0.0)) throw InputError("K, dt and T must be positive");
    return static_cast<std::size_t>(std::ceil(o.T / o.dt - 1e-9));
}

template <class Apply>
Trajectory integrate(Apply&& apply, Vector v, const DiffusionOptions& o) {
    const std::size_t steps = step_count(o);
    const std::size_t stride = stride_for(steps, o.max_samples);
    const double total0 = v.sum();
    Trajectory t;
    auto sample = [&](std::size_t s, const Vector& gen) {
        t.times.push_back(static_cast<double>(s) * o.dt);
        t.states.push_back(v);
        t.totals.push_back(v.sum());
        t.deviation.push_back(gen.norm());
    };
    Vector gen = apply(v);
    sample(0, gen);
    for (std::size_t s = 1; s <= steps; ++s) {
        v -= o.K * o.dt * gen;
        gen = apply(v);
        t.max_mass_drift = std::max(t.max_mass_drift, std::abs(v.sum() - total0));
        if (s % stride == 0 || s == steps) {
            check_finite(v, static_cast<double>(s) * o.dt);
            sample(s, gen);
        }
    }
    t.steps = steps;
    t.converged = true;
    t.final_residual = gen.norm();
    t.decay_rate = fit_decay_rate(t.times, t.deviation, o.tail_fraction);
    return t;
}

}  // namespace

Trajectory walk_stationary(const SupraMatrix& a, const Vector& v0, const WalkOptions& options) {
    if (static_cast<std::size_t>(v0.size()) != a.dim()) throw InputError("initial state has the wrong length");
    if (!a.nonnegative() || (a.column_sums().array() - 1.0).abs().maxCoeff() > 1e-12) {
        throw InputError("walk operator is not column-stochastic");
    }
    if ((v0.array() < 0.0).any() || std::abs(v0.sum() - 1.0) > 1e-12) {
        throw InputError("initial state must be a probability vector");
    }
    Trajectory t;
    const std::size_t stride = stride_for(options.max_steps, options.max_samples);
    Vector v = v0;
    t.times.push_back(0.0);
    t.states.push_back(v);
    t.totals.push_back(v.sum());
    std::size_t s = 0;
    while (s < options.max_steps) {
        Vector next = a.apply(v);
        ++s;
        t.max_mass_drift = std::max(t.max_mass_drift, std::abs(next.sum() - 1.0));
        const double change = (next - v).lpNorm<1>();
        v = std::move(next);
        if (change <= options.tol) {
            t.converged = true;
            break;
        }
        if (s % stride == 0) {
            check_finite(v, static_cast<double>(s));
            t.times.push_back(static_cast<double>(s));
            t.states.push_back(v);
            t.totals.push_back(v.sum());
        }
    }
    check_finite(v, static_cast<double>(s));
    if (t.times.back() != static_cast<double>(s)) {
        t.times.push_back(static_cast<double>(s));
        t.states.push_back(v);
        t.totals.push_back(v.sum());
    }
    t.steps = s;
    t.final_residual = (a.apply(v) - v).lpNorm<1>();
    return t;
}

double stability_limit(const SupraMatrix& a, double K) {
    if (!(K > 0.0)) throw InputError("K must be positive");
    double lambda = 0.0;
    if (a.dim() <= kDenseLimit) {
        for (const auto& z : sorted_eigenvalues(a.to_dense())) lambda = std::max(lambda, std::abs(z));
    } else {
        lambda = std::abs(spectrum(a).eigenvalues.front());
    }
    if (lambda == 0.0) return std::numeric_limits<double>::infinity();
    return 1.9 / (K * lambda);
}

Trajectory diffuse(const SupraMatrix& a, const Vector& v0, const DiffusionOptions& options) {
    if (static_cast<std::size_t>(v0.size()) != a.dim()) throw InputError("initial state has the wrong length");
    const bool laplacian =
        a.kind() == SupraKind::supra_laplacian || a.dynamics() == std::optional<DynamicsKind>(DynamicsKind::laplacian);
    if (!laplacian) throw InputError("diffusion requires Laplacian layer dynamics");
    step_count(options);
    const double limit = stability_limit(a, options.K);
    if (options.dt > limit) {
        throw InputError("dt=" + std::to_string(options.dt) + " exceeds the stability limit " + std::to_string(limit));
    }
    return integrate([&](const Vector& v) { return a.apply(v); }, v0, options);
}

Trajectory diffuse_reduced(const Multiplex& m, const Vector& w0, const DiffusionOptions& options) {
    const auto n = m.size();
    if (static_cast<std::size_t>(w0.size()) != n) throw InputError("initial state has the wrong length");
    std::vector<Triplet> entries;
    const double k = static_cast<double>(m.layer_count());
    for (const auto& g : m.layers()) {
        if (g.directed()) throw InputError("reduced diffusion requires undirected layers");
        const Matrix& w = g.weights();
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            for (Eigen::Index r = 0; r < w.rows(); ++r) {
                if (w(r, c) == 0.0) continue;
                entries.emplace_back(r, c, -w(r, c) / k);
                entries.emplace_back(c, c, w(r, c) / k);
            }
        }
    }
    const auto r = SupraMatrix::from_triplets({n, 1}, SupraKind::supra_laplacian, entries);
    step_count(options);
    const double limit = stability_limit(r, options.K);
    if (options.dt > limit) {
        throw InputError("dt=" + std::to_string(options.dt) + " exceeds the stability limit " + std::to_string(limit));
    }
    return integrate([&](const Vector& v) { return r.apply(v); }, w0, options);
}

std::optional<double> fit_decay_rate(const std::vector<double>& times, const std::vector<double>& deviation,
                                     double tail_fraction) {
    if (times.size() != deviation.size() || times.empty()) return std::nullopt;
    const double start = times.back() - tail_fraction * (times.back() - times.front());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < start || !(deviation[i] > 1e-300)) continue;
        const double y = std::log(deviation[i]);
        sx += times[i];
        sy += y;
        sxx += times[i] * times[i];
        sxy += times[i] * y;
        ++count;
    }
    if (count < 2) return std::nullopt;
    const double c = static_cast<double>(count);
    const double denom = c * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return -(c * sxy - sx * sy) / denom;
}

std::string to_csv(const Trajectory& t, const std::vector<std::string>& labels) {
    if (!t.states.empty() && static_cast<std::size_t>(t.states.front().size()) != labels.size()) {
        throw InputError("label count does not match the state length");
    }
    std::string out = "t";
    for (const auto& l : labels) out += "," + l;
    out += ",total\n";
    char buf[32];
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", t.times[i]);
        out += buf;
        for (Eigen::Index j = 0; j < t.states[i].size(); ++j) {
            std::snprintf(buf, sizeof buf, ",%.12g", t.states[i](j));
            out += buf;
        }
        std::snprintf(buf, sizeof buf, ",%.12g\n", t.states[i].sum());
        out += buf;
    }
    return out;
}

nlohmann::json summary_json(const Trajectory& t) {
    nlohmann::json j;
    j["converged"] = t.converged;
    j["steps"] = t.steps;
    j["final_residual"] = t.final_residual;
    j["max_mass_drift"] = t.max_mass_drift;
    j["samples"] = t.states.size();
    j["decay_rate"] = t.decay_rate ? nlohmann::json(*t.decay_rate) : nlohmann::json(nullptr);
    if (!t.totals.empty()) {
        j["initial_total"] = t.totals.front();
        j["final_total"] = t.totals.back();
    }
    return j;
}

}  // namespace muxdyn
