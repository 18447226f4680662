#include "muxdyn/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>

#include "muxdyn/error.hpp"

namespace muxdyn {

namespace {

/// Binarized arc lists, self-loops dropped.
struct ArcLists {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::vector<char>> has;  // has[src][dst]

    explicit ArcLists(const LayerGraph& g) : n(g.size()), out(n), has(n, std::vector<char>(n, 0)) {
        const Matrix& w = g.weights();
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t a = 0; a < n; ++a) {
                if (a != b && w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) > 0.0) {
                    out[b].push_back(a);
                    has[b][a] = 1;
                }
            }
        }
    }
    static ArcLists symmetric(const LayerGraph& g) {
        ArcLists s(g);
        for (std::size_t a = 0; a < s.n; ++a)
            for (std::size_t b = 0; b < s.n; ++b)
                if (s.has[a][b] && !s.has[b][a]) {
                    s.has[b][a] = 1;
                    s.out[b].push_back(a);
                }
        return s;
    }
};

double cyclic_transitivity(const ArcLists& g) {
    std::vector<std::size_t> in_deg(g.n, 0);
    for (std::size_t b = 0; b < g.n; ++b)
        for (std::size_t a : g.out[b]) ++in_deg[a];
    double two_paths = 0.0;
    double cycles = 0.0;
    for (std::size_t b = 0; b < g.n; ++b) {
        std::size_t back = 0;
        for (std::size_t c : g.out[b])
            if (g.has[c][b]) ++back;
        two_paths += static_cast<double>(in_deg[b] * g.out[b].size() - back);
    }
    for (std::size_t a = 0; a < g.n; ++a)
        for (std::size_t b : g.out[a])
            for (std::size_t c : g.out[b])
                if (c != a && g.has[c][a]) cycles += 1.0;
    return two_paths > 0.0 ? cycles / two_paths : 0.0;
}

class Bitset {
public:
    explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool none() const {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }
    Bitset operator&(const Bitset& o) const {
        Bitset r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
        return r;
    }
    std::size_t and_count(const Bitset& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
        return c;
    }
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                const int bit = std::countr_zero(w);
                f(i * 64 + static_cast<std::size_t>(bit));
                w &= w - 1;
            }
        }
    }

private:
    std::vector<std::uint64_t> words_;
};

// Bron-Kerbosch with Tomita pivoting, pruned by the current best size.
class MaxClique {
public:
    explicit MaxClique(const ArcLists& sym) : adj_(sym.n, Bitset(sym.n)) {
        for (std::size_t a = 0; a < sym.n; ++a)
            for (std::size_t b : sym.out[a]) adj_[a].set(b);
    }
    std::size_t run() {
        Bitset all(adj_.size());
        for (std::size_t i = 0; i < adj_.size(); ++i) all.set(i);
        expand(0, all);
        return best_;
    }

private:
    void expand(std::size_t depth, Bitset candidates) {
        if (candidates.none()) {
            best_ = std::max(best_, depth);
            return;
        }
        if (depth + candidates.count() <= best_) return;
        std::size_t pivot = 0, pivot_score = 0;
        bool first = true;
        candidates.for_each([&](std::size_t u) {
            const std::size_t s = candidates.and_count(adj_[u]);
            if (first || s > pivot_score) {
                pivot = u;
                pivot_score = s;
                first = false;
            }
        });
        std::vector<std::size_t> branch;
        candidates.for_each([&](std::size_t v) {
            if (!adj_[pivot].test(v)) branch.push_back(v);
        });
        for (std::size_t v : branch) {
            if (depth + candidates.count() <= best_) return;
            expand(depth + 1, candidates & adj_[v]);
            candidates.reset(v);
        }
    }

    std::vector<Bitset> adj_;
    std::size_t best_ = 0;
};

std::vector<std::vector<int>> bfs_all(const ArcLists& g) {
    std::vector<std::vector<int>> dist(g.n, std::vector<int>(g.n, -1));
    std::vector<std::size_t> queue;
    queue.reserve(g.n);
    for (std::size_t s = 0; s < g.n; ++s) {
        auto& d = dist[s];
        d[s] = 0;
        queue.clear();
        queue.push_back(s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t u = queue[head];
            for (std::size_t v : g.out[u]) {
                if (d[v] < 0) {
                    d[v] = d[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return dist;
}

std::optional<double> mean_distance(const std::vector<std::vector<int>>& dist) {
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t a = 0; a < dist.size(); ++a)
        for (std::size_t b = 0; b < dist.size(); ++b)
            if (a != b && dist[a][b] > 0) {
                total += dist[a][b];
                ++count;
            }
    if (count == 0) return std::nullopt;
    return total / static_cast<double>(count);
}

StatRow row_for(const LayerGraph& g, const std::string& name, const StatsOptions& opt,
                const std::vector<std::vector<int>>& dist) {
    StatRow r;
    r.graph = name;
    if (g.size() >= 2) r.density = density(g);
    r.transitivity = transitivity(g, opt.transitivity);
    r.reciprocity = reciprocity(g, opt.reciprocity);
    r.mean_degree = mean_degree(g);
    r.avg_path_length = mean_distance(dist);
    r.clique_number = clique_number(g);
    return r;
}

std::string fmt(const std::optional<double>& v) {
    if (!v) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return buf;
}

}  // namespace

std::string to_string(TransitivityDefinition d) {
    return d == TransitivityDefinition::cyclic ? "cyclic" : "symmetrized";
}

std::string to_string(ReciprocityDefinition d) {
    switch (d) {
        case ReciprocityDefinition::mutual_per_arc: return "mutual_per_arc";
        case ReciprocityDefinition::arc_fraction: return "arc_fraction";
        case ReciprocityDefinition::dyadic: return "dyadic";
        case ReciprocityDefinition::correlation: return "correlation";
    }
    return "?";
}

TransitivityDefinition parse_transitivity(const std::string& s) {
    if (s == "cyclic") return TransitivityDefinition::cyclic;
    if (s == "symmetrized") return TransitivityDefinition::symmetrized;
    throw InputError("unknown transitivity definition '" + s + "'");
}

ReciprocityDefinition parse_reciprocity(const std::string& s) {
    for (auto d : {ReciprocityDefinition::mutual_per_arc, ReciprocityDefinition::arc_fraction,
                   ReciprocityDefinition::dyadic, ReciprocityDefinition::correlation}) {
        if (to_string(d) == s) return d;
    }
    throw InputError("unknown reciprocity definition '" + s + "'");
}

double density(const LayerGraph& g) {
    const double n = static_cast<double>(g.size());
    if (g.size() < 2) throw InputError("density needs at least two nodes");
    const double pairs = g.directed() ? n * (n - 1.0) : n * (n - 1.0) / 2.0;
    return static_cast<double>(g.edge_count()) / pairs;
}

double transitivity(const LayerGraph& g, TransitivityDefinition def) {
    if (def == TransitivityDefinition::symmetrized) return cyclic_transitivity(ArcLists::symmetric(g));
    return cyclic_transitivity(ArcLists(g));
}

std::optional<double> reciprocity(const LayerGraph& g, ReciprocityDefinition def) {
    if (!g.directed()) return std::nullopt;
    const ArcLists arcs(g);
    double total = 0.0, mutual = 0.0, connected = 0.0;
    for (std::size_t a = 0; a < arcs.n; ++a) {
        for (std::size_t b = a + 1; b < arcs.n; ++b) {
            const int c = arcs.has[a][b] + arcs.has[b][a];
            total += c;
            if (c == 2) mutual += 1.0;
            if (c > 0) connected += 1.0;
        }
    }
    if (total == 0.0) return std::nullopt;
    switch (def) {
        case ReciprocityDefinition::mutual_per_arc: return mutual / total;
        case ReciprocityDefinition::arc_fraction: return 2.0 * mutual / total;
        case ReciprocityDefinition::dyadic: return mutual / connected;
        case ReciprocityDefinition::correlation: {
            const double n = static_cast<double>(arcs.n);
            const double dens = total / (n * (n - 1.0));
            if (dens >= 1.0) return std::nullopt;
            return (2.0 * mutual / total - dens) / (1.0 - dens);
        }
    }
    return std::nullopt;
}

double mean_degree(const LayerGraph& g) {
    if (g.size() == 0) return 0.0;
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.size());
}

std::vector<std::vector<int>> hop_distances(const LayerGraph& g) { return bfs_all(ArcLists(g)); }

std::optional<double> avg_path_length(const LayerGraph& g) { return mean_distance(hop_distances(g)); }

std::size_t clique_number(const LayerGraph& g) {
    if (g.size() == 0) return 0;
    return MaxClique(ArcLists::symmetric(g)).run();
}

StatsReport stats_report(const Multiplex& m, StatsOptions options) {
    StatsReport r;
    r.n = m.size();
    r.k = m.layer_count();
    r.options = options;

    std::vector<std::vector<std::vector<int>>> layer_dist;
    for (const auto& layer : m.layers()) {
        layer_dist.push_back(hop_distances(layer));
        r.layer_directed.push_back(layer.directed());
        r.per_layer.push_back(row_for(layer, layer.name(), options, layer_dist.back()));
    }
    const LayerGraph agg = aggregate(m);
    const auto agg_dist = hop_distances(agg);
    r.aggregate = row_for(agg, "aggregate", options, agg_dist);
    const LayerGraph ms = matched_sum(m);
    const auto ms_dist = hop_distances(ms);
    r.matched_sum = row_for(ms, "matched_sum", options, ms_dist);

    const SupraIndex idx{r.n, r.k};
    PathChecks& pc = r.paths;
    pc.aggregate_excess = std::numeric_limits<int>::min();
    pc.matched_excess = std::numeric_limits<int>::min();
    std::vector<double> on_layer_sum(r.k, 0.0);
    std::vector<std::size_t> on_layer_count(r.k, 0);
    for (std::size_t a = 0; a < r.n; ++a) {
        for (std::size_t b = 0; b < r.n; ++b) {
            if (a == b) continue;
            int best = -1;
            for (std::size_t i = 0; i < r.k; ++i) {
                const int d = layer_dist[i][a][b];
                if (d < 0) continue;
                if (best < 0 || d < best) best = d;
                on_layer_sum[i] += agg_dist[a][b];
                ++on_layer_count[i];
            }
            if (best < 0) continue;
            ++pc.pairs_checked;
            pc.aggregate_excess = std::max(pc.aggregate_excess, agg_dist[a][b] - best);
            for (std::size_t i = 0; i < r.k; ++i) {
                for (std::size_t j = 0; j < r.k; ++j) {
                    const int d = ms_dist[idx.flatten(i, a)][idx.flatten(j, b)];
                    // unreachable cannot happen when some layer connects a to b
                    pc.matched_excess = std::max(pc.matched_excess, d < 0 ? std::numeric_limits<int>::max() : d - best);
                }
            }
        }
    }
    if (pc.pairs_checked == 0) pc.aggregate_excess = pc.matched_excess = 0;
    for (std::size_t i = 0; i < r.k; ++i) {
        pc.aggregate_on_layer_pairs.push_back(
            on_layer_count[i] ? std::optional<double>(on_layer_sum[i] / static_cast<double>(on_layer_count[i]))
                              : std::nullopt);
    }
    return r;
}

std::vector<BoundCheck> verify_bounds(const StatsReport& r) {
    std::vector<BoundCheck> out;
    constexpr double eps = 1e-12;
    auto add = [&](std::string claim, bool asserted, double lhs, double rhs, bool holds) {
        out.push_back({std::move(claim), asserted, holds, lhs, rhs});
    };
    auto ge = [&](std::string claim, bool asserted, double lhs, double rhs) {
        add(std::move(claim), asserted, lhs, rhs, lhs >= rhs - eps);
    };
    auto le = [&](std::string claim, bool asserted, double lhs, double rhs) {
        add(std::move(claim), asserted, lhs, rhs, lhs <= rhs + eps);
    };
    auto max_of = [&](auto getter) {
        double v = -std::numeric_limits<double>::infinity();
        for (const auto& row : r.per_layer) v = std::max(v, getter(row));
        return v;
    };
    auto min_of = [&](auto getter) {
        double v = std::numeric_limits<double>::infinity();
        for (const auto& row : r.per_layer) v = std::min(v, getter(row));
        return v;
    };

    if (r.aggregate.density) {
        const auto dens = [](const StatRow& s) { return s.density.value_or(0.0); };
        ge("density: aggregate >= densest layer", true, *r.aggregate.density, max_of(dens));
        le("density: matched sum below every layer", false, *r.matched_sum.density, min_of(dens));
    }
    const auto trans = [](const StatRow& s) { return s.transitivity; };
    ge("transitivity: aggregate >= most transitive layer", false, r.aggregate.transitivity, max_of(trans));
    le("transitivity: matched sum below every layer", false, r.matched_sum.transitivity, min_of(trans));

    bool all_recip = true;
    for (const auto& row : r.per_layer) all_recip = all_recip && row.reciprocity.has_value();
    if (all_recip && r.aggregate.reciprocity && r.matched_sum.reciprocity) {
        const auto rec = [](const StatRow& s) { return *s.reciprocity; };
        ge("reciprocity: aggregate >= most reciprocal layer", false, *r.aggregate.reciprocity, max_of(rec));
        // A mediant with the all-mutual interlayer arcs; not provable for the correlation form.
        ge("reciprocity: matched sum >= least reciprocal layer",
           r.options.reciprocity != ReciprocityDefinition::correlation, *r.matched_sum.reciprocity, min_of(rec));
    }

    const auto deg = [](const StatRow& s) { return s.mean_degree; };
    ge("mean degree: aggregate >= max layer", true, r.aggregate.mean_degree, max_of(deg));
    ge("mean degree: matched sum >= min layer", true, r.matched_sum.mean_degree, min_of(deg));
    const bool all_undirected = std::none_of(r.layer_directed.begin(), r.layer_directed.end(), [](bool d) { return d; });
    const bool all_directed = std::all_of(r.layer_directed.begin(), r.layer_directed.end(), [](bool d) { return d; });
    if (all_undirected || all_directed) {
        double mean = 0.0;
        for (const auto& row : r.per_layer) mean += row.mean_degree;
        mean /= static_cast<double>(r.k);
        // each copy gains k-1 neighbours; as arcs that is k-1 in and k-1 out
        const double added = static_cast<double>(r.k - 1) * (all_directed ? 2.0 : 1.0);
        const double expected = mean + added;
        add("mean degree: matched sum = layer mean + interlayer degree", true, r.matched_sum.mean_degree, expected,
            std::abs(r.matched_sum.mean_degree - expected) <= 1e-9 * std::max(1.0, expected));
    }

    for (std::size_t i = 0; i < r.k; ++i) {
        const auto& layer = r.per_layer[i];
        const auto& agg = r.paths.aggregate_on_layer_pairs[i];
        if (layer.avg_path_length && agg) {
            le("path length: aggregate <= " + layer.graph + " on its reachable pairs", true, *agg,
               *layer.avg_path_length);
        }
    }
    le("path length: pairwise aggregate distance <= min layer distance", true, r.paths.aggregate_excess, 0.0);
    le("path length: matched-sum copy distance <= min layer distance + 2", true, r.paths.matched_excess, 2.0);

    const auto cliq = [](const StatRow& s) { return static_cast<double>(s.clique_number); };
    ge("clique number: aggregate >= max layer", true, cliq(r.aggregate), max_of(cliq));
    ge("clique number: matched sum >= max layer", true, cliq(r.matched_sum), max_of(cliq));
    return out;
}

std::string to_csv(const StatsReport& r) {
    std::ostringstream os;
    os << "graph,density,transitivity,reciprocity,mean_degree,avg_path_length,clique_number\n";
    auto write = [&](const StatRow& s) {
        os << s.graph << ',' << fmt(s.density) << ',' << fmt(s.transitivity) << ',' << fmt(s.reciprocity) << ','
           << fmt(s.mean_degree) << ',' << fmt(s.avg_path_length) << ',' << s.clique_number << '\n';
    };
    for (const auto& row : r.per_layer) write(row);
    write(r.aggregate);
    write(r.matched_sum);
    return os.str();
}

nlohmann::json to_json(const std::vector<BoundCheck>& checks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        arr.push_back({{"claim", c.claim}, {"asserted", c.asserted}, {"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    }
    return arr;
}

}  // namespace muxdyn
