#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muxdyn/multiplex.hpp"

namespace muxdyn {

/// Global statistics are computed on the binarized graph (weight > 0).

enum class TransitivityDefinition {
    /// trace(A^3) / #(directed 2-paths a->b->c, a != c). Equals the usual
    /// 3 * triangles / connected triples on undirected graphs.
    cyclic,
    /// 3 * triangles / connected triples of the underlying undirected graph.
    symmetrized,
};

enum class ReciprocityDefinition {
    mutual_per_arc,  ///< mutual dyads / arcs
    arc_fraction,    ///< reciprocated arcs / arcs
    dyadic,          ///< mutual dyads / connected dyads
    correlation,     ///< (r - density) / (1 - density), r = arc_fraction
};

struct StatsOptions {
    TransitivityDefinition transitivity = TransitivityDefinition::cyclic;
    ReciprocityDefinition reciprocity = ReciprocityDefinition::mutual_per_arc;
};

std::string to_string(TransitivityDefinition d);
std::string to_string(ReciprocityDefinition d);
TransitivityDefinition parse_transitivity(const std::string& s);
ReciprocityDefinition parse_reciprocity(const std::string& s);

/// Arcs / (n(n-1)) for directed graphs, edges / (n(n-1)/2) otherwise. Requires n >= 2.
double density(const LayerGraph& g);
/// 0 when there are no 2-paths.
double transitivity(const LayerGraph& g, TransitivityDefinition def = TransitivityDefinition::cyclic);
/// nullopt for undirected graphs and for graphs without arcs.
std::optional<double> reciprocity(const LayerGraph& g, ReciprocityDefinition def = ReciprocityDefinition::mutual_per_arc);
/// Total degree (in + out) averaged over nodes; 2 * edges / n when undirected.
double mean_degree(const LayerGraph& g);
/// Mean hop distance over ordered reachable pairs; nullopt if none are reachable.
std::optional<double> avg_path_length(const LayerGraph& g);
/// Exact maximum clique size of the underlying undirected graph (1 for edgeless, 0 for empty).
std::size_t clique_number(const LayerGraph& g);

/// Hop distances d(src, dst) following arc direction; -1 when unreachable.
std::vector<std::vector<int>> hop_distances(const LayerGraph& g);

struct StatRow {
    std::string graph;
    std::optional<double> density;
    double transitivity = 0.0;
    std::optional<double> reciprocity;
    double mean_degree = 0.0;
    std::optional<double> avg_path_length;
    std::size_t clique_number = 0;
};

/// Pairwise shortest-path comparisons that averages alone cannot settle.
struct PathChecks {
    /// Per layer: mean aggregate distance over the pairs reachable in that layer.
    std::vector<std::optional<double>> aggregate_on_layer_pairs;
    /// max over pairs reachable in some layer of d_aggregate - min_i d_i (<= 0 expected).
    int aggregate_excess = 0;
    /// max over such pairs and all copy pairs of d_matched - min_i d_i (<= 2 expected).
    int matched_excess = 0;
    std::size_t pairs_checked = 0;
};

struct StatsReport {
    std::size_t n = 0;
    std::size_t k = 0;
    StatsOptions options;
    std::vector<bool> layer_directed;
    std::vector<StatRow> per_layer;
    StatRow aggregate;
    StatRow matched_sum;
    PathChecks paths;
};

/// All six statistics on every layer, on the union aggregate and on the matched sum.
StatsReport stats_report(const Multiplex& m, StatsOptions options = {});

struct BoundCheck {
    std::string claim;
    bool asserted = false;  ///< provable; false means reported as a tendency only
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

std::vector<BoundCheck> verify_bounds(const StatsReport& r);

/// One row per graph; undefined values are empty fields.
std::string to_csv(const StatsReport& r);
nlohmann::json to_json(const std::vector<BoundCheck>& checks);

}  // namespace muxdyn
