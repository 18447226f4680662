#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "muxdyn/multiplex.hpp"

namespace muxdyn {

struct ErdosRenyi {
    double p = 0.0;
};
struct BarabasiAlbert {
    std::size_t attach = 1;
};
struct WattsStrogatz {
    std::size_t ring_degree = 2;  ///< even
    double rewire = 0.0;
};

using GeneratorSpec = std::variant<ErdosRenyi, BarabasiAlbert, WattsStrogatz>;

/// "er:0.05", "ba:3", "ws:6:0.1" (case-insensitive).
GeneratorSpec parse_generator(std::string_view text);
/// Slash- or comma-separated list of generator specs.
std::vector<GeneratorSpec> parse_generator_mix(std::string_view text);
std::string to_string(const GeneratorSpec& spec);

/// Throws InputError when the spec cannot produce a graph on n nodes.
void validate(const GeneratorSpec& spec, std::size_t n);

/// One undirected, unweighted layer. Deterministic in (spec, n, seed).
LayerGraph generate_layer(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed, std::string name);

/**
 * k undirected layers on n nodes; layer i uses mix[i % mix.size()].
 * mix.size() must divide k. Each layer draws from its own stream seeded by
 * (seed, i), so layers are independent and the result is reproducible.
 */
Multiplex random_multiplex(std::size_t n, std::size_t k, const std::vector<GeneratorSpec>& mix,
                           std::uint64_t seed);

}  // namespace muxdyn
