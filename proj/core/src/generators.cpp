#include "muxdyn/generators.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "muxdyn/error.hpp"

namespace muxdyn {

namespace {

// Distribution helpers are written out so sequences do not depend on the
// standard library's distribution implementations.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t layer) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(layer), static_cast<std::uint32_t>(layer >> 32)};
        engine_.seed(seq);
    }
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t bound) {
        const std::uint64_t b = bound;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return static_cast<std::size_t>(x % b);
    }

private:
    std::mt19937_64 engine_;
};

using Adjacency = std::vector<std::set<std::size_t>>;

LayerGraph to_layer(const Adjacency& adj, std::string name) {
    const auto n = static_cast<Eigen::Index>(adj.size());
    Matrix w = Matrix::Zero(n, n);
    for (std::size_t a = 0; a < adj.size(); ++a)
        for (std::size_t b : adj[a]) w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1.0;
    return LayerGraph(std::move(name), false, std::move(w));
}

void link(Adjacency& adj, std::size_t a, std::size_t b) {
    adj[a].insert(b);
    adj[b].insert(a);
}

Adjacency erdos_renyi(const ErdosRenyi& spec, std::size_t n, Stream& rng) {
    Adjacency adj(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (rng.uniform() < spec.p) link(adj, a, b);
    return adj;
}

Adjacency barabasi_albert(const BarabasiAlbert& spec, std::size_t n, Stream& rng) {
    Adjacency adj(n);
    const std::size_t m = spec.attach;
    std::vector<std::size_t> pool;  // each node repeated once per incident edge
    for (std::size_t a = 0; a <= m; ++a) {
        for (std::size_t b = a + 1; b <= m; ++b) {
            link(adj, a, b);
            pool.push_back(a);
            pool.push_back(b);
        }
    }
    for (std::size_t v = m + 1; v < n; ++v) {
        std::set<std::size_t> targets;
        while (targets.size() < m) targets.insert(pool[rng.below(pool.size())]);
        for (std::size_t t : targets) {
            link(adj, v, t);
            pool.push_back(v);
            pool.push_back(t);
        }
    }
    return adj;
}

Adjacency watts_strogatz(const WattsStrogatz& spec, std::size_t n, Stream& rng) {
    Adjacency adj(n);
    const std::size_t half = spec.ring_degree / 2;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t j = 1; j <= half; ++j) link(adj, u, (u + j) % n);
    for (std::size_t j = 1; j <= half; ++j) {
        for (std::size_t u = 0; u < n; ++u) {
            const std::size_t v = (u + j) % n;
            if (rng.uniform() >= spec.rewire || !adj[u].count(v)) continue;
            if (adj[u].size() + 1 >= n) continue;  // u already adjacent to everyone
            std::size_t w;
            do w = rng.below(n);
            while (w == u || adj[u].count(w));
            adj[u].erase(v);
            adj[v].erase(u);
            link(adj, u, w);
        }
    }
    return adj;
}

LayerGraph generate_layer_stream(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed,
                                 std::uint64_t stream, std::string name) {
    Stream rng(seed, stream);
    Adjacency adj = std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ErdosRenyi>) return erdos_renyi(s, n, rng);
            else if constexpr (std::is_same_v<T, BarabasiAlbert>) return barabasi_albert(s, n, rng);
            else return watts_strogatz(s, n, rng);
        },
        spec);
    return to_layer(adj, std::move(name));
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

double to_double(const std::string& s, std::string_view spec) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError("bad number '" + s + "' in generator spec '" + std::string(spec) + "'");
}

std::size_t to_count(const std::string& s, std::string_view spec) {
    const double v = to_double(s, spec);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw InputError("expected a non-negative integer in generator spec '" + std::string(spec) + "'");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

GeneratorSpec parse_generator(std::string_view text) {
    std::vector<std::string> parts;
    std::stringstream ss{lower(text)};
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() == 2 && parts[0] == "er") return ErdosRenyi{to_double(parts[1], text)};
    if (parts.size() == 2 && parts[0] == "ba") return BarabasiAlbert{to_count(parts[1], text)};
    if (parts.size() == 3 && parts[0] == "ws") return WattsStrogatz{to_count(parts[1], text), to_double(parts[2], text)};
    throw InputError("unknown generator spec '" + std::string(text) + "' (expected er:p, ba:m or ws:k:p)");
}

std::vector<GeneratorSpec> parse_generator_mix(std::string_view text) {
    std::vector<GeneratorSpec> mix;
    std::string item;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, item, '/')) {
        std::stringstream inner(item);
        std::string spec;
        while (std::getline(inner, spec, ',')) {
            if (!spec.empty()) mix.push_back(parse_generator(spec));
        }
    }
    if (mix.empty()) throw InputError("empty generator mix");
    return mix;
}

std::string to_string(const GeneratorSpec& spec) {
    std::ostringstream os;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ErdosRenyi>) os << "er:" << s.p;
            else if constexpr (std::is_same_v<T, BarabasiAlbert>) os << "ba:" << s.attach;
            else os << "ws:" << s.ring_degree << ':' << s.rewire;
        },
        spec);
    return os.str();
}

void validate(const GeneratorSpec& spec, std::size_t n) {
    std::visit(
        [n](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ErdosRenyi>) {
                if (!(s.p >= 0.0 && s.p <= 1.0)) throw InputError("ER probability must lie in [0,1]");
            } else if constexpr (std::is_same_v<T, BarabasiAlbert>) {
                if (s.attach == 0) throw InputError("BA attachment count must be at least 1");
                if (s.attach >= n) throw InputError("BA attachment count must be smaller than n");
            } else {
                if (s.ring_degree % 2 != 0) throw InputError("WS ring degree must be even");
                if (s.ring_degree >= n) throw InputError("WS ring degree must be smaller than n");
                if (!(s.rewire >= 0.0 && s.rewire <= 1.0)) throw InputError("WS rewiring probability must lie in [0,1]");
            }
        },
        spec);
}

LayerGraph generate_layer(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed, std::string name) {
    validate(spec, n);
    return generate_layer_stream(spec, n, seed, 0, std::move(name));
}

Multiplex random_multiplex(std::size_t n, std::size_t k, const std::vector<GeneratorSpec>& mix,
                           std::uint64_t seed) {
    if (n == 0 || k == 0) throw InputError("random multiplex needs n >= 1 and k >= 1");
    if (mix.empty() || mix.size() > k || k % mix.size() != 0) {
        throw InputError("generator mix length must divide the layer count");
    }
    for (const auto& spec : mix) validate(spec, n);
    std::vector<LayerGraph> layers;
    for (std::size_t i = 0; i < k; ++i) {
        layers.push_back(generate_layer_stream(mix[i % mix.size()], n, seed, i, "layer" + std::to_string(i + 1)));
    }
    return Multiplex(std::move(layers));
}

}  // namespace muxdyn
