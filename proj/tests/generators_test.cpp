#include <gtest/gtest.h>

#include "muxdyn/error.hpp"
#include "muxdyn/generators.hpp"

using namespace muxdyn;

TEST(Generators, ParseAndFormat) {
    EXPECT_EQ(to_string(parse_generator("er:0.05")), to_string(GeneratorSpec{ErdosRenyi{0.05}}));
    EXPECT_TRUE(std::holds_alternative<BarabasiAlbert>(parse_generator("BA:3")));
    const auto ws = std::get<WattsStrogatz>(parse_generator("ws:6:0.1"));
    EXPECT_EQ(ws.ring_degree, 6u);
    EXPECT_DOUBLE_EQ(ws.rewire, 0.1);
    EXPECT_EQ(parse_generator_mix("er:0.05/ba:3/ws:6:0.1").size(), 3u);
    EXPECT_EQ(parse_generator_mix("er:0.05,ba:3").size(), 2u);
    for (const char* bad : {"", "er", "er:x", "ba:0.5", "ws:6", "xx:1"}) {
        EXPECT_THROW(parse_generator(bad), InputError) << bad;
    }
}

TEST(Generators, Validation) {
    EXPECT_THROW(validate(ErdosRenyi{1.5}, 10), InputError);
    EXPECT_THROW(validate(BarabasiAlbert{0}, 10), InputError);
    EXPECT_THROW(validate(BarabasiAlbert{10}, 10), InputError);
    EXPECT_THROW(validate(WattsStrogatz{3, 0.1}, 10), InputError);
    EXPECT_THROW(validate(WattsStrogatz{10, 0.1}, 10), InputError);
    EXPECT_NO_THROW(validate(WattsStrogatz{6, 0.1}, 100));
}

TEST(Generators, ErdosRenyiExtremes) {
    const auto empty = generate_layer(ErdosRenyi{0.0}, 10, 0, "e");
    EXPECT_EQ(empty.edge_count(), 0u);
    const auto full = generate_layer(ErdosRenyi{1.0}, 10, 0, "f");
    EXPECT_EQ(full.edge_count(), 45u);
    EXPECT_FALSE(full.directed());
}

TEST(Generators, BarabasiAlbertEdgeCount) {
    for (std::size_t m : {1u, 2u, 3u}) {
        const std::size_t n = 50;
        const auto g = generate_layer(BarabasiAlbert{m}, n, 11, "ba");
        EXPECT_EQ(g.edge_count(), m * (m + 1) / 2 + (n - m - 1) * m);
        for (std::size_t v = m + 1; v < n; ++v) {
            std::size_t earlier = 0;
            for (std::size_t u = 0; u < v; ++u) earlier += g.has_arc(v, u) ? 1 : 0;
            EXPECT_EQ(earlier, m);
        }
    }
}

TEST(Generators, WattsStrogatzRing) {
    const std::size_t n = 20;
    const auto ring = generate_layer(WattsStrogatz{4, 0.0}, n, 3, "ws");
    EXPECT_EQ(ring.edge_count(), n * 2);
    for (std::size_t u = 0; u < n; ++u) {
        EXPECT_TRUE(ring.has_arc(u, (u + 1) % n));
        EXPECT_TRUE(ring.has_arc(u, (u + 2) % n));
        EXPECT_FALSE(ring.has_arc(u, (u + 3) % n));
    }
    const auto rewired = generate_layer(WattsStrogatz{4, 0.5}, n, 3, "ws");
    EXPECT_EQ(rewired.edge_count(), n * 2);
    EXPECT_FALSE(rewired.weights() == ring.weights());
}

TEST(Generators, Deterministic) {
    const auto mix = parse_generator_mix("er:0.05/ba:3/ws:6:0.1");
    const auto a = random_multiplex(100, 9, mix, 7);
    const auto b = random_multiplex(100, 9, mix, 7);
    const auto c = random_multiplex(100, 9, mix, 8);
    EXPECT_EQ(a, b);
    EXPECT_FALSE(a == c);
    ASSERT_EQ(a.layer_count(), 9u);
    // layers cycle through the mix: 0, 3, 6 are ER etc.
    EXPECT_EQ(a.layer(1).edge_count(), 3u * 4u / 2u + 96u * 3u);
    EXPECT_EQ(a.layer(4).edge_count(), a.layer(1).edge_count());
    EXPECT_EQ(a.layer(2).edge_count(), 300u);
    EXPECT_EQ(a.layer(8).edge_count(), 300u);
    EXPECT_FALSE(a.layer(0) == a.layer(3));
}

TEST(Generators, MixMustDivideK) {
    const auto mix = parse_generator_mix("er:0.1/ba:2");
    EXPECT_THROW(random_multiplex(10, 3, mix, 0), InputError);
    EXPECT_NO_THROW(random_multiplex(10, 4, mix, 0));
    EXPECT_EQ(random_multiplex(10, 1, parse_generator_mix("er:0"), 0).layer(0).edge_count(), 0u);
}
