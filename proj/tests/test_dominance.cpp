#include <gtest/gtest.h>

#include <random>

#include "multichan/dominance.hpp"
#include "oracles.hpp"

using namespace multichan;

TEST(DominanceSet, Examples)
{
    EXPECT_EQ(dominance_set(CommunicationStructure({{1, 1}, {0, 1}})), (DominanceSet{{0, 1}}));
    EXPECT_TRUE(dominance_set(CommunicationStructure::private_channels(5)).empty());
    EXPECT_TRUE(dominance_set(network_structure(NetworkGraph::circle(4))).empty());
    // identical rows dominate each other
    EXPECT_EQ(dominance_set(CommunicationStructure({{1, 0}, {1, 0}})), (DominanceSet{{0, 1}, {1, 0}}));
}

TEST(DominanceSet, AllThreeByThreeMatchDefinition)
{
    for (unsigned long bits = 0; bits < 512; ++bits) {
        const auto raw = oracle::matrix_from_bits(bits, 3, 3);
        DominanceSet expected;
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) {
                if (a != b && oracle::row_dominates(raw, a, b)) {
                    expected.emplace(a, b);
                }
            }
        }
        EXPECT_EQ(dominance_set(CommunicationStructure(raw)), expected) << bits;
    }
}

TEST(DominanceSet, TransitiveUpToTies)
{
    for (unsigned long bits = 0; bits < 4096; bits += 7) {
        const CommunicationStructure m(oracle::matrix_from_bits(bits, 4, 3));
        const auto s = dominance_set(m);
        for (const auto& [a, b] : s) {
            for (const auto& [b2, c] : s) {
                if (b2 == b && c != a && !s.contains({c, a})) {
                    EXPECT_TRUE(s.contains({a, c}));
                }
            }
        }
    }
}

TEST(Superiority, Examples)
{
    const auto id2 = CommunicationStructure::private_channels(2);
    const CommunicationStructure chain({{1, 1}, {0, 1}});
    EXPECT_TRUE(is_superior(id2, chain));
    EXPECT_TRUE(is_superior(chain, chain));
    EXPECT_FALSE(is_superior(chain, id2));
    EXPECT_THROW(is_superior(id2, CommunicationStructure::private_channels(3)), Error);
    // channel counts may differ
    EXPECT_TRUE(is_superior(sperner_structure(3), CommunicationStructure({{1}, {1}, {1}})));
}

TEST(Superiority, PreorderOnRandomTriples)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<unsigned long> bits(0, 511);
    for (int trial = 0; trial < 2000; ++trial) {
        const CommunicationStructure a(oracle::matrix_from_bits(bits(rng), 3, 3));
        const CommunicationStructure b(oracle::matrix_from_bits(bits(rng), 3, 3));
        const CommunicationStructure c(oracle::matrix_from_bits(bits(rng), 3, 3));
        EXPECT_TRUE(is_superior(a, a));
        if (is_superior(a, b) && is_superior(b, c)) {
            EXPECT_TRUE(is_superior(a, c));
        }
        EXPECT_TRUE(is_superior(CommunicationStructure::private_channels(3), a));
    }
}

TEST(DominationGraph, Examples)
{
    const auto star = domination_graph(CommunicationStructure({{1, 1}, {1, 0}, {0, 1}}));
    EXPECT_EQ(star.edges, (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}}));
    EXPECT_TRUE(star.is_forest);
    EXPECT_EQ(star.roots(), (std::vector<std::size_t>{0}));

    const auto flat = domination_graph(CommunicationStructure::private_channels(3));
    EXPECT_TRUE(flat.edges.empty());
    EXPECT_TRUE(flat.is_forest);

    const auto two_parents = domination_graph(CommunicationStructure({{1, 1, 0}, {0, 1, 1}, {0, 1, 0}}));
    EXPECT_EQ(two_parents.edges, (std::set<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 2}}));
    EXPECT_FALSE(two_parents.is_forest);

    EXPECT_THROW(domination_graph(CommunicationStructure({{1, 0}, {1, 0}})), Error);
}

TEST(DominationGraph, ChainKeepsOnlyCoveringEdges)
{
    const auto g = domination_graph(CommunicationStructure({{1, 1, 1}, {0, 1, 1}, {0, 0, 1}}));
    EXPECT_EQ(g.edges, (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}}));
    EXPECT_TRUE(g.is_forest);
    EXPECT_EQ(g.parent[2], std::optional<std::size_t>(1));
}

TEST(DominationGraph, CoveringEdgesMatchBruteForce)
{
    for (unsigned long bits = 0; bits < 512; ++bits) {
        const auto raw = oracle::matrix_from_bits(bits, 3, 3);
        if (raw[0] == raw[1] || raw[0] == raw[2] || raw[1] == raw[2]) {
            continue;
        }
        std::set<std::pair<std::size_t, std::size_t>> expected;
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) {
                if (a == b || !oracle::row_dominates(raw, a, b)) {
                    continue;
                }
                const std::size_t c = 3 - a - b;
                if (!(oracle::row_dominates(raw, a, c) && oracle::row_dominates(raw, c, b))) {
                    expected.emplace(a, b);
                }
            }
        }
        EXPECT_EQ(domination_graph(CommunicationStructure(raw)).edges, expected) << bits;
    }
}

TEST(Sperner, ChannelCounts)
{
    const std::vector<std::pair<std::size_t, unsigned>> table{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {6, 4}, {7, 5}};
    for (const auto& [k, m] : table) {
        EXPECT_EQ(sperner_channel_count(k), m) << k;
        EXPECT_EQ(sperner_structure(k).channels(), m);
    }
    const auto s6 = sperner_structure(6);
    EXPECT_EQ(s6.to_matrix(), (std::vector<std::vector<int>>{
                                  {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}}));
    EXPECT_EQ(sperner_structure(2).to_matrix(), (std::vector<std::vector<int>>{{1, 0}, {0, 1}}));
}

TEST(Sperner, NoDominatingPairsUpToFifty)
{
    for (std::size_t k = 1; k <= 50; ++k) {
        const auto s = sperner_structure(k);
        EXPECT_EQ(s.receivers(), k);
        EXPECT_TRUE(dominance_set(s).empty()) << k;
    }
}

TEST(Sperner, MinimalByExhaustiveSearch)
{
    // every k-receiver structure on m(k) - 1 channels has a dominating pair
    for (std::size_t k = 2; k <= 6; ++k) {
        const std::size_t n = sperner_channel_count(k) - 1;
        const unsigned long limit = 1UL << (k * n);
        bool found_antichain = false;
        for (unsigned long bits = 0; bits < limit && !found_antichain; ++bits) {
            found_antichain = dominance_set(CommunicationStructure(oracle::matrix_from_bits(bits, k, n))).empty();
        }
        EXPECT_FALSE(found_antichain) << k;
    }
}

TEST(Network, Examples)
{
    EXPECT_EQ(network_structure(NetworkGraph::circle(4)).to_matrix(),
              (std::vector<std::vector<int>>{{1, 1, 0, 1}, {1, 1, 1, 0}, {0, 1, 1, 1}, {1, 0, 1, 1}}));
    EXPECT_EQ(network_structure(NetworkGraph(3, {})), CommunicationStructure::private_channels(3));
    EXPECT_EQ(network_structure(NetworkGraph(3, {{0, 1}, {1, 2}, {0, 2}})).to_matrix(),
              (std::vector<std::vector<int>>(3, std::vector<int>(3, 1))));
    EXPECT_THROW(NetworkGraph(2, {{1, 1}}), Error);
}

TEST(Network, ConditionExamples)
{
    EXPECT_TRUE(check_private_equivalence_condition(NetworkGraph::circle(4)));
    EXPECT_FALSE(check_private_equivalence_condition(NetworkGraph::circle(3)));
    const auto grid = NetworkGraph::grid(3, 3);
    EXPECT_TRUE(check_private_equivalence_condition(grid));
    EXPECT_TRUE(dominance_set(network_structure(grid)).empty());
}

TEST(Network, ConditionImpliesNoDominance)
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.1, 0.7)(rng));
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                if (coin(rng)) {
                    edges.emplace_back(a, b);
                }
            }
        }
        const NetworkGraph g(k, edges);
        if (check_private_equivalence_condition(g)) {
            EXPECT_TRUE(dominance_set(network_structure(g)).empty());
        }
    }
}
