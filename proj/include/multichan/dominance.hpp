#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "multichan/core_model.hpp"
#include "multichan/error.hpp"

namespace multichan {

/// Ordered receiver pairs (dominator, dominated), 0-based. Receivers with
/// identical rows dominate each other, so both orders appear.
using DominanceSet = std::set<std::pair<std::size_t, std::size_t>>;

/// True iff receiver a observes every channel receiver b observes.
inline bool dominates(const CommunicationStructure& m, std::size_t a, std::size_t b)
{
    for (std::size_t j = 0; j < m.channels(); ++j) {
        if (m.observes(b, j) && !m.observes(a, j)) {
            return false;
        }
    }
    return true;
}

inline DominanceSet dominance_set(const CommunicationStructure& m)
{
    DominanceSet out;
    for (std::size_t a = 0; a < m.receivers(); ++a) {
        for (std::size_t b = 0; b < m.receivers(); ++b) {
            if (a != b && dominates(m, a, b)) {
                out.emplace(a, b);
            }
        }
    }
    return out;
}

/// Receivers information-dominated by `receiver` (excluding itself).
inline std::vector<std::size_t> dominated_by(const CommunicationStructure& m, std::size_t receiver)
{
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < m.receivers(); ++b) {
        if (b != receiver && dominates(m, receiver, b)) {
            out.push_back(b);
        }
    }
    return out;
}

/// Whether `better` is superior over `worse`, i.e. S_worse contains S_better.
/// Channel counts may differ; only the receiver count has to agree.
inline bool is_superior(const CommunicationStructure& better, const CommunicationStructure& worse)
{
    if (better.receivers() != worse.receivers()) {
        fail(ErrorCode::ReceiverCountMismatch, "structures have " + std::to_string(better.receivers()) + " and " +
                                                   std::to_string(worse.receivers()) + " receivers");
    }
    const auto s_better = dominance_set(better);
    const auto s_worse = dominance_set(worse);
    return std::includes(s_worse.begin(), s_worse.end(), s_better.begin(), s_better.end());
}

/// Covering graph of the dominance relation (Hasse diagram, edges point from
/// dominator to dominated).
struct DominationGraph {
    std::size_t vertices = 0;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    /// parent[v] = unique covering dominator when the graph is a forest.
    std::vector<std::optional<std::size_t>> parent;
    bool is_forest = false;

    [[nodiscard]] std::vector<std::size_t> roots() const
    {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < vertices; ++v) {
            if (!parent[v]) {
                out.push_back(v);
            }
        }
        return out;
    }

    [[nodiscard]] std::vector<std::size_t> children(std::size_t v) const
    {
        std::vector<std::size_t> out;
        for (const auto& [a, b] : edges) {
            if (a == v) {
                out.push_back(b);
            }
        }
        return out;
    }
};

inline DominationGraph domination_graph(const CommunicationStructure& m)
{
    const std::size_t k = m.receivers();
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            if (m.row(a) == m.row(b)) {
                fail(ErrorCode::DuplicateRows, "receivers " + std::to_string(a + 1) + " and " +
                                                   std::to_string(b + 1) + " observe the same channels");
            }
        }
    }
    const auto s = dominance_set(m);
    DominationGraph g;
    g.vertices = k;
    g.parent.assign(k, std::nullopt);
    for (const auto& [a, b] : s) {
        bool covered = true;
        for (std::size_t c = 0; c < k && covered; ++c) {
            if (c != a && c != b && s.contains({a, c}) && s.contains({c, b})) {
                covered = false;
            }
        }
        if (covered) {
            g.edges.emplace(a, b);
        }
    }
    // Without duplicate rows dominance is a strict partial order, so the
    // covering graph is acyclic; forest-ness reduces to in-degree <= 1.
    std::vector<std::size_t> in_degree(k, 0);
    for (const auto& [a, b] : g.edges) {
        ++in_degree[b];
        g.parent[b] = a;
    }
    g.is_forest = std::all_of(in_degree.begin(), in_degree.end(), [](std::size_t d) { return d <= 1; });
    if (!g.is_forest) {
        g.parent.assign(k, std::nullopt);
    }
    return g;
}

inline unsigned long long binomial(unsigned n, unsigned r)
{
    if (r > n) {
        return 0;
    }
    unsigned long long out = 1;
    for (unsigned i = 1; i <= r; ++i) {
        out = out * (n - r + i) / i;
    }
    return out;
}

/// Smallest channel count m >= 1 with binom(m, floor(m/2)) >= k.
inline unsigned sperner_channel_count(std::size_t k)
{
    unsigned m = 1;
    while (binomial(m, m / 2) < k) {
        ++m;
    }
    return m;
}

/// k receivers on m(k) channels, receiver i observing the i-th floor(m/2)-subset
/// in lexicographic order. The result has no information-dominating pairs.
/// For k = 1 the lone receiver observes the single channel.
inline CommunicationStructure sperner_structure(std::size_t k)
{
    if (k == 0) {
        fail(ErrorCode::InvalidInput, "sperner structure needs k >= 1");
    }
    const unsigned m = sperner_channel_count(k);
    if (k == 1) {
        return CommunicationStructure(std::vector<std::vector<int>>{{1}});
    }
    const unsigned half = m / 2;
    std::vector<std::vector<int>> rows;
    std::vector<unsigned> subset(half);
    for (unsigned i = 0; i < half; ++i) {
        subset[i] = i;
    }
    while (rows.size() < k) {
        std::vector<int> row(m, 0);
        for (unsigned c : subset) {
            row[c] = 1;
        }
        rows.push_back(std::move(row));
        // next combination in lexicographic order
        int pos = static_cast<int>(half) - 1;
        while (pos >= 0 && subset[pos] == m - half + static_cast<unsigned>(pos)) {
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++subset[pos];
        for (unsigned i = static_cast<unsigned>(pos) + 1; i < half; ++i) {
            subset[i] = subset[i - 1] + 1;
        }
    }
    return CommunicationStructure(std::move(rows));
}

/// Undirected receiver network on vertices 0..k-1.
class NetworkGraph {
public:
    NetworkGraph() = default;

    NetworkGraph(std::size_t k, const std::vector<std::pair<std::size_t, std::size_t>>& edges) : k_(k)
    {
        for (auto [a, b] : edges) {
            if (a >= k || b >= k) {
                fail(ErrorCode::InvalidInput, "edge endpoint out of range");
            }
            if (a == b) {
                fail(ErrorCode::InvalidInput, "self-loop at vertex " + std::to_string(a + 1));
            }
            edges_.emplace(std::min(a, b), std::max(a, b));
        }
    }

    static NetworkGraph circle(std::size_t k)
    {
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t i = 0; i < k; ++i) {
            edges.emplace_back(i, (i + 1) % k);
        }
        return NetworkGraph(k, edges);
    }

    /// rows x cols grid, vertex (r, c) has index r * cols + c.
    static NetworkGraph grid(std::size_t rows, std::size_t cols)
    {
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                if (c + 1 < cols) {
                    edges.emplace_back(r * cols + c, r * cols + c + 1);
                }
                if (r + 1 < rows) {
                    edges.emplace_back(r * cols + c, (r + 1) * cols + c);
                }
            }
        }
        return NetworkGraph(rows * cols, edges);
    }

    [[nodiscard]] std::size_t size() const noexcept { return k_; }
    [[nodiscard]] const std::set<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
    [[nodiscard]] bool adjacent(std::size_t a, std::size_t b) const
    {
        return edges_.contains({std::min(a, b), std::max(a, b)});
    }
    [[nodiscard]] std::size_t degree(std::size_t v) const
    {
        std::size_t d = 0;
        for (const auto& [a, b] : edges_) {
            d += (a == v) + (b == v);
        }
        return d;
    }

private:
    std::size_t k_ = 0;
    std::set<std::pair<std::size_t, std::size_t>> edges_;
};

/// Channel i is observed by receiver i and its neighbours.
inline CommunicationStructure network_structure(const NetworkGraph& g)
{
    if (g.size() == 0) {
        fail(ErrorCode::InvalidInput, "network needs at least one vertex");
    }
    std::vector<std::vector<int>> rows(g.size(), std::vector<int>(g.size(), 0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        rows[i][i] = 1;
    }
    for (const auto& [a, b] : g.edges()) {
        rows[a][b] = 1;
        rows[b][a] = 1;
    }
    return CommunicationStructure(std::move(rows));
}

/// For every adjacent ordered pair (i1, i2) some third vertex is adjacent to i2
/// but not to i1. Sufficient for the network structure to have no dominating pairs.
inline bool check_private_equivalence_condition(const NetworkGraph& g)
{
    for (const auto& [a, b] : g.edges()) {
        for (const auto& [i1, i2] : {std::pair{a, b}, std::pair{b, a}}) {
            bool witnessed = false;
            for (std::size_t v = 0; v < g.size() && !witnessed; ++v) {
                witnessed = v != i1 && v != i2 && !g.adjacent(i1, v) && g.adjacent(i2, v);
            }
            if (!witnessed) {
                return false;
            }
        }
    }
    return true;
}

} // namespace multichan
