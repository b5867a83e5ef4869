#ifndef FMMLAYOUT_TESTS_SUPPORT_HPP
#define FMMLAYOUT_TESTS_SUPPORT_HPP

// Instance generators and oracles shared by the unit tests and the acceptance run.

#include <fmmlayout/common.hpp>
#include <fmmlayout/graph.hpp>
#include <fmmlayout/shortest_paths.hpp>

#include <set>
#include <utility>
#include <vector>

namespace testing_support
{
using namespace fmmlayout;

inline Component path_graph(std::size_t n, double w = 1.0)
{
    std::vector<LocalEdge> e;
    for (NodeIndex i = 0; i + 1 < n; ++i)
        e.push_back({i, i + 1, w});
    return Component::from_edges(n, e);
}

inline Component cycle_graph(std::size_t n)
{
    std::vector<LocalEdge> e;
    for (NodeIndex i = 0; i < n; ++i)
        e.push_back({i, static_cast<NodeIndex>((i + 1) % n), 1.0});
    return Component::from_edges(n, e);
}

inline Component star_graph(std::size_t leaves)
{
    std::vector<LocalEdge> e;
    for (NodeIndex i = 1; i <= leaves; ++i)
        e.push_back({0, i, 1.0});
    return Component::from_edges(leaves + 1, e);
}

inline Component complete_graph(std::size_t n)
{
    std::vector<LocalEdge> e;
    for (NodeIndex i = 0; i < n; ++i)
        for (NodeIndex j = i + 1; j < n; ++j)
            e.push_back({i, j, 1.0});
    return Component::from_edges(n, e);
}

/// Uniform random recursive tree; weights in [0.5, 3) unless unit.
inline Component random_tree(std::size_t n, Rng& rng, bool unit = true)
{
    std::vector<LocalEdge> e;
    for (NodeIndex i = 1; i < n; ++i)
        e.push_back({static_cast<NodeIndex>(rng.below(i)), i, unit ? 1.0 : rng.uniform(0.5, 3.0)});
    return Component::from_edges(n, e);
}

/// Random tree plus `extra` distinct chords.
inline Component random_connected(std::size_t n, std::size_t extra, Rng& rng, bool unit = true)
{
    std::set<std::pair<NodeIndex, NodeIndex>> seen;
    std::vector<LocalEdge> e;
    auto add = [&](NodeIndex a, NodeIndex b) {
        if (a == b || !seen.insert({std::min(a, b), std::max(a, b)}).second)
            return;
        e.push_back({a, b, unit ? 1.0 : rng.uniform(0.5, 3.0)});
    };
    for (NodeIndex i = 1; i < n; ++i)
        add(static_cast<NodeIndex>(rng.below(i)), i);
    for (std::size_t k = 0; k < extra && n > 1; ++k)
        add(static_cast<NodeIndex>(rng.below(n)), static_cast<NodeIndex>(rng.below(n)));
    return Component::from_edges(n, e);
}

/// Two-terminal series-parallel graph grown by random series and parallel edge splits.
inline Component random_series_parallel(std::size_t target_nodes, Rng& rng)
{
    struct E
    {
        NodeIndex a, b;
    };
    std::vector<E> edges{{0, 1}};
    NodeIndex n = 2;
    while (n < target_nodes)
    {
        const auto k = rng.below(edges.size());
        const auto [a, b] = edges[k];
        const NodeIndex mid = n++;
        if (rng.bernoulli(0.5))
        {
            edges[k] = {a, mid}; // series
            edges.push_back({mid, b});
        }
        else
        {
            edges.push_back({a, mid}); // parallel path of length two
            edges.push_back({mid, b});
        }
    }
    std::set<std::pair<NodeIndex, NodeIndex>> seen;
    std::vector<LocalEdge> out;
    for (const auto& [a, b] : edges)
        if (seen.insert({std::min(a, b), std::max(a, b)}).second)
            out.push_back({a, b, 1.0});
    return Component::from_edges(n, out);
}

/// Oracle: O(n^2) array Dijkstra from every source, written independently of the library.
inline std::vector<std::vector<double>> oracle_distances(const Component& c)
{
    const auto n = c.size();
    std::vector<std::vector<std::pair<NodeIndex, double>>> adj(n);
    for (const auto& e : c.edges())
    {
        adj[e.u].push_back({e.v, e.weight});
        adj[e.v].push_back({e.u, e.weight});
    }
    std::vector<std::vector<double>> d(n, std::vector<double>(n, std::numeric_limits<double>::infinity()));
    for (std::size_t s = 0; s < n; ++s)
    {
        std::vector<bool> done(n, false);
        d[s][s] = 0.0;
        for (std::size_t it = 0; it < n; ++it)
        {
            std::size_t u = n;
            for (std::size_t v = 0; v < n; ++v)
                if (!done[v] && (u == n || d[s][v] < d[s][u]))
                    u = v;
            if (u == n || !std::isfinite(d[s][u]))
                break;
            done[u] = true;
            for (const auto& [v, w] : adj[u])
                d[s][v] = std::min(d[s][v], d[s][u] + w);
        }
    }
    return d;
}

inline std::vector<Vec2> uniform_points(std::size_t n, std::uint64_t seed, double side = 1.0)
{
    Rng rng(seed);
    std::vector<Vec2> p(n);
    for (auto& q : p)
        q = {rng.uniform(0.0, side), rng.uniform(0.0, side)};
    return p;
}

/// Direct pairwise sum of k_r (p_i - p_j) / |p_i - p_j|^2, written out without the library kernel.
inline std::vector<Vec2> oracle_repulsion(const std::vector<Vec2>& p, double k_r)
{
    std::vector<Vec2> f(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
        {
            if (i == j)
                continue;
            const double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y;
            const double r2 = dx * dx + dy * dy;
            if (r2 == 0.0)
                continue;
            f[i].x += k_r * dx / r2;
            f[i].y += k_r * dy / r2;
        }
    return f;
}

inline double max_relative_error(const std::vector<Vec2>& approx, const std::vector<Vec2>& exact)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i)
    {
        worst = std::max(worst, norm(approx[i] - exact[i]) / (norm(exact[i]) + 1e-12));
    }
    return worst;
}

} // namespace testing_support

#endif
