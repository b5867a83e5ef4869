#ifndef FMMLAYOUT_SHORTEST_PATHS_HPP
#define FMMLAYOUT_SHORTEST_PATHS_HPP

#include "common.hpp"
#include "graph.hpp"

#include <functional>
#include <queue>
#include <string>
#include <vector>

namespace fmmlayout
{

/// Dense symmetric all-pairs distance matrix of one connected component.
class DistanceMatrix
{
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n, double fill = std::numeric_limits<double>::infinity())
        : n_(n), d_(n * n, fill)
    {
        for (std::size_t i = 0; i < n; ++i)
            d_[i * n + i] = 0.0;
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return d_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {d_.data() + i * n_, n_}; }
    std::span<double> row(std::size_t i) noexcept { return {d_.data() + i * n_, n_}; }
    const std::vector<double>& data() const noexcept { return d_; }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

/// Components above this size are refused by default.
inline constexpr std::size_t default_distance_node_cap = 20000;

namespace detail
{
inline void check_cap(const Component& c, std::size_t cap)
{
    if (c.size() > cap)
        throw AlgorithmError("component of " + std::to_string(c.size()) +
                             " nodes exceeds the dense distance matrix cap of " + std::to_string(cap));
}

inline void check_connected(const DistanceMatrix& d)
{
    const auto n = d.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(d(i, j)))
                throw AlgorithmError("component is disconnected: no path between local nodes " +
                                     std::to_string(i) + " and " + std::to_string(j));
}
} // namespace detail

/// O(n^3) all-pairs shortest paths.
inline DistanceMatrix floyd_warshall(const Component& c, std::size_t node_cap = default_distance_node_cap)
{
    detail::check_cap(c, node_cap);
    const auto n = c.size();
    DistanceMatrix d(n);
    for (const auto& e : c.edges())
    {
        d(e.u, e.v) = std::min(d(e.u, e.v), e.weight);
        d(e.v, e.u) = d(e.u, e.v);
    }
    for (std::size_t k = 0; k < n; ++k)
    {
        const auto dk = d.row(k);
        for (std::size_t i = 0; i < n; ++i)
        {
            const double dik = d(i, k);
            if (!std::isfinite(dik))
                continue;
            auto di = d.row(i);
            for (std::size_t j = 0; j < n; ++j)
                if (dik + dk[j] < di[j])
                    di[j] = dik + dk[j];
        }
    }
    detail::check_connected(d);
    return d;
}

/// Single-source Dijkstra into `out` (length n).
inline void dijkstra(const Component& c, NodeIndex source, std::span<double> out)
{
    using Item = std::pair<double, NodeIndex>;
    std::fill(out.begin(), out.end(), std::numeric_limits<double>::infinity());
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    out[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty())
    {
        const auto [du, u] = heap.top();
        heap.pop();
        if (du > out[u])
            continue;
        const auto nb = c.neighbors(u);
        const auto w = c.neighbor_weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k)
        {
            const double alt = du + w[k];
            if (alt < out[nb[k]])
            {
                out[nb[k]] = alt;
                heap.push({alt, nb[k]});
            }
        }
    }
}

/// Johnson's algorithm. All weights are positive, so the Bellman-Ford potential is
/// identically zero and only the Dijkstra-from-every-source core remains.
inline DistanceMatrix johnson(const Component& c, std::size_t node_cap = default_distance_node_cap,
                              unsigned threads = 1)
{
    detail::check_cap(c, node_cap);
    const auto n = c.size();
    DistanceMatrix d(n);
    parallel_for(n, threads, [&](std::size_t s) { dijkstra(c, static_cast<NodeIndex>(s), d.row(s)); });
    // Symmetrize so both triangles hold the bit-identical value.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d(j, i) = d(i, j) = std::min(d(i, j), d(j, i));
    detail::check_connected(d);
    return d;
}

/// Picks Johnson when m < n^2 / log n, Floyd-Warshall otherwise.
inline DistanceMatrix all_pairs_shortest_paths(const Component& c, std::size_t node_cap = default_distance_node_cap)
{
    const double n = static_cast<double>(c.size());
    const double m = static_cast<double>(c.edge_count());
    if (c.size() > 1 && m < n * n / std::log(n))
        return johnson(c, node_cap);
    return floyd_warshall(c, node_cap);
}

} // namespace fmmlayout

#endif
