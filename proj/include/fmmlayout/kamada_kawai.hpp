#ifndef FMMLAYOUT_KAMADA_KAWAI_HPP
#define FMMLAYOUT_KAMADA_KAWAI_HPP

#include "common.hpp"
#include "graph.hpp"
#include "shortest_paths.hpp"

#include <deque>
#include <map>
#include <variant>

namespace fmmlayout
{

struct KKParams
{
    double unit_length = 1.0;             ///< l: target distance per unit of path length
    std::size_t max_outer_iterations = 0; ///< 0 means 100 * n
    double node_tolerance = 1e-3;         ///< stop once every per-node gradient norm is below this
    int newton_max_steps = 20;            ///< Newton iterations per selected node
};

/// Sum over i < j of (|p_i - p_j| - l d_ij)^2 / d_ij^2.
inline double kk_energy(const Layout& layout, const DistanceMatrix& d, double unit_length)
{
    if (layout.size() != d.size())
        throw std::invalid_argument("kk_energy: layout has " + std::to_string(layout.size()) +
                                    " nodes, distance matrix " + std::to_string(d.size()));
    const auto n = layout.size();
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
        {
            const double dij = d(i, j);
            const double gap = norm(layout[i] - layout[j]) - unit_length * dij;
            energy += gap * gap / (dij * dij);
        }
    return energy;
}

/// Symmetric 2x2 matrix.
struct Hessian2
{
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double determinant() const noexcept { return xx * yy - xy * xy; }
};

namespace detail
{
// Gradient of the (m, j) term with respect to p_m.
inline Vec2 kk_pair_gradient(const Vec2& pm, const Vec2& pj, double dij, double unit_length) noexcept
{
    const Vec2 delta = pm - pj;
    const double r = norm(delta);
    if (r == 0.0)
        return {};
    const double w = 1.0 / (dij * dij);
    return delta * (2.0 * w * (1.0 - unit_length * dij / r));
}

// Energy of the terms that involve node m, with m placed at p.
inline double kk_node_energy(const Layout& layout, const DistanceMatrix& d, double unit_length, std::size_t m,
                             const Vec2& p) noexcept
{
    double e = 0.0;
    for (std::size_t j = 0; j < layout.size(); ++j)
    {
        if (j == m)
            continue;
        const double dij = d(m, j);
        const double gap = norm(p - layout[j]) - unit_length * dij;
        e += gap * gap / (dij * dij);
    }
    return e;
}
} // namespace detail

/// Gradient of kk_energy with respect to p_m.
inline Vec2 kk_node_gradient(const Layout& layout, const DistanceMatrix& d, double unit_length, std::size_t m)
{
    Vec2 g;
    for (std::size_t j = 0; j < layout.size(); ++j)
        if (j != m)
            g += detail::kk_pair_gradient(layout[m], layout[j], d(m, j), unit_length);
    return g;
}

/// Hessian of kk_energy with respect to p_m (the 2x2 diagonal block).
inline Hessian2 kk_node_hessian(const Layout& layout, const DistanceMatrix& d, double unit_length, std::size_t m)
{
    Hessian2 h;
    for (std::size_t j = 0; j < layout.size(); ++j)
    {
        if (j == m)
            continue;
        const Vec2 delta = layout[m] - layout[j];
        const double r = norm(delta);
        if (r == 0.0)
            continue;
        const double dij = d(m, j);
        const double w = 2.0 / (dij * dij);
        const double target = unit_length * dij;
        const double r3 = r * r * r;
        h.xx += w * (1.0 - target / r + target * delta.x * delta.x / r3);
        h.xy += w * (target * delta.x * delta.y / r3);
        h.yy += w * (1.0 - target / r + target * delta.y * delta.y / r3);
    }
    return h;
}

/// Nodes on a circle of radius l n / (2 pi), in seeded random order.
inline Layout kk_initial_layout(std::size_t n, double unit_length, std::uint64_t seed)
{
    Layout layout(n);
    if (n <= 1)
        return layout;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    const double radius = unit_length * static_cast<double>(n) / (2.0 * 3.14159265358979323846);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double angle = 2.0 * 3.14159265358979323846 * static_cast<double>(k) / static_cast<double>(n);
        layout[order[k]] = {radius * std::cos(angle), radius * std::sin(angle)};
    }
    return layout;
}

struct KKRun
{
    Layout layout;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    std::size_t outer_iterations = 0;
};

/// Kamada-Kawai with the classical per-node Newton-Raphson loop.
///
/// Each outer iteration moves the node with the largest gradient norm. A Newton step
/// is taken when the 2x2 Hessian is well conditioned and the step lowers the energy;
/// otherwise a backtracking gradient step is used. Energy therefore never increases.
inline KKRun kk_layout_run(const DistanceMatrix& d, const KKParams& params, std::uint64_t seed)
{
    const auto n = d.size();
    if (n == 0)
        throw std::invalid_argument("kk_layout: empty component");
    if (!(params.unit_length > 0.0) || !(params.node_tolerance > 0.0))
        throw std::invalid_argument("kk_layout: unit_length and node_tolerance must be positive");
    const double l = params.unit_length;

    KKRun run;
    run.layout = kk_initial_layout(n, l, seed);
    run.initial_energy = kk_energy(run.layout, d, l);
    auto& p = run.layout;
    if (n == 1)
        return run;

    std::vector<Vec2> grad(n);
    for (std::size_t i = 0; i < n; ++i)
        grad[i] = kk_node_gradient(p, d, l, i);

    const std::size_t max_outer = params.max_outer_iterations ? params.max_outer_iterations : 100 * n;
    const double tol = params.node_tolerance;

    for (; run.outer_iterations < max_outer; ++run.outer_iterations)
    {
        std::size_t m = 0;
        double worst = -1.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double gi = norm(grad[i]);
            if (gi > worst)
            {
                worst = gi;
                m = i;
            }
        }
        if (worst < tol)
            break;

        const Vec2 start = p[m];
        bool moved = false;
        for (int step = 0; step < params.newton_max_steps; ++step)
        {
            const Vec2 g = kk_node_gradient(p, d, l, m);
            if (norm(g) < tol)
                break;
            const double e0 = detail::kk_node_energy(p, d, l, m, p[m]);
            const Hessian2 h = kk_node_hessian(p, d, l, m);
            const double det = h.determinant();
            bool accepted = false;
            if (std::abs(det) >= 1e-12)
            {
                const Vec2 delta{-(h.yy * g.x - h.xy * g.y) / det, -(h.xx * g.y - h.xy * g.x) / det};
                const Vec2 candidate = p[m] + delta;
                if (is_finite(candidate) && detail::kk_node_energy(p, d, l, m, candidate) < e0)
                {
                    p[m] = candidate;
                    accepted = true;
                }
            }
            if (!accepted)
            {
                double curvature = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != m)
                        curvature += 2.0 / (d(m, j) * d(m, j));
                double t = 1.0 / curvature;
                for (int halving = 0; halving < 50 && !accepted; ++halving, t *= 0.5)
                {
                    const Vec2 candidate = p[m] - g * t;
                    if (detail::kk_node_energy(p, d, l, m, candidate) < e0)
                    {
                        p[m] = candidate;
                        accepted = true;
                    }
                }
            }
            if (!accepted)
                break;
            moved = true;
        }
        if (!moved)
            break; // no descent possible at working precision

        for (std::size_t j = 0; j < n; ++j)
        {
            if (j == m)
                continue;
            grad[j] -= detail::kk_pair_gradient(p[j], start, d(j, m), l);
            grad[j] += detail::kk_pair_gradient(p[j], p[m], d(j, m), l);
        }
        grad[m] = kk_node_gradient(p, d, l, m);
    }
    run.final_energy = kk_energy(p, d, l);
    return run;
}

inline Layout kk_layout(const Component& c, const DistanceMatrix& d, const KKParams& params, std::uint64_t seed)
{
    if (c.size() != d.size())
        throw std::invalid_argument("kk_layout: component and distance matrix sizes differ");
    return kk_layout_run(d, params, seed).layout;
}

// Coarsening.

struct DegreeOneEvent
{
    NodeIndex removed = 0;
    NodeIndex neighbor = 0;
    double length = 1.0; ///< weight of the removed edge
};

struct DegreeTwoEvent
{
    NodeIndex removed = 0;
    NodeIndex left = 0;
    NodeIndex right = 0;
    double left_weight = 1.0;
    double right_weight = 1.0;
};

using CoarseningEvent = std::variant<DegreeOneEvent, DegreeTwoEvent>;

/// Removal history of one contraction pass. Node indices refer to the input component;
/// `kept[i]` is the input index of coarse node i.
struct CoarseningRecord
{
    std::size_t original_size = 0;
    std::vector<NodeIndex> kept;
    std::vector<CoarseningEvent> events;
};

struct Coarsened
{
    Component component;
    CoarseningRecord record;
};

namespace detail
{
class MutableAdjacency
{
public:
    explicit MutableAdjacency(const Component& c) : adj_(c.size()), alive_(c.size(), true), alive_count_(c.size())
    {
        for (const auto& e : c.edges())
        {
            adj_[e.u].emplace(e.v, e.weight);
            adj_[e.v].emplace(e.u, e.weight);
        }
    }

    std::size_t degree(NodeIndex v) const { return adj_[v].size(); }
    bool alive(NodeIndex v) const { return alive_[v]; }
    std::size_t alive_count() const noexcept { return alive_count_; }
    const std::map<NodeIndex, double>& neighbors(NodeIndex v) const { return adj_[v]; }
    bool adjacent(NodeIndex a, NodeIndex b) const { return adj_[a].count(b) != 0; }

    void remove(NodeIndex v)
    {
        for (const auto& [u, w] : adj_[v])
            adj_[u].erase(v);
        adj_[v].clear();
        alive_[v] = false;
        --alive_count_;
    }

    void connect(NodeIndex a, NodeIndex b, double w)
    {
        adj_[a][b] = w;
        adj_[b][a] = w;
    }

    Coarsened finish(const Component& c, std::vector<CoarseningEvent> events) const
    {
        Coarsened out;
        out.record.original_size = c.size();
        out.record.events = std::move(events);
        std::vector<NodeIndex> coarse_index(c.size(), 0);
        std::vector<NodeIndex> parent_nodes;
        for (NodeIndex v = 0; v < c.size(); ++v)
            if (alive_[v])
            {
                coarse_index[v] = static_cast<NodeIndex>(out.record.kept.size());
                out.record.kept.push_back(v);
                parent_nodes.push_back(c.nodes()[v]);
            }
        std::vector<LocalEdge> edges;
        for (auto v : out.record.kept)
            for (const auto& [u, w] : adj_[v])
                if (v < u)
                    edges.push_back({coarse_index[v], coarse_index[u], w});
        out.component = Component::from_edges(out.record.kept.size(), std::move(edges), std::move(parent_nodes));
        return out;
    }

private:
    std::vector<std::map<NodeIndex, double>> adj_;
    std::vector<bool> alive_;
    std::size_t alive_count_;
};
} // namespace detail

/// Peels degree-1 nodes until none remain or only two nodes are left.
inline Coarsened contract_degree_one(const Component& c)
{
    detail::MutableAdjacency g(c);
    std::vector<CoarseningEvent> events;
    std::deque<NodeIndex> queue;
    for (NodeIndex v = 0; v < c.size(); ++v)
        if (g.degree(v) == 1)
            queue.push_back(v);
    while (!queue.empty() && g.alive_count() > 2)
    {
        const auto v = queue.front();
        queue.pop_front();
        if (!g.alive(v) || g.degree(v) != 1)
            continue;
        const auto [u, w] = *g.neighbors(v).begin();
        events.push_back(DegreeOneEvent{v, u, w});
        g.remove(v);
        if (g.degree(u) == 1)
            queue.push_back(u);
    }
    return g.finish(c, std::move(events));
}

/// Replaces degree-2 nodes whose two neighbors are not adjacent by a single edge of
/// the summed weight, until no such node remains or only two nodes are left.
inline Coarsened contract_degree_two(const Component& c)
{
    detail::MutableAdjacency g(c);
    std::vector<CoarseningEvent> events;
    std::deque<NodeIndex> queue;
    for (NodeIndex v = 0; v < c.size(); ++v)
        if (g.degree(v) == 2)
            queue.push_back(v);
    while (!queue.empty() && g.alive_count() > 2)
    {
        const auto v = queue.front();
        queue.pop_front();
        if (!g.alive(v) || g.degree(v) != 2)
            continue;
        auto it = g.neighbors(v).begin();
        const auto [a, wa] = *it++;
        const auto [b, wb] = *it;
        if (g.adjacent(a, b))
            continue;
        events.push_back(DegreeTwoEvent{v, a, b, wa, wb});
        g.remove(v);
        g.connect(a, b, wa + wb);
        // Only a and b can have changed eligibility.
        queue.push_back(a);
        queue.push_back(b);
    }
    return g.finish(c, std::move(events));
}

/// Replays a coarsening record in reverse, expanding a coarse layout to the input size.
///
/// Degree-1 nodes go to neighbor + unit_length * length * u, u pointing from the
/// centroid of the nodes placed so far through the neighbor (seeded random direction
/// if they coincide). Degree-2 nodes go to the midpoint of their two neighbors.
inline Layout restore_coarsening(const Layout& coarse, const CoarseningRecord& rec, double unit_length = 1.0,
                                 std::uint64_t seed = 0)
{
    if (coarse.size() != rec.kept.size())
        throw std::invalid_argument("restore: layout size does not match the coarse component");
    Layout out(rec.original_size);
    Vec2 sum;
    std::size_t placed = 0;
    for (std::size_t i = 0; i < coarse.size(); ++i)
    {
        out[rec.kept[i]] = coarse[i];
        sum += coarse[i];
        ++placed;
    }
    Rng rng(seed);
    for (auto it = rec.events.rbegin(); it != rec.events.rend(); ++it)
    {
        Vec2 p;
        if (const auto* one = std::get_if<DegreeOneEvent>(&*it))
        {
            const Vec2 anchor = out[one->neighbor];
            const Vec2 center = placed ? sum * (1.0 / static_cast<double>(placed)) : Vec2{};
            const Vec2 away = anchor - center;
            const double len = norm(away);
            const Vec2 dir = len > 0.0 ? away * (1.0 / len) : rng.unit_direction();
            p = anchor + dir * (unit_length * one->length);
            out[one->removed] = p;
        }
        else
        {
            const auto& two = std::get<DegreeTwoEvent>(*it);
            p = (out[two.left] + out[two.right]) * 0.5;
            out[two.removed] = p;
        }
        sum += p;
        ++placed;
    }
    return out;
}

inline Layout restore_degree_one(const Layout& coarse, const CoarseningRecord& rec, double unit_length = 1.0,
                                 std::uint64_t seed = 0)
{
    return restore_coarsening(coarse, rec, unit_length, seed);
}

inline Layout restore_degree_two(const Layout& coarse, const CoarseningRecord& rec)
{
    return restore_coarsening(coarse, rec);
}

} // namespace fmmlayout

#endif
