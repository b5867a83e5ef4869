#ifndef FMMLAYOUT_ASSEMBLER_HPP
#define FMMLAYOUT_ASSEMBLER_HPP

// Whole-graph pipeline: split into components, lay each out with Kamada-Kawai
// (small) or ForceAtlas2 (large), rescale to a common density, connect the
// components by a weighted tree, lay that tree out, and translate every component
// onto its tree node.

#include "common.hpp"
#include "forceatlas2.hpp"
#include "graph.hpp"
#include "kamada_kawai.hpp"
#include "shortest_paths.hpp"

#include <chrono>
#include <map>
#include <string>

namespace fmmlayout
{

struct LayoutParams
{
    std::size_t kk_threshold = 300;    ///< components with fewer nodes use Kamada-Kawai
    double target_density = 1.0;       ///< nodes per unit area after rescaling
    double spacing = 2.0;              ///< constant added to meta-graph edge lengths
    std::size_t meta_threshold = 1000; ///< largest meta-graph laid out in one piece
    std::uint64_t seed = 0;
    bool coarsen = false; ///< contract degree-1 and degree-2 nodes before Kamada-Kawai
    unsigned threads = 1;
    KKParams kk;
    Fa2Params fa2;
    FmmParams fmm;

    void validate() const
    {
        if (kk_threshold < 1)
            throw InputError("kk_threshold must be >= 1");
        if (!(target_density > 0.0) || !std::isfinite(target_density))
            throw InputError("target density must be positive");
        if (!(spacing >= 0.0) || !std::isfinite(spacing))
            throw InputError("spacing must be non-negative");
        if (meta_threshold < 2)
            throw InputError("meta_threshold must be >= 2");
        if (!(kk.unit_length > 0.0))
            throw InputError("unit length must be positive");
        if (fmm.order < 1 || fmm.leaf_capacity < 1)
            throw InputError("FMM order and leaf capacity must be >= 1");
        fa2.validate();
    }
};

enum class LayoutAlgorithm
{
    single,
    pair,
    kamada_kawai,
    forceatlas2
};

inline std::string_view algorithm_name(LayoutAlgorithm a) noexcept
{
    switch (a)
    {
    case LayoutAlgorithm::single:
        return "single";
    case LayoutAlgorithm::pair:
        return "pair";
    case LayoutAlgorithm::kamada_kawai:
        return "kamada-kawai";
    default:
        return "forceatlas2";
    }
}

struct ComponentLayout
{
    Layout layout;
    LayoutAlgorithm algorithm = LayoutAlgorithm::single;
};

/// Lays out one connected component; `stream` decorrelates the per-component RNG.
inline ComponentLayout layout_component(const Component& c, const LayoutParams& params, std::uint64_t stream = 0)
{
    const auto n = c.size();
    const double l = params.kk.unit_length;
    const auto seed = Rng::mix(params.seed, stream);
    ComponentLayout out;
    if (n == 0)
        throw std::invalid_argument("layout_component: empty component");
    if (n == 1)
    {
        out.layout = {Vec2{}};
        return out;
    }
    if (n == 2)
    {
        out.algorithm = LayoutAlgorithm::pair;
        out.layout = {Vec2{-0.5 * l, 0.0}, Vec2{0.5 * l, 0.0}};
        return out;
    }
    if (n < params.kk_threshold)
    {
        out.algorithm = LayoutAlgorithm::kamada_kawai;
        if (!params.coarsen)
        {
            out.layout = kk_layout(c, all_pairs_shortest_paths(c), params.kk, seed);
            return out;
        }
        const auto leaves = contract_degree_one(c);
        const auto chains = contract_degree_two(leaves.component);
        const auto& core = chains.component;
        const auto coarse = kk_layout(core, all_pairs_shortest_paths(core), params.kk, seed);
        out.layout = restore_degree_one(restore_degree_two(coarse, chains.record), leaves.record, l, seed);
        return out;
    }
    out.algorithm = LayoutAlgorithm::forceatlas2;
    auto fa2 = params.fa2;
    fa2.seed = seed;
    fa2.unit_length = l;
    auto fmm = params.fmm;
    fmm.threads = std::max(1u, params.threads);
    out.layout = fa2_layout(c, fa2, fmm);
    return out;
}

/// Nodes per bounding-box area, each box side clamped to at least unit_length.
inline double layout_density(const Layout& layout, double unit_length = 1.0)
{
    if (layout.empty())
        return 0.0;
    const auto box = bounding_box(layout);
    const double w = std::max(box.width(), unit_length);
    const double h = std::max(box.height(), unit_length);
    return static_cast<double>(layout.size()) / (w * h);
}

/// Uniform scaling about the centroid by sqrt(density / target).
inline Layout rescale_to_density(const Layout& layout, double target_density, double unit_length = 1.0)
{
    if (!(target_density > 0.0))
        throw std::invalid_argument("rescale_to_density: target density must be positive");
    if (layout.size() <= 1)
        return layout;
    const double s = std::sqrt(layout_density(layout, unit_length) / target_density);
    const Vec2 c = centroid(layout);
    Layout out(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i)
        out[i] = c + (layout[i] - c) * s;
    return out;
}

/// Bounding-box diagonal.
inline double layout_diameter(const Layout& layout)
{
    const auto box = bounding_box(layout);
    return std::hypot(box.width(), box.height());
}

struct MetaNode
{
    std::size_t id = 0; ///< caller's identifier (component index)
    double diameter = 0.0;
    std::size_t size = 0;
};

struct MetaEdge
{
    std::size_t a = 0; ///< index into MetaGraph::nodes
    std::size_t b = 0;
    double weight = 0.0;
};

/// Tree over components. `order` is the insertion order; order[0] is the root.
struct MetaGraph
{
    std::vector<MetaNode> nodes;
    std::vector<MetaEdge> edges;
    std::vector<std::size_t> order;
};

inline double meta_edge_weight(double diameter_a, double diameter_b, double spacing)
{
    return (diameter_a + diameter_b) / 2.0 + spacing;
}

/// Links each node, in the given order, to the largest node placed before it
/// (ties go to the earliest placed).
inline MetaGraph build_meta_graph_in_order(std::vector<MetaNode> nodes, double spacing, std::vector<std::size_t> order)
{
    if (nodes.empty())
        throw std::invalid_argument("build_meta_graph: no components");
    if (order.size() != nodes.size())
        throw std::invalid_argument("build_meta_graph: order is not a permutation of the nodes");
    MetaGraph mg;
    mg.nodes = std::move(nodes);
    mg.order = std::move(order);
    mg.edges.reserve(mg.nodes.size() - 1);
    std::size_t largest = mg.order.front();
    for (std::size_t k = 1; k < mg.order.size(); ++k)
    {
        const auto v = mg.order[k];
        mg.edges.push_back({largest, v, meta_edge_weight(mg.nodes[largest].diameter, mg.nodes[v].diameter, spacing)});
        if (mg.nodes[v].size > mg.nodes[largest].size)
            largest = v;
    }
    return mg;
}

/// Seeded random insertion order, then build_meta_graph_in_order.
inline MetaGraph build_meta_graph(std::vector<MetaNode> nodes, double spacing, std::uint64_t seed)
{
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    return build_meta_graph_in_order(std::move(nodes), spacing, std::move(order));
}

struct MetaLayout
{
    Layout centers;        ///< one position per meta node
    std::size_t depth = 1; ///< number of nested meta levels used
};

namespace detail
{
// Splits a tree into connected parts of at most `limit` nodes. Post-order greedy:
// a node keeps its children's unassigned remainders and cuts off the largest ones
// as separate parts while its total exceeds the limit.
inline std::vector<std::vector<std::size_t>> split_tree(const MetaGraph& mg, std::size_t limit)
{
    const auto n = mg.nodes.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : mg.edges)
    {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    const auto root = mg.order.front();
    std::vector<std::size_t> parent(n, n), visit;
    visit.reserve(n);
    visit.push_back(root);
    parent[root] = root;
    for (std::size_t k = 0; k < visit.size(); ++k)
        for (auto v : adj[visit[k]])
            if (parent[v] == n)
            {
                parent[v] = visit[k];
                visit.push_back(v);
            }

    std::vector<std::size_t> remainder(n, 1);
    std::vector<bool> cut(n, false);
    std::vector<std::size_t> kids;
    for (auto it = visit.rbegin(); it != visit.rend(); ++it)
    {
        const auto v = *it;
        kids.clear();
        for (auto u : adj[v])
            if (parent[u] == v && u != v)
                kids.push_back(u);
        std::size_t total = 1;
        for (auto u : kids)
            total += remainder[u];
        std::stable_sort(kids.begin(), kids.end(), [&](auto a, auto b) { return remainder[a] > remainder[b]; });
        for (auto u : kids)
        {
            if (total <= limit)
                break;
            cut[u] = true;
            total -= remainder[u];
        }
        remainder[v] = total;
    }
    cut[root] = true;

    // Every cut node heads one part; others join their parent's part.
    std::vector<std::size_t> part_of(n);
    std::vector<std::vector<std::size_t>> parts;
    for (auto v : visit)
    {
        if (cut[v])
        {
            part_of[v] = parts.size();
            parts.emplace_back();
        }
        else
            part_of[v] = part_of[parent[v]];
        parts[part_of[v]].push_back(v);
    }
    return parts;
}

inline MetaLayout layout_meta_impl(const MetaGraph& mg, const LayoutParams& params, std::uint64_t seed)
{
    const auto n = mg.nodes.size();
    MetaLayout out;
    if (n == 1)
    {
        out.centers = {Vec2{}};
        return out;
    }
    if (n <= params.meta_threshold)
    {
        std::vector<LocalEdge> edges;
        for (const auto& e : mg.edges)
            edges.push_back({static_cast<NodeIndex>(e.a), static_cast<NodeIndex>(e.b), e.weight});
        const auto c = Component::from_edges(n, std::move(edges));
        auto kk = params.kk;
        kk.unit_length = 1.0;
        out.centers = kk_layout(c, johnson(c, std::max(n, params.meta_threshold)), kk, seed);
        return out;
    }

    const auto parts = split_tree(mg, params.meta_threshold);
    std::vector<std::size_t> local(n), part_of(n);
    std::vector<MetaGraph> subs(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k)
        for (std::size_t i = 0; i < parts[k].size(); ++i)
        {
            local[parts[k][i]] = i;
            part_of[parts[k][i]] = k;
            subs[k].nodes.push_back(mg.nodes[parts[k][i]]);
            subs[k].order.push_back(i); // the part's head comes first
        }
    for (const auto& e : mg.edges)
        if (part_of[e.a] == part_of[e.b])
            subs[part_of[e.a]].edges.push_back({local[e.a], local[e.b], e.weight});

    std::vector<Layout> part_layouts(parts.size());
    std::vector<MetaNode> part_nodes(parts.size());
    std::size_t depth = 1;
    for (std::size_t k = 0; k < parts.size(); ++k)
    {
        const auto& members = parts[k];
        const auto& sub = subs[k];
        const auto inner = layout_meta_impl(sub, params, Rng::mix(seed, k + 1));
        depth = std::max(depth, inner.depth);
        part_layouts[k] = inner.centers;

        // Extent of the part, counting each member's own footprint.
        BoundingBox box;
        std::size_t size = 0;
        for (std::size_t i = 0; i < members.size(); ++i)
        {
            const double r = 0.5 * mg.nodes[members[i]].diameter;
            box.extend(inner.centers[i] - Vec2{r, r});
            box.extend(inner.centers[i] + Vec2{r, r});
            size += mg.nodes[members[i]].size;
        }
        part_nodes[k] = {k, std::hypot(box.width(), box.height()), size};
    }

    const auto upper = build_meta_graph(std::move(part_nodes), params.spacing, Rng::mix(seed, 0));
    const auto placed = layout_meta_impl(upper, params, Rng::mix(seed, parts.size() + 1));
    out.depth = depth + placed.depth;
    out.centers.resize(n);
    for (std::size_t k = 0; k < parts.size(); ++k)
    {
        const Vec2 shift = placed.centers[k] - centroid(part_layouts[k]);
        for (std::size_t i = 0; i < parts[k].size(); ++i)
            out.centers[parts[k][i]] = part_layouts[k][i] + shift;
    }
    return out;
}
} // namespace detail

/// Kamada-Kawai on the meta tree with targets equal to weighted tree distances. Trees
/// larger than meta_threshold are split into connected parts that are laid out
/// separately and then assembled through another meta tree.
inline MetaLayout layout_meta(const MetaGraph& mg, const LayoutParams& params)
{
    if (mg.nodes.empty())
        throw std::invalid_argument("layout_meta: empty meta graph");
    return detail::layout_meta_impl(mg, params, Rng::mix(params.seed, 0x3e7a));
}

struct ComponentSummary
{
    std::vector<NodeIndex> nodes; ///< graph indices
    LayoutAlgorithm algorithm = LayoutAlgorithm::single;
    double diameter = 0.0;
    Vec2 center; ///< meta-graph position of the component centroid
};

struct GraphLayout
{
    Layout positions; ///< indexed by graph node
    std::vector<ComponentSummary> components;
    std::size_t meta_depth = 0;
    std::map<std::string, double> timings; ///< seconds per stage
};

/// The full pipeline. Deterministic for a fixed seed, independent of `threads`.
inline GraphLayout layout_graph(const Graph& g, const LayoutParams& params)
{
    params.validate();
    GraphLayout result;
    result.positions.assign(g.node_count(), Vec2{});
    if (g.node_count() == 0)
        return result;
    using clock = std::chrono::steady_clock;
    auto mark = clock::now();
    auto lap = [&](const char* stage) {
        const auto now = clock::now();
        result.timings[stage] = std::chrono::duration<double>(now - mark).count();
        mark = now;
    };

    const auto comps = connected_components(g);
    lap("components");

    std::vector<Layout> layouts(comps.size());
    std::vector<LayoutAlgorithm> algorithms(comps.size());
    const double l = params.kk.unit_length;
    // The largest components go first, so the FMM passes get all threads for them.
    std::size_t big = 0;
    while (big < comps.size() && comps[big].size() >= params.kk_threshold)
        ++big;
    auto one = [&](std::size_t k, unsigned threads) {
        auto p = params;
        p.threads = threads;
        auto cl = layout_component(comps[k], p, k);
        algorithms[k] = cl.algorithm;
        layouts[k] = rescale_to_density(cl.layout, params.target_density, l);
    };
    for (std::size_t k = 0; k < big; ++k)
        one(k, params.threads);
    parallel_for(comps.size() - big, params.threads, [&](std::size_t k) { one(big + k, 1); });
    lap("component_layout");

    std::vector<MetaNode> meta(comps.size());
    for (std::size_t k = 0; k < comps.size(); ++k)
        meta[k] = {k, layout_diameter(layouts[k]), comps[k].size()};
    const auto mg = build_meta_graph(meta, params.spacing, Rng::mix(params.seed, 0x5eed));
    const auto placed = layout_meta(mg, params);
    result.meta_depth = placed.depth;
    lap("meta_layout");

    result.components.resize(comps.size());
    for (std::size_t k = 0; k < comps.size(); ++k)
    {
        const Vec2 shift = placed.centers[k] - centroid(layouts[k]);
        const auto& nodes = comps[k].nodes();
        for (std::size_t i = 0; i < nodes.size(); ++i)
            result.positions[nodes[i]] = layouts[k][i] + shift;
        auto& s = result.components[k];
        s.nodes = nodes;
        s.algorithm = algorithms[k];
        s.diameter = meta[k].diameter;
        s.center = placed.centers[k];
    }
    lap("assembly");
    return result;
}

} // namespace fmmlayout

#endif
