#ifndef FMMLAYOUT_GRAPH_HPP
#define FMMLAYOUT_GRAPH_HPP

#include "common.hpp"

#include <charconv>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace fmmlayout
{

using NodeIndex = std::uint32_t;

enum class Role : std::uint8_t
{
    plain,
    address,
    transaction
};

inline std::string_view role_name(Role r) noexcept
{
    switch (r)
    {
    case Role::address:
        return "address";
    case Role::transaction:
        return "transaction";
    default:
        return "plain";
    }
}

inline Role parse_role(std::string_view name)
{
    if (name == "plain")
        return Role::plain;
    if (name == "address")
        return Role::address;
    if (name == "transaction")
        return Role::transaction;
    throw InputError("unknown node role '" + std::string(name) + "'");
}

struct Edge
{
    NodeIndex source = 0;
    NodeIndex target = 0;
    double weight = 1.0;
};

/// Undirected simple graph with string identifiers and optional bipartite roles.
///
/// Edges keep the direction of their first occurrence, but (a,b) and (b,a) are the
/// same edge. Self-loops are dropped and counted.
class Graph
{
public:
    /// Returns the index of the node, creating it on first sight.
    NodeIndex add_node(std::string_view id, Role role = Role::plain)
    {
        auto key = lookup_key(id, role);
        if (auto it = index_.find(key); it != index_.end())
            return it->second;
        const auto idx = static_cast<NodeIndex>(ids_.size());
        ids_.emplace_back(id);
        roles_.push_back(role);
        index_.emplace(std::move(key), idx);
        return idx;
    }

    /// Adds an edge; returns false for self-loops and duplicates.
    bool add_edge(NodeIndex source, NodeIndex target, double weight = 1.0)
    {
        if (source >= node_count() || target >= node_count())
            throw std::out_of_range("Graph::add_edge: node index out of range");
        if (!(weight > 0.0) || !std::isfinite(weight))
            throw InputError("edge weight must be positive and finite");
        if (source == target)
        {
            ++dropped_self_loops_;
            return false;
        }
        const auto lo = std::min(source, target);
        const auto hi = std::max(source, target);
        const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
        if (!edge_keys_.insert(key).second)
        {
            ++dropped_duplicates_;
            return false;
        }
        edges_.push_back({source, target, weight});
        return true;
    }

    std::optional<NodeIndex> find(std::string_view id, Role role = Role::plain) const
    {
        if (auto it = index_.find(lookup_key(id, role)); it != index_.end())
            return it->second;
        return std::nullopt;
    }

    std::size_t node_count() const noexcept { return ids_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::string& id(NodeIndex i) const { return ids_.at(i); }
    Role role(NodeIndex i) const { return roles_.at(i); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<Role>& roles() const noexcept { return roles_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t dropped_self_loops() const noexcept { return dropped_self_loops_; }
    std::size_t dropped_duplicates() const noexcept { return dropped_duplicates_; }

    bool has_roles() const noexcept
    {
        return std::any_of(roles_.begin(), roles_.end(), [](Role r) { return r != Role::plain; });
    }

private:
    // Transaction and address ids live in separate namespaces.
    static std::string lookup_key(std::string_view id, Role role)
    {
        std::string key;
        key.reserve(id.size() + 1);
        key.push_back(static_cast<char>('0' + static_cast<int>(role)));
        key.append(id);
        return key;
    }

    std::vector<std::string> ids_;
    std::vector<Role> roles_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::unordered_set<std::uint64_t> edge_keys_;
    std::size_t dropped_self_loops_ = 0;
    std::size_t dropped_duplicates_ = 0;
};

namespace detail
{
inline std::string_view trim(std::string_view s) noexcept
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;)
    {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos)
        {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}
} // namespace detail

/// Reads `source<sep>target[<sep>weight]` lines; sep is a tab if the line has one,
/// otherwise a comma. Blank lines and lines starting with '#' are skipped.
inline Graph parse_edge_list(std::istream& in)
{
    Graph g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        const char sep = body.find('\t') != std::string_view::npos ? '\t' : ',';
        auto fields = detail::split(body, sep);
        const auto where = "line " + std::to_string(line_no) + ": ";
        if (fields.size() < 2 || fields.size() > 3)
            throw InputError(where + "expected 'source,target[,weight]'");
        const auto source = detail::trim(fields[0]);
        const auto target = detail::trim(fields[1]);
        if (source.empty() || target.empty())
            throw InputError(where + "empty node id");
        double weight = 1.0;
        if (fields.size() == 3)
        {
            const auto text = detail::trim(fields[2]);
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), weight);
            if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
                throw InputError(where + "malformed weight '" + std::string(text) + "'");
            if (!(weight > 0.0) || !std::isfinite(weight))
                throw InputError(where + "weight must be positive, got '" + std::string(text) + "'");
        }
        const auto s = g.add_node(source);
        const auto t = g.add_node(target);
        g.add_edge(s, t, weight);
    }
    return g;
}

inline Graph parse_edge_list(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_edge_list(in);
}

/// Writes one edge per line; weights equal to 1 are omitted. Isolated nodes are not
/// representable in this format.
inline void write_edge_list(const Graph& g, std::ostream& out)
{
    for (const auto& e : g.edges())
    {
        const auto& s = g.id(e.source);
        const auto& t = g.id(e.target);
        for (const auto* id : {&s, &t})
            if (id->find_first_of(",\t\n\r#") != std::string::npos || detail::trim(*id) != *id)
                throw InputError("node id '" + *id + "' cannot be written as an edge list");
        out << s << ',' << t;
        if (e.weight != 1.0)
            out << ',' << detail::format_double(e.weight);
        out << '\n';
    }
}

struct Transaction
{
    std::string id;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Reads `txid|in1;in2|out1;out2` records, one per line. The input side may be empty.
inline std::vector<Transaction> parse_transactions(std::istream& in)
{
    std::vector<Transaction> txs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        const auto where = "line " + std::to_string(line_no) + ": ";
        auto fields = detail::split(body, '|');
        if (fields.size() != 3)
            throw InputError(where + "expected 'txid|inputs|outputs'");
        Transaction tx;
        tx.id = std::string(detail::trim(fields[0]));
        if (tx.id.empty())
            throw InputError(where + "empty transaction id");
        auto addresses = [&](std::string_view side, std::vector<std::string>& out) {
            side = detail::trim(side);
            if (side.empty())
                return;
            for (auto a : detail::split(side, ';'))
            {
                a = detail::trim(a);
                if (a.empty())
                    throw InputError(where + "empty address");
                out.emplace_back(a);
            }
        };
        addresses(fields[1], tx.inputs);
        addresses(fields[2], tx.outputs);
        if (tx.inputs.empty() && tx.outputs.empty())
            throw InputError(where + "transaction has neither inputs nor outputs");
        txs.push_back(std::move(tx));
    }
    return txs;
}

inline std::vector<Transaction> parse_transactions(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_transactions(in);
}

inline void write_transactions(const std::vector<Transaction>& txs, std::ostream& out)
{
    auto side = [&](const std::vector<std::string>& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            out << (i ? ";" : "") << v[i];
    };
    for (const auto& tx : txs)
    {
        out << tx.id << '|';
        side(tx.inputs);
        out << '|';
        side(tx.outputs);
        out << '\n';
    }
}

/// Bipartite address/transaction graph: address -> tx for inputs, tx -> address for outputs.
inline Graph build_transaction_graph(std::span<const Transaction> txs)
{
    Graph g;
    for (const auto& tx : txs)
    {
        const auto t = g.add_node(tx.id, Role::transaction);
        for (const auto& a : tx.inputs)
            g.add_edge(g.add_node(a, Role::address), t);
        for (const auto& a : tx.outputs)
            g.add_edge(t, g.add_node(a, Role::address));
    }
    return g;
}

struct LocalEdge
{
    NodeIndex u = 0;
    NodeIndex v = 0;
    double weight = 1.0;
};

/// A connected piece of a graph, reindexed densely.
///
/// `nodes[i]` is the parent-graph index of local node i. Adjacency is stored as CSR.
class Component
{
public:
    Component() = default;

    /// Builds a component over local indices [0, n). `nodes` defaults to the identity.
    static Component from_edges(std::size_t n, std::vector<LocalEdge> edges, std::vector<NodeIndex> nodes = {})
    {
        Component c;
        if (nodes.empty())
        {
            nodes.resize(n);
            std::iota(nodes.begin(), nodes.end(), NodeIndex{0});
        }
        if (nodes.size() != n)
            throw std::invalid_argument("Component::from_edges: node map size mismatch");
        c.nodes_ = std::move(nodes);
        c.edges_ = std::move(edges);
        c.offsets_.assign(n + 1, 0);
        for (const auto& e : c.edges_)
        {
            if (e.u >= n || e.v >= n)
                throw std::out_of_range("Component::from_edges: edge endpoint out of range");
            ++c.offsets_[e.u + 1];
            ++c.offsets_[e.v + 1];
        }
        for (std::size_t i = 0; i < n; ++i)
            c.offsets_[i + 1] += c.offsets_[i];
        c.adjacent_.resize(c.offsets_[n]);
        c.adjacent_weight_.resize(c.offsets_[n]);
        std::vector<std::size_t> fill(c.offsets_.begin(), c.offsets_.end() - 1);
        for (const auto& e : c.edges_)
        {
            c.adjacent_[fill[e.u]] = e.v;
            c.adjacent_weight_[fill[e.u]++] = e.weight;
            c.adjacent_[fill[e.v]] = e.u;
            c.adjacent_weight_[fill[e.v]++] = e.weight;
        }
        return c;
    }

    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<NodeIndex>& nodes() const noexcept { return nodes_; }
    const std::vector<LocalEdge>& edges() const noexcept { return edges_; }
    std::size_t degree(NodeIndex i) const { return offsets_[i + 1] - offsets_[i]; }

    std::span<const NodeIndex> neighbors(NodeIndex i) const
    {
        return {adjacent_.data() + offsets_[i], degree(i)};
    }
    std::span<const double> neighbor_weights(NodeIndex i) const
    {
        return {adjacent_weight_.data() + offsets_[i], degree(i)};
    }

    std::size_t max_degree() const noexcept
    {
        std::size_t d = 0;
        for (std::size_t i = 0; i + 1 < offsets_.size(); ++i)
            d = std::max(d, offsets_[i + 1] - offsets_[i]);
        return d;
    }

private:
    std::vector<NodeIndex> nodes_;
    std::vector<LocalEdge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeIndex> adjacent_;
    std::vector<double> adjacent_weight_;
};

/// The whole graph as a single (possibly disconnected) component.
inline Component as_component(const Graph& g)
{
    std::vector<LocalEdge> edges;
    edges.reserve(g.edge_count());
    for (const auto& e : g.edges())
        edges.push_back({e.source, e.target, e.weight});
    return Component::from_edges(g.node_count(), std::move(edges));
}

/// Splits g into connected components, ignoring edge direction.
///
/// Components are ordered by descending size, ties by smallest contained id. Inside a
/// component, local indices follow ascending parent index.
inline std::vector<Component> connected_components(const Graph& g)
{
    const std::size_t n = g.node_count();
    std::vector<std::vector<NodeIndex>> adj(n);
    for (const auto& e : g.edges())
    {
        adj[e.source].push_back(e.target);
        adj[e.target].push_back(e.source);
    }

    constexpr auto unset = std::numeric_limits<NodeIndex>::max();
    std::vector<NodeIndex> label(n, unset);
    std::vector<std::vector<NodeIndex>> members;
    std::vector<NodeIndex> stack;
    for (NodeIndex s = 0; s < n; ++s)
    {
        if (label[s] != unset)
            continue;
        const auto id = static_cast<NodeIndex>(members.size());
        auto& list = members.emplace_back();
        label[s] = id;
        stack.push_back(s);
        while (!stack.empty())
        {
            const auto u = stack.back();
            stack.pop_back();
            list.push_back(u);
            for (auto v : adj[u])
                if (label[v] == unset)
                {
                    label[v] = id;
                    stack.push_back(v);
                }
        }
        std::sort(list.begin(), list.end());
    }

    std::vector<const std::string*> smallest_id(members.size());
    for (std::size_t c = 0; c < members.size(); ++c)
    {
        const std::string* best = &g.id(members[c].front());
        for (auto u : members[c])
            if (g.id(u) < *best)
                best = &g.id(u);
        smallest_id[c] = best;
    }
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (members[a].size() != members[b].size())
            return members[a].size() > members[b].size();
        return *smallest_id[a] < *smallest_id[b];
    });

    std::vector<std::vector<LocalEdge>> edges(members.size());
    std::vector<NodeIndex> local(n);
    for (const auto& list : members)
        for (std::size_t i = 0; i < list.size(); ++i)
            local[list[i]] = static_cast<NodeIndex>(i);
    for (const auto& e : g.edges())
        edges[label[e.source]].push_back({local[e.source], local[e.target], e.weight});

    std::vector<Component> out;
    out.reserve(members.size());
    for (auto c : order)
    {
        const auto size = members[c].size();
        out.push_back(Component::from_edges(size, std::move(edges[c]), std::move(members[c])));
    }
    return out;
}

/// Shape of the synthetic transaction stream.
struct SyntheticParams
{
    double mean_inputs = 1.6;           ///< mean input count of non-coinbase transactions, >= 1
    double mean_outputs = 2.0;          ///< mean output count, >= 1
    double coinbase_probability = 0.02; ///< probability that a transaction has no inputs
    double reuse_probability = 0.1;     ///< probability that an address slot reuses a known address
};

/// Generates a deterministic stream of transactions.
///
/// Input and output counts are 1 + geometric. Each address slot reuses a previously
/// seen address with `reuse_probability`, picked proportionally to how often it has
/// been used, which yields many tiny components and a few giant ones.
inline std::vector<Transaction> generate_synthetic_transactions(std::size_t n_tx, std::uint64_t seed,
                                                                const SyntheticParams& params = {})
{
    if (!(params.mean_inputs >= 1.0) || !(params.mean_outputs >= 1.0) || !std::isfinite(params.mean_inputs) ||
        !std::isfinite(params.mean_outputs))
        throw InputError("mean input/output counts must be finite and >= 1");
    if (!(params.coinbase_probability >= 0.0 && params.coinbase_probability <= 1.0))
        throw InputError("coinbase_probability must lie in [0, 1]");
    if (!(params.reuse_probability >= 0.0 && params.reuse_probability < 1.0))
        throw InputError("reuse_probability must lie in [0, 1)");

    Rng rng(seed);
    std::vector<Transaction> txs;
    txs.reserve(n_tx);
    std::vector<std::uint64_t> uses; // one entry per address occurrence
    std::uint64_t next_address = 0;
    auto pick = [&](std::vector<std::string>& side) {
        std::uint64_t a;
        if (!uses.empty() && rng.bernoulli(params.reuse_probability))
            a = uses[rng.below(uses.size())];
        else
            a = next_address++;
        uses.push_back(a);
        auto name = "a" + std::to_string(a);
        if (std::find(side.begin(), side.end(), name) == side.end())
            side.push_back(std::move(name));
    };
    const double p_in = 1.0 / params.mean_inputs;
    const double p_out = 1.0 / params.mean_outputs;
    for (std::size_t t = 0; t < n_tx; ++t)
    {
        Transaction tx;
        tx.id = "t" + std::to_string(t);
        if (!rng.bernoulli(params.coinbase_probability))
        {
            const auto k = 1 + rng.geometric(p_in);
            for (std::uint64_t i = 0; i < k; ++i)
                pick(tx.inputs);
        }
        const auto k = 1 + rng.geometric(p_out);
        for (std::uint64_t i = 0; i < k; ++i)
            pick(tx.outputs);
        txs.push_back(std::move(tx));
    }
    return txs;
}

} // namespace fmmlayout

#endif
