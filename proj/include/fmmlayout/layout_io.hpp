#ifndef FMMLAYOUT_LAYOUT_IO_HPP
#define FMMLAYOUT_LAYOUT_IO_HPP

#include "assembler.hpp"
#include "common.hpp"
#include "graph.hpp"

#include <json.hpp>

#include <cstdio>
#include <map>
#include <sstream>
#include <string>

namespace fmmlayout
{

inline constexpr int layout_format_version = 1;
inline constexpr std::string_view layout_format_name = "fmmlayout-layout";

struct NodeRecord
{
    std::string id;
    Role role = Role::plain;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

/// Endpoints are indices into LayoutDocument::nodes.
struct EdgeRecord
{
    std::size_t source = 0;
    std::size_t target = 0;

    friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct Provenance
{
    std::uint64_t seed = 0;
    std::string params_hash;
    std::map<std::string, double> timings; ///< seconds per stage; empty unless requested

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct LayoutDocument
{
    int version = layout_format_version;
    std::vector<NodeRecord> nodes;
    std::vector<EdgeRecord> edges;
    Provenance provenance;

    friend bool operator==(const LayoutDocument&, const LayoutDocument&) = default;
};

/// 64-bit FNV-1a of a canonical rendering of every tunable, as 16 hex digits.
inline std::string params_fingerprint(const LayoutParams& p)
{
    std::ostringstream s;
    s.precision(17);
    s << "kk_threshold=" << p.kk_threshold << ";density=" << p.target_density << ";spacing=" << p.spacing
      << ";meta_threshold=" << p.meta_threshold << ";coarsen=" << p.coarsen << ";kk.l=" << p.kk.unit_length
      << ";kk.max_outer=" << p.kk.max_outer_iterations << ";kk.tol=" << p.kk.node_tolerance
      << ";kk.newton=" << p.kk.newton_max_steps << ";fa2.k_a=" << p.fa2.k_a << ";fa2.k_g=" << p.fa2.k_g
      << ";fa2.k_r=" << p.fa2.k_r << ";fa2.iterations=" << p.fa2.iterations << ";fa2.step0=" << p.fa2.step0
      << ";fa2.ratio=" << p.fa2.ratio_lo << ',' << p.fa2.ratio_hi << ";fa2.factor=" << p.fa2.step_factor
      << ";fa2.bounds=" << p.fa2.step_min << ',' << p.fa2.step_max << ";fmm.order=" << p.fmm.order
      << ";fmm.leaf=" << p.fmm.leaf_capacity << ";fmm.depth=" << p.fmm.max_depth;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s.str())
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline LayoutDocument make_document(const Graph& g, const GraphLayout& layout, const LayoutParams& params,
                                    bool include_timings = false)
{
    LayoutDocument doc;
    doc.nodes.reserve(g.node_count());
    for (NodeIndex i = 0; i < g.node_count(); ++i)
        doc.nodes.push_back({g.id(i), g.role(i), layout.positions[i].x, layout.positions[i].y});
    doc.edges.reserve(g.edge_count());
    for (const auto& e : g.edges())
        doc.edges.push_back({e.source, e.target});
    doc.provenance.seed = params.seed;
    doc.provenance.params_hash = params_fingerprint(params);
    if (include_timings)
        doc.provenance.timings = layout.timings;
    return doc;
}

/// Compact JSON with keys in lexicographic order.
inline std::string write_layout(const LayoutDocument& doc)
{
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : doc.nodes)
    {
        if (!std::isfinite(n.x) || !std::isfinite(n.y))
            throw AlgorithmError("write_layout: non-finite coordinate for node '" + n.id + "'");
        nodes.push_back({{"id", n.id}, {"role", role_name(n.role)}, {"x", n.x}, {"y", n.y}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : doc.edges)
        edges.push_back({{"source", e.source}, {"target", e.target}});
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& [stage, seconds] : doc.provenance.timings)
        timings[stage] = seconds;
    const nlohmann::json j = {
        {"format", layout_format_name},
        {"version", doc.version},
        {"nodes", std::move(nodes)},
        {"edges", std::move(edges)},
        {"provenance",
         {{"seed", doc.provenance.seed}, {"params_hash", doc.provenance.params_hash}, {"timings", timings}}},
    };
    return j.dump() + "\n";
}

namespace detail
{
inline const nlohmann::json& field(const nlohmann::json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object())
        throw InputError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw InputError(where + ": missing field '" + key + "'");
    return *it;
}

inline double finite_number(const nlohmann::json& obj, const char* key, const std::string& where)
{
    const auto& v = field(obj, key, where);
    if (!v.is_number())
        throw InputError(where + ": field '" + key + "' is not a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw InputError(where + ": field '" + key + "' is not finite");
    return d;
}

inline std::size_t index_field(const nlohmann::json& obj, const char* key, const std::string& where, std::size_t n)
{
    const auto& v = field(obj, key, where);
    if (!v.is_number_unsigned())
        throw InputError(where + ": field '" + key + "' is not a node index");
    const auto i = v.get<std::size_t>();
    if (i >= n)
        throw InputError(where + ": node index " + std::to_string(i) + " out of range");
    return i;
}
} // namespace detail

inline LayoutDocument read_layout(std::string_view text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw InputError("malformed layout document at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    const std::string top = "layout document";
    const auto& format = detail::field(j, "format", top);
    if (!format.is_string() || format.get<std::string>() != layout_format_name)
        throw InputError(top + ": not a " + std::string(layout_format_name) + " document");
    const auto& version = detail::field(j, "version", top);
    if (!version.is_number_integer() || version.get<int>() != layout_format_version)
        throw InputError(top + ": unsupported version " + version.dump() + " (expected " +
                         std::to_string(layout_format_version) + ")");

    LayoutDocument doc;
    const auto& nodes = detail::field(j, "nodes", top);
    if (!nodes.is_array())
        throw InputError(top + ": 'nodes' is not an array");
    doc.nodes.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        const auto where = "node " + std::to_string(i);
        const auto& rec = nodes[i];
        const auto& id = detail::field(rec, "id", where);
        const auto& role = detail::field(rec, "role", where);
        if (!id.is_string() || !role.is_string())
            throw InputError(where + ": 'id' and 'role' must be strings");
        doc.nodes.push_back({id.get<std::string>(), parse_role(role.get<std::string>()),
                             detail::finite_number(rec, "x", where), detail::finite_number(rec, "y", where)});
    }
    const auto& edges = detail::field(j, "edges", top);
    if (!edges.is_array())
        throw InputError(top + ": 'edges' is not an array");
    doc.edges.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
    {
        const auto where = "edge " + std::to_string(i);
        doc.edges.push_back({detail::index_field(edges[i], "source", where, doc.nodes.size()),
                             detail::index_field(edges[i], "target", where, doc.nodes.size())});
    }
    const auto& prov = detail::field(j, "provenance", top);
    const auto& seed = detail::field(prov, "seed", "provenance");
    const auto& hash = detail::field(prov, "params_hash", "provenance");
    const auto& timings = detail::field(prov, "timings", "provenance");
    if (!seed.is_number_unsigned() || !hash.is_string() || !timings.is_object())
        throw InputError("provenance: malformed seed, params_hash or timings");
    doc.provenance.seed = seed.get<std::uint64_t>();
    doc.provenance.params_hash = hash.get<std::string>();
    for (const auto& [stage, seconds] : timings.items())
    {
        if (!seconds.is_number())
            throw InputError("provenance: timing '" + stage + "' is not a number");
        doc.provenance.timings[stage] = seconds.get<double>();
    }
    return doc;
}

struct SvgStyle
{
    double node_radius = 0.3;
    std::string transaction_color = "#d62728";
    std::string address_color = "#1f77b4";
    std::string plain_color = "#7f7f7f";
    std::string edge_color = "#404040";
    double edge_width = 0.06;
    double edge_opacity = 0.15;
    double padding = 2.0;
};

/// Edges first (one <line> each), then nodes (one <circle> each) grouped by role color.
inline std::string render_svg(const LayoutDocument& doc, const SvgStyle& style = {})
{
    if (!(style.node_radius > 0.0))
        throw std::invalid_argument("render_svg: node radius must be positive");
    BoundingBox box;
    for (const auto& n : doc.nodes)
        box.extend({n.x, n.y});
    double x0 = 0.0, y0 = 0.0, w = 1.0, h = 1.0;
    if (!box.empty())
    {
        const double pad = style.padding + style.node_radius;
        x0 = box.lo.x - pad;
        y0 = box.lo.y - pad;
        w = box.width() + 2 * pad;
        h = box.height() + 2 * pad;
    }
    std::string out;
    out.reserve(128 + doc.nodes.size() * 48 + doc.edges.size() * 64);
    char buf[256];
    auto emit = [&](const char* fmt, auto... args) {
        const int len = std::snprintf(buf, sizeof buf, fmt, args...);
        out.append(buf, static_cast<std::size_t>(len));
    };
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    emit("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"%.3f %.3f %.3f %.3f\">\n", x0, y0, w,
         h);
    emit("<g stroke=\"%s\" stroke-width=\"%.4g\" stroke-opacity=\"%.4g\">\n", style.edge_color.c_str(),
         style.edge_width, style.edge_opacity);
    for (const auto& e : doc.edges)
    {
        const auto& a = doc.nodes.at(e.source);
        const auto& b = doc.nodes.at(e.target);
        emit("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", a.x, a.y, b.x, b.y);
    }
    out += "</g>\n";
    for (auto role : {Role::plain, Role::address, Role::transaction})
    {
        const auto& color = role == Role::transaction ? style.transaction_color
                            : role == Role::address   ? style.address_color
                                                      : style.plain_color;
        bool open = false;
        for (const auto& n : doc.nodes)
        {
            if (n.role != role)
                continue;
            if (!open)
            {
                emit("<g fill=\"%s\" class=\"%s\">\n", color.c_str(), std::string(role_name(role)).c_str());
                open = true;
            }
            emit("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.4g\"/>\n", n.x, n.y, style.node_radius);
        }
        if (open)
            out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace fmmlayout

#endif
