#include <fmmlayout/layout_io.hpp>

#include <gtest/gtest.h>

#include <regex>

using namespace fmmlayout;

namespace
{
LayoutDocument three_nodes()
{
    LayoutDocument doc;
    doc.nodes = {{"t1", Role::transaction, 0.0, 0.0}, {"a1", Role::address, 1.5, -2.25}, {"a2", Role::address, 1e-17, 3e8}};
    doc.edges = {{0, 1}, {0, 2}};
    doc.provenance.seed = 42;
    doc.provenance.params_hash = params_fingerprint({});
    return doc;
}

std::size_t count(const std::string& s, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1))
        ++n;
    return n;
}
} // namespace

TEST(LayoutJson, EmptyDocumentRoundTrips)
{
    const LayoutDocument doc;
    EXPECT_EQ(read_layout(write_layout(doc)), doc);
}

TEST(LayoutJson, ThreeNodesRoundTripExactly)
{
    const auto doc = three_nodes();
    const auto text = write_layout(doc);
    EXPECT_EQ(read_layout(text), doc);
    EXPECT_EQ(write_layout(read_layout(text)), text);
    EXPECT_EQ(text.back(), '\n');
    EXPECT_NE(text.find("\"format\":\"fmmlayout-layout\""), std::string::npos);
}

TEST(LayoutJson, LargeDocumentRoundTrips)
{
    LayoutDocument doc;
    Rng rng(3);
    for (std::size_t i = 0; i < 100000; ++i)
        doc.nodes.push_back({"n" + std::to_string(i), i % 2 ? Role::address : Role::transaction,
                             rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4)});
    for (std::size_t i = 1; i < 100000; ++i)
        doc.edges.push_back({rng.below(i), i});
    doc.provenance.timings = {{"meta_layout", 1.25}};
    EXPECT_EQ(read_layout(write_layout(doc)), doc);
}

TEST(LayoutJson, NonFiniteCoordinatesRejected)
{
    auto doc = three_nodes();
    doc.nodes[1].x = std::nan("");
    EXPECT_THROW(write_layout(doc), AlgorithmError);
    doc.nodes[1].x = std::numeric_limits<double>::infinity();
    EXPECT_THROW(write_layout(doc), AlgorithmError);

    auto text = write_layout(three_nodes());
    text.replace(text.find("1.5"), 3, "NaN");
    EXPECT_THROW(read_layout(text), InputError);
}

TEST(LayoutJson, TruncatedTextReportsByteOffset)
{
    const auto text = write_layout(three_nodes());
    try
    {
        read_layout(std::string_view(text).substr(0, text.size() / 2));
        FAIL() << "expected an error";
    }
    catch (const InputError& e)
    {
        EXPECT_TRUE(std::regex_search(e.what(), std::regex("at byte [0-9]+"))) << e.what();
    }
}

TEST(LayoutJson, StructuralErrors)
{
    const auto text = write_layout(three_nodes());
    auto replaced = [&](const std::string& from, const std::string& to) {
        auto t = text;
        t.replace(t.find(from), from.size(), to);
        return t;
    };
    EXPECT_THROW(read_layout(replaced("\"version\":1", "\"version\":2")), InputError);
    EXPECT_THROW(read_layout(replaced("\"format\":\"fmmlayout-layout\"", "\"format\":\"other\"")), InputError);
    EXPECT_THROW(read_layout(replaced("\"role\":\"address\"", "\"role\":\"wallet\"")), InputError);
    EXPECT_THROW(read_layout(replaced("\"target\":2", "\"target\":3")), InputError);
    EXPECT_THROW(read_layout(replaced("\"nodes\":", "\"vertices\":")), InputError);
    EXPECT_THROW(read_layout("[]"), InputError);
    EXPECT_THROW(read_layout(""), InputError);
}

TEST(LayoutJson, FuzzedInputNeverCrashes)
{
    const auto text = write_layout(three_nodes());
    Rng rng(17);
    for (int trial = 0; trial < 2000; ++trial)
    {
        auto t = text;
        const auto edits = 1 + rng.below(4);
        for (std::size_t e = 0; e < edits; ++e)
        {
            const auto pos = rng.below(t.size());
            switch (rng.below(3))
            {
            case 0: t[pos] = static_cast<char>(32 + rng.below(95)); break;
            case 1: t.erase(pos, 1); break;
            default: t.insert(pos, 1, "{}[],:\"0"[rng.below(8)]);
            }
        }
        try
        {
            const auto doc = read_layout(t);
            for (const auto& n : doc.nodes)
                EXPECT_TRUE(std::isfinite(n.x) && std::isfinite(n.y));
            for (const auto& e : doc.edges)
                EXPECT_TRUE(e.source < doc.nodes.size() && e.target < doc.nodes.size());
        }
        catch (const InputError&)
        {
        }
    }
}

TEST(Svg, EmptyDocument)
{
    const auto svg = render_svg(LayoutDocument{});
    EXPECT_NE(svg.find("viewBox=\"0.000 0.000 1.000 1.000\""), std::string::npos);
    EXPECT_EQ(count(svg, "<circle"), 0u);
    EXPECT_EQ(count(svg, "<line"), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Svg, TwoNodesOneEdge)
{
    LayoutDocument doc;
    doc.nodes = {{"t", Role::transaction, 0, 0}, {"a", Role::address, 4, 2}};
    doc.edges = {{0, 1}};
    const auto svg = render_svg(doc);
    EXPECT_EQ(count(svg, "<circle"), 2u);
    EXPECT_EQ(count(svg, "<line"), 1u);
    EXPECT_LT(svg.find("<line"), svg.find("<circle"));
    EXPECT_NE(svg.find("class=\"transaction\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"address\""), std::string::npos);
    // Box [0,4]x[0,2] padded by 2 + 0.3 on each side.
    EXPECT_NE(svg.find("viewBox=\"-2.300 -2.300 8.600 6.600\""), std::string::npos) << svg;
}

TEST(Svg, RejectsNonPositiveRadius)
{
    SvgStyle style;
    style.node_radius = 0;
    EXPECT_THROW(render_svg(three_nodes(), style), std::invalid_argument);
    style.node_radius = -1;
    EXPECT_THROW(render_svg(three_nodes(), style), std::invalid_argument);
}

TEST(Svg, Deterministic)
{
    EXPECT_EQ(render_svg(three_nodes()), render_svg(three_nodes()));
}

TEST(Document, FromGraphLayout)
{
    const auto g = parse_edge_list("a,b\nb,c");
    LayoutParams p;
    p.seed = 5;
    const auto layout = layout_graph(g, p);
    const auto doc = make_document(g, layout, p);
    ASSERT_EQ(doc.nodes.size(), 3u);
    EXPECT_EQ(doc.nodes[1].id, "b");
    EXPECT_EQ(doc.nodes[2].x, layout.positions[2].x);
    EXPECT_EQ(doc.edges, (std::vector<EdgeRecord>{{0, 1}, {1, 2}}));
    EXPECT_EQ(doc.provenance.seed, 5u);
    EXPECT_TRUE(doc.provenance.timings.empty());
    EXPECT_FALSE(make_document(g, layout, p, true).provenance.timings.empty());
    auto q = p;
    q.spacing = 3;
    EXPECT_NE(params_fingerprint(p), params_fingerprint(q));
    EXPECT_EQ(params_fingerprint(p).size(), 16u);
}
