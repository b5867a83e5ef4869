#include "support.hpp"

#include <fmmlayout/kamada_kawai.hpp>

#include <gtest/gtest.h>

using namespace fmmlayout;
using namespace testing_support;

namespace
{
DistanceMatrix two_node_distance(double d12)
{
    DistanceMatrix d(2);
    d(0, 1) = d(1, 0) = d12;
    return d;
}

std::size_t count_events(const CoarseningRecord& r)
{
    return r.events.size();
}

// Checks that `c` is connected by a plain BFS.
bool connected(const Component& c)
{
    if (c.size() == 0)
        return true;
    std::vector<bool> seen(c.size(), false);
    std::vector<NodeIndex> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty())
    {
        const auto u = stack.back();
        stack.pop_back();
        for (auto v : c.neighbors(u))
            if (!seen[v])
            {
                seen[v] = true;
                ++count;
                stack.push_back(v);
            }
    }
    return count == c.size();
}
} // namespace

TEST(KKEnergy, TwoNodes)
{
    const auto d = two_node_distance(1.0);
    EXPECT_EQ(kk_energy({{0, 0}, {1, 0}}, d, 1.0), 0.0);
    EXPECT_EQ(kk_energy({{0, 0}, {2, 0}}, d, 1.0), 1.0);
}

TEST(KKEnergy, CollinearPathIsPerfect)
{
    const auto d = floyd_warshall(path_graph(3));
    EXPECT_EQ(kk_energy({{0, 0}, {1.5, 0}, {3, 0}}, d, 1.5), 0.0);
}

TEST(KKEnergy, SizeMismatch)
{
    EXPECT_THROW(kk_energy({{0, 0}}, two_node_distance(1.0), 1.0), std::invalid_argument);
}

TEST(KKEnergy, GradientAndHessianMatchFiniteDifferences)
{
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto c = random_connected(10, 5, rng, trial % 2 == 1);
        const auto d = floyd_warshall(c);
        Layout p(10);
        for (auto& q : p)
            q = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const double l = rng.uniform(0.5, 2.0);
        const double h = 1e-5;
        for (std::size_t m = 0; m < 10; ++m)
        {
            auto energy_at = [&](Vec2 at) {
                auto q = p;
                q[m] = at;
                return kk_energy(q, d, l);
            };
            auto grad_at = [&](Vec2 at) {
                auto q = p;
                q[m] = at;
                return kk_node_gradient(q, d, l, m);
            };
            const Vec2 g = kk_node_gradient(p, d, l, m);
            const Vec2 fd{(energy_at(p[m] + Vec2{h, 0}) - energy_at(p[m] - Vec2{h, 0})) / (2 * h),
                          (energy_at(p[m] + Vec2{0, h}) - energy_at(p[m] - Vec2{0, h})) / (2 * h)};
            EXPECT_LE(norm(g - fd), 1e-5 * std::max(1.0, norm(fd))) << "trial " << trial << " node " << m;

            const auto H = kk_node_hessian(p, d, l, m);
            const Vec2 dx = (grad_at(p[m] + Vec2{h, 0}) - grad_at(p[m] - Vec2{h, 0})) * (1 / (2 * h));
            const Vec2 dy = (grad_at(p[m] + Vec2{0, h}) - grad_at(p[m] - Vec2{0, h})) * (1 / (2 * h));
            const double scale = std::max({1.0, std::abs(H.xx), std::abs(H.yy), std::abs(H.xy)});
            EXPECT_NEAR(H.xx, dx.x, 1e-5 * scale);
            EXPECT_NEAR(H.xy, dx.y, 1e-5 * scale);
            EXPECT_NEAR(H.xy, dy.x, 1e-5 * scale);
            EXPECT_NEAR(H.yy, dy.y, 1e-5 * scale);
        }
    }
}

TEST(KKLayout, SingleNodeAtOrigin)
{
    const auto c = Component::from_edges(1, {});
    const auto p = kk_layout(c, floyd_warshall(c), {}, 3);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0], (Vec2{0, 0}));
}

TEST(KKLayout, EmptyIsAnError)
{
    EXPECT_THROW(kk_layout_run(DistanceMatrix(0), {}, 0), std::invalid_argument);
}

TEST(KKLayout, TriangleReachesEquilateral)
{
    const auto c = complete_graph(3);
    const auto d = floyd_warshall(c);
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        EXPECT_LT(kk_energy(kk_layout(c, d, {}, seed), d, 1.0), 1e-6);
}

TEST(KKLayout, FourCycleCannotBePerfect)
{
    const auto c = cycle_graph(4);
    const auto d = floyd_warshall(c);
    const auto run = kk_layout_run(d, {}, 8);
    EXPECT_GT(run.final_energy, 0.0);
    EXPECT_LE(run.final_energy, kk_energy(kk_initial_layout(4, 1.0, 8), d, 1.0));
}

TEST(KKLayout, EnergyNeverIncreases)
{
    Rng rng(1);
    for (int trial = 0; trial < 30; ++trial)
    {
        const auto c = random_connected(5 + rng.below(40), rng.below(20), rng, trial % 3 == 0);
        const auto d = floyd_warshall(c);
        const auto run = kk_layout_run(d, {}, trial);
        EXPECT_LE(run.final_energy, run.initial_energy) << "trial " << trial;
        EXPECT_NEAR(run.final_energy, kk_energy(run.layout, d, 1.0), 1e-12 * (1 + run.final_energy));
    }
}

TEST(KKLayout, EnergyNeverIncreasesStepByStep)
{
    Rng rng(6);
    const auto c = random_connected(25, 10, rng);
    const auto d = floyd_warshall(c);
    double previous = kk_energy(kk_initial_layout(25, 1.0, 4), d, 1.0);
    for (std::size_t budget = 1; budget < 60; ++budget)
    {
        KKParams p;
        p.max_outer_iterations = budget;
        const double e = kk_layout_run(d, p, 4).final_energy;
        EXPECT_LE(e, previous * (1 + 1e-12));
        previous = e;
    }
}

TEST(KKLayout, ConvergesBelowNodeTolerance)
{
    Rng rng(3);
    const auto c = random_connected(30, 15, rng);
    const auto d = floyd_warshall(c);
    const auto p = kk_layout(c, d, {}, 1);
    for (std::size_t m = 0; m < 30; ++m)
        EXPECT_LT(norm(kk_node_gradient(p, d, 1.0, m)), 2e-3);
}

TEST(KKLayout, DeterministicPerSeed)
{
    Rng rng(12);
    const auto c = random_connected(40, 20, rng);
    const auto d = floyd_warshall(c);
    EXPECT_EQ(kk_layout(c, d, {}, 5), kk_layout(c, d, {}, 5));
    EXPECT_NE(kk_layout(c, d, {}, 5), kk_layout(c, d, {}, 6));
}

TEST(KKLayout, UnitLengthScalesTheResult)
{
    const auto c = path_graph(6);
    const auto d = floyd_warshall(c);
    KKParams p;
    p.unit_length = 2.5;
    const auto layout = kk_layout(c, d, p, 0);
    EXPECT_LT(kk_energy(layout, d, 2.5), 1e-3);
    EXPECT_NEAR(norm(layout[0] - layout[5]), 12.5, 0.05);
}

TEST(KKLayout, InitialLayoutIsACircle)
{
    const auto p = kk_initial_layout(12, 1.0, 3);
    const double r = 12 / (2 * 3.14159265358979323846);
    for (const auto& q : p)
        EXPECT_NEAR(norm(q), r, 1e-12);
}

TEST(ContractDegreeOne, Star)
{
    const auto out = contract_degree_one(star_graph(3));
    EXPECT_EQ(out.component.size(), 2u);
    EXPECT_EQ(count_events(out.record), 2u);
    EXPECT_EQ(out.component.edge_count(), 1u);
}

TEST(ContractDegreeOne, TriangleUnchanged)
{
    const auto out = contract_degree_one(complete_graph(3));
    EXPECT_EQ(out.component.size(), 3u);
    EXPECT_TRUE(out.record.events.empty());
}

TEST(ContractDegreeOne, RandomTreeCollapsesToTwoNodes)
{
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto out = contract_degree_one(random_tree(50, rng));
        EXPECT_EQ(out.component.size(), 2u);
        EXPECT_EQ(count_events(out.record), 48u);
    }
}

TEST(ContractDegreeOne, KeepsParentIndices)
{
    const auto c = Component::from_edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}, {2, 3, 2.0}}, {10, 11, 12, 13});
    const auto out = contract_degree_one(c);
    EXPECT_EQ(out.component.nodes(), (std::vector<NodeIndex>{10, 11, 12}));
    ASSERT_EQ(out.record.events.size(), 1u);
    const auto& e = std::get<DegreeOneEvent>(out.record.events[0]);
    EXPECT_EQ(e.removed, 3u);
    EXPECT_EQ(e.neighbor, 2u);
    EXPECT_EQ(e.length, 2.0);
}

TEST(RestoreDegreeOne, AwayFromCentroid)
{
    CoarseningRecord rec;
    rec.original_size = 3;
    rec.kept = {0, 1};
    rec.events = {DegreeOneEvent{2, 1, 1.0}};
    const auto out = restore_degree_one({{-1, 0}, {1, 0}}, rec);
    EXPECT_EQ(out[2], (Vec2{2, 0}));
}

TEST(RestoreDegreeOne, NeighborAtCentroidUsesSeededDirection)
{
    CoarseningRecord rec;
    rec.original_size = 2;
    rec.kept = {0};
    rec.events = {DegreeOneEvent{1, 0, 1.0}};
    const auto a = restore_degree_one({{0, 0}}, rec, 1.0, 4);
    EXPECT_NEAR(norm(a[1]), 1.0, 1e-12);
    EXPECT_EQ(a, restore_degree_one({{0, 0}}, rec, 1.0, 4));
}

TEST(RestoreDegreeOne, PathOfTen)
{
    const auto c = path_graph(10);
    const auto out = contract_degree_one(c);
    const auto coarse = kk_layout(out.component, floyd_warshall(out.component), {}, 0);
    const auto full = restore_degree_one(coarse, out.record);
    ASSERT_EQ(full.size(), 10u);
    for (const auto& p : full)
        EXPECT_TRUE(is_finite(p));
}

TEST(ContractDegreeTwo, Path)
{
    const auto out = contract_degree_two(path_graph(3));
    ASSERT_EQ(out.component.size(), 2u);
    ASSERT_EQ(out.component.edge_count(), 1u);
    EXPECT_EQ(out.component.edges()[0].weight, 2.0);
    EXPECT_EQ(out.record.events.size(), 1u);
}

TEST(ContractDegreeTwo, TriangleUnchanged)
{
    const auto out = contract_degree_two(cycle_graph(3));
    EXPECT_EQ(out.component.size(), 3u);
    EXPECT_TRUE(out.record.events.empty());
}

TEST(ContractDegreeTwo, LongCycleShrinksToTriangle)
{
    const auto out = contract_degree_two(cycle_graph(100));
    EXPECT_EQ(out.component.size(), 3u);
    EXPECT_EQ(out.record.events.size(), 97u);
    double total = 0;
    for (const auto& e : out.component.edges())
        total += e.weight;
    EXPECT_EQ(total, 100.0);
}

TEST(ContractDegreeTwo, PreservesShortestPathsBetweenKeptNodes)
{
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto c = random_series_parallel(30, rng);
        const auto out = contract_degree_two(c);
        EXPECT_TRUE(connected(out.component));
        const auto full = floyd_warshall(c);
        const auto coarse = floyd_warshall(out.component);
        for (std::size_t i = 0; i < out.record.kept.size(); ++i)
            for (std::size_t j = 0; j < out.record.kept.size(); ++j)
                EXPECT_EQ(coarse(i, j), full(out.record.kept[i], out.record.kept[j]));
    }
}

TEST(RestoreDegreeTwo, Midpoint)
{
    CoarseningRecord rec;
    rec.original_size = 3;
    rec.kept = {0, 2};
    rec.events = {DegreeTwoEvent{1, 0, 2, 1.0, 1.0}};
    EXPECT_EQ(restore_degree_two({{0, 0}, {2, 0}}, rec)[1], (Vec2{1, 0}));
}

TEST(RestoreDegreeTwo, NestedMidpointsOnPathOfFive)
{
    const auto out = contract_degree_two(path_graph(5));
    ASSERT_EQ(out.record.events.size(), 3u);
    ASSERT_EQ(out.component.size(), 2u);
    const auto full = restore_degree_two({{0, 0}, {4, 0}}, out.record);
    ASSERT_EQ(full.size(), 5u);
    const auto a = full[out.record.kept[0]];
    const auto b = full[out.record.kept[1]];
    for (const auto& ev : out.record.events)
    {
        const auto& e = std::get<DegreeTwoEvent>(ev);
        EXPECT_EQ(full[e.removed], (full[e.left] + full[e.right]) * 0.5);
    }
    std::vector<double> xs;
    for (const auto& p : full)
        xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    EXPECT_EQ(xs, (std::vector<double>{0, 0.5, 1, 2, 4}));
    EXPECT_EQ(norm(a - b), 4.0);
}

TEST(Restore, SizeMismatch)
{
    const auto out = contract_degree_one(star_graph(3));
    EXPECT_THROW(restore_coarsening({{0, 0}}, out.record), std::invalid_argument);
}
