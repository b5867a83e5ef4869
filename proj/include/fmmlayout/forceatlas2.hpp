#ifndef FMMLAYOUT_FORCEATLAS2_HPP
#define FMMLAYOUT_FORCEATLAS2_HPP

#include "common.hpp"
#include "fmm.hpp"
#include "graph.hpp"

namespace fmmlayout
{

enum class RepulsionMethod
{
    fmm,
    brute_force
};

struct Fa2Params
{
    double k_a = 1.0;  ///< edge attraction per unit distance
    double k_g = 0.05; ///< gravity per unit distance to the center
    double k_r = 10.0; ///< repulsion numerator (force k_r / r)
    std::size_t iterations = 500;
    double step0 = 0.1;
    double ratio_lo = 1.5; ///< traction / swing below this shrinks the step
    double ratio_hi = 3.0; ///< above this grows it
    double step_factor = 1.3;
    double step_min = 1e-4;
    double step_max = 10.0;
    double unit_length = 1.0; ///< scale of the initial square and of the stopping rule
    Vec2 center{};
    std::uint64_t seed = 0;
    RepulsionMethod repulsion = RepulsionMethod::fmm;

    void validate() const
    {
        if (!(k_a > 0 && k_g > 0 && k_r > 0 && step0 > 0 && step_factor > 1 && unit_length > 0))
            throw std::invalid_argument("ForceAtlas2 constants must be positive (step factor > 1)");
        if (!(ratio_lo < ratio_hi))
            throw std::invalid_argument("ForceAtlas2 ratio interval must satisfy lo < hi");
        if (!(step_min > 0 && step_min <= step_max))
            throw std::invalid_argument("ForceAtlas2 step bounds must satisfy 0 < min <= max");
    }
};

struct Fa2State
{
    Layout layout;
    std::vector<Vec2> prev_forces; ///< F_{t-1}; empty before the first step
    double step = 0.1;
    std::size_t iteration = 0;
    double swing = 0.0;
    double traction = 0.0;
    double max_displacement = 0.0; ///< largest node move of the last step
};

/// For each edge (u, v): k_a (p_v - p_u) on u and the negation on v.
inline std::vector<Vec2> attraction_forces(const Component& c, const Layout& layout, double k_a)
{
    std::vector<Vec2> f(layout.size());
    for (const auto& e : c.edges())
    {
        const Vec2 pull = (layout[e.v] - layout[e.u]) * k_a;
        f[e.u] += pull;
        f[e.v] -= pull;
    }
    return f;
}

inline std::vector<Vec2> gravity_forces(const Layout& layout, double k_g, Vec2 center = {})
{
    std::vector<Vec2> f(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i)
        f[i] = (center - layout[i]) * k_g;
    return f;
}

struct SwingTraction
{
    double swing = 0.0;
    double traction = 0.0;
};

/// swing = sum_n |F_t(n) - F_{t-1}(n)|, traction = sum_n |F_t(n) + F_{t-1}(n)|.
inline SwingTraction swing_traction(std::span<const Vec2> current, std::span<const Vec2> previous)
{
    if (current.size() != previous.size())
        throw std::invalid_argument("swing_traction: force arrays differ in length");
    SwingTraction st;
    for (std::size_t i = 0; i < current.size(); ++i)
    {
        st.swing += norm(current[i] - previous[i]);
        st.traction += norm(current[i] + previous[i]);
    }
    return st;
}

inline std::vector<Vec2> repulsion_forces(const Layout& layout, const Fa2Params& params, FmmParams fmm,
                                          std::vector<std::uint32_t>* degenerate = nullptr)
{
    if (layout.empty())
        return {};
    if (params.repulsion == RepulsionMethod::brute_force)
    {
        if (degenerate)
        {
            degenerate->clear();
            // Coincident points, found via sorting.
            std::vector<std::uint32_t> idx(layout.size());
            std::iota(idx.begin(), idx.end(), 0u);
            std::sort(idx.begin(), idx.end(), [&](auto a, auto b) {
                return std::pair(layout[a].x, layout[a].y) < std::pair(layout[b].x, layout[b].y);
            });
            for (std::size_t k = 0; k + 1 < idx.size(); ++k)
                if (layout[idx[k]] == layout[idx[k + 1]])
                {
                    degenerate->push_back(idx[k]);
                    degenerate->push_back(idx[k + 1]);
                }
            std::sort(degenerate->begin(), degenerate->end());
            degenerate->erase(std::unique(degenerate->begin(), degenerate->end()), degenerate->end());
        }
        return brute_force_repulsion(layout, params.k_r);
    }
    fmm.k_r = params.k_r;
    auto result = evaluate_repulsion(layout, fmm);
    if (degenerate)
        *degenerate = std::move(result.degenerate_nodes);
    return std::move(result.forces);
}

/// Largest step the update may take: step_max, lowered to the Gershgorin bound
/// 1 / (2 k_a max_degree + k_g) on the stiffness of the linear attraction and gravity
/// terms (never below step_min). Beyond it the explicit update amplifies oscillations.
inline double fa2_step_ceiling(const Component& c, const Fa2Params& params)
{
    const double stiffness = 2.0 * params.k_a * static_cast<double>(c.max_degree()) + params.k_g;
    return std::max(params.step_min, std::min(params.step_max, 1.0 / stiffness));
}

namespace detail
{
inline std::vector<Vec2> total_forces(const Component& c, const Layout& layout, const Fa2Params& params,
                                      const FmmParams& fmm, std::vector<std::uint32_t>& offending)
{
    auto f = attraction_forces(c, layout, params.k_a);
    std::vector<std::uint32_t> degenerate;
    const auto rep = repulsion_forces(layout, params, fmm, &degenerate);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] += (params.center - layout[i]) * params.k_g + rep[i];
    offending = std::move(degenerate);
    for (std::uint32_t i = 0; i < f.size(); ++i)
        if (!is_finite(f[i]))
            offending.push_back(i);
    std::sort(offending.begin(), offending.end());
    offending.erase(std::unique(offending.begin(), offending.end()), offending.end());
    return f;
}
} // namespace detail

/// One iteration: forces, global swing/traction step control, position update.
///
/// Nodes that sit on top of each other (or produce non-finite forces) are jittered by
/// 1e-6 of the layout scale and the forces recomputed once.
inline void fa2_advance(const Component& c, Fa2State& state, const Fa2Params& params, const FmmParams& fmm)
{
    auto& p = state.layout;
    if (p.size() != c.size())
        throw std::invalid_argument("fa2_step: layout size does not match the component");
    std::vector<std::uint32_t> offending;
    auto forces = detail::total_forces(c, p, params, fmm, offending);
    if (!offending.empty())
    {
        const auto box = bounding_box(p);
        double scale = std::hypot(box.width(), box.height());
        if (!(scale > 0.0) || !std::isfinite(scale))
            scale = params.unit_length;
        Rng rng(params.seed, 0x6a177e5ULL + state.iteration);
        for (auto i : offending)
            p[i] += rng.unit_direction() * (1e-6 * scale);
        forces = detail::total_forces(c, p, params, fmm, offending);
        for (const auto& f : forces)
            if (!is_finite(f))
                throw AlgorithmError("ForceAtlas2: non-finite force persists after jitter");
    }

    if (!state.prev_forces.empty())
    {
        const auto st = swing_traction(forces, state.prev_forces);
        state.swing = st.swing;
        state.traction = st.traction;
        if (st.swing >= 1e-12)
        {
            const double ratio = st.traction / st.swing;
            if (ratio > params.ratio_hi)
                state.step *= params.step_factor;
            else if (ratio < params.ratio_lo)
                state.step /= params.step_factor;
        }
    }
    state.step = std::clamp(state.step, params.step_min, fa2_step_ceiling(c, params));

    double max_move = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        const Vec2 move = forces[i] * state.step;
        p[i] += move;
        max_move = std::max(max_move, norm(move));
    }
    state.max_displacement = max_move;
    state.prev_forces = std::move(forces);
    ++state.iteration;
}

inline Fa2State fa2_step(const Component& c, Fa2State state, const Fa2Params& params, const FmmParams& fmm)
{
    fa2_advance(c, state, params, fmm);
    return state;
}

/// Uniform random positions in a square of side sqrt(n) * unit_length around the center.
inline Fa2State fa2_initial_state(std::size_t n, const Fa2Params& params)
{
    Fa2State s;
    s.step = std::clamp(params.step0, params.step_min, params.step_max);
    s.layout.resize(n);
    Rng rng(params.seed);
    const double half = 0.5 * std::sqrt(static_cast<double>(n)) * params.unit_length;
    for (auto& q : s.layout)
        q = params.center + Vec2{rng.uniform(-half, half), rng.uniform(-half, half)};
    return s;
}

/// Runs the simulation until the iteration budget is spent or no node moves more
/// than 1e-4 * unit_length in a step.
inline Fa2State fa2_run(const Component& c, const Fa2Params& params, const FmmParams& fmm)
{
    params.validate();
    if (c.size() == 0)
        throw std::invalid_argument("fa2_layout: empty component");
    auto state = fa2_initial_state(c.size(), params);
    while (state.iteration < params.iterations)
    {
        fa2_advance(c, state, params, fmm);
        if (state.max_displacement < 1e-4 * params.unit_length)
            break;
    }
    return state;
}

inline Layout fa2_layout(const Component& c, const Fa2Params& params, const FmmParams& fmm)
{
    return fa2_run(c, params, fmm).layout;
}

} // namespace fmmlayout

#endif
