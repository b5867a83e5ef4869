#ifndef FMMLAYOUT_FMM_HPP
#define FMMLAYOUT_FMM_HPP

// Fast multipole evaluation of the 2D repulsion field.
//
// Every point carries a unit charge and point j pushes point i with
// k_r (p_i - p_j) / |p_i - p_j|^2. Writing points as complex numbers z, the
// field at z is f(z) = sum_j 1 / (z - z_j) and the force is k_r conj(f(z)).
//
// Outgoing (multipole) expansion about c:  f(z) = sum_k b_k / (z - c)^(k+1),
//   b_k = sum_j (z_j - c)^k.
// Incoming (local) expansion about c:      f(z) = sum_l a_l (z - c)^l.
//
// The tree is adaptive. Neighbors of a cell are the touching cells of minimal size
// not smaller than the cell; its interaction list is made of the minimal cells that
// neighbor its parent, or children of such cells, minus its own neighbors.

#include "common.hpp"

#include <array>
#include <complex>
#include <numeric>
#include <span>
#include <vector>

namespace fmmlayout
{

using Complex = std::complex<double>;

struct FmmParams
{
    int order = 8;                  ///< expansion order p (p + 1 coefficients)
    std::size_t leaf_capacity = 32; ///< a cell with more points is subdivided
    int max_depth = 40;             ///< no subdivision below this depth
    double k_r = 1.0;               ///< repulsion constant
    unsigned threads = 1;

    void validate() const
    {
        if (order < 1 || order > 64)
            throw std::invalid_argument("FMM order must lie in [1, 64]");
        if (leaf_capacity < 1)
            throw std::invalid_argument("FMM leaf capacity must be >= 1");
        if (max_depth < 0 || max_depth > 60)
            throw std::invalid_argument("FMM max depth must lie in [0, 60]");
    }
};

struct Expansion
{
    enum class Kind
    {
        outgoing,
        incoming
    };

    Kind kind = Kind::outgoing;
    Complex center;
    std::vector<Complex> coefficients;

    int order() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
};

namespace detail
{
inline Complex to_complex(const Vec2& v) noexcept { return {v.x, v.y}; }

/// Binomial coefficients C(n, k) for n <= max_n.
class Binomials
{
public:
    explicit Binomials(int max_n) : n_(max_n + 1), table_(static_cast<std::size_t>(n_ * n_), 0.0)
    {
        for (int n = 0; n < n_; ++n)
        {
            at(n, 0) = 1.0;
            for (int k = 1; k <= n; ++k)
                at(n, k) = at(n - 1, k - 1) + (k <= n - 1 ? at(n - 1, k) : 0.0);
        }
    }
    double operator()(int n, int k) const noexcept { return table_[static_cast<std::size_t>(n * n_ + k)]; }

private:
    double& at(int n, int k) noexcept { return table_[static_cast<std::size_t>(n * n_ + k)]; }
    int n_;
    std::vector<double> table_;
};

inline const Binomials& binomials(int order)
{
    // Covers C(k + l, l) for k, l <= 64.
    static const Binomials table(129);
    if (order > 64)
        throw std::invalid_argument("FMM order above 64 is not supported");
    return table;
}

inline void p2m(Complex center, std::span<const Vec2> points, std::span<const std::uint32_t> ids,
                std::span<Complex> out)
{
    const int p = static_cast<int>(out.size()) - 1;
    for (auto id : ids)
    {
        const Complex s = to_complex(points[id]) - center;
        Complex power = 1.0;
        for (int k = 0; k <= p; ++k)
        {
            out[k] += power;
            power *= s;
        }
    }
}

// Adds the outgoing expansion `src` (about `from`) re-centered at `to` into `out`.
inline void m2m(std::span<const Complex> src, Complex from, Complex to, std::span<Complex> out)
{
    const int p = static_cast<int>(src.size()) - 1;
    const auto& binom = binomials(p);
    const Complex d = from - to;
    std::array<Complex, 65> dpow;
    dpow[0] = 1.0;
    for (int k = 1; k <= p; ++k)
        dpow[k] = dpow[k - 1] * d;
    for (int k = 0; k <= p; ++k)
    {
        Complex acc = 0.0;
        for (int m = 0; m <= k; ++m)
            acc += binom(k, m) * dpow[k - m] * src[m];
        out[k] += acc;
    }
}

// Adds the incoming expansion at `to` induced by outgoing `src` at `from`.
inline void m2l(std::span<const Complex> src, Complex from, Complex to, std::span<Complex> out)
{
    const int p = static_cast<int>(src.size()) - 1;
    const auto& binom = binomials(p);
    const Complex inv_d = 1.0 / (to - from);
    std::array<Complex, 131> inv_pow; // inv_pow[n] = (to - from)^-n
    inv_pow[0] = 1.0;
    for (int n = 1; n <= 2 * p + 1; ++n)
        inv_pow[n] = inv_pow[n - 1] * inv_d;
    for (int l = 0; l <= p; ++l)
    {
        Complex acc = 0.0;
        for (int k = 0; k <= p; ++k)
            acc += binom(k + l, l) * src[k] * inv_pow[k + l + 1];
        out[l] += (l % 2 == 0) ? acc : -acc;
    }
}

// Adds the incoming expansion about `center` of unit charges at `ids` directly, with
// no multipole truncation: a_l = -sum_j (z_j - center)^-(l+1).
inline void p2l(std::span<const Vec2> points, std::span<const std::uint32_t> ids, Complex center,
                std::span<Complex> out)
{
    for (auto id : ids)
    {
        const Complex inv = 1.0 / (to_complex(points[id]) - center);
        Complex power = inv;
        for (auto& a : out)
        {
            a -= power;
            power *= inv;
        }
    }
}

// Adds the incoming expansion `src` (about `from`) re-centered at `to` into `out`.
inline void l2l(std::span<const Complex> src, Complex from, Complex to, std::span<Complex> out)
{
    const int p = static_cast<int>(src.size()) - 1;
    const auto& binom = binomials(p);
    const Complex e = to - from;
    std::array<Complex, 65> epow;
    epow[0] = 1.0;
    for (int k = 1; k <= p; ++k)
        epow[k] = epow[k - 1] * e;
    for (int m = 0; m <= p; ++m)
    {
        Complex acc = 0.0;
        for (int l = m; l <= p; ++l)
            acc += binom(l, m) * src[l] * epow[l - m];
        out[m] += acc;
    }
}

inline Complex eval_outgoing(std::span<const Complex> coeffs, Complex center, Complex z)
{
    const Complex inv = 1.0 / (z - center);
    Complex power = inv;
    Complex acc = 0.0;
    for (const auto& b : coeffs)
    {
        acc += b * power;
        power *= inv;
    }
    return acc;
}

inline Complex eval_incoming(std::span<const Complex> coeffs, Complex center, Complex z)
{
    const Complex w = z - center;
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * w + *it;
    return acc;
}

inline Vec2 field_to_force(Complex field, double k_r) noexcept { return {k_r * field.real(), -k_r * field.imag()}; }
} // namespace detail

/// Outgoing expansion of unit charges at `points` about `center`.
inline Expansion outgoing_from_points(Vec2 center, std::span<const Vec2> points, int order)
{
    Expansion e{Expansion::Kind::outgoing, detail::to_complex(center), std::vector<Complex>(order + 1)};
    std::vector<std::uint32_t> ids(points.size());
    std::iota(ids.begin(), ids.end(), 0u);
    detail::p2m(e.center, points, ids, e.coefficients);
    return e;
}

/// M2M: exact re-centering of an outgoing expansion.
inline Expansion translate_outgoing(const Expansion& child, Vec2 new_center)
{
    Expansion e{Expansion::Kind::outgoing, detail::to_complex(new_center),
                std::vector<Complex>(child.coefficients.size())};
    detail::m2m(child.coefficients, child.center, e.center, e.coefficients);
    return e;
}

/// M2L: the field of an outgoing expansion as an incoming expansion about
/// `target_center`. Only accurate when the target is well separated from the source.
inline Expansion outgoing_to_incoming(const Expansion& source, Vec2 target_center)
{
    Expansion e{Expansion::Kind::incoming, detail::to_complex(target_center),
                std::vector<Complex>(source.coefficients.size())};
    detail::m2l(source.coefficients, source.center, e.center, e.coefficients);
    return e;
}

/// L2L: exact re-centering of an incoming expansion.
inline Expansion translate_incoming(const Expansion& parent, Vec2 new_center)
{
    Expansion e{Expansion::Kind::incoming, detail::to_complex(new_center),
                std::vector<Complex>(parent.coefficients.size())};
    detail::l2l(parent.coefficients, parent.center, e.center, e.coefficients);
    return e;
}

/// Force on a unit charge at `at` described by an expansion of either kind.
inline Vec2 evaluate_expansion(const Expansion& e, Vec2 at, double k_r = 1.0)
{
    const auto z = detail::to_complex(at);
    const auto field = e.kind == Expansion::Kind::outgoing ? detail::eval_outgoing(e.coefficients, e.center, z)
                                                           : detail::eval_incoming(e.coefficients, e.center, z);
    return detail::field_to_force(field, k_r);
}

/// Adaptive quadtree over a point set.
///
/// Cells are stored breadth first, so cell indices are sorted by depth. The points of
/// a cell occupy the contiguous range [begin, end) of `order()`.
class QuadTree
{
public:
    static constexpr std::int32_t none = -1;

    struct Cell
    {
        Vec2 center;
        double half_width = 0.0;
        int level = 0;
        std::uint64_t ix = 0; ///< grid coordinates at `level`
        std::uint64_t iy = 0;
        std::int32_t parent = none;
        std::int32_t first_child = none; ///< children are first_child .. first_child + 3
        std::uint32_t begin = 0;
        std::uint32_t end = 0;

        bool is_leaf() const noexcept { return first_child == none; }
        std::uint32_t count() const noexcept { return end - begin; }
    };

    QuadTree(std::span<const Vec2> points, std::size_t leaf_capacity, int max_depth)
    {
        if (points.empty())
            throw std::invalid_argument("QuadTree: no points");
        if (leaf_capacity < 1)
            throw std::invalid_argument("QuadTree: leaf capacity must be >= 1");
        BoundingBox box;
        for (const auto& p : points)
        {
            if (!is_finite(p))
                throw std::invalid_argument("QuadTree: non-finite point");
            box.extend(p);
        }
        Cell root;
        root.center = {0.5 * (box.lo.x + box.hi.x), 0.5 * (box.lo.y + box.hi.y)};
        root.half_width = 0.5 * std::max(box.width(), box.height()) * (1.0 + 1e-9);
        if (root.half_width == 0.0)
            root.half_width = std::max(1.0, 1e-9 * std::max(std::abs(root.center.x), std::abs(root.center.y)));
        root.end = static_cast<std::uint32_t>(points.size());
        order_.resize(points.size());
        std::iota(order_.begin(), order_.end(), 0u);
        cells_.push_back(root);

        std::vector<std::uint32_t> scratch;
        for (std::size_t c = 0; c < cells_.size(); ++c)
        {
            if (cells_[c].count() <= leaf_capacity || cells_[c].level >= max_depth)
                continue;
            const Cell cell = cells_[c];
            // Stable split into quadrants q = (x >= cx) + 2 (y >= cy).
            std::array<std::uint32_t, 4> counts{};
            auto quadrant = [&](std::uint32_t id) {
                return (points[id].x >= cell.center.x ? 1 : 0) + (points[id].y >= cell.center.y ? 2 : 0);
            };
            for (auto i = cell.begin; i < cell.end; ++i)
                ++counts[quadrant(order_[i])];
            std::array<std::uint32_t, 4> start{};
            start[0] = cell.begin;
            for (int q = 1; q < 4; ++q)
                start[q] = start[q - 1] + counts[q - 1];
            scratch.assign(order_.begin() + cell.begin, order_.begin() + cell.end);
            auto fill = start;
            for (auto id : scratch)
                order_[fill[quadrant(id)]++] = id;

            cells_[c].first_child = static_cast<std::int32_t>(cells_.size());
            for (int q = 0; q < 4; ++q)
            {
                Cell child;
                child.half_width = 0.5 * cell.half_width;
                child.center = {cell.center.x + ((q & 1) ? child.half_width : -child.half_width),
                                cell.center.y + ((q & 2) ? child.half_width : -child.half_width)};
                child.level = cell.level + 1;
                child.ix = 2 * cell.ix + ((q & 1) ? 1 : 0);
                child.iy = 2 * cell.iy + ((q & 2) ? 1 : 0);
                child.parent = static_cast<std::int32_t>(c);
                child.begin = start[q];
                child.end = start[q] + counts[q];
                cells_.push_back(child);
            }
        }
        build_lists();
    }

    const std::vector<Cell>& cells() const noexcept { return cells_; }
    const Cell& cell(std::int32_t c) const { return cells_[static_cast<std::size_t>(c)]; }
    const std::vector<std::uint32_t>& order() const noexcept { return order_; }

    std::span<const std::uint32_t> points_in(std::int32_t c) const
    {
        const auto& cl = cell(c);
        return {order_.data() + cl.begin, cl.count()};
    }

    std::span<const std::int32_t> neighbors(std::int32_t c) const
    {
        return {neighbors_.data() + neighbor_offsets_[c], neighbor_offsets_[c + 1] - neighbor_offsets_[c]};
    }

    std::span<const std::int32_t> interaction_list(std::int32_t c) const
    {
        return {interactions_.data() + interaction_offsets_[c],
                interaction_offsets_[c + 1] - interaction_offsets_[c]};
    }

    /// Leaf containing a location inside the root square.
    std::int32_t locate(const Vec2& p) const
    {
        std::int32_t c = 0;
        while (!cell(c).is_leaf())
        {
            const auto& cl = cell(c);
            c = cl.first_child + (p.x >= cl.center.x ? 1 : 0) + (p.y >= cl.center.y ? 2 : 0);
        }
        return c;
    }

    /// Deepest existing cell on the path to grid position (ix, iy) at `level`.
    std::int32_t find(int level, std::uint64_t ix, std::uint64_t iy) const
    {
        std::int32_t c = 0;
        for (int lv = 0; lv < level && !cell(c).is_leaf(); ++lv)
        {
            const int shift = level - lv - 1;
            const int q = static_cast<int>((ix >> shift) & 1) + 2 * static_cast<int>((iy >> shift) & 1);
            c = cell(c).first_child + q;
        }
        return c;
    }

    /// True if the closed squares of a and b share at least a boundary point.
    bool touching(std::int32_t a, std::int32_t b) const
    {
        const auto& ca = cell(a);
        const auto& cb = cell(b);
        const int level = std::max(ca.level, cb.level);
        const std::uint64_t sa = std::uint64_t{1} << (level - ca.level);
        const std::uint64_t sb = std::uint64_t{1} << (level - cb.level);
        const std::uint64_t ax = ca.ix * sa, ay = ca.iy * sa, bx = cb.ix * sb, by = cb.iy * sb;
        return ax <= bx + sb && bx <= ax + sa && ay <= by + sb && by <= ay + sa;
    }

private:
    std::vector<std::int32_t> compute_neighbors(std::int32_t c) const
    {
        std::vector<std::int32_t> out;
        const auto& cl = cell(c);
        const std::int64_t side = std::int64_t{1} << cl.level;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
            {
                if (dx == 0 && dy == 0)
                    continue;
                const auto x = static_cast<std::int64_t>(cl.ix) + dx;
                const auto y = static_cast<std::int64_t>(cl.iy) + dy;
                if (x < 0 || y < 0 || x >= side || y >= side)
                    continue;
                const auto n = find(cl.level, static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y));
                if (std::find(out.begin(), out.end(), n) == out.end())
                    out.push_back(n);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    void build_lists()
    {
        const auto n = static_cast<std::int32_t>(cells_.size());
        neighbor_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
        for (std::int32_t c = 0; c < n; ++c)
        {
            const auto list = compute_neighbors(c);
            neighbors_.insert(neighbors_.end(), list.begin(), list.end());
            neighbor_offsets_[c + 1] = neighbors_.size();
        }
        interaction_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
        std::vector<std::int32_t> list;
        for (std::int32_t c = 0; c < n; ++c)
        {
            list.clear();
            const auto& cl = cell(c);
            if (cl.parent != none)
            {
                const auto& parent = cell(cl.parent);
                for (auto nb : neighbors(cl.parent))
                {
                    const auto& ncell = cell(nb);
                    if (ncell.level == parent.level && !ncell.is_leaf())
                    {
                        for (int q = 0; q < 4; ++q)
                            if (!touching(ncell.first_child + q, c))
                                list.push_back(ncell.first_child + q);
                    }
                    else if (!touching(nb, c))
                        list.push_back(nb);
                }
            }
            std::sort(list.begin(), list.end());
            interactions_.insert(interactions_.end(), list.begin(), list.end());
            interaction_offsets_[c + 1] = interactions_.size();
        }
    }

    std::vector<Cell> cells_;
    std::vector<std::uint32_t> order_;
    std::vector<std::int32_t> neighbors_;
    std::vector<std::size_t> neighbor_offsets_;
    std::vector<std::int32_t> interactions_;
    std::vector<std::size_t> interaction_offsets_;
};

inline QuadTree build_quadtree(std::span<const Vec2> points, const FmmParams& params)
{
    params.validate();
    return QuadTree(points, params.leaf_capacity, params.max_depth);
}

inline std::vector<std::int32_t> neighbor_cells(const QuadTree& t, std::int32_t cell)
{
    const auto s = t.neighbors(cell);
    return {s.begin(), s.end()};
}

inline std::vector<std::int32_t> interaction_list(const QuadTree& t, std::int32_t cell)
{
    const auto s = t.interaction_list(cell);
    return {s.begin(), s.end()};
}

struct RepulsionResult
{
    std::vector<Vec2> forces;
    std::size_t degenerate_pairs = 0;         ///< unordered pairs at identical coordinates (skipped)
    std::vector<std::uint32_t> degenerate_nodes; ///< sorted, unique
};

/// Repulsion on every point via the fast multipole method.
inline RepulsionResult evaluate_repulsion(std::span<const Vec2> points, const FmmParams& params)
{
    params.validate();
    if (points.empty())
        throw std::invalid_argument("evaluate_repulsion: no points");
    const QuadTree tree(points, params.leaf_capacity, params.max_depth);
    const auto& cells = tree.cells();
    const auto ncells = cells.size();
    const auto width = static_cast<std::size_t>(params.order) + 1;
    std::vector<Complex> outgoing(ncells * width);
    std::vector<Complex> incoming(ncells * width);
    auto out_of = [&](std::size_t c) { return std::span<Complex>(outgoing.data() + c * width, width); };
    auto in_of = [&](std::size_t c) { return std::span<Complex>(incoming.data() + c * width, width); };
    auto center_of = [&](std::size_t c) { return detail::to_complex(cells[c].center); };

    std::vector<std::size_t> level_start{0};
    for (std::size_t c = 1; c < ncells; ++c)
        if (cells[c].level != cells[c - 1].level)
            level_start.push_back(c);
    level_start.push_back(ncells);
    const auto levels = level_start.size() - 1;

    // Upward pass, deepest level first.
    for (std::size_t lv = levels; lv-- > 0;)
    {
        const auto first = level_start[lv];
        parallel_for(level_start[lv + 1] - first, params.threads, [&](std::size_t k) {
            const auto c = first + k;
            const auto& cl = cells[c];
            if (cl.count() == 0)
                return;
            if (cl.is_leaf())
                detail::p2m(center_of(c), points, tree.points_in(static_cast<std::int32_t>(c)), out_of(c));
            else
                for (int q = 0; q < 4; ++q)
                {
                    const auto child = static_cast<std::size_t>(cl.first_child + q);
                    if (cells[child].count())
                        detail::m2m(out_of(child), center_of(child), center_of(c), out_of(c));
                }
        });
    }

    // Downward pass.
    for (std::size_t lv = 1; lv < levels; ++lv)
    {
        const auto first = level_start[lv];
        parallel_for(level_start[lv + 1] - first, params.threads, [&](std::size_t k) {
            const auto c = first + k;
            const auto& cl = cells[c];
            if (cl.count() == 0)
                return;
            const auto parent = static_cast<std::size_t>(cl.parent);
            detail::l2l(in_of(parent), center_of(parent), center_of(c), in_of(c));
            for (auto s : tree.interaction_list(static_cast<std::int32_t>(c)))
            {
                const auto sc = static_cast<std::size_t>(s);
                if (!cells[sc].count())
                    continue;
                // A coarser leaf is only one target width away, where its truncated
                // outgoing series converges slowly; expand its points directly instead.
                if (cells[sc].level < cl.level)
                    detail::p2l(points, tree.points_in(s), center_of(c), in_of(c));
                else
                    detail::m2l(out_of(sc), center_of(sc), center_of(c), in_of(c));
            }
        });
    }

    // Leaf evaluation: incoming expansion plus direct sums over the near field.
    std::vector<std::int32_t> leaves;
    for (std::size_t c = 0; c < ncells; ++c)
        if (cells[c].is_leaf() && cells[c].count())
            leaves.push_back(static_cast<std::int32_t>(c));

    RepulsionResult result;
    result.forces.assign(points.size(), Vec2{});
    std::vector<std::size_t> coincident(points.size(), 0);
    parallel_for(leaves.size(), params.threads, [&](std::size_t k) {
        const auto leaf = leaves[k];
        const auto near = tree.neighbors(leaf);
        const auto lc = static_cast<std::size_t>(leaf);
        for (auto i : tree.points_in(leaf))
        {
            const Vec2 pi = points[i];
            const Complex far = detail::eval_incoming(in_of(lc), center_of(lc), detail::to_complex(pi));
            double fx = 0.0, fy = 0.0;
            auto direct = [&](std::int32_t cell) {
                for (auto j : tree.points_in(cell))
                {
                    const double dx = pi.x - points[j].x;
                    const double dy = pi.y - points[j].y;
                    const double r2 = dx * dx + dy * dy;
                    if (r2 == 0.0)
                    {
                        if (j != i)
                            ++coincident[i];
                        continue;
                    }
                    fx += dx / r2;
                    fy += dy / r2;
                }
            };
            direct(leaf);
            for (auto nb : near)
                direct(nb);
            result.forces[i] = {params.k_r * (far.real() + fx), params.k_r * (-far.imag() + fy)};
        }
    });
    for (std::uint32_t i = 0; i < points.size(); ++i)
        if (coincident[i])
        {
            result.degenerate_pairs += coincident[i];
            result.degenerate_nodes.push_back(i);
        }
    result.degenerate_pairs /= 2;
    return result;
}

/// Exact O(N^2) repulsion. Pairs at identical coordinates are skipped.
inline std::vector<Vec2> brute_force_repulsion(std::span<const Vec2> points, double k_r)
{
    const auto n = points.size();
    std::vector<Vec2> f(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double fx = 0.0, fy = 0.0;
        const Vec2 pi = points[i];
        for (std::size_t j = i + 1; j < n; ++j)
        {
            const double dx = pi.x - points[j].x;
            const double dy = pi.y - points[j].y;
            const double r2 = dx * dx + dy * dy;
            if (r2 == 0.0)
                continue;
            const double sx = dx / r2, sy = dy / r2;
            fx += sx;
            fy += sy;
            f[j].x -= sx;
            f[j].y -= sy;
        }
        f[i].x += fx;
        f[i].y += fy;
    }
    for (auto& v : f)
        v *= k_r;
    return f;
}

/// For every ordered pair (i, j), how many times the FMM accounts for the effect of
/// j on i: near-field direct sums at i's leaf plus M2L contributions along i's
/// ancestor chain. A correct tree yields 1 for every i != j and 0 on the diagonal.
inline std::vector<std::uint32_t> audit_pair_coverage(const QuadTree& tree, std::size_t n_points)
{
    std::vector<std::uint32_t> counts(n_points * n_points, 0);
    for (std::int32_t c = 0; c < static_cast<std::int32_t>(tree.cells().size()); ++c)
    {
        if (!tree.cell(c).is_leaf())
            continue;
        for (auto i : tree.points_in(c))
        {
            auto add_cell = [&](std::int32_t cell) {
                for (auto j : tree.points_in(cell))
                    ++counts[i * n_points + j];
            };
            for (auto j : tree.points_in(c))
                if (j != i)
                    ++counts[i * n_points + j];
            for (auto nb : tree.neighbors(c))
                add_cell(nb);
            for (std::int32_t a = c; a != QuadTree::none; a = tree.cell(a).parent)
                for (auto s : tree.interaction_list(a))
                    add_cell(s);
        }
    }
    return counts;
}

} // namespace fmmlayout

#endif
