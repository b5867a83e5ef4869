#ifndef FMMLAYOUT_COMMON_HPP
#define FMMLAYOUT_COMMON_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fmmlayout
{

/// Raised for malformed user input (files, parameters). The CLI maps it to exit code 1.
class InputError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an algorithm cannot proceed on otherwise valid input.
class AlgorithmError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) noexcept
    {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2& operator-=(const Vec2& o) noexcept
    {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    constexpr Vec2& operator*=(double s) noexcept
    {
        x *= s;
        y *= s;
        return *this;
    }
    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
    friend constexpr Vec2 operator-(const Vec2& a) noexcept { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

inline double norm(const Vec2& v) noexcept { return std::hypot(v.x, v.y); }
inline double norm2(const Vec2& v) noexcept { return v.x * v.x + v.y * v.y; }
inline bool is_finite(const Vec2& v) noexcept { return std::isfinite(v.x) && std::isfinite(v.y); }

/// Positions indexed by component-local node index.
using Layout = std::vector<Vec2>;

inline Vec2 centroid(const Layout& layout) noexcept
{
    Vec2 c;
    if (layout.empty())
        return c;
    for (const auto& p : layout)
        c += p;
    return c * (1.0 / static_cast<double>(layout.size()));
}

struct BoundingBox
{
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

    void extend(const Vec2& p) noexcept
    {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    bool empty() const noexcept { return lo.x > hi.x; }
    double width() const noexcept { return empty() ? 0.0 : hi.x - lo.x; }
    double height() const noexcept { return empty() ? 0.0 : hi.y - lo.y; }
};

inline BoundingBox bounding_box(const Layout& layout) noexcept
{
    BoundingBox box;
    for (const auto& p : layout)
        box.extend(p);
    return box;
}

/// Seeded generator with platform-independent output.
///
/// std::mt19937_64 is fully specified by the standard, but the std::*_distribution
/// adaptors are not, so every draw goes through the helpers below.
class Rng
{
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(mix(seed, stream)) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n)
    {
        if (n == 0)
            throw std::invalid_argument("Rng::below: empty range");
        // Lemire's rejection keeps the draw unbiased and deterministic.
        const std::uint64_t threshold = (0 - n) % n;
        for (;;)
        {
            const std::uint64_t r = engine_();
            if (r >= threshold)
                return r % n;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Number of failures before the first success, success probability p in (0, 1].
    std::uint64_t geometric(double p)
    {
        if (p >= 1.0)
            return 0;
        const double u = 1.0 - uniform(); // (0, 1]
        return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
    }

    Vec2 unit_direction()
    {
        const double angle = uniform(0.0, 2.0 * 3.14159265358979323846);
        return {std::cos(angle), std::sin(angle)};
    }

    template <class T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    /// Derives an independent seed for a sub-task (e.g. one component).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) noexcept
    {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
///
/// Work is claimed dynamically; callers must make each fn(i) write only to slot i
/// so results do not depend on scheduling. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = count;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace fmmlayout

#endif
