#ifndef MARKOV_TESTS_BRUTE_FORCE_HPP
#define MARKOV_TESTS_BRUTE_FORCE_HPP

// Exhaustive solver for x² + y² + z² = 3xyz used as an independent oracle.
// It never touches the Vieta tree: for each x ≤ y it solves the quadratic in z
// and keeps integral roots with y ≤ z ≤ bound. Normalized solutions satisfy
// xy ≤ z, which bounds the scan.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <tuple>
#include <vector>

namespace markov::testing {

using SmallTriple = std::array<std::uint64_t, 3>;

inline std::uint64_t isqrt_u64(std::uint64_t v)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(v)));
    while (r * r > v)
        --r;
    while ((r + 1) * (r + 1) <= v)
        ++r;
    return r;
}

/// All normalized triples with z ≤ bound (bound ≤ 10⁹), sorted by (z, y, x).
inline std::vector<SmallTriple> brute_force_triples(std::uint64_t bound)
{
    std::vector<SmallTriple> out;
    for (std::uint64_t x = 1; x * x <= bound; ++x) {
        for (std::uint64_t y = x; x * y <= bound; ++y) {
            std::uint64_t const b = 3 * x * y;
            std::uint64_t const c = x * x + y * y;
            if (b * b < 4 * c)
                continue;
            std::uint64_t const disc = b * b - 4 * c;
            std::uint64_t const s = isqrt_u64(disc);
            if (s * s != disc)
                continue;
            for (std::uint64_t twice : {b + s, b - s}) {
                if (twice % 2)
                    continue;
                std::uint64_t z = twice / 2;
                if (z < y || z > bound)
                    continue;
                unsigned __int128 lhs = (unsigned __int128)x * x + (unsigned __int128)y * y + (unsigned __int128)z * z;
                unsigned __int128 rhs = (unsigned __int128)3 * x * y * z;
                if (lhs == rhs)
                    out.push_back({x, y, z});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](SmallTriple const& a, SmallTriple const& b) {
        return std::tie(a[2], a[1], a[0]) < std::tie(b[2], b[1], b[0]);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Distinct maxima of the brute-force triples, ascending.
inline std::vector<std::uint64_t> brute_force_markov_numbers(std::uint64_t bound)
{
    std::vector<std::uint64_t> out;
    for (auto const& t : brute_force_triples(bound))
        if (out.empty() || out.back() != t[2])
            out.push_back(t[2]);
    return out;
}

} // namespace markov::testing

#endif
