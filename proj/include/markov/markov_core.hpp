#ifndef MARKOV_MARKOV_CORE_HPP
#define MARKOV_MARKOV_CORE_HPP

#include <algorithm>
#include <array>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace markov {

using Integer = mpz_class;

/// Position in a normalized triple.
enum class Coordinate { x = 0, y = 1, z = 2 };

struct invalid_triple : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exact check of x² + y² + z² = 3xyz. Non-positive inputs are a domain error, not `false`.
inline bool is_markov(Integer const& x, Integer const& y, Integer const& z)
{
    if (sgn(x) <= 0 || sgn(y) <= 0 || sgn(z) <= 0)
        throw std::domain_error("Markov triple entries must be positive");
    Integer lhs = x * x + y * y + z * z;
    Integer rhs = 3 * x * y * z;
    return lhs == rhs;
}

struct VietaMove;

/**
 * A solution of x² + y² + z² = 3xyz, stored sorted ascending.
 *
 * Uniqueness of Markov triples is the statement that z() determines the
 * other two entries.
 */
class MarkovTriple {
public:
    /// Sorts and validates; throws invalid_triple if the entries do not solve the cubic.
    static MarkovTriple make(Integer a, Integer b, Integer c)
    {
        if (!is_markov(a, b, c))
            throw invalid_triple("not a Markov triple: (" + a.get_str() + ", " + b.get_str()
                                 + ", " + c.get_str() + ")");
        std::array<Integer, 3> v{std::move(a), std::move(b), std::move(c)};
        std::sort(v.begin(), v.end());
        return MarkovTriple(std::move(v));
    }

    static MarkovTriple make(long a, long b, long c) { return make(Integer(a), Integer(b), Integer(c)); }

    /// The fundamental solution (1, 1, 1).
    static MarkovTriple unit() { return MarkovTriple({Integer(1), Integer(1), Integer(1)}); }

    Integer const& x() const noexcept { return v_[0]; }
    Integer const& y() const noexcept { return v_[1]; }
    Integer const& z() const noexcept { return v_[2]; }
    Integer const& max() const noexcept { return v_[2]; }
    Integer const& operator[](Coordinate c) const noexcept { return v_[static_cast<int>(c)]; }

    /// (1,1,1) and (1,1,2): the triples with a repeated entry.
    bool is_singular() const noexcept { return v_[0] == v_[1] || v_[1] == v_[2]; }

    friend bool operator==(MarkovTriple const& a, MarkovTriple const& b) { return a.v_ == b.v_; }
    friend bool operator!=(MarkovTriple const& a, MarkovTriple const& b) { return !(a == b); }

    /// Lexicographic on (z, y, x), the enumeration order.
    friend bool operator<(MarkovTriple const& a, MarkovTriple const& b)
    {
        if (int c = cmp(a.v_[2], b.v_[2]))
            return c < 0;
        if (int c = cmp(a.v_[1], b.v_[1]))
            return c < 0;
        return a.v_[0] < b.v_[0];
    }

    std::string to_string() const
    {
        return "(" + v_[0].get_str() + ", " + v_[1].get_str() + ", " + v_[2].get_str() + ")";
    }

    friend std::ostream& operator<<(std::ostream& os, MarkovTriple const& t) { return os << t.to_string(); }

private:
    explicit MarkovTriple(std::array<Integer, 3> v) : v_(std::move(v)) {}

    std::array<Integer, 3> v_;

    friend VietaMove vieta_move(MarkovTriple const&, Coordinate);
    friend std::pair<MarkovTriple, MarkovTriple> children(MarkovTriple const&);
};

/// Result of a Vieta move: the re-sorted triple and where the new value landed.
struct VietaMove {
    MarkovTriple triple;
    Coordinate landed;
};

/// Replaces entry c by 3·(product of the other two) − c and re-sorts.
inline VietaMove vieta_move(MarkovTriple const& t, Coordinate c)
{
    int const i = static_cast<int>(c);
    std::array<Integer, 3> v = t.v_;
    v[i] = 3 * v[(i + 1) % 3] * v[(i + 2) % 3] - v[i];
    Integer const fresh = v[i];
    std::sort(v.begin(), v.end());
    // Ties only occur for singular triples; prefer the slot that round-trips.
    int landed = 0;
    for (int k = 2; k >= 0; --k) {
        if (v[k] == fresh) {
            landed = k;
            if (k == i)
                break;
        }
    }
    return {MarkovTriple(std::move(v)), static_cast<Coordinate>(landed)};
}

inline MarkovTriple vieta(MarkovTriple const& t, Coordinate c) { return vieta_move(t, c).triple; }

/**
 * The two Vieta neighbours of t whose maximum exceeds t.z(): replacing x
 * gives (y, z, 3yz − x), replacing y gives (x, z, 3xz − y).
 *
 * Requires x < y < z; the singular triples are expanded by tree_successors.
 */
inline std::pair<MarkovTriple, MarkovTriple> children(MarkovTriple const& t)
{
    if (t.is_singular())
        throw std::invalid_argument("children() requires a non-singular triple, got " + t.to_string());
    Integer const& x = t.v_[0];
    Integer const& y = t.v_[1];
    Integer const& z = t.v_[2];
    Integer zx = 3 * y * z - x;
    Integer zy = 3 * x * z - y;
    return {MarkovTriple({y, z, std::move(zx)}), MarkovTriple({x, z, std::move(zy)})};
}

/**
 * Successors in the Markov tree. The singular chain
 * (1,1,1) → (1,1,2) → (1,2,5) is hard-coded; every other node has its two
 * children.
 */
inline std::vector<MarkovTriple> tree_successors(MarkovTriple const& t)
{
    if (t.z() == 1)
        return {MarkovTriple::make(1, 1, 2)};
    if (t.z() == 2)
        return {MarkovTriple::make(1, 2, 5)};
    auto [a, b] = children(t);
    return {std::move(a), std::move(b)};
}

} // namespace markov

#endif // MARKOV_MARKOV_CORE_HPP
