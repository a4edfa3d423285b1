#ifndef MARKOV_SLOPE_GEOMETRY_HPP
#define MARKOV_SLOPE_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "markov_core.hpp"
#include "precision_real.hpp"

namespace markov {

struct invalid_slope : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/**
 * A primitive projective pair [p:q], i.e. a line in the first homology of
 * the torus and hence a simple closed curve on the punctured torus.
 *
 * Canonical representative: q > 0, or [1:0].
 */
class Slope {
public:
    /// Accepts only canonical coprime pairs.
    Slope(Integer p, Integer q) : p_(std::move(p)), q_(std::move(q))
    {
        if (sgn(q_) < 0 || (sgn(q_) == 0 && p_ != 1))
            throw invalid_slope("slope [" + p_.get_str() + ":" + q_.get_str() + "] is not canonical");
        Integer g;
        mpz_gcd(g.get_mpz_t(), p_.get_mpz_t(), q_.get_mpz_t());
        if (g != 1)
            throw invalid_slope("slope [" + p_.get_str() + ":" + q_.get_str() + "] is not primitive");
    }

    Slope(long p, long q) : Slope(Integer(p), Integer(q)) {}

    /// Divides out the gcd and fixes the sign; rejects [0:0].
    static Slope canonical(Integer p, Integer q)
    {
        if (sgn(p) == 0 && sgn(q) == 0)
            throw invalid_slope("[0:0] is not a slope");
        Integer g;
        mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        p /= g;
        q /= g;
        if (sgn(q) < 0 || (sgn(q) == 0 && sgn(p) < 0)) {
            p = -p;
            q = -q;
        }
        return Slope(std::move(p), std::move(q));
    }

    Integer const& p() const noexcept { return p_; }
    Integer const& q() const noexcept { return q_; }

    friend bool operator==(Slope const& a, Slope const& b) { return a.p_ == b.p_ && a.q_ == b.q_; }
    friend bool operator!=(Slope const& a, Slope const& b) { return !(a == b); }
    friend bool operator<(Slope const& a, Slope const& b)
    {
        if (int c = cmp(a.q_, b.q_))
            return c < 0;
        return a.p_ < b.p_;
    }

    std::string to_string() const { return "[" + p_.get_str() + ":" + q_.get_str() + "]"; }
    friend std::ostream& operator<<(std::ostream& os, Slope const& s) { return os << s.to_string(); }

private:
    Integer p_;
    Integer q_;
};

/// Every canonical slope with |p| ≤ bound and q ≤ bound, ordered by (q, p).
inline std::vector<Slope> slopes_in_box(long bound)
{
    std::vector<Slope> out;
    if (bound >= 1)
        out.emplace_back(1, 0);
    for (long q = 1; q <= bound; ++q)
        for (long p = -bound; p <= bound; ++p)
            if (std::gcd(p < 0 ? -p : p, q) == 1)
                out.emplace_back(p, q);
    return out;
}

// ---------------------------------------------------------------------------
// Farey recursion

/**
 * Markov number of the simple closed curve of slope s.
 *
 * Stern–Brocot descent in the Farey tessellation: the triangle
 * {1/0, 0/1, −1/1} carries (1, 1, 1), and the mediant of an edge with
 * Markov numbers (a, b) opposite c gets 3ab − c.
 */
inline Integer farey_markov(Slope const& s)
{
    Integer const& p = s.p();
    Integer const& q = s.q();
    if (sgn(q) == 0 || sgn(p) == 0 || (p == -1 && q == 1))
        return 1;

    // Endpoints as (numerator, denominator); (-1, 0) stands for -∞.
    std::array<Integer, 2> left, right;
    if (sgn(p) > 0) {
        left = {0, 1};
        right = {1, 0};
    } else if (-p < q) {
        left = {-1, 1};
        right = {0, 1};
    } else {
        left = {-1, 0};
        right = {-1, 1};
    }
    Integer ml = 1, mr = 1, opposite = 1;
    for (;;) {
        std::array<Integer, 2> med{left[0] + right[0], left[1] + right[1]};
        Integer mm = 3 * ml * mr - opposite;
        Integer lhs = p * med[1];
        Integer rhs = med[0] * q;
        int c = cmp(lhs, rhs);
        if (c == 0)
            return mm;
        if (c < 0) {
            right = std::move(med);
            opposite = std::move(mr);
            mr = std::move(mm);
        } else {
            left = std::move(med);
            opposite = std::move(ml);
            ml = std::move(mm);
        }
    }
}

// ---------------------------------------------------------------------------
// Holonomy

struct IntMatrix2 {
    Integer a, b, c, d; // (a b; c d)

    static IntMatrix2 identity() { return {1, 0, 0, 1}; }

    Integer trace() const { return a + d; }
    Integer det() const { return a * d - b * c; }
    /// Inverse of a determinant-one matrix.
    IntMatrix2 inverse() const { return {d, -b, -c, a}; }

    friend IntMatrix2 operator*(IntMatrix2 const& x, IntMatrix2 const& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                x.c * y.b + x.d * y.d};
    }
    friend bool operator==(IntMatrix2 const& x, IntMatrix2 const& y)
    {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
};

/// Fricke trace identity: tr[A,B] = x² + y² + z² − xyz − 2 for x = tr A, y = tr B, z = tr AB.
inline Integer fricke_commutator_trace(Integer const& x, Integer const& y, Integer const& z)
{
    return x * x + y * y + z * z - x * y * z - 2;
}

/// Holonomies of the two generators of the punctured-torus group.
struct HolonomyPair {
    IntMatrix2 A;
    IntMatrix2 B;

    /// The modular torus: A = (1 1; 1 2), B = (1 −1; −1 2), trace triple (3, 3, 3).
    static HolonomyPair modular_torus() { return {{1, 1, 1, 2}, {1, -1, -1, 2}}; }

    IntMatrix2 commutator() const { return A * B * A.inverse() * B.inverse(); }

    std::array<Integer, 3> trace_triple() const { return {A.trace(), B.trace(), (A * B).trace()}; }

    /// det A = det B = 1, tr[A,B] = −2 and the trace triple lies on x² + y² + z² = xyz.
    bool is_valid() const
    {
        auto [x, y, z] = trace_triple();
        return A.det() == 1 && B.det() == 1 && commutator().trace() == -2
               && x * x + y * y + z * z == x * y * z;
    }
};

enum class Letter : std::uint8_t { A, B, B_inverse };

/**
 * Lower Christoffel word of slope p/q: q copies of A and |p| copies of the
 * second letter, which is B⁻¹ for p ≥ 0 and B for p < 0. With the
 * modular_torus pair these letters send [1:1] to a trace-6 word.
 */
inline std::vector<Letter> christoffel_word(Slope const& s)
{
    constexpr long max_length = 1L << 30;
    if (!s.p().fits_slong_p() || !s.q().fits_slong_p() || abs(s.p()) + s.q() > max_length)
        throw std::out_of_range("slope too large for word evaluation: " + s.to_string());
    long const p = s.p().get_si();
    long const q = s.q().get_si();
    long const ap = p < 0 ? -p : p;
    long const n = ap + q;
    Letter const second = p < 0 ? Letter::B : Letter::B_inverse;
    std::vector<Letter> word;
    word.reserve(static_cast<std::size_t>(n));
    for (long i = 1; i <= n; ++i) {
        bool step = (i * ap) / n > ((i - 1) * ap) / n;
        word.push_back(step ? second : Letter::A);
    }
    return word;
}

inline IntMatrix2 evaluate_word(std::vector<Letter> const& word, HolonomyPair const& pair)
{
    IntMatrix2 const b_inv = pair.B.inverse();
    IntMatrix2 m = IntMatrix2::identity();
    for (Letter l : word) {
        switch (l) {
        case Letter::A: m = m * pair.A; break;
        case Letter::B: m = m * pair.B; break;
        case Letter::B_inverse: m = m * b_inv; break;
        }
    }
    return m;
}

/// |trace| of the holonomy along the Christoffel word of s; always 3·farey_markov(s).
inline Integer holonomy_trace(Slope const& s, HolonomyPair const& pair = HolonomyPair::modular_torus())
{
    Integer t = evaluate_word(christoffel_word(s), pair).trace();
    return abs(t);
}

// ---------------------------------------------------------------------------
// Dihedral symmetry

/// Order-3 generator r = (0 1; −1 −1).
inline IntMatrix2 rotation() { return {0, 1, -1, -1}; }
/// Involution σ = (0 1; 1 0).
inline IntMatrix2 swap_reflection() { return {0, 1, 1, 0}; }

/// The six elements {1, r, r², σ, σr, σr²}.
inline std::array<IntMatrix2, 6> dihedral_group()
{
    IntMatrix2 const r = rotation();
    IntMatrix2 const r2 = r * r;
    IntMatrix2 const s = swap_reflection();
    return {IntMatrix2::identity(), r, r2, s, s * r, s * r2};
}

/// Projective action on column vectors (p, q)ᵀ, canonicalized.
inline Slope act(IntMatrix2 const& g, Slope const& s)
{
    return Slope::canonical(g.a * s.p() + g.b * s.q(), g.c * s.p() + g.d * s.q());
}

inline std::set<Slope> dihedral_orbit(Slope const& s)
{
    std::set<Slope> orbit;
    for (auto const& g : dihedral_group())
        orbit.insert(act(g, s));
    return orbit;
}

// ---------------------------------------------------------------------------
// McShane summands

/**
 * 1/(1 + e^ℓ) for a geodesic of trace τ, where e^{ℓ/2} = (τ + √(τ² − 4))/2.
 */
inline PrecisionReal mcshane_term_from_trace(Integer const& trace, unsigned digits)
{
    if (trace <= 2)
        throw std::domain_error("McShane term needs a hyperbolic trace (> 2)");
    PrecisionReal tau(trace, digits);
    PrecisionReal half_exp = (tau + sqrt(tau * tau - 4)) / 2;
    PrecisionReal e_len = half_exp * half_exp;
    return 1 / (e_len + 1);
}

/// The same quantity via (1 − √(1 − 4/τ²))/2. Loses digits to cancellation for large τ.
inline PrecisionReal mcshane_term_closed_form(Integer const& trace, unsigned digits)
{
    PrecisionReal tau(trace, digits);
    return (1 - sqrt(1 - 4 / (tau * tau))) / 2;
}

inline PrecisionReal mcshane_term(Slope const& s, unsigned digits)
{
    return mcshane_term_from_trace(holonomy_trace(s), digits);
}

} // namespace markov

#endif // MARKOV_SLOPE_GEOMETRY_HPP
