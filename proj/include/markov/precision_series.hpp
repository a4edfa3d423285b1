#ifndef MARKOV_PRECISION_SERIES_HPP
#define MARKOV_PRECISION_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "enumeration.hpp"
#include "markov_core.hpp"
#include "precision_real.hpp"
#include "slope_geometry.hpp"

namespace markov {

/// Growth constant of m_n ~ (1/3)·exp(C·√n), exactly as published (10 decimals).
inline constexpr char const* zagier_constant_literal = "2.3523414972";

inline PrecisionReal zagier_constant(unsigned digits)
{
    return PrecisionReal::parse(zagier_constant_literal, digits);
}

inline constexpr unsigned guard_digits = 50;

/// Default working precision for n terms: enough to resolve R_n ≈ exp(−2C√n), plus guard digits.
inline unsigned precision_for_count(std::uint64_t n)
{
    double const c = 2.3523414972;
    double const needed = 2.0 * c * std::sqrt(static_cast<double>(n)) / std::log(10.0);
    return static_cast<unsigned>(std::ceil(needed)) + guard_digits;
}

/// Thrown when the remainder drowns in accumulated rounding error.
struct insufficient_precision : std::runtime_error {
    insufficient_precision(unsigned used, unsigned suggested)
        : std::runtime_error("remainder is below the rounding budget at " + std::to_string(used)
                             + " digits; re-run with at least " + std::to_string(suggested) + " digits"),
          used_digits(used), suggested_digits(suggested)
    {}
    unsigned used_digits;
    unsigned suggested_digits;
};

/// L(m) = √(9 − 4/m²).
inline PrecisionReal lagrange(Integer const& m, unsigned digits)
{
    if (sgn(m) <= 0)
        throw std::domain_error("Lagrange number needs a positive Markov number");
    PrecisionReal m2(Integer(m * m), digits);
    return sqrt(9 - 4 / m2);
}

/// 3 − L(m) without cancellation: (4/m²) / (3 + √(9 − 4/m²)).
inline PrecisionReal gap_term(Integer const& m, unsigned digits)
{
    if (sgn(m) <= 0)
        throw std::domain_error("gap term needs a positive Markov number");
    PrecisionReal m2(Integer(m * m), digits);
    PrecisionReal four_over = 4 / m2;
    return four_over / (sqrt(9 - four_over) + 3);
}

/// 4 − φ − √2, the value of Σ(3 − L_n) under Markov uniqueness.
inline PrecisionReal target_constant(unsigned digits)
{
    unsigned const work = digits + 10;
    PrecisionReal five(5, work);
    PrecisionReal two(2, work);
    PrecisionReal phi = (sqrt(five) + 1) / 2;
    return (4 - phi - sqrt(two)).rounded_to(digits);
}

/// Tail model (6√n/C)·exp(−2C√n).
inline PrecisionReal zagier_tail(std::uint64_t n, unsigned digits)
{
    if (n < 1)
        throw std::domain_error("tail model is defined for n >= 1");
    PrecisionReal c = zagier_constant(digits);
    PrecisionReal root = sqrt(PrecisionReal(Integer(static_cast<unsigned long>(n)), digits));
    return root * 6 / c * exp(-(c * root * 2));
}

struct SeriesReport {
    std::uint64_t n = 0;
    unsigned digits = 0;
    PrecisionReal partial_sum;
    PrecisionReal remainder;     ///< target − partial_sum
    PrecisionReal zagier_tail;
    PrecisionReal ratio;         ///< remainder / zagier_tail
    PrecisionReal error_budget;  ///< bound on accumulated rounding in partial_sum
};

/**
 * Running Σ(3 − L_k) over distinct Markov numbers in increasing order.
 *
 * Rounding error is tracked as one ulp(1) per addition; remainder_checked()
 * refuses to report a remainder that does not clear that budget.
 */
class SeriesAccumulator {
public:
    explicit SeriesAccumulator(unsigned digits)
        : digits_(digits), sum_(digits), target_(target_constant(digits)),
          unit_ulp_(PrecisionReal::ulp_of(1, digits))
    {}

    void add(Integer const& m)
    {
        sum_ += gap_term(m, digits_);
        ++n_;
    }

    std::uint64_t count() const noexcept { return n_; }
    unsigned digits() const noexcept { return digits_; }
    PrecisionReal const& partial_sum() const noexcept { return sum_; }
    PrecisionReal remainder() const { return target_ - sum_; }

    /// n additions plus the target and final subtraction, each ≤ 1 ulp(1).
    PrecisionReal error_budget() const { return unit_ulp_ * static_cast<long>(n_ + 4); }

    PrecisionReal remainder_checked() const
    {
        PrecisionReal r = remainder();
        if (r <= error_budget())
            throw insufficient_precision(digits_, std::max(precision_for_count(n_), digits_ * 2));
        return r;
    }

    SeriesReport report() const
    {
        if (n_ == 0)
            throw std::logic_error("series report needs at least one term");
        PrecisionReal r = remainder_checked();
        PrecisionReal tail = zagier_tail(n_, digits_);
        PrecisionReal ratio = r / tail;
        return {n_, digits_, sum_, std::move(r), std::move(tail), std::move(ratio), error_budget()};
    }

private:
    unsigned digits_;
    std::uint64_t n_ = 0;
    PrecisionReal sum_;
    PrecisionReal target_;
    PrecisionReal unit_ulp_;
};

/// Feeds the next distinct Markov number of `stream` into `acc`; duplicates are skipped.
inline Integer advance_distinct(MarkovStream& stream, SeriesAccumulator& acc)
{
    for (;;) {
        Emission e = stream.next();
        if (!e.duplicate) {
            acc.add(e.value());
            return e.value();
        }
    }
}

/// Σ_{k≤n}(3 − L_k) over the first n distinct values of a fresh stream.
inline SeriesReport partial_sum(std::uint64_t n, unsigned digits, MarkovStream& stream)
{
    if (n < 1)
        throw std::invalid_argument("partial_sum needs n >= 1");
    if (stream.emitted_count() != 0)
        throw std::invalid_argument("partial_sum needs a fresh stream");
    SeriesAccumulator acc(digits);
    while (acc.count() < n)
        advance_distinct(stream, acc);
    return acc.report();
}

inline SeriesReport partial_sum(std::uint64_t n, unsigned digits)
{
    MarkovStream stream;
    return partial_sum(n, digits, stream);
}

inline SeriesReport partial_sum(std::uint64_t n)
{
    return partial_sum(n, precision_for_count(n));
}

/**
 * 6·Σ_{k≤n}(3 − L_k) − 3·((3 − L_1) + (3 − L_2)): the McShane sum over all
 * simple geodesics regrouped by orbit size. Equals 3 − 6·R_n.
 */
inline PrecisionReal orbit_weighted_identity_check(std::uint64_t n, unsigned digits)
{
    if (n < 2)
        throw std::invalid_argument("orbit-weighted check needs n >= 2");
    MarkovStream stream;
    SeriesAccumulator acc(digits);
    while (acc.count() < n)
        advance_distinct(stream, acc);
    PrecisionReal shortest = gap_term(1, digits) + gap_term(2, digits);
    return acc.partial_sum() * 6 - shortest * 3;
}

/// McShane terms of the slopes with max(|p|, q) == k, summed in slopes_in_box order.
inline PrecisionReal mcshane_shell(long k, unsigned digits)
{
    PrecisionReal s(digits);
    if (k == 1)
        s += mcshane_term(Slope(1, 0), digits);
    for (long q = 1; q <= k; ++q) {
        for (long p = -k; p <= k; ++p) {
            if (q != k && p != k && p != -k)
                continue;
            if (std::gcd(p < 0 ? -p : p, q) != 1)
                continue;
            s += mcshane_term(Slope(p, q), digits);
        }
    }
    return s;
}

/// Cumulative McShane sums over the boxes |p| ≤ N', q ≤ N' for N' = 1..N.
inline std::vector<PrecisionReal> mcshane_partials(long max_height, unsigned digits)
{
    if (max_height < 1)
        throw std::invalid_argument("McShane box height must be >= 1");
    std::vector<PrecisionReal> out;
    PrecisionReal total(digits);
    for (long k = 1; k <= max_height; ++k) {
        total += mcshane_shell(k, digits);
        out.push_back(total);
    }
    return out;
}

/// Σ 1/(1 + e^ℓ) over canonical slopes with |p| ≤ N, q ≤ N. Tends to 1/2.
inline PrecisionReal mcshane_partial(long max_height, unsigned digits)
{
    return mcshane_partials(max_height, digits).back();
}

} // namespace markov

#endif // MARKOV_PRECISION_SERIES_HPP
