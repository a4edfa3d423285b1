#include <gtest/gtest.h>

#include "markov/precision_series.hpp"

using namespace markov;

// Reference values from tests/oracles/compute_oracles.py (mpmath, 60+ digits).
namespace oracle {
constexpr char const* target = "0.967752448877010102993724441425";
constexpr char const* r1 = "0.203820426376799799402898110156";
constexpr char const* r2 = "0.0322475511229898970062755585753";
constexpr char const* orbit_n2 = "2.80651469326206061796234664855";
constexpr char const* lagrange5 = "2.97321374946370110452240164279";
constexpr char const* gap13 = "0.00394737013070053076586059737368";
constexpr char const* tail1 = "0.0230904829684061016798640508575";
constexpr char const* mcshane1 = "0.410561490459073468861516924231129189423133528401921113472324797964495";
constexpr char const* mcshane20_deficit = "7.6055554963211588887e-16";
constexpr char const* r1000 = "2.29495182344e-63";
} // namespace oracle

namespace {

PrecisionReal ref(char const* text, unsigned digits) { return PrecisionReal::parse(text, digits); }

::testing::AssertionResult close(PrecisionReal const& a, PrecisionReal const& b, PrecisionReal const& tol)
{
    if (abs(a - b) <= tol)
        return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << a.to_scientific(30) << " vs " << b.to_scientific(30);
}

} // namespace

TEST(PrecisionReal, MixedPrecisionIsRejected)
{
    PrecisionReal a(1, 30), b(1, 40);
    EXPECT_THROW(a + b, precision_mismatch);
    EXPECT_THROW((void)(a < b), precision_mismatch);
    EXPECT_THROW(PrecisionReal(1), std::invalid_argument);
}

TEST(PrecisionReal, ParseRejectsGarbage)
{
    EXPECT_THROW(PrecisionReal::parse("1.5x", 20), std::invalid_argument);
    EXPECT_THROW(PrecisionReal::parse("", 20), std::invalid_argument);
    EXPECT_EQ(PrecisionReal::parse("-2.5e-3", 20).to_scientific(2), "-2.5e-3");
}

TEST(Lagrange, FirstValues)
{
    unsigned const d = 50;
    PrecisionReal const tol = PrecisionReal::ulp_of(3, d) * 2;
    EXPECT_TRUE(close(lagrange(1, d), sqrt(PrecisionReal(5, d)), tol));
    EXPECT_TRUE(close(lagrange(2, d), sqrt(PrecisionReal(8, d)), tol));
    EXPECT_TRUE(close(lagrange(5, d), sqrt(PrecisionReal(221, d)) / 5, tol));
    EXPECT_TRUE(close(lagrange(5, d), ref(oracle::lagrange5, d), PrecisionReal::parse("1e-29", d)));
    EXPECT_THROW(lagrange(0, d), std::domain_error);
}

TEST(Lagrange, IncreasingAndBelowThree)
{
    PrecisionReal previous(0, 40);
    PrecisionReal three(3, 40);
    for (long m : {1, 2, 5, 13, 29, 34, 89, 169, 194, 233, 433}) {
        PrecisionReal l = lagrange(m, 40);
        EXPECT_GT(l, previous);
        EXPECT_LT(l, three);
        previous = l;
    }
}

TEST(GapTerm, SmallValues)
{
    unsigned const d = 50;
    PrecisionReal const tol = PrecisionReal::parse("1e-45", d);
    EXPECT_TRUE(close(gap_term(1, d), 3 - sqrt(PrecisionReal(5, d)), tol));
    EXPECT_TRUE(close(gap_term(2, d), 3 - sqrt(PrecisionReal(8, d)), tol));
    EXPECT_TRUE(close(gap_term(13, d), ref(oracle::gap13, d), PrecisionReal::parse("1e-31", d)));
    EXPECT_THROW(gap_term(0, d), std::domain_error);
}

TEST(GapTerm, CancellationFreeFormAgreesWithDirectSubtraction)
{
    unsigned const d = 100;
    PrecisionReal const tol = PrecisionReal::ulp_of(3, d) * 2;
    for (long m : {1, 2, 5, 13, 29})
        EXPECT_TRUE(close(gap_term(m, d), 3 - lagrange(m, d), tol)) << m;
}

TEST(GapTerm, AsymptoticToTwoThirdsOverMSquared)
{
    unsigned const d = 50;
    Integer m = 1'000'000;
    PrecisionReal approx = PrecisionReal(2, d) / (PrecisionReal(Integer(m * m), d) * 3);
    PrecisionReal ratio = gap_term(m, d) / approx;
    EXPECT_LT(abs(ratio - 1), PrecisionReal::parse("1e-10", d));
}

TEST(GapTerm, PositiveAndDecreasing)
{
    PrecisionReal previous = gap_term(1, 30);
    for (long m = 2; m < 300; ++m) {
        PrecisionReal g = gap_term(m, 30);
        EXPECT_GT(g.sign(), 0);
        EXPECT_LT(g, previous);
        previous = g;
    }
}

TEST(TargetConstant, Values)
{
    EXPECT_EQ(target_constant(12).to_scientific(12), "9.67752448877e-1");
    unsigned const d = 60;
    EXPECT_TRUE(close(target_constant(d), ref(oracle::target, d), PrecisionReal::parse("1e-29", d)));

    // 4 - phi - sqrt(2) = 1/2 + ((3 - L_1) + (3 - L_2)) / 2
    PrecisionReal regrouped = (PrecisionReal(1, d) + (3 - lagrange(1, d)) + (3 - lagrange(2, d))) / 2;
    EXPECT_TRUE(close(regrouped, target_constant(d), PrecisionReal::ulp_of(4, d) * 8));
}

TEST(PartialSum, FirstRemainders)
{
    unsigned const d = 40;
    PrecisionReal const tol = PrecisionReal::parse("1e-29", d);
    EXPECT_TRUE(close(partial_sum(1, d).remainder, ref(oracle::r1, d), tol));
    SeriesReport two = partial_sum(2, d);
    EXPECT_TRUE(close(two.remainder, ref(oracle::r2, d), tol));

    PrecisionReal five(5, d), two_r(2, d);
    PrecisionReal closed = (sqrt(five) - 1) / 2 + sqrt(two_r) - 2;
    EXPECT_TRUE(close(two.remainder, closed, PrecisionReal::ulp_of(1, d) * 8));
    EXPECT_TRUE(close(two.remainder, target_constant(d) - two.partial_sum, PrecisionReal(0, d)));
}

TEST(PartialSum, RemainderAt1000MatchesOracle)
{
    SeriesReport r = partial_sum(1000);
    PrecisionReal expected = ref(oracle::r1000, r.digits);
    PrecisionReal rel = abs(r.remainder / expected - 1);
    EXPECT_LT(rel, PrecisionReal::parse("1e-11", r.digits));
}

TEST(PartialSum, MonotoneConvergence)
{
    unsigned const d = precision_for_count(2000);
    MarkovStream stream;
    SeriesAccumulator acc(d);
    PrecisionReal previous_sum(0, d);
    PrecisionReal previous_rem = target_constant(d);
    while (acc.count() < 2000) {
        advance_distinct(stream, acc);
        PrecisionReal rem = acc.remainder_checked();
        ASSERT_GT(acc.partial_sum(), previous_sum);
        ASSERT_GT(rem.sign(), 0);
        ASSERT_LT(rem, previous_rem);
        previous_sum = acc.partial_sum();
        previous_rem = rem;
    }
}

TEST(PartialSum, InsufficientPrecisionIsReported)
{
    try {
        partial_sum(1000, 40);
        FAIL() << "expected insufficient_precision";
    } catch (insufficient_precision const& e) {
        EXPECT_EQ(e.used_digits, 40u);
        EXPECT_GE(e.suggested_digits, precision_for_count(1000));
    }
    EXPECT_NO_THROW(partial_sum(1000, precision_for_count(1000)));
}

TEST(PartialSum, NeedsFreshStream)
{
    MarkovStream s;
    s.next();
    EXPECT_THROW(partial_sum(5, 30, s), std::invalid_argument);
    EXPECT_THROW(partial_sum(0, 30), std::invalid_argument);
}

TEST(PartialSum, PrecisionDoublingIsStable)
{
    unsigned const d = precision_for_count(1000);
    SeriesReport base = partial_sum(1000, d);
    SeriesReport finer = partial_sum(1000, d + 50);
    auto [mant, exp10] = base.remainder.decimal_parts(17);
    PrecisionReal coarse = PrecisionReal::parse(base.remainder.to_scientific(30), d + 50);
    PrecisionReal last_digit = PrecisionReal::parse("1e" + std::to_string(exp10 - 16), d + 50);
    EXPECT_LT(abs(coarse - finer.remainder), last_digit) << mant;
}

TEST(PrecisionPolicy, DefaultDigits)
{
    EXPECT_EQ(precision_for_count(1), 3u + guard_digits);
    EXPECT_EQ(precision_for_count(50'000), 457u + guard_digits);
}

TEST(ZagierTail, Values)
{
    unsigned const d = 30;
    EXPECT_TRUE(close(zagier_tail(1, d), ref(oracle::tail1, d), PrecisionReal::parse("1e-20", d)));
    EXPECT_EQ(zagier_constant(20).to_scientific(11), "2.3523414972e0");
    PrecisionReal previous = zagier_tail(1, d);
    for (std::uint64_t n = 2; n <= 500; ++n) {
        PrecisionReal t = zagier_tail(n, d);
        EXPECT_LT(t, previous);
        previous = t;
    }
    EXPECT_THROW(zagier_tail(0, d), std::domain_error);
}

TEST(ZagierTail, LogScaleAgreement)
{
    for (std::uint64_t n : {1000u, 10000u}) {
        SeriesReport r = partial_sum(n);
        double ratio = r.remainder.log10_abs() / r.zagier_tail.log10_abs();
        EXPECT_GE(ratio, 0.9) << n;
        EXPECT_LE(ratio, 1.1) << n;
    }
}

TEST(OrbitWeighted, TwoTerms)
{
    unsigned const d = 40;
    EXPECT_TRUE(close(orbit_weighted_identity_check(2, d), ref(oracle::orbit_n2, d), PrecisionReal::parse("1e-28", d)));
    EXPECT_THROW(orbit_weighted_identity_check(1, d), std::invalid_argument);
}

TEST(OrbitWeighted, ConstantIdentity)
{
    unsigned const d = 80;
    PrecisionReal lhs = target_constant(d) * 6 - (gap_term(1, d) + gap_term(2, d)) * 3;
    EXPECT_TRUE(close(lhs, PrecisionReal(3, d), PrecisionReal::ulp_of(3, d) * 4));
}

TEST(OrbitWeighted, ThousandTermsAgainstTailModel)
{
    unsigned const d = precision_for_count(1000);
    PrecisionReal value = orbit_weighted_identity_check(1000, d);
    PrecisionReal bound = zagier_tail(1000, d) * 6 * 2;
    EXPECT_LT(value, PrecisionReal(3, d));
    EXPECT_LT(abs(PrecisionReal(3, d) - value), bound);
}

TEST(McShanePartial, SmallBoxes)
{
    unsigned const d = 70;
    EXPECT_TRUE(close(mcshane_partial(1, d), ref(oracle::mcshane1, d), PrecisionReal::parse("1e-65", d)));
    PrecisionReal trace_three = mcshane_term_from_trace(3, d) * 3;
    EXPECT_EQ(trace_three.to_scientific(5), "3.8197e-1");
    EXPECT_THROW(mcshane_partial(0, d), std::invalid_argument);
}

TEST(McShanePartial, IncreasingBelowOneHalf)
{
    unsigned const d = 60;
    auto sums = mcshane_partials(25, d);
    PrecisionReal half = PrecisionReal(1, d) / 2;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        EXPECT_LT(sums[i], half);
        if (i) {
            EXPECT_GT(sums[i], sums[i - 1]);
        }
    }
    EXPECT_EQ(mcshane_partial(25, d), sums.back());
}

TEST(McShanePartial, Height20Deficit)
{
    unsigned const d = 60;
    PrecisionReal deficit = PrecisionReal(1, d) / 2 - mcshane_partial(20, d);
    PrecisionReal rel = abs(deficit / ref(oracle::mcshane20_deficit, d) - 1);
    EXPECT_LT(rel, PrecisionReal::parse("1e-15", d));
}
