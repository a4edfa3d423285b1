#ifndef MARKOV_PRECISION_REAL_HPP
#define MARKOV_PRECISION_REAL_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

namespace markov {

/// Raised when two PrecisionReal values of different working precision meet.
struct precision_mismatch : std::invalid_argument {
    precision_mismatch(unsigned a, unsigned b)
        : std::invalid_argument("precision mismatch: " + std::to_string(a) + " vs "
                                + std::to_string(b) + " digits")
    {}
};

/// Binary precision needed to carry `digits` significant decimal digits.
inline mpfr_prec_t bits_for_digits(unsigned digits)
{
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 1;
}

/**
 * Arbitrary-precision real with a fixed working precision in decimal digits.
 *
 * Every operation rounds to nearest at the operands' precision. Mixing two
 * values of different precision throws precision_mismatch, including in
 * comparisons.
 */
class PrecisionReal {
public:
    explicit PrecisionReal(unsigned digits) : digits_(checked(digits))
    {
        mpfr_init2(v_, bits_for_digits(digits_));
        mpfr_set_zero(v_, 1);
    }

    PrecisionReal(long value, unsigned digits) : PrecisionReal(digits)
    {
        mpfr_set_si(v_, value, MPFR_RNDN);
    }

    PrecisionReal(mpz_class const& value, unsigned digits) : PrecisionReal(digits)
    {
        mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
    }

    /// Parses a decimal string ("2.35", "7.3e-455"); throws on malformed input.
    static PrecisionReal parse(std::string_view text, unsigned digits)
    {
        PrecisionReal r(digits);
        std::string s(text);
        char* end = nullptr;
        mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
        if (s.empty() || end != s.c_str() + s.size())
            throw std::invalid_argument("not a decimal number: '" + s + "'");
        return r;
    }

    PrecisionReal(PrecisionReal const& other) : digits_(other.digits_)
    {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }

    PrecisionReal(PrecisionReal&& other) noexcept : digits_(other.digits_)
    {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_swap(v_, other.v_);
    }

    PrecisionReal& operator=(PrecisionReal const& other)
    {
        if (this != &other) {
            digits_ = other.digits_;
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }

    PrecisionReal& operator=(PrecisionReal&& other) noexcept
    {
        if (this != &other) {
            std::swap(digits_, other.digits_);
            mpfr_swap(v_, other.v_);
        }
        return *this;
    }

    ~PrecisionReal() { mpfr_clear(v_); }

    /// The same value correctly rounded to another working precision.
    PrecisionReal rounded_to(unsigned digits) const
    {
        PrecisionReal r(digits);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    unsigned digits() const noexcept { return digits_; }
    mpfr_prec_t bits() const noexcept { return mpfr_get_prec(v_); }
    mpfr_srcptr get() const noexcept { return v_; }

    int sign() const noexcept { return mpfr_sgn(v_); }
    bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
    double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }

    /// log10(|x|) as a double; usable far below the double range.
    double log10_abs() const
    {
        long exp = 0;
        double mant = mpfr_get_d_2exp(&exp, v_, MPFR_RNDN);
        return std::log10(std::fabs(mant)) + static_cast<double>(exp) * 0.30102999566398120;
    }

    /// Unit in the last place of this value at its working precision.
    PrecisionReal ulp() const
    {
        PrecisionReal r(digits_);
        long e = mpfr_zero_p(v_) ? 1 : mpfr_get_exp(v_);
        mpfr_set_ui_2exp(r.v_, 1, e - bits(), MPFR_RNDN);
        return r;
    }

    /// Unit in the last place of `scale` at the given precision.
    static PrecisionReal ulp_of(long scale, unsigned digits)
    {
        return PrecisionReal(scale, digits).ulp();
    }

    PrecisionReal& operator+=(PrecisionReal const& o) { same(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    PrecisionReal& operator-=(PrecisionReal const& o) { same(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    PrecisionReal& operator*=(PrecisionReal const& o) { same(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    PrecisionReal& operator/=(PrecisionReal const& o) { same(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    PrecisionReal& operator+=(long o) { mpfr_add_si(v_, v_, o, MPFR_RNDN); return *this; }
    PrecisionReal& operator-=(long o) { mpfr_sub_si(v_, v_, o, MPFR_RNDN); return *this; }
    PrecisionReal& operator*=(long o) { mpfr_mul_si(v_, v_, o, MPFR_RNDN); return *this; }
    PrecisionReal& operator/=(long o) { mpfr_div_si(v_, v_, o, MPFR_RNDN); return *this; }

    friend PrecisionReal operator+(PrecisionReal a, PrecisionReal const& b) { return a += b; }
    friend PrecisionReal operator-(PrecisionReal a, PrecisionReal const& b) { return a -= b; }
    friend PrecisionReal operator*(PrecisionReal a, PrecisionReal const& b) { return a *= b; }
    friend PrecisionReal operator/(PrecisionReal a, PrecisionReal const& b) { return a /= b; }
    friend PrecisionReal operator+(PrecisionReal a, long b) { return a += b; }
    friend PrecisionReal operator-(PrecisionReal a, long b) { return a -= b; }
    friend PrecisionReal operator*(PrecisionReal a, long b) { return a *= b; }
    friend PrecisionReal operator/(PrecisionReal a, long b) { return a /= b; }

    friend PrecisionReal operator-(long a, PrecisionReal b)
    {
        mpfr_si_sub(b.v_, a, b.v_, MPFR_RNDN);
        return b;
    }

    friend PrecisionReal operator/(long a, PrecisionReal b)
    {
        mpfr_si_div(b.v_, a, b.v_, MPFR_RNDN);
        return b;
    }

    PrecisionReal operator-() const
    {
        PrecisionReal r(*this);
        mpfr_neg(r.v_, r.v_, MPFR_RNDN);
        return r;
    }

    friend PrecisionReal sqrt(PrecisionReal x) { mpfr_sqrt(x.v_, x.v_, MPFR_RNDN); return x; }
    friend PrecisionReal exp(PrecisionReal x) { mpfr_exp(x.v_, x.v_, MPFR_RNDN); return x; }
    friend PrecisionReal log(PrecisionReal x) { mpfr_log(x.v_, x.v_, MPFR_RNDN); return x; }
    friend PrecisionReal abs(PrecisionReal x) { mpfr_abs(x.v_, x.v_, MPFR_RNDN); return x; }

    friend int compare(PrecisionReal const& a, PrecisionReal const& b)
    {
        a.same(b);
        return mpfr_cmp(a.v_, b.v_);
    }

    friend bool operator==(PrecisionReal const& a, PrecisionReal const& b) { return compare(a, b) == 0; }
    friend bool operator<(PrecisionReal const& a, PrecisionReal const& b) { return compare(a, b) < 0; }
    friend bool operator>(PrecisionReal const& a, PrecisionReal const& b) { return compare(a, b) > 0; }
    friend bool operator<=(PrecisionReal const& a, PrecisionReal const& b) { return compare(a, b) <= 0; }
    friend bool operator>=(PrecisionReal const& a, PrecisionReal const& b) { return compare(a, b) >= 0; }

    /**
     * Decimal scientific notation with `significant` digits, e.g.
     * "7.34169e-455". Zero prints as "0". Rounds to nearest.
     */
    std::string to_scientific(unsigned significant) const
    {
        if (significant == 0)
            significant = 1;
        if (mpfr_zero_p(v_))
            return "0";
        if (!mpfr_number_p(v_))
            return mpfr_nan_p(v_) ? "nan" : (mpfr_sgn(v_) > 0 ? "inf" : "-inf");
        mpfr_exp_t exp10 = 0;
        std::unique_ptr<char, void (*)(char*)> raw(
            mpfr_get_str(nullptr, &exp10, 10, significant, v_, MPFR_RNDN), mpfr_free_str);
        std::string digits(raw.get());
        std::string out;
        if (digits.front() == '-') {
            out.push_back('-');
            digits.erase(0, 1);
        }
        out.push_back(digits[0]);
        if (digits.size() > 1) {
            out.push_back('.');
            out.append(digits, 1, std::string::npos);
        }
        out.push_back('e');
        out += std::to_string(static_cast<long>(exp10) - 1);
        return out;
    }

    /// Digits of the decimal mantissa and the decimal exponent, for checks like "7.34169e-455".
    std::pair<std::string, long> decimal_parts(unsigned significant) const
    {
        mpfr_exp_t exp10 = 0;
        std::unique_ptr<char, void (*)(char*)> raw(
            mpfr_get_str(nullptr, &exp10, 10, significant, v_, MPFR_RNDN), mpfr_free_str);
        return {std::string(raw.get()), static_cast<long>(exp10) - 1};
    }

private:
    static unsigned checked(unsigned digits)
    {
        if (digits < 2)
            throw std::invalid_argument("precision must be at least 2 digits");
        return digits;
    }

    void same(PrecisionReal const& o) const
    {
        if (o.digits_ != digits_)
            throw precision_mismatch(digits_, o.digits_);
    }

    mpfr_t v_;
    unsigned digits_;
};

} // namespace markov

#endif // MARKOV_PRECISION_REAL_HPP
