// Arbitrary-precision real scalar tagged with its decimal working precision.
// Thin RAII wrapper over MPFR with explicit precision semantics: the result of
// a binary operation carries the larger of the two operand precisions, and all
// operations round correctly into that precision (MPFR round-to-nearest).
#ifndef TACHYON_BIG_REAL_HPP
#define TACHYON_BIG_REAL_HPP

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace tachyon {

class BigReal {
public:
    static constexpr int min_digits = 15;

    BigReal() : digits_(min_digits) { mpfr_init2(v_, prec_for(digits_)); mpfr_set_zero(v_, 1); }

    BigReal(const BigReal& o) : digits_(o.digits_) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigReal(BigReal&& o) noexcept : digits_(o.digits_) {
        mpfr_init2(v_, 2);
        mpfr_swap(v_, o.v_);
    }
    BigReal& operator=(const BigReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
            digits_ = o.digits_;
        }
        return *this;
    }
    BigReal& operator=(BigReal&& o) noexcept {
        if (this != &o) { mpfr_swap(v_, o.v_); std::swap(digits_, o.digits_); }
        return *this;
    }
    ~BigReal() { mpfr_clear(v_); }

    // -- construction ------------------------------------------------------
    static BigReal from_int(long v, int digits = min_digits) {
        BigReal r(clamp(digits), raw_tag{});
        mpfr_set_si(r.v_, v, MPFR_RNDN);
        return r;
    }
    static BigReal from_double(double v, int digits = min_digits) {
        BigReal r(clamp(digits), raw_tag{});
        mpfr_set_d(r.v_, v, MPFR_RNDN);
        return r;
    }
    // Parses a decimal string at the requested precision (no double round-trip).
    static BigReal from_string(std::string_view s, int digits) {
        BigReal r(clamp(digits), raw_tag{});
        std::string buf(s);
        if (buf.empty() || mpfr_set_str(r.v_, buf.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("BigReal: cannot parse '" + buf + "'");
        return r;
    }
    static BigReal pi(int digits) {
        BigReal r(clamp(digits), raw_tag{});
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    // 10^k, exactly representable at any precision that holds the exponent
    static BigReal pow10(long k, int digits = min_digits) {
        BigReal r(clamp(digits), raw_tag{});
        mpfr_set_si(r.v_, 10, MPFR_RNDN);
        mpfr_pow_si(r.v_, r.v_, k, MPFR_RNDN);
        return r;
    }

    // Same value re-rounded at a new working precision.
    BigReal with_digits(int digits) const {
        BigReal r(clamp(digits), raw_tag{});
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    int digits() const { return digits_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Base-10 magnitude estimate (floor of log10|x|), safe far beyond double range.
    long magnitude10() const {
        if (is_zero()) return 0;
        return static_cast<long>(std::floor((mpfr_get_exp(v_) - 1) * 0.30102999566398120));
    }

    // -- queries -----------------------------------------------------------
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_negative() const { return mpfr_sgn(v_) < 0; }
    int sign() const { return mpfr_sgn(v_); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }

    // -- arithmetic (result precision = max of operand precisions) ----------
    friend BigReal operator+(const BigReal& a, const BigReal& b) {
        BigReal r(std::max(a.digits_, b.digits_), raw_tag{});
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal& a, const BigReal& b) {
        BigReal r(std::max(a.digits_, b.digits_), raw_tag{});
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(const BigReal& a, const BigReal& b) {
        BigReal r(std::max(a.digits_, b.digits_), raw_tag{});
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator/(const BigReal& a, const BigReal& b) {
        BigReal r(std::max(a.digits_, b.digits_), raw_tag{});
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal& a) {
        BigReal r(a.digits_, raw_tag{});
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend BigReal operator+(const BigReal& a, long b) {
        BigReal r(a.digits_, raw_tag{});
        mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator+(long a, const BigReal& b) { return b + a; }
    friend BigReal operator-(const BigReal& a, long b) {
        BigReal r(a.digits_, raw_tag{});
        mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(long a, const BigReal& b) {
        BigReal r(b.digits_, raw_tag{});
        mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(const BigReal& a, long b) {
        BigReal r(a.digits_, raw_tag{});
        mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(long a, const BigReal& b) { return b * a; }
    friend BigReal operator/(const BigReal& a, long b) {
        BigReal r(a.digits_, raw_tag{});
        mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator/(long a, const BigReal& b) {
        BigReal r(b.digits_, raw_tag{});
        mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }

    // -- comparisons (exact, no rounding) ------------------------------------
    friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const BigReal& a, const BigReal& b) { return !(a == b); }
    friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
    friend bool operator<(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator<=(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>=(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }

    // -- functions -----------------------------------------------------------
    friend BigReal abs(const BigReal& a) {
        BigReal r(a.digits_, raw_tag{});
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal sqrt(const BigReal& a) {
        if (a.is_negative()) throw std::domain_error("BigReal: sqrt of negative value");
        BigReal r(a.digits_, raw_tag{});
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    // MPFR performs exact argument reduction internally, so large phases are safe.
    friend BigReal sin(const BigReal& a) {
        BigReal r(a.digits_, raw_tag{});
        mpfr_sin(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal cos(const BigReal& a) {
        BigReal r(a.digits_, raw_tag{});
        mpfr_cos(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal acos(const BigReal& a) {
        BigReal r(a.digits_, raw_tag{});
        mpfr_acos(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal min(const BigReal& a, const BigReal& b) { return a <= b ? a : b; }
    friend BigReal max(const BigReal& a, const BigReal& b) { return a >= b ? a : b; }

    // -- serialization -------------------------------------------------------
    // Scientific decimal at full working precision, e.g. "4.60333884875170e+00".
    std::string to_string() const { return format(digits_); }

    // Scientific decimal at n significant digits.
    std::string format(int sig_digits) const {
        if (sig_digits < 1) sig_digits = 1;
        char* s = nullptr;
        int n = mpfr_asprintf(&s, "%.*Re", sig_digits - 1, v_);
        if (n < 0) throw std::runtime_error("BigReal: formatting failed");
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    // Serialized form with the digit-count annotation: "<mantissa>e<exp>@<digits>".
    std::string to_annotated() const { return to_string() + "@" + std::to_string(digits_); }

    static BigReal parse_annotated(std::string_view s) {
        auto at = s.rfind('@');
        if (at == std::string_view::npos)
            throw std::invalid_argument("BigReal: missing digit annotation");
        int d = std::stoi(std::string(s.substr(at + 1)));
        return from_string(s.substr(0, at), d);
    }

    // Low-level access for numeric kernels that need direct MPFR calls.
    mpfr_srcptr raw() const { return v_; }

private:
    struct raw_tag {};
    BigReal(int digits, raw_tag) : digits_(digits) { mpfr_init2(v_, prec_for(digits_)); }

    static int clamp(int digits) { return std::max(digits, min_digits); }
    static mpfr_prec_t prec_for(int digits) {
        // bits per decimal digit = log2(10); 16 guard bits keep serialization clean
        return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
    }

    mpfr_t v_;
    int digits_;
};

}  // namespace tachyon

#endif
