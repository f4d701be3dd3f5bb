#pragma once

// Exact rational arithmetic and radix-q digit extraction.
//
// Every sequence value in the library is an ExactRational. Integers are GMP
// integers (BigInt). Positions are signed: position j addresses the
// coefficient of q^j, so negative positions are fractional digits.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace branchlab {

using BigInt = mpz_class;

class ExactRational {
public:
    ExactRational() = default;
    ExactRational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    ExactRational(int v) : v_(v) {}   // NOLINT(google-explicit-constructor)
    ExactRational(const BigInt& v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    ExactRational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw std::domain_error("ExactRational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    ExactRational(long num, long den) : ExactRational(BigInt(num), BigInt(den)) {}

    static ExactRational from_mpq(mpq_class v) {
        v.canonicalize();
        ExactRational r;
        r.v_ = std::move(v);
        return r;
    }

    BigInt numerator() const { return v_.get_num(); }
    BigInt denominator() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    // Floor and fractional part, floor toward -infinity.
    BigInt floor() const {
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }
    ExactRational frac() const { return *this - ExactRational(floor()); }

    double to_double() const { return v_.get_d(); }

    std::string to_string() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    ExactRational operator-() const { return from_mpq(mpq_class(-v_)); }
    friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
        return from_mpq(mpq_class(a.v_ + b.v_));
    }
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
        return from_mpq(mpq_class(a.v_ - b.v_));
    }
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
        return from_mpq(mpq_class(a.v_ * b.v_));
    }
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
        if (b.is_zero()) throw std::domain_error("ExactRational: division by zero");
        return from_mpq(mpq_class(a.v_ / b.v_));
    }
    ExactRational& operator+=(const ExactRational& o) { return *this = *this + o; }
    ExactRational& operator-=(const ExactRational& o) { return *this = *this - o; }
    ExactRational& operator*=(const ExactRational& o) { return *this = *this * o; }
    ExactRational& operator/=(const ExactRational& o) { return *this = *this / o; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) {
        return a.v_ == b.v_;
    }
    friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
        const int c = cmp(a.v_, b.v_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) {
        return os << r.to_string();
    }

private:
    mpq_class v_{0};
};

inline std::string to_string(const BigInt& v) { return v.get_str(); }

// Parses "a/b" or "a" (optional leading '-'). Decimal points and exponents
// are rejected so no exact input ever passes through a float.
inline ExactRational parse_rational(std::string_view text) {
    auto bad = [&] {
        return std::invalid_argument("malformed rational '" + std::string(text) +
                                     "' (expected a/b or an integer)");
    };
    if (text.empty()) throw bad();
    auto valid_int = [](std::string_view s, bool allow_sign) {
        if (!s.empty() && allow_sign && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    if (!valid_int(num, true)) throw bad();
    BigInt n(std::string(num[0] == '+' ? num.substr(1) : num));
    if (slash == std::string_view::npos) return ExactRational(n);
    std::string_view den = text.substr(slash + 1);
    if (!valid_int(den, false)) throw bad();
    BigInt d{std::string(den)};
    if (d == 0) throw std::invalid_argument("malformed rational '" + std::string(text) +
                                            "' (zero denominator)");
    return ExactRational(n, d);
}

inline BigInt ipow(const BigInt& base, unsigned long exp) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline BigInt ipow(long base, unsigned long exp) { return ipow(BigInt(base), exp); }

namespace detail {

inline void check_base(long q) {
    if (q < 2) throw std::invalid_argument("radix base must be >= 2, got " + std::to_string(q));
}

inline void check_nonnegative(const ExactRational& x, const char* what) {
    if (x.sign() < 0)
        throw std::invalid_argument(std::string(what) + ": value must be >= 0, got " +
                                    x.to_string());
}

inline unsigned long magnitude(long k) {
    return k < 0 ? static_cast<unsigned long>(-(k + 1)) + 1UL : static_cast<unsigned long>(k);
}

}  // namespace detail

// x * q^{-k} as an exact rational.
inline ExactRational scale(const ExactRational& x, long q, long k) {
    detail::check_base(q);
    const BigInt f = ipow(q, detail::magnitude(k));
    if (k >= 0) return x / ExactRational(f);
    return x * ExactRational(f);
}

/// floor(x / q^k). Negative k multiplies.
inline BigInt floor_scale(const ExactRational& x, long q, long k) {
    detail::check_base(q);
    const BigInt f = ipow(q, detail::magnitude(k));
    BigInt num = x.numerator();
    BigInt den = x.denominator();
    if (k >= 0)
        den *= f;
    else
        num *= f;
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

/// {x / q^k}, in [0, 1).
inline ExactRational frac_scale(const ExactRational& x, long q, long k) {
    return scale(x, q, k) - ExactRational(floor_scale(x, q, k));
}

/// Base-q digit of x at position j.
inline int digit_at(const ExactRational& x, long q, long j) {
    detail::check_nonnegative(x, "digit_at");
    BigInt r;
    const BigInt a = floor_scale(x, q, j);
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(q));
    return static_cast<int>(r.get_si());
}

struct DigitExpansion {
    long base = 2;
    long j_lo = 0;
    long j_hi = 0;
    std::vector<int> digits;  // digits[j - j_lo]

    int at(long j) const {
        if (j < j_lo || j > j_hi) throw std::out_of_range("digit position outside window");
        return digits[static_cast<std::size_t>(j - j_lo)];
    }
    std::size_t size() const { return digits.size(); }

    // Sum of digits[j] * base^j over the window.
    ExactRational value() const {
        BigInt acc = 0;
        for (long j = j_hi; j >= j_lo; --j) acc = acc * base + at(j);
        return scale(ExactRational(acc), base, -j_lo);
    }
};

inline DigitExpansion digits_window(const ExactRational& x, long q, long j_lo, long j_hi) {
    detail::check_base(q);
    detail::check_nonnegative(x, "digits_window");
    if (j_lo > j_hi)
        throw std::invalid_argument("digits_window: inverted window [" + std::to_string(j_lo) +
                                    ", " + std::to_string(j_hi) + "]");
    DigitExpansion out{q, j_lo, j_hi, {}};
    const auto len = static_cast<std::size_t>(j_hi - j_lo + 1);
    out.digits.resize(len);
    BigInt a = floor_scale(x, q, j_lo);
    if (q == 2) {
        for (std::size_t i = 0; i < len; ++i) out.digits[i] = mpz_tstbit(a.get_mpz_t(), i);
        return out;
    }
    BigInt r;
    for (std::size_t i = 0; i < len && a != 0; ++i) {
        mpz_fdiv_qr_ui(a.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(),
                       static_cast<unsigned long>(q));
        out.digits[i] = static_cast<int>(r.get_si());
    }
    return out;
}

/// Largest k with q^k | m.
inline unsigned long int_valuation(const BigInt& m, long q) {
    detail::check_base(q);
    if (m <= 0) throw std::invalid_argument("int_valuation: m must be >= 1, got " + m.get_str());
    BigInt rest;
    const BigInt f(q);
    return mpz_remove(rest.get_mpz_t(), m.get_mpz_t(), f.get_mpz_t());
}

// Number of base-q digits of floor(x) for x >= 1 (0 when floor(x) = 0).
inline unsigned long integer_digit_count(const ExactRational& x, long q) {
    detail::check_base(q);
    const BigInt f = x.floor();
    if (f <= 0) return 0;
    return mpz_sizeinbase(f.get_mpz_t(), static_cast<int>(q <= 62 ? q : 2)) + (q > 62 ? 1 : 0);
}

}  // namespace branchlab

template <>
struct std::hash<branchlab::ExactRational> {
    std::size_t operator()(const branchlab::ExactRational& r) const noexcept {
        const std::size_t a = mpz_get_ui(r.raw().get_num_mpz_t());
        const std::size_t b = mpz_get_ui(r.raw().get_den_mpz_t());
        return a * 0x9E3779B97F4A7C15ULL ^ (b + (a << 6) + (a >> 2)) ^
               static_cast<std::size_t>(r.sign());
    }
};
