#pragma once

// Independent oracles and seeded generators for the test suites. The oracles
// deliberately avoid the library's primitives: they work on raw numerator /
// denominator pairs with plain GMP integer division or machine integers.

#include "branchlab/branchlab.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using branchlab::BigInt;
using branchlab::ExactRational;

inline BigInt pow_z(long b, unsigned long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), e);
    return r;
}

// floor(num / den) for den > 0, any sign of num.
inline BigInt floor_div(const BigInt& num, const BigInt& den) {
    BigInt q = num / den;  // truncates toward zero
    if (q * den > num) q -= 1;
    return q;
}

inline BigInt floor_scaled(const ExactRational& x, long q, long k) {
    BigInt n = x.numerator(), d = x.denominator();
    if (k >= 0) d *= pow_z(q, static_cast<unsigned long>(k));
    else n *= pow_z(q, static_cast<unsigned long>(-k));
    return floor_div(n, d);
}

// Digit by long division: integer digits by repeated division of the integer
// part, fractional digits by repeated multiplication of the remainder.
inline int digit(const ExactRational& x, long q, long j) {
    const BigInt n = x.numerator(), d = x.denominator();
    BigInt ip = floor_div(n, d);
    BigInt rem = n - ip * d;
    if (j >= 0) {
        for (long i = 0; i < j; ++i) ip /= q;
        return static_cast<int>(BigInt(ip % q).get_si());
    }
    int out = 0;
    for (long i = 0; i < -j; ++i) {
        rem *= q;
        out = static_cast<int>(BigInt(rem / d).get_si());
        rem -= BigInt(out) * d;
    }
    return out;
}

// Part of x strictly below position j: x - q^j floor(x / q^j).
inline ExactRational below(const ExactRational& x, long q, long j) {
    const ExactRational qj = j >= 0 ? ExactRational(pow_z(q, static_cast<unsigned long>(j)))
                                    : ExactRational(BigInt(1), pow_z(q, static_cast<unsigned long>(-j)));
    return x - qj * ExactRational(floor_scaled(x, q, j));
}

// Carry entering position j of alpha*x + beta*(x/q): the overflow of the
// lower parts of both addends past q^j.
inline int carry(const ExactRational& x, long p, long q, long j) {
    const long alpha = p / q, beta = p % q;
    const ExactRational xq = x / ExactRational(q);
    const ExactRational lower = ExactRational(alpha) * below(x, q, j) + ExactRational(beta) * below(xq, q, j);
    return static_cast<int>(floor_scaled(lower, q, j).get_si());
}

// Odd-only Syracuse map on machine integers.
struct SyrRow {
    std::uint64_t w;
    unsigned h;
};
inline std::vector<SyrRow> syracuse(std::uint64_t w0) {
    std::vector<SyrRow> out;
    std::uint64_t w = w0;
    for (;;) {
        if (w == 1) {
            out.push_back({w, 0});
            return out;
        }
        std::uint64_t u = (3 * w + 1) / 2;
        unsigned h = 0;
        while (u % 2 == 0) {
            u /= 2;
            ++h;
        }
        out.push_back({w, h});
        w = u;
    }
}

}  // namespace oracle

namespace gen {

using branchlab::BigInt;
using branchlab::ExactRational;

// Parameter blocks satisfying every validation rule.
inline const std::vector<std::pair<long, long>>& blocks() {
    static const std::vector<std::pair<long, long>> b = {{3, 2}, {5, 3}, {7, 4}, {5, 4}, {7, 5},
                                                          {7, 3}, {9, 4}, {11, 6}, {13, 7}};
    return b;
}

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng); }
    bool coin() { return range(0, 1) == 1; }

    ExactRational nonneg_rational(long max_num, long max_den) {
        return ExactRational(range(0, max_num), range(1, max_den));
    }

    std::pair<long, long> block() { return blocks()[static_cast<std::size_t>(range(0, static_cast<long>(blocks().size()) - 1))]; }

    // xi > 1, not a power of q, satisfying the branch condition.
    ExactRational start(long q) {
        for (;;) {
            const ExactRational x(range(q + 1, 400), range(1, 6));
            if (!branchlab::branch_condition(x, q)) continue;
            if (x.is_integer()) {
                BigInt v = x.numerator();
                while (v % q == 0) v /= q;
                if (v == 1) continue;
            }
            return x;
        }
    }

    // An admissible perturbation with S + r = floor(S) + t/d.
    ExactRational perturbation(const ExactRational& s, long max_den, bool positive_only) {
        const ExactRational f = s.frac();
        if (positive_only && f >= ExactRational(max_den - 1, max_den))
            return (ExactRational(1) - f) / ExactRational(2);  // no grid point above {S}
        for (;;) {
            const long d = range(1, max_den);
            const long t = range(0, d - 1);
            const ExactRational r = ExactRational(t, d) - f;
            if (!positive_only || r.sign() > 0) return r;
        }
    }
};

inline branchlab::BranchTrajectory random_trajectory(Rng& rng, std::size_t steps, long max_den = 12,
                                                     bool positive_only = false) {
    const auto [p, q] = rng.block();
    const auto params = branchlab::validate_params(p, q, rng.start(q));
    return branchlab::iterate_v2(
        params, [&](const branchlab::BranchStep& s) { return rng.perturbation(s.state, max_den, positive_only); },
        steps);
}

}  // namespace gen
