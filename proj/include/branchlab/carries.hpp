#pragma once

// Carry digits of the radix-q addition  alpha*x + beta*x/q = p*x/q.
//
// The carry entering position j is addressable directly:
//
//   delta^j = floor((beta * s^j + p * {x / q^j}) / q)
//
// so no fractional expansion ever has to be materialized. The sequential
// recurrence is only used as a cross-check.

#include "branchlab/branch.hpp"
#include "branchlab/numkernel.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace branchlab {

struct CarryParams {
    long p = 3;
    long q = 2;
    long alpha = 1;
    long beta = 1;

    static CarryParams from(const BranchParams& b) { return {b.p, b.q, b.alpha, b.beta}; }
};

inline int carry_at(const ExactRational& x, const CarryParams& cp, long j) {
    const int s = digit_at(x, cp.q, j);
    const ExactRational t =
        (ExactRational(cp.beta * s) + ExactRational(cp.p) * frac_scale(x, cp.q, j)) /
        ExactRational(cp.q);
    return static_cast<int>(t.floor().get_si());
}

inline int carry_at(const ExactRational& x, const BranchParams& params, long j) {
    return carry_at(x, CarryParams::from(params), j);
}

struct CarryFailure {
    std::string identity;  // "transition", "sequential", "frac", "bound", "floor"
    long j = 0;
    std::string lhs;
    std::string rhs;
};

struct CarryRow {
    CarryParams params;
    ExactRational source;
    long j_lo = 0;
    long j_hi = 0;
    std::vector<int> carries;     // delta^j, indexed j - j_lo
    std::vector<int> src_digits;  // s^j
    std::vector<int> dst_digits;  // s'^j, digits of p * source / q
    std::vector<CarryFailure> failures;

    bool ok() const { return failures.empty(); }
    int carry(long j) const { return carries.at(static_cast<std::size_t>(j - j_lo)); }
    int src(long j) const { return src_digits.at(static_cast<std::size_t>(j - j_lo)); }
    int dst(long j) const { return dst_digits.at(static_cast<std::size_t>(j - j_lo)); }
};

// Builds the row over [j_lo, j_hi] and checks every identity at positions
// where j and j + 1 both lie in the window. The bound is checked everywhere.
inline CarryRow transition_report(const ExactRational& x, const CarryParams& cp, long j_lo,
                                  long j_hi) {
    detail::check_nonnegative(x, "transition_report");
    if (j_lo > j_hi)
        throw std::invalid_argument("transition_report: inverted window [" +
                                    std::to_string(j_lo) + ", " + std::to_string(j_hi) + "]");
    CarryRow row;
    row.params = cp;
    row.source = x;
    row.j_lo = j_lo;
    row.j_hi = j_hi;

    const ExactRational px_q = ExactRational(cp.p) * x / ExactRational(cp.q);
    const auto src = digits_window(x, cp.q, j_lo, j_hi);
    const auto dst = digits_window(px_q, cp.q, j_lo, j_hi);
    row.src_digits = src.digits;
    row.dst_digits = dst.digits;
    row.carries.reserve(src.size());
    for (long j = j_lo; j <= j_hi; ++j) row.carries.push_back(carry_at(x, cp, j));

    auto fail = [&row](const char* id, long j, const auto& lhs, const auto& rhs) {
        std::ostringstream a, b;
        a << lhs;
        b << rhs;
        row.failures.push_back({id, j, a.str(), b.str()});
    };

    const ExactRational p_over_q(cp.p, cp.q);
    const ExactRational beta_over_q(cp.beta, cp.q);
    for (long j = j_lo; j <= j_hi; ++j) {
        const int d = row.carry(j);
        const int s = row.src(j);
        if (d < 0 || d >= cp.q) fail("bound", j, d, cp.q);

        // frac and floor identities are pointwise in j
        const ExactRational frac_px = frac_scale(ExactRational(cp.p) * x, cp.q, j + 1);
        const ExactRational frac_rhs =
            p_over_q * frac_scale(x, cp.q, j) - ExactRational(d) + beta_over_q * ExactRational(s);
        if (frac_px != frac_rhs) fail("frac", j, frac_px, frac_rhs);

        const ExactRational floor_lhs(floor_scale(ExactRational(cp.p) * x, cp.q, j + 1));
        const ExactRational floor_rhs = p_over_q * ExactRational(floor_scale(x, cp.q, j)) +
                                        ExactRational(d) - beta_over_q * ExactRational(s);
        if (floor_lhs != floor_rhs) fail("floor", j, floor_lhs, floor_rhs);

        if (j == j_hi) break;
        const int s1 = row.src(j + 1);
        const int d1 = row.carry(j + 1);
        const long lhs = cp.beta * s1 + cp.alpha * s + d;
        const long rhs = row.dst(j) + cp.q * d1;
        if (lhs != rhs) fail("transition", j, lhs, rhs);
        if (lhs / cp.q != d1) fail("sequential", j, lhs / cp.q, d1);
    }
    return row;
}

inline CarryRow transition_report(const ExactRational& x, const BranchParams& params, long j_lo,
                                  long j_hi) {
    return transition_report(x, CarryParams::from(params), j_lo, j_hi);
}

}  // namespace branchlab
