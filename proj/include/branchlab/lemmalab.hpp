#pragma once

// Empirical checkers for the carry-independence, floor-addition and
// domination claims, plus cycle and asymptotic diagnostics.
//
// A checker never proves anything: it either passes on the instances it
// was given or hands back a self-contained Counterexample that replay()
// re-derives from scratch.

#include "branchlab/branch.hpp"
#include "branchlab/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace branchlab {

enum class Verdict { pass, violated, precondition_failed };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::violated: return "violated";
        case Verdict::precondition_failed: return "precondition_failed";
    }
    return "?";
}

struct Counterexample {
    std::string claim_id;
    std::string relation;
    std::vector<std::pair<std::string, ExactRational>> witness;
    // r_0 .. r_{N-1} for claims that need a rebuilt trajectory.
    std::vector<ExactRational> perturbations;
    ExactRational lhs;
    ExactRational rhs;

    bool has(const std::string& name) const {
        return std::any_of(witness.begin(), witness.end(),
                           [&](const auto& w) { return w.first == name; });
    }
    const ExactRational& get(const std::string& name) const {
        for (const auto& w : witness)
            if (w.first == name) return w.second;
        throw std::invalid_argument("certificate for " + claim_id + " lacks witness '" + name + "'");
    }
    long get_long(const std::string& name) const {
        const auto& v = get(name);
        if (!v.is_integer() || !v.numerator().fits_slong_p())
            throw std::invalid_argument("witness '" + name + "' is not a machine integer");
        return v.numerator().get_si();
    }
};

struct ClaimReport {
    std::string claim_id;
    std::string instance;
    Verdict verdict = Verdict::pass;
    std::optional<Counterexample> certificate;
    std::uint64_t tested_count = 0;
    std::uint64_t violation_count = 0;
    std::vector<std::string> notes;

    void record(Counterexample c) {
        ++violation_count;
        if (verdict != Verdict::precondition_failed) verdict = Verdict::violated;
        if (!certificate) certificate = std::move(c);
    }
    bool passed() const { return verdict == Verdict::pass; }
};

// Shards are merged in seed order, so the first certificate seen is kept.
inline void merge_report(ClaimReport& into, const ClaimReport& from) {
    into.tested_count += from.tested_count;
    into.violation_count += from.violation_count;
    if (from.verdict == Verdict::violated && into.verdict == Verdict::pass)
        into.verdict = Verdict::violated;
    if (!into.certificate && from.certificate) into.certificate = from.certificate;
}

namespace detail {

inline ExactRational as_rational(long v) { return ExactRational(v); }
inline ExactRational as_rational(std::size_t v) { return ExactRational(BigInt(static_cast<unsigned long>(v))); }
inline ExactRational as_rational(const BigInt& v) { return ExactRational(v); }

// floor(x / q^k) for k = k_lo .. k_hi, by repeated integer division.
inline std::vector<BigInt> floors_by_scale(const ExactRational& x, long q, long k_lo, long k_hi) {
    std::vector<BigInt> out;
    if (k_hi < k_lo) return out;
    out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    BigInt a = floor_scale(x, q, k_lo);
    out.push_back(a);
    for (long k = k_lo + 1; k <= k_hi; ++k) {
        mpz_fdiv_q_ui(a.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(q));
        out.push_back(a);
    }
    return out;
}

inline std::vector<ExactRational> prefix_perturbations(const BranchTrajectory& traj,
                                                       std::size_t steps) {
    std::vector<ExactRational> out;
    out.reserve(steps);
    for (std::size_t j = 0; j < steps; ++j) out.push_back(*traj.steps.at(j).perturbation);
    return out;
}

inline Counterexample trajectory_certificate(
    std::string claim, std::string relation, const BranchTrajectory& traj, std::size_t steps,
    std::vector<std::pair<std::string, ExactRational>> scalars, ExactRational lhs,
    ExactRational rhs) {
    Counterexample c;
    c.claim_id = std::move(claim);
    c.relation = std::move(relation);
    c.witness = {{"p", ExactRational(traj.params.p)},
                 {"q", ExactRational(traj.params.q)},
                 {"xi", traj.params.xi}};
    for (auto& s : scalars) c.witness.push_back(std::move(s));
    c.perturbations = prefix_perturbations(traj, steps);
    c.lhs = std::move(lhs);
    c.rhs = std::move(rhs);
    return c;
}

inline std::string describe(const BranchParams& params) {
    return "p=" + std::to_string(params.p) + " q=" + std::to_string(params.q) +
           " xi=" + params.xi.to_string();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Carry independence probe

struct ProbeOptions {
    long k_max = 6;
    std::uint32_t grid = 256;
};

// Sweeps r across the admissible interval at one state and checks that
// floor(p(S + r) / q^{1+k}) does not move for k in [2, k_max]. When `derived`
// is supplied and the recorded r is positive, the transfer to Delta is
// checked with that r under the claim id "Corollary2.1".
inline ClaimReport independence_probe(const BranchParams& params, const BranchStep& step,
                                      const ProbeOptions& opt = {},
                                      const DerivedStep* derived = nullptr,
                                      ClaimReport* transfer = nullptr) {
    if (opt.k_max < 2) throw std::invalid_argument("independence_probe: k_max must be >= 2");
    if (opt.grid == 0) throw std::invalid_argument("independence_probe: grid must be >= 1");
    const long p = params.p;
    const long q = params.q;
    const ExactRational& s = step.state;

    ClaimReport rep;
    rep.claim_id = "Lemma2.1";
    rep.instance = detail::describe(params) + " n=" + std::to_string(step.n) +
                   " S=" + s.to_string() + " kmax=" + std::to_string(opt.k_max) +
                   " grid=" + std::to_string(opt.grid);
    const bool hypothesis = branch_condition(s, q);
    if (!hypothesis) rep.verdict = Verdict::precondition_failed;

    // S + r over the sweep, as integer numerator / denominator pairs:
    // grid points give floor(S) + t/grid; the top point gives
    // floor(S) + 1 - 1/q^8.
    const BigInt fl = s.floor();
    const BigInt gridz(static_cast<unsigned long>(opt.grid));
    const BigInt q8 = ipow(q, 8);
    struct Point {
        BigInt num;
        BigInt den;
    };
    std::vector<Point> pts;
    pts.reserve(opt.grid + 1);
    for (std::uint32_t t = 0; t < opt.grid; ++t)
        pts.push_back({BigInt(p) * (fl * gridz + t), gridz});
    pts.push_back({BigInt(p) * ((fl + 1) * q8 - 1), q8});

    const auto ref = detail::floors_by_scale(ExactRational(p) * s, q, 3, 1 + opt.k_max);
    std::vector<std::vector<BigInt>> seen(ref.size());
    BigInt a, qk;
    for (const auto& pt : pts) {
        qk = pt.den * ipow(q, 3);
        mpz_fdiv_q(a.get_mpz_t(), pt.num.get_mpz_t(), qk.get_mpz_t());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            if (i > 0) mpz_fdiv_q_ui(a.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(q));
            ++rep.tested_count;
            if (std::find(seen[i].begin(), seen[i].end(), a) == seen[i].end()) seen[i].push_back(a);
            if (a != ref[i] && hypothesis) {
                const long k = 2 + static_cast<long>(i);
                const ExactRational r = ExactRational(pt.num, pt.den) / ExactRational(p) - s;
                Counterexample c;
                c.claim_id = "Lemma2.1";
                c.relation = "floor(p*(S+r)/q^(1+k)) == floor(p*S/q^(1+k))";
                c.witness = {{"p", ExactRational(p)}, {"q", ExactRational(q)}, {"S", s},
                             {"r", r}, {"k", ExactRational(k)}};
                c.lhs = ExactRational(a);
                c.rhs = ExactRational(ref[i]);
                rep.record(std::move(c));
            }
        }
    }
    if (!hypothesis) {
        rep.notes.push_back("state fails the branch condition; sweep reported for reference");
        for (std::size_t i = 0; i < seen.size(); ++i) {
            auto v = seen[i];
            std::sort(v.begin(), v.end());
            std::string line = "k=" + std::to_string(2 + i) + " floors {";
            for (std::size_t j = 0; j < v.size(); ++j) line += (j ? "," : "") + v[j].get_str();
            rep.notes.push_back(line + "}");
        }
    }

    if (derived && transfer && step.perturbation) {
        const ExactRational& r = *step.perturbation;
        ClaimReport& tr = *transfer;
        if (tr.claim_id.empty()) tr.claim_id = "Corollary2.1";
        if (r.sign() <= 0) {
            tr.verdict = Verdict::precondition_failed;
            tr.notes.push_back("non-positive perturbation at n=" + std::to_string(step.n));
        } else {
            const ExactRational& d = derived->offset;
            auto cert = [&](long k, const BigInt& l, const BigInt& rr) {
                Counterexample c;
                c.claim_id = "Corollary2.1";
                c.relation = k == 0 ? "floor(Delta+r) == floor(Delta)"
                                    : "floor(p*(Delta+r)/q^(1+k)) == floor(p*Delta/q^(1+k))";
                c.witness = {{"p", ExactRational(p)}, {"q", ExactRational(q)},
                             {"Delta", d},           {"r", r},
                             {"k", ExactRational(k)}, {"n", detail::as_rational(step.n)}};
                c.lhs = ExactRational(l);
                c.rhs = ExactRational(rr);
                return c;
            };
            ++tr.tested_count;
            const BigInt f0 = (d + r).floor();
            const BigInt f1 = d.floor();
            if (f0 != f1) tr.record(cert(0, f0, f1));
            const auto with_r = detail::floors_by_scale(ExactRational(p) * (d + r), q, 3, 1 + opt.k_max);
            const auto without = detail::floors_by_scale(ExactRational(p) * d, q, 3, 1 + opt.k_max);
            for (std::size_t i = 0; i < with_r.size(); ++i) {
                ++tr.tested_count;
                if (with_r[i] != without[i]) tr.record(cert(2 + static_cast<long>(i), with_r[i], without[i]));
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Floor-addition search

enum class FloorInterpretation { integer_part, all_scales };

inline const char* to_string(FloorInterpretation i) {
    return i == FloorInterpretation::integer_part ? "integer_part" : "all_scales";
}

namespace detail {

inline BigInt lcm_upto(long n) {
    BigInt l = 1;
    for (long i = 2; i <= n; ++i) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(i));
    return l;
}

struct ScaledRational {
    long num;  // value * L
    long den;  // reduced denominator
};

// Nonnegative rationals with denominator <= max_den and value <= max_val,
// scaled by L, sorted by value.
inline std::vector<ScaledRational> scaled_grid(long max_den, long max_val, long L) {
    std::vector<ScaledRational> v;
    for (long d = 1; d <= max_den; ++d)
        for (long n = 0; n <= max_val * d; ++n)
            if (std::gcd(n, d) == 1) v.push_back({n * (L / d), d});
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.num < b.num; });
    return v;
}

}  // namespace detail

// Hypothesis of the floor-addition claim for one triple, as scaled integers.
// all_scales checks every k >= 0 with q = 2 until both sides reach zero.
inline bool floor_addition_hypothesis(long a, long b, long b2, long L, FloorInterpretation mode) {
    long x = (a + b) / L;
    long y = (a + b2) / L;
    if (x != y) return false;
    if (mode == FloorInterpretation::integer_part) return true;
    // floor((A+B)/2^k): halve the integer part, the nesting law makes this exact.
    while (x != 0 || y != 0) {
        x /= 2;
        y /= 2;
        if (x != y) return false;
    }
    return true;
}

// Exhaustive search in lexicographic order on (den A, A, B, B'). Every triple
// is visited so the counts are exact; the certificate is the first violation.
inline ClaimReport floor_addition_search(long max_den, long max_val, FloorInterpretation mode) {
    if (max_den < 1 || max_val < 0)
        throw std::invalid_argument("floor_addition_search: need max_den >= 1 and max_val >= 0");
    const BigInt Lz = detail::lcm_upto(max_den);
    if (!Lz.fits_slong_p() || Lz * (2 * max_val + 2) > BigInt(std::numeric_limits<long>::max()))
        throw std::invalid_argument("floor_addition_search: max_den too large for scaled search");
    const long L = Lz.get_si();
    const auto vals = detail::scaled_grid(max_den, max_val, L);
    std::vector<detail::ScaledRational> as = vals;
    std::stable_sort(as.begin(), as.end(),
                     [](const auto& x, const auto& y) { return x.den < y.den; });

    ClaimReport rep;
    rep.claim_id = "Lemma2.2";
    rep.instance = std::string("max_den=") + std::to_string(max_den) +
                   " max_val=" + std::to_string(max_val) + " interpretation=" + to_string(mode);
    std::uint64_t hyp_count = 0;
    for (const auto& A : as) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const long b = vals[i].num;
            const long fb = b / L;
            for (std::size_t k = i + 1; k < vals.size(); ++k) {
                const long b2 = vals[k].num;
                ++rep.tested_count;
                if (!floor_addition_hypothesis(A.num, b, b2, L, mode)) continue;
                ++hyp_count;
                const long fb2 = b2 / L;
                if (fb != fb2) {
                    Counterexample c;
                    c.claim_id = "Lemma2.2";
                    c.relation = std::string("B < B' and hypothesis(") + to_string(mode) +
                                 ") implies floor(B) == floor(B')";
                    c.witness = {{"A", ExactRational(BigInt(A.num), Lz)},
                                 {"B", ExactRational(BigInt(b), Lz)},
                                 {"B'", ExactRational(BigInt(b2), Lz)},
                                 {"all_scales", ExactRational(mode == FloorInterpretation::all_scales ? 1 : 0)}};
                    c.lhs = ExactRational(fb);
                    c.rhs = ExactRational(fb2);
                    rep.record(std::move(c));
                }
            }
        }
    }
    rep.notes.push_back("triples satisfying the hypothesis: " + std::to_string(hyp_count));
    return rep;
}

// ---------------------------------------------------------------------------
// Domination and bound chains

struct DominationReport {
    ClaimReport base;       // Delta_1 == Omega_1
    ClaimReport theorem;    // floor(Delta_n/q^k) == floor(Omega_n/q^k), n >= 1
    ClaimReport lemma;      // floor(Omega_{n+1}/q^k) == floor(p Omega_n / q^{1+g+k})
    ClaimReport bounds_delta;  // Omega < Delta < Omega + q^2
    ClaimReport bounds_state;  // Z < S < Z + q^2
    ClaimReport bounds_sum;    // omega < Sigma < omega + q^{n+e}/p^n q^2

    std::vector<const ClaimReport*> all() const {
        return {&base, &theorem, &lemma, &bounds_delta, &bounds_state, &bounds_sum};
    }
    std::vector<ClaimReport*> all() {
        return {&base, &theorem, &lemma, &bounds_delta, &bounds_state, &bounds_sum};
    }
};

namespace detail {

inline bool check_domination_at(const BranchTrajectory& traj, const std::vector<DerivedStep>& d,
                                const std::string& claim, std::size_t n, long k, long side,
                                ExactRational& lhs, ExactRational& rhs) {
    const auto& params = traj.params;
    const long q = params.q;
    const ExactRational q2(q * q);
    if (claim == "Theorem2.1.base") {
        lhs = d.at(1).offset;
        rhs = d.at(1).scaled_max_term;
        return lhs == rhs;
    }
    if (claim == "Theorem2.1") {
        lhs = ExactRational(floor_scale(d.at(n).offset, q, k));
        rhs = ExactRational(floor_scale(d.at(n).scaled_max_term, q, k));
        return lhs == rhs;
    }
    if (claim == "Lemma2.3") {
        const long g = static_cast<long>(traj.steps.at(n + 1).shift);
        lhs = ExactRational(floor_scale(d.at(n + 1).scaled_max_term, q, k));
        rhs = ExactRational(floor_scale(ExactRational(params.p) * d.at(n).scaled_max_term, q, 1 + g + k));
        return lhs == rhs;
    }
    ExactRational mid, low;
    ExactRational width = q2;
    if (claim == "Corollary2.2a") {
        mid = d.at(n).offset;
        low = d.at(n).scaled_max_term;
    } else if (claim == "Corollary2.2b") {
        mid = traj.steps.at(n).state;
        low = d.at(n).dominated_state;
    } else if (claim == "Corollary2.2c") {
        mid = traj.steps.at(n).weighted_sum;
        low = d.at(n).max_term;
        width = q2 * growth_factor(params, n, traj.steps.at(n).cumulative_shift);
    } else {
        throw std::invalid_argument("unknown domination claim '" + claim + "'");
    }
    if (side == 0) {
        lhs = low;
        rhs = mid;
        return low < mid;
    }
    lhs = mid;
    rhs = low + width;
    return mid < rhs;
}

}  // namespace detail

// Checks the domination claim and its companions on one positive-perturbation
// trajectory. The strict lower bounds are checked from n = 2 on: at n = 1 the
// offset equals the scaled largest perturbation, and at n = 0 both vanish.
inline DominationReport domination_check(const BranchTrajectory& traj, long k_max) {
    if (k_max < 2) throw std::invalid_argument("domination_check: k_max must be >= 2");
    DominationReport out;
    const std::string inst = detail::describe(traj.params) +
                             " steps=" + std::to_string(traj.size() ? traj.size() - 1 : 0) +
                             " kmax=" + std::to_string(k_max);
    out.base.claim_id = "Theorem2.1.base";
    out.theorem.claim_id = "Theorem2.1";
    out.lemma.claim_id = "Lemma2.3";
    out.bounds_delta.claim_id = "Corollary2.2a";
    out.bounds_state.claim_id = "Corollary2.2b";
    out.bounds_sum.claim_id = "Corollary2.2c";
    for (auto* r : out.all()) r->instance = inst;

    if (!all_perturbations_positive(traj) || traj.size() < 2) {
        for (auto* r : out.all()) {
            r->verdict = Verdict::precondition_failed;
            r->notes.push_back(traj.size() < 2 ? "trajectory needs at least one step"
                                               : "perturbation sequence is not positive");
        }
        return out;
    }

    const auto d = derived_all(traj);
    const std::size_t N = traj.size();
    ExactRational lhs, rhs;

    auto run = [&](ClaimReport& rep, const std::string& relation, std::size_t n, long k, long side,
                   std::size_t steps_needed) {
        ++rep.tested_count;
        if (detail::check_domination_at(traj, d, rep.claim_id, n, k, side, lhs, rhs)) return;
        rep.record(detail::trajectory_certificate(
            rep.claim_id, relation, traj, steps_needed,
            {{"n", detail::as_rational(n)}, {"k", ExactRational(k)}, {"side", ExactRational(side)}},
            lhs, rhs));
    };

    run(out.base, "Delta_1 == Omega_1", 1, 0, 0, 1);
    for (std::size_t n = 1; n < N; ++n)
        for (long k = 2; k <= k_max; ++k)
            run(out.theorem, "floor(Delta_n/q^k) == floor(Omega_n/q^k)", n, k, 0, n);
    for (std::size_t n = 0; n + 1 < N; ++n)
        for (long k = 2; k <= k_max; ++k)
            run(out.lemma, "floor(Omega_{n+1}/q^k) == floor(p*Omega_n/q^(1+g_{n+1}+k))", n, k, 0,
                n + 1);
    const std::pair<ClaimReport*, const char*> chains[] = {
        {&out.bounds_delta, "Omega_n < Delta_n | Delta_n < Omega_n + q^2"},
        {&out.bounds_state, "Z_n < S_n | S_n < Z_n + q^2"},
        {&out.bounds_sum, "omega_n < Sigma_n | Sigma_n < omega_n + q^2*q^(n+e_n)/p^n"}};
    for (const auto& [rep, rel] : chains) {
        const std::string relation(rel);
        const auto bar = relation.find(" | ");
        for (std::size_t n = 1; n < N; ++n) {
            if (n >= 2) run(*rep, relation.substr(0, bar), n, 0, 0, n);
            run(*rep, relation.substr(bar + 3), n, 0, 1, n);
        }
        rep->notes.push_back("strict lower bound checked for n >= 2 (equality holds at n = 1)");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Determinism and minimum bound

inline ClaimReport determinism_check(const BranchTrajectory& traj) {
    if (traj.size() < 2) throw std::invalid_argument("determinism_check: trajectory length < 2");
    ClaimReport rep;
    rep.claim_id = "Definition1.4";
    rep.instance = detail::describe(traj.params) + " steps=" + std::to_string(traj.size() - 1);
    std::map<BigInt, std::vector<std::size_t>> by_floor;
    for (std::size_t n = 0; n + 1 < traj.size(); ++n) by_floor[traj.steps[n].state.floor()].push_back(n);
    for (const auto& [fl, idx] : by_floor) {
        for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                const std::size_t m = idx[a];
                const std::size_t n = idx[b];
                ++rep.tested_count;
                const auto& sm = traj.steps[m + 1];
                const auto& sn = traj.steps[n + 1];
                const bool with_r = sm.perturbation && sn.perturbation;
                const std::size_t steps = with_r ? n + 2 : n + 1;
                auto cert = [&](long part, const ExactRational& l, const ExactRational& r) {
                    return detail::trajectory_certificate(
                        rep.claim_id,
                        part == 0 ? "floor(S_n) == floor(S_m) implies S_{n+1} == S_{m+1}"
                                  : "floor(S_n) == floor(S_m) implies r_{n+1} == r_{m+1}",
                        traj, steps,
                        {{"m", detail::as_rational(m)}, {"n", detail::as_rational(n)},
                         {"part", ExactRational(part)}},
                        l, r);
                };
                if (sn.state != sm.state)
                    rep.record(cert(0, sn.state, sm.state));
                else if (with_r && *sn.perturbation != *sm.perturbation)
                    rep.record(cert(1, *sn.perturbation, *sm.perturbation));
            }
        }
    }
    if (rep.tested_count == 0) rep.notes.push_back("no two states share an integer part: vacuous");
    return rep;
}

inline ClaimReport min_bound_check(const BranchTrajectory& traj) {
    if (traj.size() == 0) throw std::invalid_argument("min_bound_check: empty trajectory");
    ClaimReport rep;
    rep.claim_id = "Lemma3.3";
    rep.instance = detail::describe(traj.params) + " steps=" + std::to_string(traj.size() - 1);
    std::size_t arg = 0;
    for (std::size_t n = 1; n < traj.size(); ++n)
        if (traj.steps[n].state < traj.steps[arg].state) arg = n;
    const ExactRational bound(traj.params.q * traj.params.q);
    rep.tested_count = traj.size();
    const ExactRational& mn = traj.steps[arg].state;
    rep.notes.push_back("min S = " + mn.to_string() + " at n = " + std::to_string(arg));
    rep.notes.push_back("prefix statement over " + std::to_string(traj.size()) + " records");
    if (mn > bound) {
        rep.record(detail::trajectory_certificate(rep.claim_id, "min_n S_n <= q^2", traj,
                                                  traj.size() - 1,
                                                  {{"argmin", detail::as_rational(arg)}}, mn, bound));
        rep.notes.push_back("violation on a finite prefix is not a refutation of the limit claim");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Asymptotic diagnostics

enum class Trichotomy { periodic, ratio_above_threshold, ratio_below_threshold, inconclusive };
enum class GrowthCase { case1, case2, case3, undetermined };

inline const char* to_string(Trichotomy t) {
    switch (t) {
        case Trichotomy::periodic: return "periodic";
        case Trichotomy::ratio_above_threshold: return "ratio-above-threshold";
        case Trichotomy::ratio_below_threshold: return "ratio-below-threshold";
        case Trichotomy::inconclusive: return "inconclusive";
    }
    return "?";
}
inline const char* to_string(GrowthCase c) {
    switch (c) {
        case GrowthCase::case1: return "case1";
        case GrowthCase::case2: return "case2";
        case GrowthCase::case3: return "case3";
        case GrowthCase::undetermined: return "undetermined";
    }
    return "?";
}

struct AsymptoticRow {
    std::size_t n = 0;
    std::uint64_t e = 0;
    std::optional<ExactRational> e_over_n;  // absent at n = 0
    int exact_side = 0;       // sign of q^{n+e_n} - p^n, the exact decision
    double approx_ratio = 0;  // e_n / n as a double
    int approx_side = 0;      // sign of e_n/n - threshold beyond the precision, 0 inside it
    ExactRational weighted_sum;
    ExactRational max_term;
    BigInt floor_state;
    ExactRational growth;     // q^{n+e_n} / p^n
};

struct AsymptoticReport {
    std::vector<AsymptoticRow> rows;
    double threshold = 0;  // log_q(p/q), approximate
    double threshold_precision = 1e-12;
    Trichotomy classification = Trichotomy::inconclusive;
    std::optional<std::size_t> period;
    std::optional<std::size_t> preperiod;
    GrowthCase growth_case = GrowthCase::undetermined;
    std::size_t disagreements = 0;  // rows where the approximate side contradicts the exact one
    bool cycle_found = false;
    std::string label = "prefix diagnostic, not a limit statement";
    std::vector<std::string> notes;
};

inline double log_threshold(long p, long q) {
    return std::log(static_cast<double>(p) / static_cast<double>(q)) / std::log(static_cast<double>(q));
}

namespace detail {

struct StateKey {
    ExactRational s;
    ExactRational r;
    bool operator==(const StateKey& o) const { return s == o.s && r == o.r; }
};
struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const {
        return std::hash<ExactRational>{}(k.s) * 31 + std::hash<ExactRational>{}(k.r);
    }
};

}  // namespace detail

inline AsymptoticReport asymptotic_report(const BranchTrajectory& traj) {
    if (traj.size() < 2) throw std::invalid_argument("asymptotic_report: trajectory length < 2");
    const auto& params = traj.params;
    AsymptoticReport rep;
    rep.threshold = log_threshold(params.p, params.q);

    BigInt ppow = 1;
    BigInt qpow = 1;
    std::uint64_t prev = 0;
    ExactRational omega(0);
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const auto& s = traj.steps[n];
        const std::uint64_t exp = n + s.cumulative_shift;
        if (n > 0) {
            ppow *= params.p;
            qpow *= ipow(params.q, exp - prev);
        }
        prev = exp;
        AsymptoticRow row;
        row.n = n;
        row.e = s.cumulative_shift;
        row.weighted_sum = s.weighted_sum;
        row.max_term = omega;
        row.floor_state = s.state.floor();
        row.growth = ExactRational(qpow, ppow);
        if (n > 0) {
            row.e_over_n = ExactRational(BigInt(static_cast<unsigned long>(row.e)),
                                         BigInt(static_cast<unsigned long>(n)));
            row.exact_side = cmp(qpow, ppow) > 0 ? 1 : (qpow == ppow ? 0 : -1);
            row.approx_ratio = static_cast<double>(row.e) / static_cast<double>(n);
            const double diff = row.approx_ratio - rep.threshold;
            row.approx_side = diff > rep.threshold_precision ? 1 : (diff < -rep.threshold_precision ? -1 : 0);
            if (row.approx_side != 0 && row.approx_side != row.exact_side) ++rep.disagreements;
        }
        if (s.perturbation) {
            const ExactRational term = *s.perturbation * row.growth;
            if (n == 0 || term > omega) omega = term;
        }
        rep.rows.push_back(std::move(row));
    }

    // exact repeat of (S, r)
    std::unordered_map<detail::StateKey, std::size_t, detail::StateKeyHash> seen;
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const auto& s = traj.steps[n];
        if (!s.perturbation) break;
        auto [it, fresh] = seen.emplace(detail::StateKey{s.state, *s.perturbation}, n);
        if (!fresh) {
            rep.cycle_found = true;
            rep.preperiod = it->second;
            rep.period = n - it->second;
            break;
        }
    }

    const std::size_t N = rep.rows.size();
    const std::size_t tail_start = std::max<std::size_t>(1, N / 2);
    if (rep.cycle_found) {
        rep.classification = Trichotomy::periodic;
        const std::size_t m0 = *rep.preperiod;
        const std::size_t m = *rep.period;
        const std::uint64_t em = traj.steps[m0 + m].cumulative_shift - traj.steps[m0].cumulative_shift;
        const bool above = cmp(ipow(params.q, m + em), ipow(params.p, m)) > 0;
        rep.notes.push_back("period " + std::to_string(m) + " from n = " + std::to_string(m0) +
                            "; shift per period " + std::to_string(em) +
                            (above ? " (ratio above threshold)" : " (ratio below threshold)"));
    } else {
        bool all_above = true, all_below = true;
        for (std::size_t n = tail_start; n < N; ++n) {
            all_above = all_above && rep.rows[n].exact_side > 0;
            all_below = all_below && rep.rows[n].exact_side < 0;
        }
        rep.classification = all_above   ? Trichotomy::ratio_above_threshold
                             : all_below ? Trichotomy::ratio_below_threshold
                                         : Trichotomy::inconclusive;
    }

    if (!all_perturbations_positive(traj)) {
        rep.notes.push_back("growth case left undetermined: perturbations not all positive");
    } else if (N >= 4) {
        bool new_max_in_tail = false;
        for (std::size_t n = tail_start; n < N; ++n)
            if (rep.rows[n].max_term > rep.rows[n - 1].max_term) new_max_in_tail = true;
        if (new_max_in_tail) {
            rep.growth_case = GrowthCase::case1;
        } else {
            ExactRational head_min = rep.rows[0].growth;
            for (std::size_t n = 1; n < tail_start; ++n) head_min = std::min(head_min, rep.rows[n].growth);
            ExactRational tail_min = rep.rows[tail_start].growth;
            for (std::size_t n = tail_start; n < N; ++n) tail_min = std::min(tail_min, rep.rows[n].growth);
            rep.growth_case = tail_min < head_min ? GrowthCase::case2 : GrowthCase::case3;
        }
    }
    return rep;
}

// Iterates until the first exact repeat of (S_n, r_n) or max_steps.
inline std::pair<AsymptoticReport, BranchTrajectory> cycle_detect_with_trajectory(
    const BranchParams& params, const ExactRational& s0, const PerturbationSpec& spec,
    std::size_t max_steps) {
    if (s0 != params.xi) throw std::invalid_argument("cycle_detect: S0 must equal xi");
    if (!branch_condition(s0, params.q))
        throw std::invalid_argument("cycle_detect: S0 does not satisfy the branch condition");
    BranchTrajectory traj{params, {initial_step(s0)}};
    std::unordered_map<detail::StateKey, std::size_t, detail::StateKeyHash> seen;
    const auto* list = std::get_if<ExplicitPerturbation>(&spec.kind());
    for (std::size_t i = 0; i < max_steps; ++i) {
        BranchStep& cur = traj.steps.back();
        if (list && cur.n >= list->values.size()) break;
        cur.perturbation = spec.at(cur, params.q);
        BranchStep next = step_v2(params, cur, *cur.perturbation);
        const bool repeat = !seen.emplace(detail::StateKey{cur.state, *cur.perturbation}, cur.n).second;
        // the repeating record keeps its perturbation and successor so the
        // report sees the repeat
        traj.steps.push_back(std::move(next));
        if (repeat) break;
    }
    if (traj.size() < 2) throw std::invalid_argument("cycle_detect: no step could be taken");
    AsymptoticReport rep = asymptotic_report(traj);
    if (!rep.cycle_found)
        rep.notes.push_back("no cycle in " + std::to_string(max_steps));
    const auto det = determinism_check(traj);
    rep.notes.push_back("determinism pairs tested " + std::to_string(det.tested_count) +
                        ", violations " + std::to_string(det.violation_count));
    return {std::move(rep), std::move(traj)};
}

inline AsymptoticReport cycle_detect(const BranchParams& params, const ExactRational& s0,
                                     const PerturbationSpec& spec, std::size_t max_steps) {
    return cycle_detect_with_trajectory(params, s0, spec, max_steps).first;
}

// ---------------------------------------------------------------------------
// Replay

struct ReplayResult {
    bool reproduced = false;  // relation fails again with the recorded sides
    ExactRational lhs;
    ExactRational rhs;
    std::string message;
};

namespace detail {

inline BranchTrajectory rebuild(const Counterexample& c) {
    const auto params = validate_params(c.get_long("p"), c.get_long("q"), c.get("xi"), true);
    return iterate_v2(params, params.xi, PerturbationSpec::explicit_values(c.perturbations),
                      c.perturbations.size());
}

inline ReplayResult finish(const Counterexample& c, bool holds, ExactRational lhs, ExactRational rhs) {
    ReplayResult r;
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    r.reproduced = !holds && r.lhs == c.lhs && r.rhs == c.rhs;
    r.message = r.reproduced ? "violation reproduced"
                : holds      ? "relation holds on replay"
                             : "relation fails but sides differ from the certificate";
    return r;
}

}  // namespace detail

// Replays certificates for the claims checked in this header. Returns
// nullopt for claim ids it does not own.
inline std::optional<ReplayResult> replay_lemma(const Counterexample& c) {
    const std::string& id = c.claim_id;
    if (id == "Lemma2.1") {
        const long p = c.get_long("p"), q = c.get_long("q"), k = c.get_long("k");
        const ExactRational& s = c.get("S");
        const ExactRational& r = c.get("r");
        if (!branch_condition(s, q) || !is_admissible(s, r))
            return ReplayResult{false, {}, {}, "witness outside the claim's hypothesis"};
        const ExactRational l(floor_scale(ExactRational(p) * (s + r), q, 1 + k));
        const ExactRational rr(floor_scale(ExactRational(p) * s, q, 1 + k));
        return detail::finish(c, l == rr, l, rr);
    }
    if (id == "Corollary2.1") {
        const long p = c.get_long("p"), q = c.get_long("q"), k = c.get_long("k");
        const ExactRational& d = c.get("Delta");
        const ExactRational& r = c.get("r");
        if (r.sign() <= 0) return ReplayResult{false, {}, {}, "perturbation is not positive"};
        if (k == 0) {
            const ExactRational l((d + r).floor()), rr(d.floor());
            return detail::finish(c, l == rr, l, rr);
        }
        const ExactRational l(floor_scale(ExactRational(p) * (d + r), q, 1 + k));
        const ExactRational rr(floor_scale(ExactRational(p) * d, q, 1 + k));
        return detail::finish(c, l == rr, l, rr);
    }
    if (id == "Lemma2.2") {
        const ExactRational &a = c.get("A"), &b = c.get("B"), &b2 = c.get("B'");
        const bool all = c.get("all_scales") == 1;
        if (!(b < b2) || a.sign() < 0 || b.sign() < 0)
            return ReplayResult{false, {}, {}, "witness outside the claim's hypothesis"};
        bool hyp = (a + b).floor() == (a + b2).floor();
        for (long k = 1; all && hyp; ++k) {
            const BigInt x = floor_scale(a + b, 2, k), y = floor_scale(a + b2, 2, k);
            if (x != y) hyp = false;
            if (x == 0 && y == 0) break;
        }
        if (!hyp) return ReplayResult{false, {}, {}, "hypothesis does not hold for the witness"};
        const ExactRational l(b.floor()), rr(b2.floor());
        return detail::finish(c, l == rr, l, rr);
    }
    if (id == "Theorem2.1" || id == "Theorem2.1.base" || id == "Lemma2.3" ||
        id == "Corollary2.2a" || id == "Corollary2.2b" || id == "Corollary2.2c") {
        const auto traj = detail::rebuild(c);
        if (!all_perturbations_positive(traj))
            return ReplayResult{false, {}, {}, "perturbation sequence is not positive"};
        const auto d = derived_all(traj);
        ExactRational l, rr;
        const bool holds = detail::check_domination_at(
            traj, d, id, static_cast<std::size_t>(c.get_long("n")), c.get_long("k"),
            c.get_long("side"), l, rr);
        return detail::finish(c, holds, l, rr);
    }
    if (id == "Definition1.4") {
        const auto traj = detail::rebuild(c);
        const auto m = static_cast<std::size_t>(c.get_long("m"));
        const auto n = static_cast<std::size_t>(c.get_long("n"));
        if (traj.steps.at(m).state.floor() != traj.steps.at(n).state.floor())
            return ReplayResult{false, {}, {}, "integer parts differ: hypothesis fails"};
        if (c.get_long("part") == 0) {
            const auto& l = traj.steps.at(n + 1).state;
            const auto& rr = traj.steps.at(m + 1).state;
            return detail::finish(c, l == rr, l, rr);
        }
        const auto& l = *traj.steps.at(n + 1).perturbation;
        const auto& rr = *traj.steps.at(m + 1).perturbation;
        return detail::finish(c, l == rr, l, rr);
    }
    if (id == "Lemma3.3") {
        const auto traj = detail::rebuild(c);
        ExactRational mn = traj.steps[0].state;
        for (const auto& s : traj.steps) mn = std::min(mn, s.state);
        const ExactRational bound(traj.params.q * traj.params.q);
        return detail::finish(c, mn <= bound, mn, bound);
    }
    return std::nullopt;
}

}  // namespace branchlab
