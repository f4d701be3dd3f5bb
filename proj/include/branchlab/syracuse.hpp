#pragma once

// Odd-only Syracuse iteration W -> (3W + 1) / 2^{1+h}, its embedding as a
// branch trajectory with p = 3, q = 2 and c = 2/3, the binary structure of
// each embedded state, and range scans.

#include "branchlab/branch.hpp"
#include "branchlab/lemmalab.hpp"
#include "branchlab/numkernel.hpp"
#include "branchlab/parallel.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace branchlab {

inline BigInt collatz_step(const BigInt& t) {
    if (t <= 0) throw std::invalid_argument("collatz_step: t must be >= 1, got " + t.get_str());
    if (mpz_odd_p(t.get_mpz_t())) return (3 * t + 1) / 2;
    return t / 2;
}

struct OddStep {
    BigInt next;
    unsigned long h = 0;
};

inline OddStep odd_step(const BigInt& w) {
    if (w <= 0 || mpz_even_p(w.get_mpz_t()))
        throw std::invalid_argument("odd_step: w must be an odd positive integer, got " + w.get_str());
    BigInt u = (3 * w + 1) / 2;
    OddStep out;
    out.h = mpz_scan1(u.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(out.next.get_mpz_t(), u.get_mpz_t(), out.h);
    return out;
}

struct SyracuseStep {
    std::size_t n = 0;
    BigInt w;
    std::optional<unsigned long> h;  // h_{n+1}, absent on the last record
    std::uint64_t e_prime = 0;       // h_1 + ... + h_n
};

struct SyracuseTrajectory {
    BigInt w0;
    std::vector<SyracuseStep> steps;
    std::size_t cap = 0;
    bool resolved = false;  // reached W = 1 within the cap

    std::size_t size() const { return steps.size(); }
    const SyracuseStep& operator[](std::size_t i) const { return steps.at(i); }
    // h_{n+1} for any record, computing it for the last one.
    unsigned long next_h(std::size_t n) const {
        const auto& s = steps.at(n);
        return s.h ? *s.h : odd_step(s.w).h;
    }
};

inline constexpr std::size_t kDefaultCap = 1000000;

// Iterates until W = 1 or `cap` steps. `extra_after_one` keeps going through
// the 1 -> 1 fixed point for cycle studies. The closed form
//   W_n * 2^{n+e'_n} = 3^n W_0 + K_n,  K_{n+1} = 3 K_n + 2^{n+e'_n}
// is checked at every record.
inline SyracuseTrajectory trajectory(const BigInt& w0, std::size_t cap = kDefaultCap,
                                     std::size_t extra_after_one = 0) {
    if (w0 <= 0 || mpz_even_p(w0.get_mpz_t()))
        throw std::invalid_argument("trajectory: seed must be an odd positive integer, got " + w0.get_str());
    if (cap == 0) throw std::invalid_argument("trajectory: cap must be >= 1");
    SyracuseTrajectory t;
    t.w0 = w0;
    t.cap = cap;
    t.steps.push_back({0, w0, std::nullopt, 0});
    BigInt pow3 = 1, k = 0, lhs, rhs, p2;
    std::size_t extra = 0;
    for (std::size_t i = 0;; ++i) {
        SyracuseStep& cur = t.steps.back();
        const std::uint64_t exp = cur.n + cur.e_prime;
        mpz_mul_2exp(lhs.get_mpz_t(), cur.w.get_mpz_t(), exp);
        rhs = pow3 * w0 + k;
        if (lhs != rhs)
            throw InternalError("closed form mismatch for W0 = " + w0.get_str() + " at n = " +
                                std::to_string(cur.n));
        if (cur.w == 1) {
            t.resolved = true;
            if (extra >= extra_after_one) break;
            ++extra;
        }
        if (i >= cap) break;
        const OddStep st = odd_step(cur.w);
        cur.h = st.h;
        mpz_set_ui(p2.get_mpz_t(), 1);
        mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), exp);
        k = 3 * k + p2;
        pow3 *= 3;
        SyracuseStep next{cur.n + 1, st.next, std::nullopt, cur.e_prime + st.h};
        t.steps.push_back(std::move(next));
    }
    return t;
}

inline SyracuseTrajectory trajectory(unsigned long w0, std::size_t cap = kDefaultCap,
                                     std::size_t extra_after_one = 0) {
    return trajectory(BigInt(w0), cap, extra_after_one);
}

// S_n = 2 W_n / 2^{h_{n+1}}
inline ExactRational embedded_state(const SyracuseTrajectory& t, std::size_t n) {
    return ExactRational(2 * t.steps.at(n).w, ipow(2, t.next_h(n)));
}

inline const ExactRational& syracuse_c() {
    static const ExactRational c(2, 3);
    return c;
}

// ---------------------------------------------------------------------------
// Embedding

struct Embedding {
    BranchTrajectory branch;  // built from the h values
    ClaimReport consistency;  // claim "Lemma4.2"
};

inline BranchParams embedding_params(const SyracuseTrajectory& t) {
    return validate_params(3, 2, embedded_state(t, 0), /*allow_unit_xi=*/true);
}

inline PerturbationSpec embedding_spec(const SyracuseTrajectory& t) {
    return PerturbationSpec::syracuse_type(syracuse_c(), t.next_h(0));
}

namespace detail {

inline Counterexample syracuse_certificate(std::string claim, std::string relation,
                                           const BigInt& w0, std::size_t n, long part,
                                           ExactRational lhs, ExactRational rhs) {
    Counterexample c;
    c.claim_id = std::move(claim);
    c.relation = std::move(relation);
    c.witness = {{"W0", ExactRational(w0)}, {"n", as_rational(n)}, {"part", ExactRational(part)}};
    c.lhs = std::move(lhs);
    c.rhs = std::move(rhs);
    return c;
}

// Branch records straight from the h values: g_0 = 0, g_n = h_{n+1},
// r_n = (2/3) / 2^{h_{n+1}}.
inline BranchTrajectory embedding_from_h(const SyracuseTrajectory& t, const BranchParams& params) {
    BranchTrajectory b{params, {}};
    b.steps.reserve(t.size());
    ExactRational sigma(0);
    std::uint64_t e = 0;
    BigInt ppow = 1, qpow = 1;  // 3^n, 2^{n+e_n}
    for (std::size_t n = 0; n < t.size(); ++n) {
        const unsigned long hn1 = t.next_h(n);
        BranchStep s;
        s.n = n;
        s.state = embedded_state(t, n);
        s.shift = n == 0 ? 0 : hn1;
        e += s.shift;
        s.cumulative_shift = e;
        if (n > 0) {
            ppow *= 3;
            qpow *= ipow(2, 1 + s.shift);
        }
        s.weighted_sum = sigma;
        if (n + 1 < t.size()) {
            s.perturbation = syracuse_c() / ExactRational(ipow(2, hn1));
            sigma += *s.perturbation * ExactRational(qpow, ppow);
        }
        b.steps.push_back(std::move(s));
    }
    return b;
}

}  // namespace detail

// Builds the embedded branch trajectory from the h values and cross-checks
// it against the valuation recurrence started from the same S_0.
inline Embedding embed(const SyracuseTrajectory& t) {
    if (t.size() == 0) throw std::invalid_argument("embed: empty trajectory");
    const BranchParams params = embedding_params(t);
    Embedding out{detail::embedding_from_h(t, params), {}};
    ClaimReport& rep = out.consistency;
    rep.claim_id = "Lemma4.2";
    rep.instance = "W0=" + t.w0.get_str() + " steps=" + std::to_string(t.size() - 1);
    const std::string rel_s = "S_n from h == S_n from the valuation recurrence";
    const std::string rel_g = "g_n from h == g_n from the valuation recurrence";
    const std::string rel_r = "0 <= {S_n} + r_n < 1";

    ++rep.tested_count;
    if (!branch_condition(params.xi, 2)) {
        rep.record(detail::syracuse_certificate(rep.claim_id, "S_0 satisfies the branch condition",
                                                t.w0, 0, 3, ExactRational(0), ExactRational(1)));
        return out;
    }
    const auto& hs = out.branch.steps;
    for (std::size_t n = 0; n + 1 < hs.size(); ++n) {
        ++rep.tested_count;
        if (!is_admissible(hs[n].state, *hs[n].perturbation))
            rep.record(detail::syracuse_certificate(rep.claim_id, rel_r, t.w0, n, 2,
                                                    hs[n].state.frac() + *hs[n].perturbation,
                                                    ExactRational(1)));
    }
    try {
        const auto v = iterate_v2(params, params.xi, embedding_spec(t), t.size() - 1);
        for (std::size_t n = 0; n < hs.size(); ++n) {
            rep.tested_count += 2;
            if (v.steps[n].state != hs[n].state)
                rep.record(detail::syracuse_certificate(rep.claim_id, rel_s, t.w0, n, 0,
                                                        hs[n].state, v.steps[n].state));
            if (v.steps[n].shift != hs[n].shift)
                rep.record(detail::syracuse_certificate(
                    rep.claim_id, rel_g, t.w0, n, 1, ExactRational(static_cast<long>(hs[n].shift)),
                    ExactRational(static_cast<long>(v.steps[n].shift))));
        }
    } catch (const StepError& e) {
        rep.notes.push_back(std::string("valuation recurrence stopped: ") + e.what());
        rep.record(detail::syracuse_certificate(rep.claim_id, rel_s, t.w0, e.index() + 1, 0,
                                                hs.at(e.index() + 1).state, ExactRational(0)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binary structure of one embedded state

enum class StructureCase { a, b, unclassified };

struct StructureCheck {
    std::size_t n = 0;
    unsigned long h = 0;
    StructureCase kind = StructureCase::unclassified;
    unsigned long a = 0;
    BigInt b;
    bool decomposition = false;   // 2W = 2(4^a-1)/3 + 4^a * (2b | b), with the residue of b mod 8
    bool digit_pattern = false;   // low bits alternate, then the case marker
    bool floor_derived = false;   // floor(S) == b
    bool floor_as_stated = false; // floor(S) == 2b in case a, b in case b
    bool frac = false;            // {S} == (1/3 | 2/3) - 2/(3 * 2^h)
    bool admissible = false;      // 0 <= {S} + r < 1
    std::optional<bool> successor;          // 2W_{n+1} == (3 floor(S) + 1)/2
    std::optional<bool> successor_by_case;  // 2W_{n+1} == (3 floor(S) + (1 | 2))/2
    ExactRational state;
    ExactRational frac_expected;
    ExactRational successor_lhs;  // 2 W_{n+1}
    ExactRational successor_rhs;  // (3 floor(S) + 1)/2
    ExactRational successor_case_rhs;
};

inline StructureCheck structure_check(const SyracuseTrajectory& t, std::size_t n) {
    if (n >= t.size()) throw std::out_of_range("structure_check: index beyond trajectory");
    StructureCheck c;
    c.n = n;
    c.h = t.next_h(n);
    const BigInt& w = t.steps[n].w;
    const BigInt two_w = 2 * w;
    c.state = embedded_state(t, n);
    const bool odd_h = (c.h % 2) == 1;
    c.a = odd_h ? (c.h - 1) / 2 : c.h / 2;
    const BigInt four_a = ipow(4, c.a);
    const BigInt head = 2 * (four_a - 1) / 3;  // (1010...10)_2 over 2a bits
    const BigInt rest = two_w - head;
    const BigInt unit = odd_h ? 2 * four_a : four_a;
    BigInt rem;
    mpz_fdiv_qr(c.b.get_mpz_t(), rem.get_mpz_t(), rest.get_mpz_t(), unit.get_mpz_t());
    BigInt r8;
    mpz_fdiv_r_ui(r8.get_mpz_t(), c.b.get_mpz_t(), 8);
    c.decomposition = rem == 0 && c.b > 0 && r8 == (odd_h ? 1 : 6);
    c.kind = c.decomposition ? (odd_h ? StructureCase::a : StructureCase::b) : StructureCase::unclassified;

    // second opinion straight from the bits of 2W
    bool pattern = true;
    for (unsigned long j = 0; j < 2 * c.a; ++j)
        pattern = pattern && mpz_tstbit(two_w.get_mpz_t(), j) == static_cast<int>(j % 2);
    const unsigned long base = 2 * c.a;
    if (odd_h) {
        const int marker[4] = {0, 1, 0, 0};
        for (int i = 0; i < 4; ++i) pattern = pattern && mpz_tstbit(two_w.get_mpz_t(), base + i) == marker[i];
    } else {
        const int marker[3] = {0, 1, 1};
        for (int i = 0; i < 3; ++i) pattern = pattern && mpz_tstbit(two_w.get_mpz_t(), base + i) == marker[i];
    }
    c.digit_pattern = pattern;

    const BigInt fl = c.state.floor();
    c.floor_derived = fl == c.b;
    c.floor_as_stated = fl == (odd_h ? 2 * c.b : c.b);
    c.frac_expected = ExactRational(odd_h ? 1 : 2, 3) - ExactRational(BigInt(2), 3 * ipow(2, c.h));
    c.frac = c.state.frac() == c.frac_expected;
    const ExactRational r = syracuse_c() / ExactRational(ipow(2, c.h));
    c.admissible = is_admissible(c.state, r);

    if (n + 1 < t.size()) {
        c.successor_lhs = ExactRational(2 * t.steps[n + 1].w);
        c.successor_rhs = ExactRational(3 * fl + 1, BigInt(2));
        c.successor_case_rhs = ExactRational(3 * fl + (odd_h ? 1 : 2), BigInt(2));
        c.successor = c.successor_lhs == c.successor_rhs;
        c.successor_by_case = c.successor_lhs == c.successor_case_rhs;
    }
    return c;
}

// Claim ids for the structure family, in report order.
inline const std::vector<std::string>& structure_claims() {
    static const std::vector<std::string> ids = {
        "Lemma4.2.classify", "Lemma4.2.floor-as-stated", "Lemma4.2.frac",
        "Lemma4.2.admissible", "Theorem4.1.successor", "Theorem4.1.successor-by-case"};
    return ids;
}

// Runs structure_check on every record (successor checks on non-terminal
// records) and folds the results into one report per claim.
inline std::vector<ClaimReport> structure_reports(const SyracuseTrajectory& t) {
    const auto& ids = structure_claims();
    std::vector<ClaimReport> reps(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        reps[i].claim_id = ids[i];
        reps[i].instance = "W0=" + t.w0.get_str() + " steps=" + std::to_string(t.size() - 1);
    }
    for (std::size_t n = 0; n < t.size(); ++n) {
        const auto c = structure_check(t, n);
        auto tally = [&](std::size_t i, bool ok, const char* rel, ExactRational l, ExactRational r) {
            ++reps[i].tested_count;
            if (!ok)
                reps[i].record(detail::syracuse_certificate(ids[i], rel, t.w0, n, 0, std::move(l), std::move(r)));
        };
        tally(0, c.decomposition && c.digit_pattern && c.floor_derived,
              "2W_n splits as alternating head plus case marker with floor(S_n) = b",
              ExactRational(c.b), ExactRational(c.state.floor()));
        tally(1, c.floor_as_stated, "floor(S_n) = 2b (odd h) or b (even h)",
              ExactRational(c.state.floor()), ExactRational(c.h % 2 ? 2 * c.b : c.b));
        tally(2, c.frac, "{S_n} = (1/3 | 2/3) - 2/(3*2^h)", c.state.frac(), c.frac_expected);
        tally(3, c.admissible, "0 <= {S_n} + r_n < 1",
              c.state.frac() + syracuse_c() / ExactRational(ipow(2, c.h)), ExactRational(1));
        if (c.successor) {
            tally(4, *c.successor, "2W_{n+1} = (3 floor(S_n) + 1)/2", c.successor_lhs, c.successor_rhs);
            tally(5, *c.successor_by_case, "2W_{n+1} = (3 floor(S_n) + (1 | 2))/2", c.successor_lhs,
                  c.successor_case_rhs);
        }
    }
    return reps;
}

// Replays certificates owned by this header.
inline std::optional<ReplayResult> replay_syracuse(const Counterexample& c) {
    const auto& ids = structure_claims();
    const auto it = std::find(ids.begin(), ids.end(), c.claim_id);
    if (it == ids.end() && c.claim_id != "Lemma4.2") return std::nullopt;
    const BigInt w0 = c.get("W0").numerator();
    const auto n = static_cast<std::size_t>(c.get_long("n"));
    const auto t = trajectory(w0, n + 2);
    if (c.claim_id == "Lemma4.2") {
        const long part = c.get_long("part");
        const BranchParams params = embedding_params(t);
        const auto hs = detail::embedding_from_h(t, params);
        if (part == 3) {
            const ExactRational l(branch_condition(params.xi, 2) ? 1 : 0);
            return detail::finish(c, l == 1, ExactRational(0), ExactRational(1));
        }
        if (n >= hs.size()) return ReplayResult{false, {}, {}, "index beyond rebuilt trajectory"};
        if (part == 2) {
            if (n + 1 >= hs.size()) return ReplayResult{false, {}, {}, "record has no perturbation"};
            const auto& st = hs.steps[n];
            return detail::finish(c, is_admissible(st.state, *st.perturbation),
                                  st.state.frac() + *st.perturbation, ExactRational(1));
        }
        BranchTrajectory v;
        try {
            v = iterate_v2(params, params.xi, embedding_spec(t), n);
        } catch (const StepError&) {
            return detail::finish(c, false, hs.steps[n].state, ExactRational(0));
        }
        if (part == 0) return detail::finish(c, hs.steps[n].state == v.steps[n].state, hs.steps[n].state, v.steps[n].state);
        return detail::finish(c, hs.steps[n].shift == v.steps[n].shift,
                              ExactRational(static_cast<long>(hs.steps[n].shift)),
                              ExactRational(static_cast<long>(v.steps[n].shift)));
    }
    const auto sc = structure_check(t, n);
    const std::size_t i = static_cast<std::size_t>(it - ids.begin());
    switch (i) {
        case 0:
            return detail::finish(c, sc.decomposition && sc.digit_pattern && sc.floor_derived,
                                  ExactRational(sc.b), ExactRational(sc.state.floor()));
        case 1:
            return detail::finish(c, sc.floor_as_stated, ExactRational(sc.state.floor()),
                                  ExactRational(sc.h % 2 ? 2 * sc.b : sc.b));
        case 2: return detail::finish(c, sc.frac, sc.state.frac(), sc.frac_expected);
        case 3:
            return detail::finish(c, sc.admissible,
                                  sc.state.frac() + syracuse_c() / ExactRational(ipow(2, sc.h)),
                                  ExactRational(1));
        case 4:
            if (!sc.successor) break;
            return detail::finish(c, *sc.successor, sc.successor_lhs, sc.successor_rhs);
        case 5:
            if (!sc.successor_by_case) break;
            return detail::finish(c, *sc.successor_by_case, sc.successor_lhs, sc.successor_case_rhs);
        default: break;
    }
    return ReplayResult{false, {}, {}, "record has no successor"};
}

// ---------------------------------------------------------------------------
// Range scans

struct SeedSummary {
    BigInt seed;
    bool resolved = false;
    std::size_t steps = 0;  // odd steps taken (steps to 1 when resolved)
    BigInt max_w;
    BigInt min_w;
    ExactRational min_state;  // min embedded S_n
    unsigned long max_h = 0;
};

struct ScanSummary {
    BigInt from;
    BigInt to;
    std::size_t cap = kDefaultCap;
    std::set<std::string> checks;
    std::vector<SeedSummary> seeds;  // ascending by seed
    std::size_t resolved = 0;
    std::vector<BigInt> failures;    // seeds that did not reach 1 within the cap
    std::size_t max_steps = 0;
    BigInt max_steps_seed;
    BigInt max_w;
    BigInt max_w_seed;
    unsigned long max_h = 0;
    ExactRational max_min_state;  // largest per-seed min embedded S
    BigInt max_min_w;             // largest per-seed min W
    std::vector<ClaimReport> claims;  // one per claim id, certificate from the smallest seed
};

// Check names accepted by scan().
inline const std::vector<std::string>& scan_check_names() {
    static const std::vector<std::string> names = {"embed",      "structure",   "independence",
                                                   "domination", "determinism", "min-bound"};
    return names;
}

struct ScanOptions {
    std::size_t cap = kDefaultCap;
    std::set<std::string> checks;
    unsigned workers = 1;
    long k_max = 6;
    std::uint32_t grid = 256;
};

namespace detail {

inline std::vector<ClaimReport> seed_checks(const SyracuseTrajectory& t, const ScanOptions& opt) {
    std::vector<ClaimReport> out;
    const auto has = [&](const char* n) { return opt.checks.count(n) != 0; };
    if (opt.checks.empty() || t.size() < 1) return out;
    const bool need_branch = has("embed") || has("independence") || has("domination") ||
                             has("determinism") || has("min-bound");
    std::optional<Embedding> e;
    if (need_branch) e = embed(t);
    if (has("embed")) out.push_back(e->consistency);
    if (has("structure"))
        for (auto& r : structure_reports(t)) out.push_back(std::move(r));
    if (has("independence")) {
        ClaimReport lemma;
        lemma.claim_id = "Lemma2.1";
        ClaimReport transfer;
        transfer.claim_id = "Corollary2.1";
        const auto d = derived_all(e->branch);
        for (std::size_t n = 0; n < e->branch.size(); ++n) {
            const auto r = independence_probe(e->branch.params, e->branch.steps[n],
                                              {opt.k_max, opt.grid}, &d[n], &transfer);
            merge_report(lemma, r);
            if (r.verdict == Verdict::precondition_failed) {
                lemma.verdict = Verdict::precondition_failed;
                lemma.notes.push_back("state n=" + std::to_string(n) + " fails the branch condition");
            }
        }
        lemma.instance = transfer.instance = "W0=" + t.w0.get_str();
        out.push_back(std::move(lemma));
        out.push_back(std::move(transfer));
    }
    if (has("domination") && e->branch.size() >= 2) {
        auto d = domination_check(e->branch, opt.k_max);
        for (auto* r : d.all()) {
            r->instance = "W0=" + t.w0.get_str();
            out.push_back(std::move(*r));
        }
    }
    if (has("determinism") && e->branch.size() >= 2) {
        auto r = determinism_check(e->branch);
        r.instance = "W0=" + t.w0.get_str();
        out.push_back(std::move(r));
    }
    if (has("min-bound")) {
        auto r = min_bound_check(e->branch);
        r.instance = "W0=" + t.w0.get_str();
        out.push_back(std::move(r));
    }
    return out;
}

inline SeedSummary summarize_seed(const SyracuseTrajectory& t) {
    SeedSummary s;
    s.seed = t.w0;
    s.resolved = t.resolved;
    s.steps = t.size() - 1;
    s.max_w = t.w0;
    s.min_w = t.w0;
    for (std::size_t n = 0; n < t.size(); ++n) {
        const auto& st = t.steps[n];
        if (st.w > s.max_w) s.max_w = st.w;
        if (st.w < s.min_w) s.min_w = st.w;
        if (st.h && *st.h > s.max_h) s.max_h = *st.h;
        const ExactRational state = embedded_state(t, n);
        if (n == 0 || state < s.min_state) s.min_state = state;
    }
    return s;
}

}  // namespace detail

inline ScanSummary scan(const BigInt& from, const BigInt& to, const ScanOptions& opt) {
    if (from > to) throw std::invalid_argument("scan: inverted range");
    if (from <= 0 || mpz_even_p(from.get_mpz_t()) || mpz_even_p(to.get_mpz_t()))
        throw std::invalid_argument("scan: range bounds must be odd positive integers");
    for (const auto& c : opt.checks)
        if (std::find(scan_check_names().begin(), scan_check_names().end(), c) == scan_check_names().end())
            throw std::invalid_argument("scan: unknown check '" + c + "'");
    const BigInt span = (to - from) / 2 + 1;
    if (!span.fits_ulong_p()) throw std::invalid_argument("scan: range too large");
    const std::size_t count = span.get_ui();

    ScanSummary out;
    out.from = from;
    out.to = to;
    out.cap = opt.cap;
    out.checks = opt.checks;
    out.seeds.resize(count);
    std::vector<std::vector<ClaimReport>> per_seed(count);
    parallel_for(count, opt.workers, [&](std::size_t i) {
        const BigInt seed = from + 2 * BigInt(static_cast<unsigned long>(i));
        const auto t = trajectory(seed, opt.cap);
        out.seeds[i] = detail::summarize_seed(t);
        per_seed[i] = detail::seed_checks(t, opt);
    });

    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& s = out.seeds[i];
        if (s.resolved) ++out.resolved;
        else out.failures.push_back(s.seed);
        if (i == 0 || s.steps > out.max_steps) {
            out.max_steps = s.steps;
            out.max_steps_seed = s.seed;
        }
        if (i == 0 || s.max_w > out.max_w) {
            out.max_w = s.max_w;
            out.max_w_seed = s.seed;
        }
        out.max_h = std::max(out.max_h, s.max_h);
        if (i == 0 || s.min_state > out.max_min_state) out.max_min_state = s.min_state;
        if (i == 0 || s.min_w > out.max_min_w) out.max_min_w = s.min_w;
        for (const auto& r : per_seed[i]) {
            auto [it, fresh] = slot.emplace(r.claim_id, out.claims.size());
            if (fresh) {
                out.claims.push_back(r);
                out.claims.back().instance = "seeds " + from.get_str() + ".." + to.get_str();
                out.claims.back().notes.clear();
            } else {
                auto& into = out.claims[it->second];
                merge_report(into, r);
                if (r.verdict == Verdict::precondition_failed) into.verdict = Verdict::precondition_failed;
            }
        }
    }
    return out;
}

}  // namespace branchlab
