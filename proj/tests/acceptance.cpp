// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Runs under ctest.

#include "support.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace branchlab;
namespace fs = std::filesystem;

namespace {

ExactRational R(long a, long b = 1) { return ExactRational(a, b); }

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;

    void fail(const std::string& why) {
        pass = false;
        if (lines.size() < 12) lines.push_back(why);
    }
    void note(const std::string& s) { lines.push_back(s); }
};

template <class T>
std::string str(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

BranchTrajectory embedded(unsigned long w0) { return embed(trajectory(w0)).branch; }

// A violated report is acceptable only with a certificate that replays.
void require_sound(Outcome& o, const ClaimReport& r, const std::string& where) {
    if (r.verdict == Verdict::precondition_failed) {
        o.fail(r.claim_id + " precondition failed at " + where);
        return;
    }
    if (r.verdict != Verdict::violated) return;
    if (!r.certificate) {
        o.fail(r.claim_id + " violated without certificate at " + where);
        return;
    }
    const auto rr = replay(*r.certificate);
    if (!rr.reproduced) o.fail(r.claim_id + " certificate does not replay at " + where + ": " + rr.message);
}

// Tallies refutations per claim id with the first instance seen.
struct Refutations {
    std::map<std::string, std::pair<std::size_t, std::string>> by_claim;
    void add(const ClaimReport& r, const std::string& where) {
        if (r.verdict != Verdict::violated) return;
        auto& e = by_claim[r.claim_id];
        if (e.first++ == 0) e.second = where;
    }
    void report(Outcome& o) const {
        for (const auto& [id, e] : by_claim)
            o.note(id + " refuted on " + std::to_string(e.first) + " instance(s), first at " + e.second +
                   " (certificate replayed)");
    }
};

// ---------------------------------------------------------------------------

Outcome closed_form_identity() {
    Outcome o;
    gen::Rng rng(20240601);
    std::set<std::pair<long, long>> used;
    for (int i = 0; i < 100; ++i) {
        const auto t = gen::random_trajectory(rng, 300, 16, i % 3 == 0);
        used.insert({t.params.p, t.params.q});
        const long p = t.params.p, q = t.params.q;
        // closed_form recomputes the sum per index; the one-pass form covers
        // every step and the per-index form a sample
        const auto all = closed_form_all(t);
        const std::set<std::size_t> sampled{0, t.size() / 2, t.size() - 1};
        ExactRational sigma = 0;
        for (std::size_t n = 0; n < t.size(); ++n) {
            const auto& s = t[n];
            const auto en = s.cumulative_shift;
            const ExactRational scale_n(oracle::pow_z(p, n), oracle::pow_z(q, n + en));
            const ExactRational by_oracle = scale_n * (t.params.xi + sigma);
            if (all[n] != s.state || by_oracle != s.state || (sampled.count(n) && closed_form(t, n) != s.state)) {
                o.fail("block " + str(p) + "/" + str(q) + " xi=" + str(t.params.xi) + " n=" + str(n));
                break;
            }
            if (s.perturbation)
                sigma += *s.perturbation * ExactRational(oracle::pow_z(q, n + en), oracle::pow_z(p, n));
        }
        if (t.size() != 301) o.fail("trajectory length " + str(t.size()));
    }
    o.note(std::to_string(used.size()) + " distinct (p,q) blocks, 100 trajectories of 300 steps");
    return o;
}

Outcome syracuse_anchor() {
    Outcome o;
    const auto t = trajectory(7ul);
    const std::vector<unsigned long> W{7, 11, 17, 13, 5, 1};
    const std::vector<unsigned long> H{0, 0, 1, 2, 3};
    if (t.size() != W.size()) o.fail("trajectory(7) length " + str(t.size()));
    for (std::size_t n = 0; n < std::min(t.size(), W.size()); ++n) {
        if (t[n].w != W[n]) o.fail("W_" + str(n) + " = " + str(t[n].w));
        if (n < H.size() && (!t[n].h || *t[n].h != H[n])) o.fail("h_" + str(n));
    }
    const auto e = embed(t);
    if (e.consistency.verdict != Verdict::pass) o.fail("embedding consistency");
    const std::vector<ExactRational> S{R(14), R(22), R(17), R(13, 2), R(5, 4), R(1)};
    for (std::size_t n = 0; n < S.size() && n < e.branch.size(); ++n) {
        if (e.branch[n].state != S[n]) o.fail("S_" + str(n) + " = " + str(e.branch[n].state));
        // valuation-derived g_n against h_n
        if (n < H.size() && e.branch[n].shift != H[n]) o.fail("g_" + str(n) + " = " + str(e.branch[n].shift));
    }
    if (e.branch[4].weighted_sum != R(146, 81)) o.fail("Sigma_4 = " + str(e.branch[4].weighted_sum));
    if (closed_form(e.branch, 4) != R(5, 4)) o.fail("closed_form(4) = " + str(closed_form(e.branch, 4)));
    return o;
}

Outcome conjecture_scan() {
    Outcome o;
    ScanOptions opt;
    opt.cap = 1000000;
    opt.workers = default_workers();
    const auto s = scan(BigInt(1), BigInt(99999), opt);
    if (s.seeds.size() != 50000) o.fail("seed count " + str(s.seeds.size()));
    if (!s.failures.empty()) o.fail(str(s.failures.size()) + " seeds unresolved, first " + str(s.failures[0]));
    for (const auto& x : s.seeds) {
        if (x.min_state > R(4)) o.fail("seed " + str(x.seed) + " min S = " + str(x.min_state));
        if (x.min_w > 3) o.fail("seed " + str(x.seed) + " min W = " + str(x.min_w));
    }
    o.note("longest: W0=" + str(s.max_steps_seed) + " with " + str(s.max_steps) + " odd steps; peak W=" +
           str(s.max_w) + " at W0=" + str(s.max_w_seed));
    return o;
}

Outcome structure_identities() {
    Outcome o;
    std::size_t steps = 0, frac_bad = 0, class_bad = 0, succ_bad = 0, adm_bad = 0, by_case_bad = 0;
    std::string first_succ;
    for (unsigned long w = 1; w <= 9999; w += 2) {
        const auto t = trajectory(w);
        for (std::size_t n = 0; n + 1 < t.size(); ++n) {
            const auto c = structure_check(t, n);
            ++steps;
            const bool cls = c.kind != StructureCase::unclassified && (c.kind == StructureCase::a) == (c.h % 2 == 1);
            if (!cls) ++class_bad;
            if (!c.frac) ++frac_bad;
            if (!c.admissible) ++adm_bad;
            if (!c.successor || !*c.successor) {
                if (succ_bad++ == 0)
                    first_succ = "W0=" + str(w) + " n=" + str(n) + ": 2W_{n+1} = " + str(c.successor_lhs) +
                                 ", (3 floor(S_n)+1)/2 = " + str(c.successor_rhs);
            }
            if (!c.successor_by_case || !*c.successor_by_case) ++by_case_bad;
        }
    }
    o.note(str(steps) + " steps checked");
    if (class_bad) o.fail(str(class_bad) + " case classification failures");
    if (frac_bad) o.fail(str(frac_bad) + " fractional-part failures");
    if (adm_bad) o.fail(str(adm_bad) + " admissibility failures");
    if (succ_bad) {
        o.fail(str(succ_bad) + " successor-identity failures, first " + first_succ);
        o.note("analysis: for h even, 3 floor(S_n) = 4W_{n+1} - 2, so 2W_{n+1} = (3 floor(S_n) + 2)/2; "
               "the +1 form holds only for h odd");
        o.note("the case-split successor identity fails at " + str(by_case_bad) + " steps");
    }
    return o;
}

Outcome carry_identities() {
    Outcome o;
    gen::Rng rng(4242);
    const auto& blocks = gen::blocks();
    std::set<std::pair<long, long>> used;
    std::size_t checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto [p, q] = blocks[static_cast<std::size_t>(i) % blocks.size()];
        used.insert({p, q});
        const CarryParams cp{p, q, p / q, p % q};
        const ExactRational x = rng.nonneg_rational(1000000, 1000);
        const long j = rng.range(-12, 12);
        const auto row = transition_report(x, cp, j, j);
        const int c = carry_at(x, cp, j);
        ++checked;
        if (!row.ok())
            o.fail("x=" + str(x) + " p/q=" + str(p) + "/" + str(q) + " j=" + str(j) + ": " +
                   row.failures.front().identity);
        if (c != oracle::carry(x, p, q, j)) o.fail("carry oracle mismatch x=" + str(x) + " j=" + str(j));
    }
    for (auto b : {std::pair<long, long>{3, 2}, {5, 3}, {7, 4}})
        if (!used.count(b)) o.fail("required block missing");
    o.note(str(checked) + " instances over " + str(used.size()) + " blocks");
    return o;
}

Outcome probe_suite() {
    Outcome o;
    Refutations ref;
    std::size_t states = 0;
    for (unsigned long w = 1; w <= 999; w += 2) {
        const auto t = embedded(w);
        const auto d = derived_all(t);
        for (std::size_t n = 0; n < t.size(); ++n) {
            ClaimReport transfer;
            const auto rep = independence_probe(t.params, t[n], {6, 256}, &d[n], &transfer);
            ++states;
            const std::string where = "W0=" + str(w) + " n=" + str(n);
            require_sound(o, rep, where);
            ref.add(rep, where);
            if (!transfer.claim_id.empty() && transfer.verdict == Verdict::violated) {
                require_sound(o, transfer, where);
                ref.add(transfer, where);
            }
        }
    }
    o.note(str(states) + " states probed");
    ref.report(o);
    return o;
}

Outcome domination_suite() {
    Outcome o;
    Refutations ref;
    std::size_t traj = 0;
    for (unsigned long w = 1; w <= 999; w += 2) {
        const auto t = embedded(w);
        // W0 = 1 takes no step before reaching 1, so no n = 1 exists
        if (t.size() < 2) {
            o.note("W0=" + str(w) + " skipped: no step before W = 1");
            continue;
        }
        const auto rep = domination_check(t, 6);
        ++traj;
        const std::string where = "W0=" + str(w);
        if (rep.base.verdict != Verdict::pass) o.fail("base case Delta_1 = Omega_1 fails at " + where);
        for (const auto* r : rep.all()) {
            require_sound(o, *r, where);
            ref.add(*r, where);
        }
    }
    o.note(str(traj) + " trajectories");
    ref.report(o);
    return o;
}

// Naive floor-addition enumeration over ExactRational, values by set order.
struct Naive {
    std::uint64_t tested = 0, hypothesis = 0, violations = 0;
    std::optional<std::array<ExactRational, 3>> first;
};

Naive naive_floor_addition(long max_den, long max_val, bool all_scales) {
    std::set<ExactRational> values;
    for (long d = 1; d <= max_den; ++d)
        for (long n = 0; n <= max_val * d; ++n) values.insert(ExactRational(n, d));
    const std::vector<ExactRational> by_value(values.begin(), values.end());
    std::vector<ExactRational> as = by_value;
    std::stable_sort(as.begin(), as.end(),
                     [](const auto& x, const auto& y) { return x.denominator() < y.denominator(); });
    auto fl = [](const ExactRational& x, long k) {
        return oracle::floor_div(x.numerator(), x.denominator() * oracle::pow_z(2, static_cast<unsigned long>(k)));
    };
    const long kmax = all_scales ? 2 + 2 * max_val : 0;
    Naive r;
    for (const auto& A : as)
        for (std::size_t i = 0; i < by_value.size(); ++i)
            for (std::size_t j = i + 1; j < by_value.size(); ++j) {
                ++r.tested;
                bool hyp = true;
                for (long k = 0; k <= kmax && hyp; ++k) hyp = fl(A + by_value[i], k) == fl(A + by_value[j], k);
                if (!hyp) continue;
                ++r.hypothesis;
                if (by_value[i].floor() != by_value[j].floor()) {
                    ++r.violations;
                    if (!r.first) r.first = std::array<ExactRational, 3>{A, by_value[i], by_value[j]};
                }
            }
    return r;
}

std::uint64_t hypothesis_count(const ClaimReport& r) {
    const std::string tag = "triples satisfying the hypothesis: ";
    for (const auto& n : r.notes)
        if (n.rfind(tag, 0) == 0) return std::stoull(n.substr(tag.size()));
    return ~0ull;
}

Outcome floor_addition() {
    Outcome o;
    for (auto mode : {FloorInterpretation::integer_part, FloorInterpretation::all_scales}) {
        const bool all = mode == FloorInterpretation::all_scales;
        const auto big = floor_addition_search(12, 4, mode);
        require_sound(o, big, std::string("max_den=12 ") + to_string(mode));
        o.note(std::string(to_string(mode)) + ": " + to_string(big.verdict) + ", " + str(big.violation_count) +
               " of " + str(hypothesis_count(big)) + " hypothesis triples violate" +
               (big.certificate ? ", first A=" + str(big.certificate->get("A")) + " B=" +
                                      str(big.certificate->get("B")) + " B'=" + str(big.certificate->get("B'"))
                                : std::string()));

        const auto small = floor_addition_search(5, 4, mode);
        const auto naive = naive_floor_addition(5, 4, all);
        if (small.tested_count != naive.tested || hypothesis_count(small) != naive.hypothesis ||
            small.violation_count != naive.violations)
            o.fail(std::string("naive oracle disagrees under ") + to_string(mode));
        if ((small.verdict == Verdict::violated) != (naive.violations > 0))
            o.fail(std::string("verdict disagrees with naive oracle under ") + to_string(mode));
        if (naive.first && small.certificate &&
            (small.certificate->get("A") != (*naive.first)[0] || small.certificate->get("B") != (*naive.first)[1] ||
             small.certificate->get("B'") != (*naive.first)[2]))
            o.fail(std::string("first counterexample differs from naive oracle under ") + to_string(mode));
    }
    Counterexample cand;
    cand.claim_id = "Lemma2.2";
    cand.witness = {{"A", R(1, 5)}, {"B", R(9, 10)}, {"B'", R(1)}, {"all_scales", R(0)}};
    cand.lhs = R(0);
    cand.rhs = R(1);
    const auto rr = replay(cand);
    if (!rr.reproduced) o.fail("candidate A=1/5 B=9/10 B'=1 does not replay: " + rr.message);
    else o.note("candidate A=1/5 B=9/10 B'=1 replays under integer_part");
    return o;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome ca_fidelity() {
    Outcome o;
    for (unsigned long w : {7ul, 27ul}) {
        const auto t = trajectory(w);
        std::vector<CaGrid> grids{build_syracuse(BigInt(w), t.size()),
                                  build_rational(ExactRational(static_cast<long>(2 * w)), t.size())};
        for (const auto& g : grids) {
            const std::string tag = std::string(to_string(g.mode)) + " W0=" + str(w);
            for (std::size_t n = 0; n < g.rows.size(); ++n) {
                const auto& row = g.rows[n];
                const auto d = digits_window(g.values[n], 2, row.offset, row.top());
                for (long j = row.offset; j <= row.top(); ++j)
                    if (row.bit(j) != d.at(j) || d.at(j) != oracle::digit(g.values[n], 2, j)) {
                        o.fail(tag + " row " + str(n) + " digit " + str(j));
                        break;
                    }
            }
            if (const auto v = transition_violations(g)) o.fail(tag + ": " + str(v) + " transition violations");
            const auto back = gray_inverse(gray(g));
            for (std::size_t n = 0; n < g.rows.size(); ++n)
                if (back.rows[n].cells != g.rows[n].cells) o.fail(tag + " gray inverse row " + str(n));
        }
    }
#ifdef BRANCHLAB_BIN
    const fs::path dir = fs::temp_directory_path() / "branchlab_acceptance_ca";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<std::string> outs;
    for (int i = 0; i < 4; ++i) {
        const std::string workers = i % 2 ? "4" : "1";
        const fs::path f = dir / ("run" + std::to_string(i) + ".pbm");
        const std::string cmd = std::string("'") + BRANCHLAB_BIN + "' ca render --w0 27 --rows 42 --gray --format pbm" +
                                " --workers " + workers + " --out '" + f.string() + "' > /dev/null";
        if (std::system(cmd.c_str()) != 0) o.fail("ca render exited nonzero");
        outs.push_back(read_file(f));
    }
    for (const auto& s : outs)
        if (s != outs[0] || s.empty()) o.fail("PBM differs across runs or worker counts");
    fs::remove_all(dir);
#endif
    std::ostringstream a, b;
    render(build_syracuse(BigInt(27), 42), RenderFormat::pbm, a);
    render(build_syracuse(BigInt(27), 42), RenderFormat::pbm, b);
    if (a.str() != b.str()) o.fail("in-process PBM differs across runs");
    return o;
}

Outcome trichotomy() {
    Outcome o;
    std::vector<BranchTrajectory> trajs;
    for (unsigned long w = 1; w <= 999; w += 2) trajs.push_back(embed(trajectory(w, kDefaultCap, 4)).branch);
    gen::Rng rng(77);
    for (int i = 0; i < 50; ++i) trajs.push_back(gen::random_trajectory(rng, 200));
    std::size_t rows = 0, inside = 0;
    for (const auto& t : trajs) {
        const auto rep = asymptotic_report(t);
        const long p = t.params.p, q = t.params.q;
        if (std::abs(rep.threshold - log_threshold(p, q)) > 0) o.fail("threshold mismatch");
        for (const auto& r : rep.rows) {
            ++rows;
            const BigInt lhs = oracle::pow_z(q, r.n + r.e), rhs = oracle::pow_z(p, r.n);
            const int exact = lhs > rhs ? 1 : lhs < rhs ? -1 : 0;
            if (r.exact_side != exact) o.fail("exact side wrong at n=" + str(r.n));
            if (r.n > 0) {
                const double diff = r.approx_ratio - rep.threshold;
                const int approx = diff > rep.threshold_precision ? 1 : diff < -rep.threshold_precision ? -1 : 0;
                if (approx == 0) ++inside;
                if (r.approx_side != approx) o.fail("approx side misreported at n=" + str(r.n));
                if (approx != 0 && approx != exact) o.fail("approximate log contradicts exact at n=" + str(r.n));
            }
        }
        if (rep.disagreements != 0) o.fail("report counts " + str(rep.disagreements) + " disagreements");
    }
    o.note(str(trajs.size()) + " trajectories, " + str(rows) + " rows, " + str(inside) +
           " within the display precision");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"closed-form identity", closed_form_identity},
        {"syracuse hand anchor", syracuse_anchor},
        {"odd seeds to 99999 reach 1", conjecture_scan},
        {"structure identities to 9999", structure_identities},
        {"carry identities", carry_identities},
        {"independence probe suite", probe_suite},
        {"domination suite", domination_suite},
        {"floor-addition adjudication", floor_addition},
        {"CA fidelity", ca_fidelity},
        {"trichotomy exactness", trichotomy},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1fs", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " ("
                  << buf << ")\n";
        for (const auto& l : o.lines) std::cout << "    " << l << "\n";
        std::cout.flush();
        if (!o.pass) ++failed;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " criteria passed\n";
    return failed ? 1 : 0;
}
