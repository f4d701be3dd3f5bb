// branchlab command-line frontend.
//
// Exit codes: 0 success, 2 claim violation (certificates written), 1 usage or
// I/O error. Results go to files; stdout gets a one-line summary.

#include "branchlab/branchlab.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace branchlab;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Flags shared by every subcommand.
struct Common {
    std::string out = ".";
    std::string format;
    bool json = false;
    bool csv = false;
    unsigned workers = default_workers();
    unsigned long seed = 0;
};

// Where the trajectory under test comes from: a Syracuse seed (embedding) or
// explicit branch parameters.
struct Source {
    std::string w0;
    long p = 3;
    long q = 2;
    std::string xi = "14";
    std::string perturbation = "zero";
    std::size_t steps = 20;
    std::size_t cap = kDefaultCap;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "Output directory (or file for ca render)")->capture_default_str();
    sub->add_option("--format", c.format, "Output format: json | csv (ca render: text | pbm | svg)");
    sub->add_flag("--json", c.json, "Shorthand for --format json");
    sub->add_flag("--csv", c.csv, "Shorthand for --format csv");
    sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Random seed for sampled probe grids")->capture_default_str();
}

void add_source(CLI::App* sub, Source& s) {
    sub->add_option("--w0", s.w0, "Odd Syracuse seed; uses its branch embedding");
    sub->add_option("--p", s.p, "Numerator p")->capture_default_str();
    sub->add_option("--q", s.q, "Denominator q")->capture_default_str();
    sub->add_option("--xi", s.xi, "Initial value xi (a/b or integer)")->capture_default_str();
    sub->add_option("--perturbation", s.perturbation, "zero | syracuse:c[:g0] | explicit:r0,r1,.. | grid:N")
        ->capture_default_str();
    sub->add_option("--steps", s.steps, "Steps to iterate")->capture_default_str();
    sub->add_option("--cap", s.cap, "Syracuse step cap")->capture_default_str();
}

ExactRational rational_flag(const std::string& name, const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const std::exception& e) {
        throw UsageError("--" + name + ": " + e.what());
    }
}

BigInt seed_flag(const std::string& text) {
    const ExactRational v = rational_flag("w0", text);
    if (!v.is_integer() || v.sign() <= 0 || mpz_even_p(v.numerator().get_mpz_t()))
        throw UsageError("--w0: expected an odd positive integer, got " + text);
    return v.numerator();
}

std::string join(const std::vector<std::string>& v, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

// Every option of the subcommand except --workers, given or defaulted.
RunHeader echo_flags(const CLI::App* sub) {
    RunHeader h;
    for (const CLI::Option* o : sub->get_options()) {
        if (o->get_lnames().empty()) continue;
        const std::string name = o->get_lnames().front();
        if (name == "workers" || name == "help") continue;
        if (o->get_expected_min() == 0)
            h[name] = o->count() ? "true" : "false";
        else
            h[name] = o->count() ? join(o->results()) : o->get_default_str();
    }
    return h;
}

fs::path out_dir(const Common& c) {
    if (const char* env = std::getenv("BRANCHLAB_OUT"); env && *env) return env;
    return c.out;
}

std::string format_of(const Common& c, const std::string& fallback) {
    if (c.json && c.csv) throw UsageError("--json and --csv are exclusive");
    std::string f = c.json ? "json" : c.csv ? "csv" : c.format.empty() ? fallback : c.format;
    if (f != "json" && f != "csv") throw UsageError("--format must be json or csv, got " + f);
    return f;
}

void write_file(const fs::path& path, const std::string& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << body;
    f.close();
    if (!f) throw std::runtime_error("write to " + path.string() + " failed");
}

struct Ctx {
    const CLI::App* sub;
    std::string command;
    Common common;
    RunHeader flags;
    fs::path dir;
    std::string stem;  // file name stem, e.g. "lemma-domination"
};

Ctx make_ctx(const CLI::App* sub, const std::string& group, const Common& c) {
    Ctx x{sub, group + " " + sub->get_name(), c, echo_flags(sub), out_dir(c), group + "-" + sub->get_name()};
    return x;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json envelope(const Ctx& ctx, Json result) {
    Json j;
    j["header"] = header_json(ctx.command, ctx.flags);
    j["result"] = std::move(result);
    return j;
}

// Writes one *.cert.json per violated report; returns 2 if any were written.
int certificates(const Ctx& ctx, const std::vector<const ClaimReport*>& reps) {
    int code = 0;
    for (const auto* r : reps) {
        if (r->verdict != Verdict::violated || !r->certificate) continue;
        Json j;
        j["header"] = header_json(ctx.command, ctx.flags);
        j["certificate"] = to_json(*r->certificate);
        write_file(ctx.dir / (ctx.stem + "." + r->claim_id + ".cert.json"), dump(j));
        code = 2;
    }
    return code;
}

std::vector<const ClaimReport*> ptrs(const std::vector<ClaimReport>& v) {
    std::vector<const ClaimReport*> out;
    for (const auto& r : v) out.push_back(&r);
    return out;
}

void write_reports(const Ctx& ctx, const std::vector<ClaimReport>& reps, const std::string& fmt) {
    if (fmt == "json") {
        write_file(ctx.dir / (ctx.stem + ".json"), dump(envelope(ctx, to_json(reps))));
    } else {
        std::ostringstream os;
        write_csv(os, reps, ctx.flags);
        write_file(ctx.dir / (ctx.stem + ".csv"), os.str());
    }
}

std::string verdict_line(const std::vector<ClaimReport>& reps) {
    std::string s;
    for (const auto& r : reps) {
        if (!s.empty()) s += "; ";
        s += r.claim_id + " " + to_string(r.verdict) + " (" + std::to_string(r.violation_count) + "/" +
             std::to_string(r.tested_count) + ")";
    }
    return s;
}

BranchTrajectory source_trajectory(const Source& s) {
    if (!s.w0.empty()) {
        const auto t = trajectory(seed_flag(s.w0), s.cap);
        return embed(t).branch;
    }
    const ExactRational xi = rational_flag("xi", s.xi);
    const auto params = validate_params(s.p, s.q, xi);
    PerturbationSpec spec = PerturbationSpec::zero();
    try {
        spec = parse_perturbation(s.perturbation);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--perturbation: ") + e.what());
    }
    return iterate_v2(params, xi, spec, s.steps);
}

// ---------------------------------------------------------------------------

int cmd_branch_iterate(const Ctx& ctx, const Source& src) {
    const auto traj = source_trajectory(src);
    for (std::size_t n = 0; n < traj.size(); ++n)
        if (closed_form(traj, n) != traj[n].state)
            throw InternalError("closed form disagrees with the iterate at n = " + std::to_string(n));
    const std::string fmt = format_of(ctx.common, "json");
    if (fmt == "json") {
        write_file(ctx.dir / (ctx.stem + ".json"), dump(envelope(ctx, to_json(traj))));
    } else {
        std::ostringstream os;
        write_csv(os, traj, ctx.flags);
        write_file(ctx.dir / (ctx.stem + ".csv"), os.str());
    }
    std::cout << "branch iterate: " << traj.size() << " records, S_last = " << traj.back().state
              << ", closed form agrees\n";
    return 0;
}

int cmd_probe(const Ctx& ctx, const Source& src, long k_max, std::uint32_t grid) {
    const auto traj = source_trajectory(src);
    const auto d = derived_all(traj);
    ClaimReport probe, transfer;
    probe.claim_id = "Lemma2.1";
    transfer.claim_id = "Corollary2.1";
    probe.instance = transfer.instance = detail::describe(traj.params);
    const bool positive = all_perturbations_positive(traj);
    for (std::size_t n = 0; n < traj.size(); ++n) {
        ClaimReport t;
        const auto r = independence_probe(traj.params, traj[n], {k_max, grid}, positive ? &d[n] : nullptr,
                                          positive ? &t : nullptr);
        merge_report(probe, r);
        if (r.verdict == Verdict::precondition_failed) {
            probe.verdict = Verdict::precondition_failed;
            for (const auto& note : r.notes) probe.notes.push_back("n=" + std::to_string(n) + " " + note);
        }
        if (positive) merge_report(transfer, t);
    }
    std::vector<ClaimReport> reps{probe};
    if (positive) reps.push_back(transfer);
    write_reports(ctx, reps, format_of(ctx.common, "json"));
    std::cout << "branch probe-independence: " << verdict_line(reps) << "\n";
    return certificates(ctx, ptrs(reps));
}

int cmd_domination(const Ctx& ctx, const Source& src, long k_max) {
    const auto traj = source_trajectory(src);
    const auto rep = domination_check(traj, k_max);
    std::vector<ClaimReport> reps;
    for (const auto* r : rep.all()) reps.push_back(*r);
    write_reports(ctx, reps, format_of(ctx.common, "json"));
    std::cout << "lemma domination: " << verdict_line(reps) << "\n";
    return certificates(ctx, ptrs(reps));
}

int cmd_floor_add(const Ctx& ctx, long max_den, long max_val, const std::string& interp) {
    std::vector<ClaimReport> reps;
    if (interp == "integer_part" || interp == "both")
        reps.push_back(floor_addition_search(max_den, max_val, FloorInterpretation::integer_part));
    if (interp == "all_scales" || interp == "both")
        reps.push_back(floor_addition_search(max_den, max_val, FloorInterpretation::all_scales));
    if (reps.empty()) throw UsageError("--interpretation must be integer_part, all_scales or both");
    write_reports(ctx, reps, format_of(ctx.common, "json"));
    std::cout << "lemma floor-add-search: " << verdict_line(reps) << "\n";
    // both interpretations carry the same claim id; keep the files apart
    int code = 0;
    for (const auto& r : reps) {
        Ctx c = ctx;
        c.stem += r.instance.find("all_scales") != std::string::npos ? ".all_scales" : ".integer_part";
        code = std::max(code, certificates(c, {&r}));
    }
    return code;
}

int cmd_single(const Ctx& ctx, const ClaimReport& rep) {
    write_reports(ctx, {rep}, format_of(ctx.common, "json"));
    std::cout << ctx.command << ": " << verdict_line({rep}) << "\n";
    return certificates(ctx, {&rep});
}

int cmd_asymptotics(const Ctx& ctx, const Source& src, std::size_t extra) {
    AsymptoticReport rep;
    if (!src.w0.empty()) {
        const auto t = trajectory(seed_flag(src.w0), src.cap, extra);
        rep = asymptotic_report(embed(t).branch);
    } else {
        const ExactRational xi = rational_flag("xi", src.xi);
        const auto params = validate_params(src.p, src.q, xi);
        rep = cycle_detect(params, xi, parse_perturbation(src.perturbation), src.steps);
    }
    const std::string fmt = format_of(ctx.common, "json");
    if (fmt == "json") {
        write_file(ctx.dir / (ctx.stem + ".json"), dump(envelope(ctx, to_json(rep))));
    } else {
        std::ostringstream os;
        write_csv(os, rep, ctx.flags);
        write_file(ctx.dir / (ctx.stem + ".csv"), os.str());
    }
    std::cout << "lemma asymptotics: " << to_string(rep.classification) << ", growth " << to_string(rep.growth_case)
              << ", " << rep.rows.size() << " rows, " << rep.disagreements << " approximate/exact disagreements ("
              << rep.label << ")\n";
    return 0;
}

int cmd_replay(const std::string& path) {
    const auto cert = load_certificate(path);
    const auto r = replay(cert);
    std::cout << "lemma replay: " << cert.claim_id << " " << (r.reproduced ? "reproduced" : "not reproduced")
              << " (lhs " << r.lhs << ", rhs " << r.rhs << ") " << r.message << "\n";
    return r.reproduced ? 0 : 2;
}

int cmd_scan(const Ctx& ctx, const std::string& from, const std::string& to, std::size_t cap,
             const std::vector<std::string>& checks) {
    ScanOptions opt;
    opt.cap = cap;
    opt.workers = ctx.common.workers;
    opt.checks = {checks.begin(), checks.end()};
    const auto lo = rational_flag("from", from), hi = rational_flag("to", to);
    if (!lo.is_integer() || !hi.is_integer()) throw UsageError("--from/--to must be integers");
    if (lo > hi) throw UsageError("inverted range: --from " + from + " > --to " + to);
    // even bounds are narrowed to the odd seeds inside the range
    BigInt a = lo.numerator(), b = hi.numerator();
    if (a < 1) a = 1;
    if (mpz_even_p(a.get_mpz_t())) a += 1;
    if (mpz_even_p(b.get_mpz_t())) b -= 1;
    if (a > b) throw UsageError("range contains no odd seed");
    const auto s = scan(a, b, opt);
    const std::string fmt = format_of(ctx.common, "csv");
    if (fmt == "json") {
        write_file(ctx.dir / (ctx.stem + ".json"), dump(envelope(ctx, to_json(s))));
    } else {
        std::ostringstream os;
        write_csv(os, s, ctx.flags);
        write_file(ctx.dir / (ctx.stem + ".csv"), os.str());
        if (!s.claims.empty()) write_reports(Ctx{ctx.sub, ctx.command, ctx.common, ctx.flags, ctx.dir, ctx.stem + ".claims"},
                                             s.claims, "csv");
    }
    std::cout << "syracuse scan: " << s.resolved << "/" << s.seeds.size() << " seeds reach 1 within cap " << s.cap
              << "; longest " << s.max_steps << " steps (seed " << s.max_steps_seed << "); max min S "
              << s.max_min_state << ", max min W " << s.max_min_w;
    if (!s.claims.empty()) std::cout << "; " << verdict_line(s.claims);
    std::cout << "\n";
    int code = certificates(ctx, ptrs(s.claims));
    if (!s.failures.empty()) code = 2;
    return code;
}

int cmd_trace(const Ctx& ctx, const std::string& w0, std::size_t cap, std::size_t extra) {
    const auto t = trajectory(seed_flag(w0), cap, extra);
    const std::string fmt = format_of(ctx.common, "json");
    if (fmt == "json") {
        write_file(ctx.dir / (ctx.stem + ".json"), dump(envelope(ctx, to_json(t))));
    } else {
        std::ostringstream os;
        write_csv(os, t, ctx.flags);
        write_file(ctx.dir / (ctx.stem + ".csv"), os.str());
    }
    std::cout << "syracuse trace: W0 = " << t.w0 << ", " << t.size() - 1 << " odd steps, "
              << (t.resolved ? "reaches 1" : "cap reached") << "\n";
    return t.resolved ? 0 : 2;
}

int cmd_embed_check(const Ctx& ctx, const std::string& w0, std::size_t cap) {
    const auto t = trajectory(seed_flag(w0), cap);
    const auto e = embed(t);
    std::vector<ClaimReport> reps{e.consistency};
    for (auto& r : structure_reports(t)) reps.push_back(std::move(r));
    const std::string fmt = format_of(ctx.common, "json");
    if (fmt == "json") {
        Json checks = Json::array();
        for (std::size_t n = 0; n < t.size(); ++n) checks.push_back(to_json(structure_check(t, n)));
        Json res{{"trajectory", to_json(t)}, {"embedding", to_json(e.branch)}, {"structure", checks},
                 {"reports", to_json(reps)}};
        write_file(ctx.dir / (ctx.stem + ".json"), dump(envelope(ctx, res)));
    } else {
        write_reports(ctx, reps, "csv");
    }
    std::cout << "syracuse embed-check: " << verdict_line(reps) << "\n";
    return certificates(ctx, ptrs(reps));
}

struct CaFlags {
    std::string w0;
    std::string xi;
    std::string mode = "syracuse";
    std::size_t rows = 32;
    long width = 0;
    long frac_depth = 16;
    bool gray = false;
    bool overlay = false;
    bool carries = false;
};

int cmd_ca_render(const Ctx& ctx, const CaFlags& f) {
    const std::string fmt_name = ctx.common.format.empty() ? "text" : ctx.common.format;
    RenderFormat fmt;
    try {
        fmt = parse_render_format(fmt_name);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (f.rows == 0) throw UsageError("--rows must be >= 1");
    const std::string ext = fmt == RenderFormat::pbm ? ".pbm" : fmt == RenderFormat::svg ? ".svg" : ".txt";

    std::ostringstream os;
    RenderOptions ro;
    ro.carries = f.carries;
    std::string label;
    if (f.overlay) {
        if (f.w0.empty()) throw UsageError("--overlay needs --w0");
        const BigInt w0 = seed_flag(f.w0);
        const auto syr = build_syracuse(w0, f.rows, f.width, f.frac_depth);
        const auto ref = rational_reference(syr, w0);
        render(overlay(ref, syr), fmt, os, ro);
        label = "overlay W0=" + w0.get_str();
    } else {
        CaGrid g;
        if (f.mode == "syracuse") {
            if (f.w0.empty()) throw UsageError("syracuse mode needs --w0");
            g = build_syracuse(seed_flag(f.w0), f.rows, f.width, f.frac_depth);
            label = "syracuse W0=" + f.w0;
        } else if (f.mode == "rational_power") {
            const ExactRational xi = rational_flag("xi", f.xi.empty() ? (f.w0.empty() ? "14" : f.w0) : f.xi);
            g = build_rational(xi, f.rows, f.width, f.frac_depth);
            label = "rational_power xi=" + xi.to_string();
        } else {
            throw UsageError("--mode must be syracuse or rational_power");
        }
        if (f.gray) g = gray(g);
        render(g, fmt, os, ro);
    }
    // --out names a file when it has an extension, otherwise a directory
    fs::path target = ctx.common.out;
    if (target.has_extension()) {
        if (const char* env = std::getenv("BRANCHLAB_OUT"); env && *env) target = fs::path(env) / target.filename();
    } else {
        target = ctx.dir / (ctx.stem + ext);
    }
    write_file(target, os.str());
    std::cout << "ca render: " << label << ", " << f.rows << " rows" << (f.gray ? ", gray" : "") << " -> "
              << target.string() << " (" << os.str().size() << " bytes)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"branchlab: branch sequences, carry engines, claim checks, Syracuse embedding, automata"};
    app.require_subcommand(1);

    Common common;
    Source src;
    long k_max = 6;
    std::uint32_t grid = 256;

    auto* branch = app.add_subcommand("branch", "Branch sequences")->require_subcommand(1);
    auto* iterate = branch->add_subcommand("iterate", "Iterate a branch sequence and check the closed form");
    auto* probe = branch->add_subcommand("probe-independence", "Independence probe at every state");
    for (auto* s : {iterate, probe}) {
        add_common(s, common);
        add_source(s, src);
    }
    probe->add_option("--kmax", k_max, "Largest k")->capture_default_str();
    probe->add_option("--grid", grid, "Sweep resolution")->capture_default_str();

    auto* lemma = app.add_subcommand("lemma", "Claim checks")->require_subcommand(1);
    auto* domination = lemma->add_subcommand("domination", "Domination and bound chains");
    auto* floor_add = lemma->add_subcommand("floor-add-search", "Exhaustive floor-addition search");
    auto* determinism = lemma->add_subcommand("determinism", "Determinism of the successor map");
    auto* min_bound = lemma->add_subcommand("min-bound", "Lower bound on the prefix minimum");
    auto* asymptotics = lemma->add_subcommand("asymptotics", "Growth ratio and cycle diagnostics");
    auto* replay_cmd = lemma->add_subcommand("replay", "Replay a certificate");
    for (auto* s : {domination, determinism, min_bound, asymptotics}) {
        add_common(s, common);
        add_source(s, src);
    }
    domination->add_option("--kmax", k_max, "Largest k")->capture_default_str();
    long max_den = 12, max_val = 4;
    std::string interp = "both";
    add_common(floor_add, common);
    floor_add->add_option("--max-den", max_den, "Largest denominator")->capture_default_str();
    floor_add->add_option("--max-val", max_val, "Largest value")->capture_default_str();
    floor_add->add_option("--interpretation", interp, "integer_part | all_scales | both")->capture_default_str();
    std::size_t extra = 0;
    asymptotics->add_option("--extra", extra, "Steps past W = 1 (with --w0)")->capture_default_str();
    std::string cert_path;
    replay_cmd->add_option("--certificate", cert_path, "Certificate file")->required();

    auto* syr = app.add_subcommand("syracuse", "Syracuse trajectories")->require_subcommand(1);
    auto* scan_cmd = syr->add_subcommand("scan", "Scan a range of odd seeds");
    auto* trace = syr->add_subcommand("trace", "Trace one seed");
    auto* embed_cmd = syr->add_subcommand("embed-check", "Embedding and structure checks for one seed");
    std::string from = "1", to = "99", w0;
    std::size_t cap = kDefaultCap;
    std::vector<std::string> checks;
    add_common(scan_cmd, common);
    scan_cmd->add_option("--from", from, "First seed")->capture_default_str();
    scan_cmd->add_option("--to", to, "Last seed")->capture_default_str();
    scan_cmd->add_option("--cap", cap, "Step cap per seed")->capture_default_str();
    scan_cmd->add_option("--checks", checks, "Per-seed checks: " + join(scan_check_names()))
        ->delimiter(',')
        ->check(CLI::IsMember(scan_check_names()));
    for (auto* s : {trace, embed_cmd}) {
        add_common(s, common);
        s->add_option("--w0", w0, "Odd seed")->required();
        s->add_option("--cap", cap, "Step cap")->capture_default_str();
    }
    trace->add_option("--extra", extra, "Steps past W = 1")->capture_default_str();

    auto* ca = app.add_subcommand("ca", "Cellular automata")->require_subcommand(1);
    auto* render_cmd = ca->add_subcommand("render", "Build and render a grid");
    CaFlags caf;
    add_common(render_cmd, common);
    render_cmd->add_option("--w0", caf.w0, "Odd seed");
    render_cmd->add_option("--xi", caf.xi, "Seed for rational_power mode");
    render_cmd->add_option("--mode", caf.mode, "syracuse | rational_power")->capture_default_str();
    render_cmd->add_option("--rows", caf.rows, "Rows")->capture_default_str();
    render_cmd->add_option("--width", caf.width, "Integer width, 0 = auto")->capture_default_str();
    render_cmd->add_option("--frac-depth", caf.frac_depth, "Fractional cells")->capture_default_str();
    render_cmd->add_flag("--gray", caf.gray, "Gray-code transform");
    render_cmd->add_flag("--overlay", caf.overlay, "Overlay against the rational-power automaton");
    render_cmd->add_flag("--carries", caf.carries, "Carry underlay (text)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (iterate->parsed()) return cmd_branch_iterate(make_ctx(iterate, "branch", common), src);
        if (probe->parsed()) return cmd_probe(make_ctx(probe, "branch", common), src, k_max, grid);
        if (domination->parsed()) return cmd_domination(make_ctx(domination, "lemma", common), src, k_max);
        if (floor_add->parsed()) return cmd_floor_add(make_ctx(floor_add, "lemma", common), max_den, max_val, interp);
        if (determinism->parsed())
            return cmd_single(make_ctx(determinism, "lemma", common), determinism_check(source_trajectory(src)));
        if (min_bound->parsed())
            return cmd_single(make_ctx(min_bound, "lemma", common), min_bound_check(source_trajectory(src)));
        if (asymptotics->parsed()) return cmd_asymptotics(make_ctx(asymptotics, "lemma", common), src, extra);
        if (replay_cmd->parsed()) return cmd_replay(cert_path);
        if (scan_cmd->parsed()) return cmd_scan(make_ctx(scan_cmd, "syracuse", common), from, to, cap, checks);
        if (trace->parsed()) return cmd_trace(make_ctx(trace, "syracuse", common), w0, cap, extra);
        if (embed_cmd->parsed()) return cmd_embed_check(make_ctx(embed_cmd, "syracuse", common), w0, cap);
        if (render_cmd->parsed()) return cmd_ca_render(make_ctx(render_cmd, "ca", common), caf);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const ParamError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
