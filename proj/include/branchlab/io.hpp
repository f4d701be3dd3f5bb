#pragma once

// JSON and CSV forms of trajectories, reports and certificates. Rationals are
// written as "a/b" strings so nothing passes through a double.

#include "branchlab/cagrid.hpp"
#include "branchlab/lemmalab.hpp"
#include "branchlab/syracuse.hpp"

#include <json.hpp>

#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace branchlab {

using Json = nlohmann::ordered_json;

inline constexpr int kCsvSchemaVersion = 1;

// Flag echo written into every artifact.
using RunHeader = std::map<std::string, std::string>;

inline Json to_json(const ExactRational& x) { return x.to_string(); }
inline Json to_json(const BigInt& x) { return x.get_str(); }

inline ExactRational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return ExactRational(j.get<long>());
    throw std::invalid_argument("expected a rational string, got " + j.dump());
}

inline Json header_json(const std::string& command, const RunHeader& flags) {
    Json h;
    h["tool"] = "branchlab";
    h["command"] = command;
    Json f = Json::object();
    for (const auto& [k, v] : flags) f[k] = v;
    h["flags"] = f;
    return h;
}

inline Json to_json(const BranchParams& p) {
    return Json{{"p", p.p}, {"q", p.q}, {"alpha", p.alpha}, {"beta", p.beta}, {"xi", to_json(p.xi)}};
}

inline Json to_json(const BranchTrajectory& t) {
    Json steps = Json::array();
    for (const auto& s : t.steps) {
        Json j;
        j["n"] = s.n;
        j["state"] = to_json(s.state);
        j["perturbation"] = s.perturbation ? to_json(*s.perturbation) : Json(nullptr);
        j["shift"] = s.shift;
        j["cumulative_shift"] = s.cumulative_shift;
        j["weighted_sum"] = to_json(s.weighted_sum);
        steps.push_back(std::move(j));
    }
    return Json{{"params", to_json(t.params)}, {"steps", steps}};
}

inline Json to_json(const Counterexample& c) {
    Json w = Json::object();
    for (const auto& [k, v] : c.witness) w[k] = to_json(v);
    Json r = Json::array();
    for (const auto& v : c.perturbations) r.push_back(to_json(v));
    return Json{{"claim_id", c.claim_id}, {"relation", c.relation}, {"witness", w},
                {"perturbations", r},     {"lhs", to_json(c.lhs)},   {"rhs", to_json(c.rhs)}};
}

inline Counterexample certificate_from_json(const Json& j) {
    const Json& c = j.contains("certificate") ? j.at("certificate") : j;
    Counterexample out;
    out.claim_id = c.at("claim_id").get<std::string>();
    out.relation = c.value("relation", std::string());
    for (const auto& [k, v] : c.at("witness").items()) out.witness.emplace_back(k, rational_from_json(v));
    if (c.contains("perturbations"))
        for (const auto& v : c.at("perturbations")) out.perturbations.push_back(rational_from_json(v));
    out.lhs = rational_from_json(c.at("lhs"));
    out.rhs = rational_from_json(c.at("rhs"));
    return out;
}

inline Json to_json(const ClaimReport& r) {
    return Json{{"claim_id", r.claim_id},
                {"instance", r.instance},
                {"verdict", to_string(r.verdict)},
                {"certificate", r.certificate ? to_json(*r.certificate) : Json(nullptr)},
                {"tested_count", r.tested_count},
                {"violation_count", r.violation_count},
                {"notes", r.notes}};
}

inline Json to_json(const std::vector<ClaimReport>& reps) {
    Json a = Json::array();
    for (const auto& r : reps) a.push_back(to_json(r));
    return a;
}

inline Json to_json(const DominationReport& d) {
    Json a = Json::array();
    for (const auto* r : d.all()) a.push_back(to_json(*r));
    return a;
}

inline Json to_json(const AsymptoticReport& a) {
    Json rows = Json::array();
    for (const auto& r : a.rows) {
        rows.push_back(Json{{"n", r.n},
                            {"e", r.e},
                            {"e_over_n", r.e_over_n ? to_json(*r.e_over_n) : Json(nullptr)},
                            {"exact_side", r.exact_side},
                            {"approx_ratio", r.approx_ratio},
                            {"approx_side", r.approx_side},
                            {"weighted_sum", to_json(r.weighted_sum)},
                            {"max_term", to_json(r.max_term)},
                            {"floor_state", to_json(r.floor_state)},
                            {"growth", to_json(r.growth)}});
    }
    return Json{{"label", a.label},
                {"threshold", a.threshold},
                {"threshold_precision", a.threshold_precision},
                {"classification", to_string(a.classification)},
                {"period", a.period ? Json(*a.period) : Json(nullptr)},
                {"preperiod", a.preperiod ? Json(*a.preperiod) : Json(nullptr)},
                {"growth_case", to_string(a.growth_case)},
                {"disagreements", a.disagreements},
                {"cycle_found", a.cycle_found},
                {"notes", a.notes},
                {"rows", rows}};
}

inline Json to_json(const SyracuseTrajectory& t) {
    Json steps = Json::array();
    for (const auto& s : t.steps)
        steps.push_back(Json{{"n", s.n},
                             {"w", to_json(s.w)},
                             {"h", s.h ? Json(*s.h) : Json(nullptr)},
                             {"e_prime", s.e_prime}});
    return Json{{"w0", to_json(t.w0)}, {"cap", t.cap}, {"resolved", t.resolved}, {"steps", steps}};
}

inline const char* to_string(StructureCase c) {
    switch (c) {
        case StructureCase::a: return "a";
        case StructureCase::b: return "b";
        case StructureCase::unclassified: return "unclassified";
    }
    return "?";
}

inline Json to_json(const StructureCheck& c) {
    auto opt = [](const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); };
    return Json{{"n", c.n},
                {"h", c.h},
                {"case", to_string(c.kind)},
                {"a", c.a},
                {"b", to_json(c.b)},
                {"decomposition", c.decomposition},
                {"digit_pattern", c.digit_pattern},
                {"floor_derived", c.floor_derived},
                {"floor_as_stated", c.floor_as_stated},
                {"frac", c.frac},
                {"admissible", c.admissible},
                {"successor", opt(c.successor)},
                {"successor_by_case", opt(c.successor_by_case)},
                {"state", to_json(c.state)},
                {"frac_expected", to_json(c.frac_expected)}};
}

inline Json to_json(const ScanSummary& s) {
    Json fails = Json::array();
    for (const auto& f : s.failures) fails.push_back(to_json(f));
    return Json{{"from", to_json(s.from)},
                {"to", to_json(s.to)},
                {"cap", s.cap},
                {"checks", s.checks},
                {"seeds", s.seeds.size()},
                {"resolved", s.resolved},
                {"failures", fails},
                {"max_steps", s.max_steps},
                {"max_steps_seed", to_json(s.max_steps_seed)},
                {"max_w", to_json(s.max_w)},
                {"max_w_seed", to_json(s.max_w_seed)},
                {"max_h", s.max_h},
                {"max_min_state", to_json(s.max_min_state)},
                {"max_min_w", to_json(s.max_min_w)},
                {"claims", to_json(s.claims)}};
}

// ---------------------------------------------------------------------------
// CSV. The first line is "# branchlab-csv v<N> <schema>", the second echoes
// the run flags, then a column header.

namespace detail {

inline void csv_preamble(std::ostream& os, const std::string& schema, const RunHeader& flags,
                         const std::string& columns) {
    os << "# branchlab-csv v" << kCsvSchemaVersion << " " << schema << "\n# flags";
    for (const auto& [k, v] : flags) os << " " << k << "=" << v;
    os << "\n" << columns << "\n";
}

}  // namespace detail

inline void write_csv(std::ostream& os, const BranchTrajectory& t, const RunHeader& flags) {
    detail::csv_preamble(os, "branch-trajectory", flags, "n,state,perturbation,shift,cumulative_shift,weighted_sum");
    for (const auto& s : t.steps)
        os << s.n << "," << s.state << "," << (s.perturbation ? s.perturbation->to_string() : "") << ","
           << s.shift << "," << s.cumulative_shift << "," << s.weighted_sum << "\n";
}

inline void write_csv(std::ostream& os, const SyracuseTrajectory& t, const RunHeader& flags) {
    detail::csv_preamble(os, "syracuse-trajectory", flags, "n,w,h,e_prime,state");
    for (std::size_t n = 0; n < t.size(); ++n) {
        const auto& s = t.steps[n];
        os << s.n << "," << s.w << "," << (s.h ? std::to_string(*s.h) : "") << "," << s.e_prime << ","
           << embedded_state(t, n) << "\n";
    }
}

inline void write_csv(std::ostream& os, const ScanSummary& s, const RunHeader& flags) {
    detail::csv_preamble(os, "syracuse-scan", flags, "seed,resolved,steps,max_w,min_w,min_state,max_h");
    for (const auto& x : s.seeds)
        os << x.seed << "," << (x.resolved ? 1 : 0) << "," << x.steps << "," << x.max_w << "," << x.min_w << ","
           << x.min_state << "," << x.max_h << "\n";
}

inline void write_csv(std::ostream& os, const std::vector<ClaimReport>& reps, const RunHeader& flags) {
    detail::csv_preamble(os, "claim-reports", flags, "claim_id,instance,verdict,tested,violations");
    for (const auto& r : reps)
        os << r.claim_id << ",\"" << r.instance << "\"," << to_string(r.verdict) << "," << r.tested_count << ","
           << r.violation_count << "\n";
}

inline void write_csv(std::ostream& os, const AsymptoticReport& a, const RunHeader& flags) {
    detail::csv_preamble(os, "asymptotics", flags,
                         "n,e,e_over_n,exact_side,approx_ratio,approx_side,weighted_sum,max_term,floor_state,growth");
    for (const auto& r : a.rows) {
        os << r.n << "," << r.e << "," << (r.e_over_n ? r.e_over_n->to_string() : "") << "," << r.exact_side
           << ",";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", r.approx_ratio);
        os << buf << "," << r.approx_side << "," << r.weighted_sum << "," << r.max_term << "," << r.floor_state
           << "," << r.growth << "\n";
    }
}

}  // namespace branchlab
