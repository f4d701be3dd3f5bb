#pragma once

// Perturbed rational-power sequences ("Branch sequences").
//
// A trajectory is built by the valuation recurrence
//
//   S'      = p (S_n + r_n) / q
//   g_{n+1} = smallest g with floor(S' / q^{g+1}) = 0 or q^2 - 1 (mod q^2)
//   S_{n+1} = S' / q^{g_{n+1}}
//
// and every intermediate quantity is kept so that the closed form
// S_n = p^n / q^{n+e_n} * (xi + Sigma_n) and the derived sequences can be
// recomputed independently.

#include "branchlab/numkernel.hpp"

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace branchlab {

// ---------------------------------------------------------------------------
// Errors

class ParamError : public std::invalid_argument {
public:
    explicit ParamError(std::vector<std::string> violations)
        : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid branch parameters:";
        for (const auto& x : v) s += " [" + x + "]";
        return s;
    }
    std::vector<std::string> violations_;
};

class AdmissibilityError : public std::invalid_argument {
public:
    AdmissibilityError(const ExactRational& r, const ExactRational& lo, const ExactRational& hi)
        : std::invalid_argument("inadmissible perturbation r = " + r.to_string() +
                                ": need " + lo.to_string() + " <= r < " + hi.to_string()),
          r_(r), lo_(lo), hi_(hi) {}
    const ExactRational& r() const { return r_; }
    const ExactRational& lower() const { return lo_; }
    const ExactRational& upper() const { return hi_; }

private:
    ExactRational r_, lo_, hi_;
};

class StateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StepError : public std::runtime_error {
public:
    StepError(std::size_t index, const std::string& what)
        : std::runtime_error("step " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Parameters

struct BranchParams {
    long p = 3;
    long q = 2;
    long alpha = 1;  // p = alpha * q + beta
    long beta = 1;
    ExactRational xi = 14;
};

// `allow_unit_xi` admits xi = 1. That is needed for the embedding of the
// trivial Syracuse seed W0 = 1 (S0 = 1), which sits outside xi > 1.
inline BranchParams validate_params(long p, long q, const ExactRational& xi,
                                    bool allow_unit_xi = false) {
    std::vector<std::string> bad;
    if (!(p > q && q > 1)) bad.emplace_back("p > q > 1");
    BranchParams out{p, q, 0, 0, xi};
    if (q > 1) {
        out.alpha = p / q;
        out.beta = p % q;
        if (std::gcd(p, q) != 1) bad.emplace_back("gcd(p, q) = 1");
        if (out.alpha < 1) bad.emplace_back("alpha >= 1");
        if (out.beta < 1 || out.beta > q - 1) bad.emplace_back("1 <= beta <= q - 1");
        if (out.alpha + out.beta > q) bad.emplace_back("alpha + beta <= q");
    }
    if (allow_unit_xi ? xi < ExactRational(1) : xi <= ExactRational(1))
        bad.emplace_back(allow_unit_xi ? "xi >= 1" : "xi > 1");
    if (q > 1 && xi.is_integer() && xi.sign() > 0 && !(allow_unit_xi && xi == 1)) {
        BigInt v = xi.numerator();
        BigInt rest;
        const BigInt f(q);
        mpz_remove(rest.get_mpz_t(), v.get_mpz_t(), f.get_mpz_t());
        if (rest == 1) bad.emplace_back("xi not a power of q");
    }
    if (!bad.empty()) throw ParamError(std::move(bad));
    return out;
}

inline ExactRational rational_power(const BranchParams& params, unsigned long n) {
    return params.xi * ExactRational(ipow(params.p, n), ipow(params.q, n));
}

// ---------------------------------------------------------------------------
// Trajectory records

struct BranchStep {
    std::size_t n = 0;
    ExactRational state;                       // S_n
    std::optional<ExactRational> perturbation; // r_n; absent on the last record
    std::uint64_t shift = 0;                   // g_n
    std::uint64_t cumulative_shift = 0;        // e_n = g_1 + ... + g_n
    ExactRational weighted_sum;                // Sigma_n
};

struct BranchTrajectory {
    BranchParams params;
    std::vector<BranchStep> steps;

    std::size_t size() const { return steps.size(); }
    const BranchStep& operator[](std::size_t i) const { return steps.at(i); }
    const BranchStep& back() const { return steps.back(); }
};

// Perturbation policies.
struct ZeroPerturbation {};
struct SyracuseTypePerturbation {
    ExactRational c;
    // Exponent used for r_0 = c / q^{initial_shift}. The normalized start
    // fixes g_0 = 0 in the bookkeeping of e_n, but an embedded sequence whose
    // seed was divided by q^{g_0} keeps that exponent in its first
    // perturbation.
    std::uint64_t initial_shift = 0;
};
struct ExplicitPerturbation {
    std::vector<ExactRational> values;
};
struct GridProbePerturbation {
    std::uint32_t resolution = 256;
};

class PerturbationSpec {
public:
    using Variant = std::variant<ZeroPerturbation, SyracuseTypePerturbation,
                                 ExplicitPerturbation, GridProbePerturbation>;

    static PerturbationSpec zero() { return PerturbationSpec(ZeroPerturbation{}); }
    static PerturbationSpec syracuse_type(ExactRational c, std::uint64_t initial_shift = 0) {
        if (c.sign() <= 0)
            throw std::invalid_argument("syracuse_type perturbation needs c > 0");
        return PerturbationSpec(SyracuseTypePerturbation{std::move(c), initial_shift});
    }
    static PerturbationSpec explicit_values(std::vector<ExactRational> values) {
        return PerturbationSpec(ExplicitPerturbation{std::move(values)});
    }
    static PerturbationSpec grid_probe(std::uint32_t resolution) {
        if (resolution == 0) throw std::invalid_argument("grid_probe resolution must be >= 1");
        return PerturbationSpec(GridProbePerturbation{resolution});
    }

    const Variant& kind() const { return v_; }
    bool is_zero() const { return std::holds_alternative<ZeroPerturbation>(v_); }

    // r_n for the state recorded in `step`. grid_probe describes a sweep over
    // the admissible interval, not a single value, and is rejected here.
    ExactRational at(const BranchStep& step, long q) const {
        return std::visit(
            [&](const auto& k) -> ExactRational {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, ZeroPerturbation>) {
                    return ExactRational(0);
                } else if constexpr (std::is_same_v<K, SyracuseTypePerturbation>) {
                    const std::uint64_t g = step.n == 0 ? k.initial_shift : step.shift;
                    return k.c / ExactRational(ipow(q, g));
                } else if constexpr (std::is_same_v<K, ExplicitPerturbation>) {
                    if (step.n >= k.values.size())
                        throw std::out_of_range("explicit perturbation list has no value for step " +
                                                std::to_string(step.n));
                    return k.values[step.n];
                } else {
                    throw std::invalid_argument(
                        "grid_probe is a sweep specification and cannot drive an iteration");
                }
            },
            v_);
    }

    std::string describe() const {
        return std::visit(
            [](const auto& k) -> std::string {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, ZeroPerturbation>) {
                    return "zero";
                } else if constexpr (std::is_same_v<K, SyracuseTypePerturbation>) {
                    std::string s = "syracuse:" + k.c.to_string();
                    if (k.initial_shift != 0) s += ":" + std::to_string(k.initial_shift);
                    return s;
                } else if constexpr (std::is_same_v<K, ExplicitPerturbation>) {
                    std::string s = "explicit:";
                    for (std::size_t i = 0; i < k.values.size(); ++i)
                        s += (i ? "," : "") + k.values[i].to_string();
                    return s;
                } else {
                    return "grid:" + std::to_string(k.resolution);
                }
            },
            v_);
    }

private:
    explicit PerturbationSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// Parses "zero", "syracuse:c[:g0]", "explicit:r0,r1,...", "grid:N".
inline PerturbationSpec parse_perturbation(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "zero" && rest.empty()) return PerturbationSpec::zero();
    if (head == "syracuse" && !rest.empty()) {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) return PerturbationSpec::syracuse_type(parse_rational(rest));
        return PerturbationSpec::syracuse_type(parse_rational(rest.substr(0, c2)),
                                               std::stoull(rest.substr(c2 + 1)));
    }
    if (head == "explicit") {
        std::vector<ExactRational> values;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) values.push_back(parse_rational(item));
        return PerturbationSpec::explicit_values(std::move(values));
    }
    if (head == "grid" && !rest.empty())
        return PerturbationSpec::grid_probe(static_cast<std::uint32_t>(std::stoul(rest)));
    throw std::invalid_argument("unknown perturbation spec '" + text +
                                "' (zero | syracuse:c[:g0] | explicit:r0,r1,... | grid:N)");
}

// ---------------------------------------------------------------------------
// Core recurrences

/// floor(x / q) = 0 or q^2 - 1 (mod q^2).
inline bool branch_condition(const ExactRational& x, long q) {
    const BigInt m = BigInt(q) * q;
    BigInt r;
    const BigInt a = floor_scale(x, q, 1);
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r == 0 || r == m - 1;
}

/// Smallest g >= 0 such that x / q^g satisfies the branch condition.
inline std::uint64_t theta_valuation(const ExactRational& x, long q) {
    if (x < ExactRational(1))
        throw StateError("theta_valuation: x must be >= 1, got " + x.to_string());
    const std::uint64_t cap = integer_digit_count(x, q) + 2;
    const BigInt m = BigInt(q) * q;
    BigInt a = floor_scale(x, q, 1);
    BigInt r;
    for (std::uint64_t g = 0; g <= cap; ++g) {
        mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
        if (r == 0 || r == m - 1) return g;
        mpz_fdiv_q_ui(a.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(q));
    }
    throw InternalError("theta_valuation: no qualifying shift within cap " + std::to_string(cap) +
                        " for x = " + x.to_string());
}

/// The admissible perturbation interval [-{S}, 1 - {S}).
inline std::pair<ExactRational, ExactRational> admissible_interval(const ExactRational& s) {
    const ExactRational f = s.frac();
    return {-f, ExactRational(1) - f};
}

inline bool is_admissible(const ExactRational& s, const ExactRational& r) {
    const auto [lo, hi] = admissible_interval(s);
    return lo <= r && r < hi;
}

inline BranchStep initial_step(const ExactRational& s0) {
    return BranchStep{0, s0, std::nullopt, 0, 0, ExactRational(0)};
}

// One valuation step with an explicit perturbation. The returned record has
// no perturbation yet; the caller's record is the one that consumed `r`.
inline BranchStep step_v2(const BranchParams& params, const BranchStep& step,
                          const ExactRational& r) {
    if (step.state < ExactRational(1))
        throw StateError("corrupted state: S_" + std::to_string(step.n) + " = " +
                         step.state.to_string() + " < 1");
    if (!is_admissible(step.state, r)) {
        const auto [lo, hi] = admissible_interval(step.state);
        throw AdmissibilityError(r, lo, hi);
    }
    const ExactRational p(params.p);
    const ExactRational q(params.q);
    const ExactRational lifted = p * (step.state + r) / q;
    const std::uint64_t g = theta_valuation(lifted, params.q);
    BranchStep next;
    next.n = step.n + 1;
    next.state = lifted / ExactRational(ipow(params.q, g));
    next.shift = g;
    next.cumulative_shift = step.cumulative_shift + g;
    next.weighted_sum =
        step.weighted_sum +
        r * ExactRational(ipow(params.q, step.n + step.cumulative_shift), ipow(params.p, step.n));
    return next;
}

inline BranchStep step_v2(const BranchParams& params, const BranchStep& step,
                          const PerturbationSpec& spec) {
    return step_v2(params, step, spec.at(step, params.q));
}

using PerturbationFn = std::function<ExactRational(const BranchStep&)>;

// Builds `steps` transitions (steps + 1 records) from S_0 = xi. S_0 must
// satisfy the branch condition: g_0 is normalized to 0.
inline BranchTrajectory iterate_v2(const BranchParams& params, const PerturbationFn& perturb,
                                   std::size_t steps) {
    if (!branch_condition(params.xi, params.q))
        throw std::invalid_argument("S0 = " + params.xi.to_string() +
                                    " does not satisfy the branch condition; divide xi by "
                                    "q^g0 first");
    BranchTrajectory out{params, {}};
    out.steps.reserve(steps + 1);
    out.steps.push_back(initial_step(params.xi));
    for (std::size_t i = 0; i < steps; ++i) {
        BranchStep& cur = out.steps.back();
        try {
            cur.perturbation = perturb(cur);
            BranchStep next = step_v2(params, cur, *cur.perturbation);
            out.steps.push_back(std::move(next));
        } catch (const InternalError&) {
            throw;
        } catch (const std::exception& e) {
            throw StepError(i, e.what());
        }
    }
    return out;
}

inline BranchTrajectory iterate_v2(const BranchParams& params, const ExactRational& s0,
                                   const PerturbationSpec& spec, std::size_t steps) {
    if (s0 != params.xi)
        throw std::invalid_argument("S0 must equal xi (g0 is normalized to 0)");
    const long q = params.q;
    return iterate_v2(
        params, [&spec, q](const BranchStep& s) { return spec.at(s, q); }, steps);
}

struct V1Step {
    ExactRational next;
    bool took_branch = false;
};

/// The two-arm rule: multiply arm when the branch condition holds, else divide by q.
inline V1Step step_v1(const BranchParams& params, const ExactRational& t, const ExactRational& r) {
    if (t < ExactRational(1))
        throw StateError("corrupted state: T = " + t.to_string() + " < 1");
    if (branch_condition(t, params.q)) {
        if (!is_admissible(t, r)) {
            const auto [lo, hi] = admissible_interval(t);
            throw AdmissibilityError(r, lo, hi);
        }
        return {ExactRational(params.p) * (t + r) / ExactRational(params.q), true};
    }
    return {t / ExactRational(params.q), false};
}

// ---------------------------------------------------------------------------
// Closed form and derived sequences

namespace detail {

// q^{n+e_n} / p^n
inline ExactRational growth_factor(const BranchParams& params, std::size_t n, std::uint64_t e) {
    return ExactRational(ipow(params.q, n + e), ipow(params.p, n));
}

}  // namespace detail

/// p^n / q^{n+e_n} * (xi + Sigma_n), with Sigma_n rebuilt from the recorded r_j and e_j.
inline ExactRational closed_form(const BranchTrajectory& traj, std::size_t n) {
    if (n >= traj.size()) throw std::out_of_range("closed_form: index beyond trajectory");
    const auto& params = traj.params;
    ExactRational sigma(0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& sj = traj.steps[j];
        if (!sj.perturbation) throw std::invalid_argument("closed_form: missing perturbation");
        sigma += *sj.perturbation * detail::growth_factor(params, j, sj.cumulative_shift);
    }
    return (params.xi + sigma) / detail::growth_factor(params, n, traj.steps[n].cumulative_shift);
}

// closed_form at every index, with the perturbation sum accumulated in one pass.
inline std::vector<ExactRational> closed_form_all(const BranchTrajectory& traj) {
    const auto& params = traj.params;
    std::vector<ExactRational> out;
    out.reserve(traj.size());
    ExactRational sigma(0);
    BigInt qpow = 1;  // q^{n + e_n}
    BigInt ppow = 1;  // p^n
    std::uint64_t prev_exp = 0;
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const auto& s = traj.steps[n];
        const std::uint64_t exp = n + s.cumulative_shift;
        if (n > 0) {
            qpow *= ipow(params.q, exp - prev_exp);
            ppow *= params.p;
        }
        prev_exp = exp;
        out.push_back((params.xi + sigma) * ExactRational(ppow, qpow));
        if (s.perturbation) sigma += *s.perturbation * ExactRational(qpow, ppow);
    }
    return out;
}

struct DerivedStep {
    ExactRational base;             // C_n = xi p^n / q^{n+e_n}
    ExactRational offset;           // Delta_n = S_n - C_n
    ExactRational max_term;         // omega_n = max_{j<n} r_j q^{j+e_j} / p^j
    ExactRational scaled_max_term;  // Omega_n = p^n / q^{n+e_n} * omega_n
    ExactRational dominated_state;  // Z_n = C_n + Omega_n
};

/// Derived quantities at index n, computed from the definitions.
inline DerivedStep derived(const BranchTrajectory& traj, std::size_t n) {
    if (n >= traj.size()) throw std::out_of_range("derived: index beyond trajectory");
    const auto& params = traj.params;
    const ExactRational down =
        ExactRational(1) / detail::growth_factor(params, n, traj.steps[n].cumulative_shift);
    ExactRational omega(0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& sj = traj.steps[j];
        const ExactRational term =
            *sj.perturbation * detail::growth_factor(params, j, sj.cumulative_shift);
        if (j == 0 || term > omega) omega = term;
    }
    DerivedStep d;
    d.base = params.xi * down;
    d.offset = traj.steps[n].state - d.base;
    d.max_term = omega;
    d.scaled_max_term = omega * down;
    d.dominated_state = d.base + d.scaled_max_term;
    return d;
}

// Derived quantities at every index in one pass.
inline std::vector<DerivedStep> derived_all(const BranchTrajectory& traj) {
    const auto& params = traj.params;
    std::vector<DerivedStep> out;
    out.reserve(traj.size());
    ExactRational omega(0);
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const auto& s = traj.steps[n];
        const ExactRational up = detail::growth_factor(params, n, s.cumulative_shift);
        DerivedStep d;
        d.base = params.xi / up;
        d.offset = s.state - d.base;
        d.max_term = omega;
        d.scaled_max_term = omega / up;
        d.dominated_state = d.base + d.scaled_max_term;
        out.push_back(std::move(d));
        if (s.perturbation) {
            const ExactRational term = *s.perturbation * up;
            if (n == 0 || term > omega) omega = term;
        }
    }
    return out;
}

inline bool all_perturbations_positive(const BranchTrajectory& traj) {
    for (const auto& s : traj.steps)
        if (s.perturbation && s.perturbation->sign() <= 0) return false;
    return true;
}

}  // namespace branchlab
