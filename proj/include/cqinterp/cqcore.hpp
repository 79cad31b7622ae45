#pragma once

#include "cqinterp/certificate.hpp"
#include "cqinterp/lp.hpp"
#include "cqinterp/sdp.hpp"

#include <cstdint>
#include <variant>

namespace cqi {

struct RunConfig {
    SolverConfig sdp;
    unsigned long denom_bound{1000000};
    int denom_escalations{2}; // cap multiplied by 100 per escalation
    Rat strictness_tol{Rat(1, 1000000)};
    int sat_prepass_samples{200};
    int max_disjuncts{256};
    bool subset_shortcut{true};
    bool sampling{true};
    std::uint64_t seed{0};

    enum class Backend { Internal, SdpaFile } backend{Backend::Internal};
    std::string sdpa_dir;
};

// Per-query state: the config plus counters shared across nested solves.
struct Session {
    RunConfig cfg;
    int sdp_counter{0};

    SdpSolution solve(const SdpProblem& prob, bool strict_slack);
};

// Outcome of the SOS-combination search over the nonstrict polynomials:
// either none exists (the base-case condition holds) or an exactly verified
// pair (delta, h) with h = -sum delta_i f_i a nonzero SOS.
struct NsoscHolds {};
struct NsoscViolation {
    std::vector<Rat> delta;
    Polynomial h;
};
using NsoscOutcome = std::variant<NsoscHolds, NsoscViolation>;

NsoscOutcome check_nsosc(const std::vector<Polynomial>& fs,
                         const std::vector<std::string>& vars, Session& session);

// Base case: solves the certificate feasibility problem, recovers exact
// rationals, and returns the interpolant atom I (> 0 or >= 0) with its
// certificate. Requires the pair mutually contradictory and the base-case
// condition; inconclusive solves raise SolverInconclusive.
struct BaseResult {
    Formula interpolant;
    Certificate cert;
};
BaseResult interpolate_base(const ProblemPair& pair, Session& session);

// Base case with the interpolant polynomial pinned to a candidate: finds a
// certificate whose phi-side combination equals `candidate` exactly. Used to
// certify externally supplied interpolants.
std::optional<Certificate> certify_candidate(const ProblemPair& pair, const Polynomial& candidate,
                                             bool strict, Session& session);

// Linearized membership encoding: bordered moment-matrix block plus the
// inner-product rows <P_i, .> >= 0, <Q_j, .> > 0.
struct MembershipEncoding {
    std::vector<std::string> vars;
    std::vector<SymMatrix> P, Q; // (n+1) x (n+1)
};
MembershipEncoding linearize(const ProblemPair& pair);

// SDP testing x in K_1 with strict rows relaxed to >= strict_eps.
SdpProblem encode_membership(const MembershipEncoding& enc, const std::vector<Rat>& point,
                             const Rat& strict_eps);

// Exact K membership (direct evaluation).
bool in_feasible_region(const ProblemPair& pair, const std::map<std::string, Rat>& point);

// Exact multiplier recovery helpers (shared with the euf module).
struct RationalizeSpec {
    unsigned long denom_bound;
    double snap_tol;
};
std::vector<RationalizeSpec> rationalize_ladder(const RunConfig& cfg);

} // namespace cqi
