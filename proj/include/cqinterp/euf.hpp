#pragma once

#include "cqinterp/recursion.hpp"
#include "cqinterp/validate.hpp"

namespace cqi {

// Flattened definition: fresh = symbol(arg vars).
struct DefEntry {
    std::string var;
    std::string symbol;
    std::vector<std::string> args;
    enum class Origin { Phi, Psi, Shared } origin{Origin::Phi};
};
struct DefSet {
    std::vector<DefEntry> entries;
};

// Functionality-axiom instance: (and_k lhs_k = rhs_k) -> lhs = rhs. Sides are
// kept separate so mixed instances can be split by locality; in the original
// instances every side is a single variable, the split ones carry separating
// terms.
struct HornClause {
    std::vector<std::pair<Polynomial, Polynomial>> hyps;
    std::pair<Polynomial, Polynomial> concl;
    std::string symbol;
};
struct HornSets {
    std::vector<HornClause> n_phi, n_psi, n_mix;
};

struct PurifyResult {
    CqConjunction phi, psi;          // flat, equalities expanded to atom pairs
    std::vector<std::string> order;  // original declared order, then fresh vars
    DefSet defs;
    // Variable classes over `order` (fresh-variable commonness follows the
    // symbol/argument rule, not bare occurrence).
    std::set<std::string> common_vars, phi_vars, psi_vars;
    std::set<std::string> common_symbols;
    AppRegistry backsub; // fresh var -> application (for output resolution)
};

PurifyResult purify(const RawSystem& phi_raw, const RawSystem& psi_raw, const AppRegistry& reg,
                    const std::vector<std::string>& declared,
                    const std::map<std::string, int>& arities);

HornSets horn_instances(const DefSet& defs, const PurifyResult& ctx);

// Separating terms for a deduced mixed equality ck = bk: exact multiplier LPs
// produce t_minus <= ck <= t_plus under L1 and t_plus <= bk <= t_minus under
// L2, over common variables only; both entailments are re-verified exactly.
struct SepTerms {
    Polynomial t_minus, t_plus;
};
SepTerms separating_terms(const LinearSystem& L1, const LinearSystem& L2, const std::string& ck,
                          const std::string& bk, const std::set<std::string>& common);

// Splits fired mixed instances into one-sided ones, introducing shared
// application variables for the separating terms; updates defs/backsub.
struct SepmixState {
    LinearSystem L1, L2;
    std::vector<Polynomial> W; // deduced equalities (== 0)
    HornSets horn;
};
void split_mixed_instances(SepmixState& st, PurifyResult& ctx, Session& session);

// DNF expansion of the one-sided instances and the pairwise grid of CQ calls.
InterpolationResult interpolate_unmixed(const PurifyResult& ctx, const HornSets& horn,
                                        Session& session);

// End-to-end combination driver over raw systems.
struct EufResult {
    Formula interpolant;
    AppRegistry registry;
    RecursionTrace trace;
    std::vector<LeafCertificate> leaf_certs;
};
EufResult interpolate_cq_euf(const RawSystem& phi_raw, const RawSystem& psi_raw,
                             const AppRegistry& reg, const std::vector<std::string>& declared,
                             const std::map<std::string, int>& arities, Session& session);

} // namespace cqi
