#pragma once

#include "cqinterp/errors.hpp"
#include "cqinterp/formula.hpp"
#include "cqinterp/quadform.hpp"

#include <vector>

namespace cqi {

struct PolyAtom {
    Polynomial p;
    bool strict{false}; // p > 0 vs p >= 0
};

struct CqConjunction {
    std::vector<PolyAtom> atoms;

    std::vector<Polynomial> nonstricts() const;
    std::vector<Polynomial> stricts() const;
    std::set<std::string> vars() const;
};

// Ordered variable partition: common x, phi-local y, psi-local z.
struct VarPartition {
    std::vector<std::string> x, y, z;

    std::vector<std::string> all() const;
    int d() const { return static_cast<int>(x.size()); }
    int u() const { return static_cast<int>(y.size()); }
    int v() const { return static_cast<int>(z.size()); }
};

struct ProblemPair {
    CqConjunction phi, psi;
    VarPartition part;

    // Flattened views used throughout: f's are the nonstrict polynomials of
    // phi then psi (split index r1), g's the strict ones (split s1).
    std::vector<Polynomial> fs() const;
    std::vector<Polynomial> gs() const;
    size_t r1() const { return phi.nonstricts().size(); }
    size_t s1() const { return phi.stricts().size(); }
};

// Builds the pair with occurrence-inferred partition; `declared` fixes the
// variable order (variables not occurring anywhere are dropped). Checks that
// every atom is CQ.
ProblemPair make_pair(const CqConjunction& phi, const CqConjunction& psi,
                      const std::vector<std::string>& declared);

// As a formula (conjunction of the atoms).
Formula conjunction_formula(const CqConjunction& c);

bool atom_is_cq(const PolyAtom& a);

} // namespace cqi
