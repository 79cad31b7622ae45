#pragma once

#include "cqinterp/cqcore.hpp"

namespace cqi {

// Affine variable bindings derived from a vanishing SOS side. Triangularized:
// no bound variable appears on any right-hand side.
struct Binding {
    std::string var;
    Polynomial rhs;
};
struct Substitution {
    std::vector<Binding> bindings;

    std::map<std::string, Polynomial> as_map() const;
    bool empty() const { return bindings.empty(); }
};

struct ContradictionFound {};
using SubstOutcome = std::variant<Substitution, ContradictionFound>;

// From an (H1)/(H2)-form decomposition: positive constant means that side is
// unsatisfiable; otherwise each positive square a (v - l)^2 yields v -> l.
SubstOutcome derive_substitutions(const SosDecomposition& hside);

// f = sum_{i<=r1} delta_i f_i + h1 (= -sum_{i>r1} delta_i f_i - h2), a
// polynomial over the common variables; both expressions are checked to agree.
struct Bridge {
    Polynomial f;
    SosDecomposition h1, h2;
};
Bridge derive_bridge(const NsoscViolation& violation, const ProblemPair& pair);

// Exact composition; the concave quadratic shape is preserved (asserted).
QuadForm substitute_cq(const QuadForm& q, const Substitution& sub);
PolyAtom substitute_atom(const PolyAtom& a, const Substitution& sub);

struct LevelRecord {
    std::vector<Rat> delta;
    Polynomial f;
    Substitution sub_phi, sub_psi;
    bool constant_case{false};
    int vars_before{0}, vars_after{0};
};

struct RecursionTrace {
    std::vector<LevelRecord> levels;
    enum class Leaf { BaseCase, VarSubset, SideContradiction } leaf{Leaf::BaseCase};

    int depth() const { return static_cast<int>(levels.size()); }
};

struct LeafCertificate {
    ProblemPair pair;
    Certificate cert;
};

struct InterpolationResult {
    Formula interpolant;
    RecursionTrace trace;
    std::vector<LeafCertificate> leaf_certs;
};

// The recursive interpolation driver for pure CQ pairs: variable-subset
// short-circuit, base case, or SOS-combination elimination and recursion.
InterpolationResult interpolate_cq(const ProblemPair& pair, Session& session);

// Sampling pre-pass: looks for a common satisfying point; throws
// NotMutuallyContradictory when one is found (exact rational check).
void satisfiability_prepass(const ProblemPair& pair, Session& session);

} // namespace cqi
