#pragma once

#include "cqinterp/polynomial.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace cqi {

// Quantifier-free formulas over polynomial atoms p > 0 / p >= 0, closed under
// conjunction and disjunction. Polynomial "variables" may be registered
// application leaves (see AppRegistry) standing for uninterpreted-function
// terms.

enum class Rel { Gt, Ge };

struct Formula {
    enum class Kind { True, False, Atom, And, Or };
    Kind kind{Kind::True};
    Polynomial poly;
    Rel rel{Rel::Ge};
    std::vector<Formula> kids;

    static Formula truth() { return Formula{}; }
    static Formula falsity() {
        Formula f;
        f.kind = Kind::False;
        return f;
    }
    static Formula atom(Polynomial p, Rel r) {
        Formula f;
        f.kind = Kind::Atom;
        f.poly = std::move(p);
        f.rel = r;
        return f;
    }
    static Formula conj(std::vector<Formula> kids);
    static Formula disj(std::vector<Formula> kids);
};

// Uninterpreted application bound to a leaf variable. Arguments are
// polynomials whose variables may themselves be registered leaves.
struct AppTerm {
    std::string symbol;
    std::vector<Polynomial> args;
};
using AppRegistry = std::map<std::string, AppTerm>;

// Constant folding plus true/false absorption; atoms with constant polynomials
// fold to True/False.
Formula simplify(const Formula& f);

// Variables of the formula with registry leaves expanded to the variables of
// their arguments; `symbols` collects the uninterpreted symbols used.
std::set<std::string> formula_vars(const Formula& f, const AppRegistry& reg,
                                   std::set<std::string>* symbols = nullptr);

std::string formula_str(const Formula& f, const AppRegistry& reg);
std::string poly_str_resolved(const Polynomial& p, const AppRegistry& reg);

// SMT-LIB term rendering of the formula (and/or/>/>= over polynomial terms).
std::string formula_smt(const Formula& f, const AppRegistry& reg);

} // namespace cqi
