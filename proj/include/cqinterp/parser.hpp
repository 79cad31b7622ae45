#pragma once

#include "cqinterp/validate.hpp"

#include <istream>

namespace cqi {

// S-expression problem files (SMT-LIB-2 flavored):
//   (declare-fun x () Real)            real variable
//   (declare-fun alpha (Real Real) Real)  uninterpreted symbol, arity 2
//   (assert-A (>= p q)) / (assert-B (> p q)) / (= p q) for linear equalities
// Terms: rational/decimal literals, +, -, *, (/ p q), and applications.
struct ParsedProblem {
    std::vector<std::string> vars; // declaration order
    std::map<std::string, int> uf_arities;
    RawSystem phi, psi;
    AppRegistry registry; // application leaves used by the raw atoms

    bool has_uf() const { return !registry.empty(); }
};

ParsedProblem parse_problem(std::istream& in);
ParsedProblem parse_problem_string(const std::string& text);
ParsedProblem parse_problem_file(const std::string& path);

// Parser for the human-readable interpolant syntax emitted by formula_str
// (used for round-trip checks): atoms `poly > 0` / `poly >= 0` joined by
// `and` / `or` with parentheses, polynomials with +, -, *, ^ and symbol(args).
struct ParsedFormula {
    Formula formula;
    AppRegistry registry;
};
ParsedFormula parse_interpolant_text(const std::string& text);

} // namespace cqi
