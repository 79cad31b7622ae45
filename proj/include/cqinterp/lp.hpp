#pragma once

#include "cqinterp/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cqi {

// Exact rational LP. Variables are named; nonnegative unless marked free.
// Constraints are affine rows sum(coeff_i * var_i) rel rhs.

enum class LpRel { Le, Ge, Eq };

struct LpConstraint {
    std::vector<std::pair<std::string, Rat>> terms;
    LpRel rel{LpRel::Eq};
    Rat rhs{0};
};

struct LpProblem {
    std::vector<std::string> vars;
    std::vector<bool> free_var; // parallel to vars; default nonnegative
    std::vector<LpConstraint> constraints;
    // objective: maximize sum(obj_i * var_i); empty = pure feasibility
    std::vector<std::pair<std::string, Rat>> objective;

    int add_var(const std::string& name, bool is_free = false);
};

enum class LpStatus { Optimal, Feasible, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status{LpStatus::Infeasible};
    std::map<std::string, Rat> point;
    Rat objective{0};
    // Infeasible: multipliers y per constraint (>= 0 on inequality rows after
    // orienting them as <=; free sign on equality rows) with
    //   sum_i y_i * row_i being the contradiction 0 <= c, c < 0.
    std::vector<Rat> farkas;
};

// Deterministic (Bland's rule) exact simplex.
LpSolution solve_lp(const LpProblem& prob);

// Entailment of a linear inequality / equality over a polyhedron given by
// affine polynomial constraints p >= 0 (strict flags respected: the premise
// set is used in its nonstrict relaxation, which is sound for entailment).
struct LinearSystem {
    std::vector<Polynomial> nonstrict; // p >= 0
    std::vector<Polynomial> strict;    // p > 0
};

// sup { t(x) : x satisfies sys (relaxed) }; nullopt if unbounded above,
// Infeasible reported via `infeasible`.
std::optional<Rat> linear_sup(const LinearSystem& sys, const Polynomial& t, bool& infeasible);

// sys (with strictness) has a solution? Exact: maximizes a gap variable on the
// strict rows.
bool linear_feasible(const LinearSystem& sys);

// sys entails p == 0.
bool linear_entails_eq(const LinearSystem& sys, const Polynomial& p);

// Motzkin-style refutation of {nonstrict >= 0, strict > 0}: multipliers
// lambda, eta >= 0 and eta0 >= 0 with
//   sum lambda_i ns_i + sum eta_j st_j + eta0 == 0  and  sum eta_j + eta0 = 1.
// Exists iff the system is infeasible (all affine). Returns nullopt otherwise.
struct LinearRefutation {
    std::vector<Rat> lambda;
    std::vector<Rat> eta; // eta[0] is eta0, then one per strict row
};
std::optional<LinearRefutation> linear_refute(const LinearSystem& sys);

} // namespace cqi
