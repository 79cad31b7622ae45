#pragma once

#include "cqinterp/rational.hpp"

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace cqi {

// Pure feasibility problems: PSD matrix blocks and scalar variables tied by
// affine equality constraints with exact rational coefficients.

struct SdpBlockVar {
    std::string name;
    int dim{0};
    bool slack_eligible{true}; // participates in the strict-feasibility slack
};

struct SdpScalarVar {
    std::string name;
    bool nonneg{true};
};

struct SdpTerm {
    enum class Kind { Scalar, BlockEntry } kind{Kind::Scalar};
    int index{0};   // scalar index, or block index
    int i{0}, j{0}; // entry (i <= j) for block terms
    Rat coeff{0};
};

struct SdpConstraint {
    std::vector<SdpTerm> terms;
    Rat rhs{0};
};

struct SdpProblem {
    std::vector<SdpBlockVar> blocks;
    std::vector<SdpScalarVar> scalars;
    std::vector<SdpConstraint> eq_constraints;

    int add_block(const std::string& name, int dim, bool slack_eligible = true);
    int add_scalar(const std::string& name, bool nonneg = true);
};

struct SolverConfig {
    int max_iter{20000};
    double feas_tol{1e-8};
    double infeas_margin{1e-6};
    // Strict-feasibility slack: blocks are solved as M' = M - tau*I >= 0 with
    // tau stepped down a fixed ladder from the cap until feasible.
    bool strict_slack{false};
    double slack_cap{1.0};
};

enum class SdpStatus { Feasible, Infeasible, Unknown };

struct SdpSolution {
    SdpStatus status{SdpStatus::Unknown};
    std::map<std::string, double> scalar_values;
    std::map<std::string, Eigen::MatrixXd> block_values;
    double residual{0};  // max equality violation at the reported point
    double min_eig{0};   // smallest block eigenvalue at the reported point
    double slack_tau{0}; // strict-feasibility margin achieved
    int iterations{0};
};

SdpSolution solve_sdp(const SdpProblem& prob, const SolverConfig& cfg);

} // namespace cqi
