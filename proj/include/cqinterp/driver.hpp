#pragma once

#include "cqinterp/euf.hpp"
#include "cqinterp/parser.hpp"

namespace cqi {

struct ResultDocument {
    enum class Status { Interpolant, NotMutuallyContradictory, Inconclusive, Error } status{
        Status::Error};
    Formula interpolant;
    AppRegistry registry; // resolution of application leaves in the formula
    RecursionTrace trace;
    std::vector<LeafCertificate> leaf_certs;
    ValidationReport validation;
    std::string detail;
    double wall_ms{0};
};

ResultDocument run_problem(const ParsedProblem& problem, const RunConfig& cfg);

enum class EmitFormat { Text, Json, Smt };
std::string emit(const ResultDocument& doc, EmitFormat format, bool with_timing = false);

int exit_code(ResultDocument::Status s);

} // namespace cqi
