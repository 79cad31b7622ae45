#pragma once

#include "cqinterp/sdp.hpp"

#include <string>

namespace cqi {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& w) : std::runtime_error(w) {}
};
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& w) : std::runtime_error(w) {}
};

// Sparse SDPA (.dat-s) export of the feasibility problem in dual form:
// F_k := A_k, c_k := b_k, F_0 := 0, our variables = Y. PSD blocks first, then
// one diagonal block holding the scalars (free scalars split into two slots).
// Variable names ride along in comment lines so the problem round-trips.
void export_sdpa(const SdpProblem& prob, const std::string& path);

SdpProblem import_sdpa_problem(const std::string& path);

// Reads the standard sdpa output layout (the "yMat = {...}" section) and maps
// entries back to the problem's named blocks and scalars.
SdpSolution import_sdpa_solution(const std::string& path, const SdpProblem& prob);

// Writes a solution in the same layout (used for tests and for preparing
// solution files by other tools).
void export_sdpa_solution(const SdpSolution& sol, const SdpProblem& prob, const std::string& path);

} // namespace cqi
