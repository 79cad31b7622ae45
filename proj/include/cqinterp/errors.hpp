#pragma once

#include <stdexcept>
#include <string>

namespace cqi {

struct SolverInconclusive : std::runtime_error {
    explicit SolverInconclusive(const std::string& w) : std::runtime_error(w) {}
};
struct NotMutuallyContradictory : std::runtime_error {
    explicit NotMutuallyContradictory(const std::string& w) : std::runtime_error(w) {}
};
struct InternalInconsistency : std::runtime_error {
    explicit InternalInconsistency(const std::string& w) : std::runtime_error(w) {}
};
struct DnfBlowup : std::runtime_error {
    explicit DnfBlowup(const std::string& w) : std::runtime_error(w) {}
};
struct NonCqAtom : std::runtime_error {
    explicit NonCqAtom(const std::string& w) : std::runtime_error(w) {}
};
struct NonCqAfterFlattening : std::runtime_error {
    explicit NonCqAfterFlattening(const std::string& w) : std::runtime_error(w) {}
};
struct NonLinearEquality : std::runtime_error {
    explicit NonLinearEquality(const std::string& w) : std::runtime_error(w) {}
};
struct LpInfeasible : std::runtime_error {
    explicit LpInfeasible(const std::string& w) : std::runtime_error(w) {}
};
struct ParseError : std::runtime_error {
    ParseError(const std::string& w, int line, int col)
        : std::runtime_error(w + " at " + std::to_string(line) + ":" + std::to_string(col)),
          line(line), col(col) {}
    int line, col;
};

} // namespace cqi
