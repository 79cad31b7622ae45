#pragma once

#include "cqinterp/problem.hpp"
#include "cqinterp/sos.hpp"

#include <optional>

namespace cqi {

// Exact proof object for the base-case identity
//   sum lambda_i f_i + sum_{j>=1} eta_j g_j + eta_0 + h1 + h2 == 0,
//   lambda, eta >= 0,  sum_{j>=0} eta_j = 1,
// with h1 an SOS over x∪y and h2 an SOS over x∪z.
struct Certificate {
    std::vector<Rat> lambda; // per f (phi nonstricts, then psi nonstricts)
    std::vector<Rat> eta;    // eta[0], then per g (phi stricts, then psi stricts)
    SosDecomposition h1, h2;

    Rat eta_phi_mass(size_t s1) const; // eta_0 + phi-side strict weights
};

struct ValidationReport {
    bool certificate_ok{false};
    bool symbol_scope_ok{false};
    std::optional<std::map<std::string, Rat>> sampling_counterexample;
    std::string detail;
};

ValidationReport verify_certificate(const ProblemPair& pair, const Certificate& cert);

} // namespace cqi
