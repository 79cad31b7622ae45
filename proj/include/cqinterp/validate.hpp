#pragma once

#include "cqinterp/certificate.hpp"

#include <cstdint>

namespace cqi {

// Raw (pre-purification) conjunctions: polynomial atoms over variables and
// registered application leaves, with >=, >, or linear = relations.
enum class AtomRel { Ge, Gt, Eq };

struct RawConjunct {
    Polynomial p;
    AtomRel rel{AtomRel::Ge}; // p >= 0, p > 0, p = 0
};

struct RawSystem {
    std::vector<RawConjunct> atoms;

    std::set<std::string> vars(const AppRegistry& reg, std::set<std::string>* symbols = nullptr) const;
};

// Random interpretation of the uninterpreted symbols: per symbol a coefficient
// table c0 + sum c_i t_i + sum d_i t_i^2 with exact rational entries.
struct UfInterpretation {
    struct Table {
        Rat c0;
        std::vector<Rat> lin, quad;
    };
    std::map<std::string, Table> tables;

    static UfInterpretation random(const std::map<std::string, int>& arities, std::uint64_t seed);
};

// Exact evaluation with registry leaves resolved through the interpretation.
Rat eval_ext(const Polynomial& p, const std::map<std::string, Rat>& point, const AppRegistry& reg,
             const UfInterpretation& interp);

bool eval_formula(const Formula& f, const std::map<std::string, Rat>& point,
                  const AppRegistry& reg, const UfInterpretation& interp);

struct ValidateOptions {
    int n_samples{10000};
    int n_boundary{1000};
    long box{10};
    std::uint64_t seed{0};
    int uf_interpretations{1};
};

// Sampling validation of a candidate interpolant: looks for points refuting
// phi |= I or sat(I and psi); checks the symbol scope syntactically. Equality
// atoms are solved into definitions where possible so sampling is not vacuous.
ValidationReport validate_interpolant(const RawSystem& phi, const RawSystem& psi,
                                      const Formula& interpolant, const AppRegistry& reg,
                                      const std::set<std::string>& common_vars,
                                      const std::set<std::string>& common_symbols,
                                      const std::map<std::string, int>& arities,
                                      const ValidateOptions& opt);

} // namespace cqi
