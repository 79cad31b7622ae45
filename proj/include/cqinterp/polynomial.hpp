#pragma once

#include "cqinterp/rational.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqi {

// Monomial: variable name -> positive exponent. Empty map is the constant 1.
using Monomial = std::map<std::string, int>;

int monomial_degree(const Monomial& m);

// Sparse multivariate polynomial with exact rational coefficients.
// Zero coefficients are never stored.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(const Rat& c);
    static Polynomial var(const std::string& name);
    static Polynomial constant(const Rat& c);

    const std::map<Monomial, Rat>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    bool is_constant() const;
    Rat constant_term() const;
    // Coefficient of an exact monomial (0 if absent).
    Rat coeff(const Monomial& m) const;

    std::set<std::string> vars() const;
    bool uses_only(const std::set<std::string>& allowed) const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Rat& c) const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return terms_ != o.terms_; }

    Rat evaluate(const std::map<std::string, Rat>& point) const;

    // Simultaneous substitution of variables by polynomials; variables not in
    // the map stay themselves. Exact.
    Polynomial substitute(const std::map<std::string, Polynomial>& sub) const;

    void add_term(const Monomial& m, const Rat& c);

    std::string str() const;

private:
    std::map<Monomial, Rat> terms_;
};

inline Polynomial operator*(const Rat& c, const Polynomial& p) { return p * c; }

} // namespace cqi
