#pragma once

#include "cqinterp/polynomial.hpp"

#include <optional>
#include <vector>

namespace cqi {

// Dense symmetric matrix with exact rational entries.
class SymMatrix {
public:
    SymMatrix() : dim_(0) {}
    explicit SymMatrix(int dim) : dim_(dim), e_(static_cast<size_t>(dim) * dim, Rat(0)) {}

    int dim() const { return dim_; }
    const Rat& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * dim_ + j]; }
    void set(int i, int j, const Rat& v) {
        Rat vv = v;
        vv.canonicalize();
        e_[static_cast<size_t>(i) * dim_ + j] = vv;
        e_[static_cast<size_t>(j) * dim_ + i] = vv;
    }
    void add(int i, int j, const Rat& v) {
        set(i, j, (*this)(i, j) + v);
    }
    Rat trace() const {
        Rat t(0);
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }
    bool operator==(const SymMatrix& o) const { return dim_ == o.dim_ && e_ == o.e_; }

private:
    int dim_;
    std::vector<Rat> e_;
};

// Exact PSD test by Schur-complement elimination on positive pivots.
bool is_psd(const SymMatrix& m);

// Degree-<=2 polynomial as x^T A x + 2 a^T x + c over an ordered variable list.
// Off-diagonal monomial x_i x_j with coefficient k contributes A_ij = A_ji = k/2;
// linear coefficient k of x_i gives alpha_i = k/2.
struct QuadForm {
    std::vector<std::string> vars; // length n
    SymMatrix A;                   // n x n
    std::vector<Rat> alpha;        // length n
    Rat a;                         // constant

    Polynomial expand() const;
};

struct DegreeTooHigh : std::runtime_error {
    explicit DegreeTooHigh(const std::string& w) : std::runtime_error(w) {}
};
struct UnknownVariable : std::runtime_error {
    explicit UnknownVariable(const std::string& w) : std::runtime_error(w) {}
};

QuadForm quadratic_form(const Polynomial& p, const std::vector<std::string>& vars);

// Concavity test: -A positive semidefinite, decided exactly. The tolerance is
// only meaningful for float-valued matrices coming out of the numeric solver
// (see sdp.hpp); the rational path ignores it.
bool is_cq(const QuadForm& q, const Rat& tol = Rat(0));

// Bordered (n+1)x(n+1) Gram matrix P = [[a, alpha^T], [alpha, A]].
SymMatrix p_matrix(const QuadForm& q);

// <P, [[1, x^T], [x, x x^T]]> = p(x); used as the evaluation oracle in tests.
Rat bordered_inner(const SymMatrix& p, const std::vector<Rat>& x);

} // namespace cqi
