#include "cqinterp/quadform.hpp"

#include <algorithm>

namespace cqi {

bool is_psd(const SymMatrix& m) {
    int n = m.dim();
    SymMatrix s = m;
    std::vector<int> live(n);
    for (int i = 0; i < n; ++i) live[i] = i;
    while (!live.empty()) {
        int pivot = -1;
        for (int i : live) {
            if (s(i, i) < 0) return false;
            if (pivot < 0 && s(i, i) > 0) pivot = i;
        }
        if (pivot < 0) {
            // All remaining diagonals are zero: PSD iff the rest is zero.
            for (int i : live)
                for (int j : live)
                    if (s(i, j) != 0) return false;
            return true;
        }
        Rat d = s(pivot, pivot);
        std::vector<int> rest;
        for (int i : live)
            if (i != pivot) rest.push_back(i);
        for (size_t a = 0; a < rest.size(); ++a) {
            for (size_t b = a; b < rest.size(); ++b) {
                int i = rest[a], j = rest[b];
                s.set(i, j, s(i, j) - s(pivot, i) * s(pivot, j) / d);
            }
        }
        live = std::move(rest);
    }
    return true;
}

Polynomial QuadForm::expand() const {
    Polynomial p(a);
    int n = static_cast<int>(vars.size());
    for (int i = 0; i < n; ++i) {
        if (alpha[i] != 0) p += Polynomial::var(vars[i]) * (2 * alpha[i]);
        for (int j = i; j < n; ++j) {
            Rat coef = (i == j) ? A(i, j) : 2 * A(i, j);
            if (coef != 0) p += Polynomial::var(vars[i]) * Polynomial::var(vars[j]) * coef;
        }
    }
    return p;
}

QuadForm quadratic_form(const Polynomial& p, const std::vector<std::string>& vars) {
    int n = static_cast<int>(vars.size());
    std::map<std::string, int> index;
    for (int i = 0; i < n; ++i) index[vars[i]] = i;

    QuadForm q;
    q.vars = vars;
    q.A = SymMatrix(n);
    q.alpha.assign(n, Rat(0));
    q.a = 0;

    for (auto& [m, c] : p.terms()) {
        int deg = monomial_degree(m);
        if (deg > 2) throw DegreeTooHigh("quadratic_form: degree " + std::to_string(deg));
        for (auto& [v, e] : m)
            if (!index.count(v)) throw UnknownVariable("quadratic_form: " + v);
        if (deg == 0) {
            q.a += c;
        } else if (deg == 1) {
            int i = index[m.begin()->first];
            q.alpha[i] += c / 2;
        } else if (m.size() == 1) { // x_i^2
            int i = index[m.begin()->first];
            q.A.add(i, i, c);
        } else { // x_i x_j, i != j
            auto it = m.begin();
            int i = index[it->first];
            ++it;
            int j = index[it->first];
            q.A.add(i, j, c / 2);
        }
    }
    return q;
}

bool is_cq(const QuadForm& q, const Rat&) {
    int n = q.A.dim();
    SymMatrix neg(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) neg.set(i, j, -q.A(i, j));
    return is_psd(neg);
}

SymMatrix p_matrix(const QuadForm& q) {
    int n = q.A.dim();
    SymMatrix p(n + 1);
    p.set(0, 0, q.a);
    for (int i = 0; i < n; ++i) {
        p.set(0, i + 1, q.alpha[i]);
        for (int j = i; j < n; ++j) p.set(i + 1, j + 1, q.A(i, j));
    }
    return p;
}

Rat bordered_inner(const SymMatrix& p, const std::vector<Rat>& x) {
    int n = p.dim() - 1;
    std::vector<Rat> w(n + 1);
    w[0] = 1;
    for (int i = 0; i < n; ++i) w[i + 1] = x[i];
    Rat total(0);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) total += p(i, j) * w[i] * w[j];
    total.canonicalize();
    return total;
}

} // namespace cqi
