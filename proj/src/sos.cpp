#include "cqinterp/sos.hpp"

#include <algorithm>

namespace cqi {

Polynomial SosDecomposition::reconstruct() const {
    Polynomial p(constant);
    for (auto& s : squares) p += s.form * s.form * s.coeff;
    return p;
}

namespace {

// State of the sequential elimination on the bordered Gram matrix. Index 0 is
// the constant row; indices 1..n follow `order`.
struct Elim {
    std::vector<std::string> order;
    SymMatrix s;
    std::vector<SosSquare> squares; // in elimination order
};

// Back-solves eliminated pivots so every recorded square vanishes, given an
// assignment of the still-live variables.
std::map<std::string, Rat> back_solve(const Elim& e, std::map<std::string, Rat> point) {
    for (auto it = e.squares.rbegin(); it != e.squares.rend(); ++it) {
        // form = pivot - l; set pivot := l(point).
        Polynomial l = Polynomial::var(it->pivot) - it->form;
        point[it->pivot] = l.evaluate(point);
    }
    return point;
}

std::map<std::string, Rat> zero_point(const Elim& e) {
    // Every variable starts at 0; back_solve overwrites eliminated pivots in
    // reverse order so each recorded square vanishes.
    std::map<std::string, Rat> pt;
    for (auto& v : e.order) pt[v] = 0;
    return pt;
}

} // namespace

SosResult complete_squares(const Polynomial& h, const std::vector<std::string>& order_in) {
    std::vector<std::string> order = order_in;
    {
        std::set<std::string> seen(order.begin(), order.end());
        for (auto& v : h.vars())
            if (!seen.count(v)) order.push_back(v);
    }
    QuadForm q = quadratic_form(h, order);
    int n = static_cast<int>(order.size());

    Elim e;
    e.order = order;
    e.s = p_matrix(q);
    std::vector<bool> live(n + 1, true);

    for (int k = 1; k <= n; ++k) {
        Rat d = e.s(k, k);
        if (d < 0) {
            // Negative square direction: walk the variable out along e_k.
            auto pt = zero_point(e);
            const std::string& v = order[k - 1];
            Rat b = e.s(k, 0), c = e.s(0, 0);
            Rat t(1);
            for (int guard = 0; guard < 512; ++guard) {
                pt[v] = t;
                if (d * t * t + 2 * b * t + c < 0) break;
                pt[v] = -t;
                if (d * t * t - 2 * b * t + c < 0) break;
                t *= 2;
            }
            return NotSos{back_solve(e, pt)};
        }
        if (d == 0) {
            // Zero diagonal: any coupling makes the form indefinite.
            int w = -1;
            for (int j = 0; j <= n; ++j)
                if (j != k && live[j] && e.s(k, j) != 0) { w = j; break; }
            if (w < 0) { live[k] = false; continue; } // variable absent, skip
            auto pt = zero_point(e);
            const std::string& v = order[k - 1];
            Rat lin, off;
            if (w == 0) {
                lin = 2 * e.s(k, 0);
                off = e.s(0, 0);
            } else {
                const std::string& u = order[w - 1];
                Rat sgn(1);
                if (e.s(k, w) + e.s(k, 0) == 0) sgn = -1; // avoid cancelled slope
                pt[u] = sgn;
                lin = 2 * (e.s(k, w) * sgn + e.s(k, 0));
                off = e.s(w, w) + 2 * e.s(w, 0) * sgn + e.s(0, 0);
            }
            Rat t = (abs(off) + 1) / abs(lin);
            pt[v] = (lin > 0) ? -t : t;
            return NotSos{back_solve(e, pt)};
        }
        // Positive pivot: extract d * (x_k + tail/d)^2 and form the Schur rest.
        Polynomial form = Polynomial::var(order[k - 1]);
        Polynomial tail(e.s(k, 0));
        for (int j = 1; j <= n; ++j)
            if (j != k && live[j] && e.s(k, j) != 0)
                tail += Polynomial::var(order[j - 1]) * e.s(k, j);
        form += tail * (1 / d);
        e.squares.push_back(SosSquare{d, form, order[k - 1]});
        for (int i = 0; i <= n; ++i) {
            if (i == k || !live[i]) continue;
            for (int j = i; j <= n; ++j) {
                if (j == k || !live[j]) continue;
                e.s.set(i, j, e.s(i, j) - e.s(k, i) * e.s(k, j) / d);
            }
        }
        live[k] = false;
    }

    Rat c = e.s(0, 0);
    if (c < 0) return NotSos{back_solve(e, zero_point(e))};
    SosDecomposition dec;
    dec.squares = std::move(e.squares);
    dec.constant = c;
    return dec;
}

SosResult check_sos_exact(const Polynomial& p) {
    if (p.degree() > 2) throw DegreeTooHigh("check_sos_exact: degree > 2");
    auto vs = p.vars();
    std::vector<std::string> order(vs.begin(), vs.end());
    return complete_squares(p, order);
}

SosSplit split_sos(const Polynomial& h,
                   const std::vector<std::string>& x,
                   const std::vector<std::string>& y,
                   const std::vector<std::string>& z) {
    for (auto& [m, c] : h.terms()) {
        if (m.size() != 2) continue;
        auto it = m.begin();
        const std::string& a = it->first;
        ++it;
        const std::string& b = it->first;
        bool ay = std::count(y.begin(), y.end(), a), az = std::count(z.begin(), z.end(), a);
        bool by = std::count(y.begin(), y.end(), b), bz = std::count(z.begin(), z.end(), b);
        if ((ay && bz) || (az && by))
            throw MixedTermPresent("split_sos: monomial " + a + "*" + b);
    }
    std::vector<std::string> order;
    order.insert(order.end(), y.begin(), y.end());
    order.insert(order.end(), z.begin(), z.end());
    order.insert(order.end(), x.begin(), x.end());
    auto res = complete_squares(h, order);
    auto* dec = std::get_if<SosDecomposition>(&res);
    if (!dec) throw std::invalid_argument("split_sos: input is not a sum of squares");

    std::set<std::string> yset(y.begin(), y.end()), zset(z.begin(), z.end());
    SosSplit out;
    for (auto& sq : dec->squares) {
        if (yset.count(sq.pivot)) {
            out.h1.squares.push_back(sq);
        } else if (zset.count(sq.pivot)) {
            out.h2.squares.push_back(sq);
        } else {
            SosSquare half = sq;
            half.coeff = sq.coeff / 2;
            out.h1.squares.push_back(half);
            out.h2.squares.push_back(half);
        }
    }
    out.h1.constant = dec->constant / 2;
    out.h2.constant = dec->constant / 2;
    return out;
}

} // namespace cqi
