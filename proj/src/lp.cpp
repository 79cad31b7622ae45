#include "cqinterp/lp.hpp"

#include <algorithm>
#include <cassert>

namespace cqi {

int LpProblem::add_var(const std::string& name, bool is_free) {
    vars.push_back(name);
    free_var.resize(vars.size(), false);
    free_var.back() = is_free;
    return static_cast<int>(vars.size()) - 1;
}

namespace {

// Full-tableau exact simplex, maximization, Bland's rule.
struct Tableau {
    int m{0}, n{0};                 // rows, columns (excluding rhs)
    std::vector<std::vector<Rat>> t; // m x (n+1), rhs last
    std::vector<Rat> r;              // reduced costs, length n
    Rat value{0};
    std::vector<int> basis;          // column basic in each row
    std::vector<bool> allowed;       // columns eligible to enter

    void pivot(int pi, int pj) {
        Rat d = t[pi][pj];
        for (auto& v : t[pi]) v /= d;
        for (int i = 0; i < m; ++i) {
            if (i == pi || t[i][pj] == 0) continue;
            Rat f = t[i][pj];
            for (int j = 0; j <= n; ++j) t[i][j] -= f * t[pi][j];
        }
        if (r[pj] != 0) {
            Rat f = r[pj];
            for (int j = 0; j < n; ++j) r[j] -= f * t[pi][j];
            value += f * t[pi][n];
        }
        basis[pi] = pj;
    }

    // Returns false when unbounded.
    bool optimize() {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < n; ++j)
                if (allowed[j] && r[j] > 0) { enter = j; break; }
            if (enter < 0) return true;
            int leave = -1;
            Rat best;
            for (int i = 0; i < m; ++i) {
                if (t[i][enter] <= 0) continue;
                Rat ratio = t[i][n] / t[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

} // namespace

LpSolution solve_lp(const LpProblem& prob) {
    int nv = static_cast<int>(prob.vars.size());
    std::map<std::string, int> vidx;
    for (int i = 0; i < nv; ++i) vidx[prob.vars[i]] = i;

    // Column layout: one column per var, plus a shadow column per free var,
    // plus one slack per inequality row, plus one artificial per row.
    std::vector<int> shadow(nv, -1);
    int ncols = nv;
    for (int i = 0; i < nv; ++i)
        if (i < static_cast<int>(prob.free_var.size()) && prob.free_var[i]) shadow[i] = ncols++;
    int m = static_cast<int>(prob.constraints.size());
    int slack0 = ncols;
    int nslack = 0;
    for (auto& c : prob.constraints)
        if (c.rel != LpRel::Eq) ++nslack;
    ncols += nslack;
    int art0 = ncols;
    ncols += m;

    Tableau tb;
    tb.m = m;
    tb.n = ncols;
    tb.t.assign(m, std::vector<Rat>(ncols + 1, Rat(0)));
    tb.r.assign(ncols, Rat(0));
    tb.basis.assign(m, -1);
    tb.allowed.assign(ncols, true);

    std::vector<Rat> row_sign(m, Rat(1));
    int si = slack0;
    for (int k = 0; k < m; ++k) {
        const LpConstraint& c = prob.constraints[k];
        // Orient as <=, then as equality with slack.
        Rat orient = (c.rel == LpRel::Ge) ? Rat(-1) : Rat(1);
        for (auto& [name, coef] : c.terms) {
            auto it = vidx.find(name);
            if (it == vidx.end()) throw std::invalid_argument("solve_lp: unknown var " + name);
            tb.t[k][it->second] += orient * coef;
            if (shadow[it->second] >= 0) tb.t[k][shadow[it->second]] -= orient * coef;
        }
        tb.t[k][ncols] = orient * c.rhs;
        if (c.rel != LpRel::Eq) tb.t[k][si++] = 1;
        if (tb.t[k][ncols] < 0) {
            for (int j = 0; j <= ncols; ++j) tb.t[k][j] = -tb.t[k][j];
            row_sign[k] = -1;
        }
        tb.t[k][art0 + k] = 1;
        tb.basis[k] = art0 + k;
        for (auto& v : tb.t[k]) v.canonicalize();
    }

    // Phase 1: maximize -(sum of artificials).
    for (int k = 0; k < m; ++k)
        for (int j = 0; j <= ncols; ++j) {
            if (j < ncols) tb.r[j] += tb.t[k][j];
            else tb.value -= tb.t[k][j];
        }
    for (int k = 0; k < m; ++k) tb.r[art0 + k] -= 1; // c_art = -1, r = c + sum rows
    tb.optimize();

    LpSolution sol;
    if (tb.value < 0) {
        sol.status = LpStatus::Infeasible;
        // y_i = -1 - r_art_i; user multiplier is y_i times the row orientation.
        sol.farkas.resize(m);
        for (int k = 0; k < m; ++k) {
            Rat y = Rat(-1) - tb.r[art0 + k];
            Rat orient = (prob.constraints[k].rel == LpRel::Ge) ? Rat(-1) : Rat(1);
            sol.farkas[k] = y * row_sign[k] * orient;
        }
        return sol;
    }

    // Drive leftover artificials out of the basis; drop redundant rows.
    for (int i = 0; i < m; ++i) {
        if (tb.basis[i] < art0) continue;
        int col = -1;
        for (int j = 0; j < art0; ++j)
            if (tb.t[i][j] != 0) { col = j; break; }
        if (col >= 0) tb.pivot(i, col);
    }
    for (int j = art0; j < ncols; ++j) tb.allowed[j] = false;

    auto extract_point = [&]() {
        std::map<std::string, Rat> pt;
        for (int i = 0; i < nv; ++i) pt[prob.vars[i]] = 0;
        for (int k = 0; k < m; ++k) {
            int b = tb.basis[k];
            if (b < nv) pt[prob.vars[b]] += tb.t[k][ncols];
        }
        for (int i = 0; i < nv; ++i) {
            if (shadow[i] < 0) continue;
            for (int k = 0; k < m; ++k)
                if (tb.basis[k] == shadow[i]) pt[prob.vars[i]] -= tb.t[k][ncols];
        }
        return pt;
    };

    if (prob.objective.empty()) {
        sol.status = LpStatus::Feasible;
        sol.point = extract_point();
        return sol;
    }

    // Phase 2.
    std::vector<Rat> cost(ncols, Rat(0));
    for (auto& [name, coef] : prob.objective) {
        auto it = vidx.find(name);
        if (it == vidx.end()) throw std::invalid_argument("solve_lp: unknown objective var " + name);
        cost[it->second] += coef;
        if (shadow[it->second] >= 0) cost[shadow[it->second]] -= coef;
    }
    std::fill(tb.r.begin(), tb.r.end(), Rat(0));
    tb.value = 0;
    for (int j = 0; j < ncols; ++j) tb.r[j] = cost[j];
    for (int k = 0; k < m; ++k) {
        int b = tb.basis[k];
        if (cost[b] == 0) continue;
        Rat f = cost[b];
        for (int j = 0; j < ncols; ++j) tb.r[j] -= f * tb.t[k][j];
        tb.value += f * tb.t[k][ncols];
    }
    bool bounded = tb.optimize();
    if (!bounded) {
        sol.status = LpStatus::Unbounded;
        sol.point = extract_point();
        return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.point = extract_point();
    sol.objective = tb.value;
    return sol;
}

namespace {

void add_poly_row(LpProblem& lp, const Polynomial& p, LpRel rel, const Rat& rhs_shift,
                  const std::set<std::string>& declared) {
    LpConstraint c;
    c.rel = rel;
    Rat rhs = rhs_shift - p.constant_term();
    for (auto& [m, coef] : p.terms()) {
        if (m.empty()) continue;
        if (monomial_degree(m) != 1)
            throw std::invalid_argument("linear system row is not affine: " + p.str());
        const std::string& v = m.begin()->first;
        if (!declared.count(v))
            throw std::invalid_argument("linear system: undeclared var " + v);
        c.terms.emplace_back(v, coef);
    }
    c.rhs = rhs;
    lp.constraints.push_back(std::move(c));
}

std::set<std::string> system_vars(const LinearSystem& sys, const Polynomial* extra = nullptr) {
    std::set<std::string> vs;
    for (auto& p : sys.nonstrict)
        for (auto& v : p.vars()) vs.insert(v);
    for (auto& p : sys.strict)
        for (auto& v : p.vars()) vs.insert(v);
    if (extra)
        for (auto& v : extra->vars()) vs.insert(v);
    return vs;
}

} // namespace

std::optional<Rat> linear_sup(const LinearSystem& sys, const Polynomial& t, bool& infeasible) {
    infeasible = false;
    auto vs = system_vars(sys, &t);
    LpProblem lp;
    for (auto& v : vs) lp.add_var(v, /*is_free=*/true);
    for (auto& p : sys.nonstrict) add_poly_row(lp, p, LpRel::Ge, Rat(0), vs);
    for (auto& p : sys.strict) add_poly_row(lp, p, LpRel::Ge, Rat(0), vs);
    for (auto& [m, coef] : t.terms())
        if (!m.empty()) lp.objective.emplace_back(m.begin()->first, coef);
    LpSolution s = solve_lp(lp);
    if (s.status == LpStatus::Infeasible) {
        infeasible = true;
        return Rat(0);
    }
    if (s.status == LpStatus::Unbounded) return std::nullopt;
    return s.objective + t.constant_term();
}

bool linear_feasible(const LinearSystem& sys) {
    auto vs = system_vars(sys);
    LpProblem lp;
    for (auto& v : vs) lp.add_var(v, /*is_free=*/true);
    lp.add_var("@gap", /*is_free=*/false);
    for (auto& p : sys.nonstrict) add_poly_row(lp, p, LpRel::Ge, Rat(0), vs);
    for (auto& p : sys.strict) {
        add_poly_row(lp, p, LpRel::Ge, Rat(0), vs);
        lp.constraints.back().terms.emplace_back("@gap", Rat(-1));
    }
    LpConstraint cap;
    cap.terms.emplace_back("@gap", Rat(1));
    cap.rel = LpRel::Le;
    cap.rhs = 1;
    lp.constraints.push_back(cap);
    lp.objective.emplace_back("@gap", Rat(1));
    LpSolution s = solve_lp(lp);
    if (s.status == LpStatus::Infeasible) return false;
    if (sys.strict.empty()) return true;
    return s.status == LpStatus::Optimal && s.objective > 0;
}

bool linear_entails_eq(const LinearSystem& sys, const Polynomial& p) {
    bool inf = false;
    auto hi = linear_sup(sys, p, inf);
    if (inf) return true;
    if (!hi || *hi > 0) return false;
    auto lo = linear_sup(sys, -p, inf);
    if (inf) return true;
    return lo && *lo <= 0;
}

std::optional<LinearRefutation> linear_refute(const LinearSystem& sys) {
    // Multiplier feasibility problem from the transposition theorem.
    LpProblem lp;
    size_t r = sys.nonstrict.size(), s = sys.strict.size();
    for (size_t i = 0; i < r; ++i) lp.add_var("l" + std::to_string(i));
    lp.add_var("e0");
    for (size_t j = 0; j < s; ++j) lp.add_var("e" + std::to_string(j + 1));

    auto vs = system_vars(sys);
    for (auto& v : vs) {
        LpConstraint c;
        c.rel = LpRel::Eq;
        c.rhs = 0;
        Monomial mv{{v, 1}};
        for (size_t i = 0; i < r; ++i) {
            Rat k = sys.nonstrict[i].coeff(mv);
            if (k != 0) c.terms.emplace_back("l" + std::to_string(i), k);
        }
        for (size_t j = 0; j < s; ++j) {
            Rat k = sys.strict[j].coeff(mv);
            if (k != 0) c.terms.emplace_back("e" + std::to_string(j + 1), k);
        }
        lp.constraints.push_back(std::move(c));
    }
    {
        LpConstraint c;
        c.rel = LpRel::Eq;
        c.rhs = 0;
        for (size_t i = 0; i < r; ++i) {
            Rat k = sys.nonstrict[i].constant_term();
            if (k != 0) c.terms.emplace_back("l" + std::to_string(i), k);
        }
        for (size_t j = 0; j < s; ++j) {
            Rat k = sys.strict[j].constant_term();
            if (k != 0) c.terms.emplace_back("e" + std::to_string(j + 1), k);
        }
        c.terms.emplace_back("e0", Rat(1));
        lp.constraints.push_back(std::move(c));
    }
    {
        LpConstraint c;
        c.rel = LpRel::Eq;
        c.rhs = 1;
        c.terms.emplace_back("e0", Rat(1));
        for (size_t j = 0; j < s; ++j) c.terms.emplace_back("e" + std::to_string(j + 1), Rat(1));
        lp.constraints.push_back(std::move(c));
    }
    LpSolution s2 = solve_lp(lp);
    if (s2.status == LpStatus::Infeasible) return std::nullopt;
    LinearRefutation out;
    for (size_t i = 0; i < r; ++i) out.lambda.push_back(s2.point["l" + std::to_string(i)]);
    out.eta.push_back(s2.point["e0"]);
    for (size_t j = 0; j < s; ++j) out.eta.push_back(s2.point["e" + std::to_string(j + 1)]);
    return out;
}

} // namespace cqi
