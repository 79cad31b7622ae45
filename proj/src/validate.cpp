#include "cqinterp/validate.hpp"

#include <algorithm>
#include <random>

namespace cqi {

namespace {

void collect_vars(const Polynomial& p, const AppRegistry& reg, std::set<std::string>& vars,
                  std::set<std::string>* symbols, int depth = 0) {
    if (depth > 64) throw std::runtime_error("registry cycle");
    for (auto& v : p.vars()) {
        auto it = reg.find(v);
        if (it == reg.end()) {
            vars.insert(v);
        } else {
            if (symbols) symbols->insert(it->second.symbol);
            for (auto& a : it->second.args) collect_vars(a, reg, vars, symbols, depth + 1);
        }
    }
}

} // namespace

std::set<std::string> RawSystem::vars(const AppRegistry& reg, std::set<std::string>* symbols) const {
    std::set<std::string> out;
    for (auto& a : atoms) collect_vars(a.p, reg, out, symbols);
    return out;
}

UfInterpretation UfInterpretation::random(const std::map<std::string, int>& arities,
                                          std::uint64_t seed) {
    UfInterpretation out;
    std::seed_seq seq{seed, std::uint64_t(0xf0f0)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<long> num(-6, 6);
    for (auto& [sym, arity] : arities) {
        Table t;
        t.c0 = Rat(num(rng), 2);
        t.c0.canonicalize();
        for (int k = 0; k < arity; ++k) {
            Rat l(num(rng), 2), q(num(rng), 4);
            l.canonicalize();
            q.canonicalize();
            t.lin.push_back(l);
            t.quad.push_back(q);
        }
        out.tables[sym] = t;
    }
    return out;
}

namespace {

Rat eval_leaf(const AppTerm& app, const std::map<std::string, Rat>& point, const AppRegistry& reg,
              const UfInterpretation& interp, int depth);

Rat eval_poly(const Polynomial& p, const std::map<std::string, Rat>& point, const AppRegistry& reg,
              const UfInterpretation& interp, int depth) {
    Rat total(0);
    for (auto& [m, c] : p.terms()) {
        Rat t = c;
        for (auto& [v, e] : m) {
            Rat base;
            auto pit = point.find(v);
            if (pit != point.end()) {
                base = pit->second;
            } else {
                auto rit = reg.find(v);
                if (rit == reg.end())
                    throw std::invalid_argument("eval: unbound variable " + v);
                base = eval_leaf(rit->second, point, reg, interp, depth + 1);
            }
            for (int k = 0; k < e; ++k) t *= base;
        }
        total += t;
    }
    total.canonicalize();
    return total;
}

Rat eval_leaf(const AppTerm& app, const std::map<std::string, Rat>& point, const AppRegistry& reg,
              const UfInterpretation& interp, int depth) {
    if (depth > 64) throw std::runtime_error("registry cycle");
    auto it = interp.tables.find(app.symbol);
    if (it == interp.tables.end())
        throw std::invalid_argument("eval: no interpretation for symbol " + app.symbol);
    const auto& tab = it->second;
    Rat out = tab.c0;
    for (size_t k = 0; k < app.args.size(); ++k) {
        Rat a = eval_poly(app.args[k], point, reg, interp, depth + 1);
        out += tab.lin[k] * a + tab.quad[k] * a * a;
    }
    out.canonicalize();
    return out;
}

} // namespace

Rat eval_ext(const Polynomial& p, const std::map<std::string, Rat>& point, const AppRegistry& reg,
             const UfInterpretation& interp) {
    return eval_poly(p, point, reg, interp, 0);
}

bool eval_formula(const Formula& f, const std::map<std::string, Rat>& point,
                  const AppRegistry& reg, const UfInterpretation& interp) {
    switch (f.kind) {
    case Formula::Kind::True:
        return true;
    case Formula::Kind::False:
        return false;
    case Formula::Kind::Atom: {
        Rat v = eval_ext(f.poly, point, reg, interp);
        return f.rel == Rel::Gt ? v > 0 : v >= 0;
    }
    case Formula::Kind::And:
        for (auto& k : f.kids)
            if (!eval_formula(k, point, reg, interp)) return false;
        return true;
    case Formula::Kind::Or:
        for (auto& k : f.kids)
            if (eval_formula(k, point, reg, interp)) return true;
        return false;
    }
    return false;
}

namespace {

// Equality atoms that are linear in some variable become definitions so random
// sampling can satisfy them; the rest stay as exact checks.
struct SamplingSystem {
    struct Def {
        std::string var;
        Polynomial rhs; // var := rhs / coef ... stored already solved
    };
    std::vector<Def> defs;
    std::vector<RawConjunct> checks;
    std::set<std::string> free_vars;
};

SamplingSystem prepare(const RawSystem& sys, const AppRegistry& reg) {
    SamplingSystem out;
    std::set<std::string> all = sys.vars(reg, nullptr);
    std::set<std::string> defined;
    std::vector<RawConjunct> eqs, rest;
    for (auto& a : sys.atoms)
        (a.rel == AtomRel::Eq ? eqs : rest).push_back(a);

    bool progress = true;
    std::vector<bool> used(eqs.size(), false);
    while (progress) {
        progress = false;
        for (size_t k = 0; k < eqs.size(); ++k) {
            if (used[k]) continue;
            const Polynomial& p = eqs[k].p;
            // Pick the first variable occurring linearly with rational
            // coefficient and not yet defined; its value is determined by the
            // others (leaves allowed: they are evaluated from the point).
            std::string pick;
            Rat coef;
            for (auto& [m, c] : p.terms()) {
                if (m.size() != 1 || m.begin()->second != 1) continue;
                const std::string& v = m.begin()->first;
                if (reg.count(v)) continue; // application leaf, not solvable
                if (defined.count(v)) continue;
                // v must not occur in any other monomial of p
                bool elsewhere = false;
                for (auto& [m2, c2] : p.terms()) {
                    if (m2 == m) continue;
                    if (m2.count(v)) elsewhere = true;
                }
                if (elsewhere) continue;
                pick = v;
                coef = c;
                break;
            }
            if (pick.empty()) continue;
            // v = -(p - coef*v)/coef
            Polynomial rest_p = p;
            rest_p.add_term(Monomial{{pick, 1}}, -coef);
            Polynomial rhs = rest_p * (Rat(-1) / coef);
            out.defs.push_back({pick, rhs});
            defined.insert(pick);
            used[k] = true;
            progress = true;
        }
    }
    for (size_t k = 0; k < eqs.size(); ++k)
        if (!used[k]) out.checks.push_back(eqs[k]);
    for (auto& a : rest) out.checks.push_back(a);
    for (auto& v : all)
        if (!defined.count(v)) out.free_vars.insert(v);
    return out;
}

// Defined variables may depend on each other; resolve by fixpoint iteration in
// definition order (cycles surface as unbound-variable errors).
bool extend_point(const SamplingSystem& sys, std::map<std::string, Rat>& point,
                  const AppRegistry& reg, const UfInterpretation& interp) {
    for (int round = 0; round < 8; ++round) {
        bool all_ok = true;
        for (auto& d : sys.defs) {
            try {
                point[d.var] = eval_poly(d.rhs, point, reg, interp, 0);
            } catch (const std::invalid_argument&) {
                all_ok = false;
            }
        }
        if (all_ok) return true;
    }
    return false;
}

bool holds(const SamplingSystem& sys, const std::map<std::string, Rat>& point,
           const AppRegistry& reg, const UfInterpretation& interp) {
    for (auto& a : sys.checks) {
        Rat v = eval_poly(a.p, point, reg, interp, 0);
        switch (a.rel) {
        case AtomRel::Ge:
            if (!(v >= 0)) return false;
            break;
        case AtomRel::Gt:
            if (!(v > 0)) return false;
            break;
        case AtomRel::Eq:
            if (v != 0) return false;
            break;
        }
    }
    return true;
}

} // namespace

ValidationReport validate_interpolant(const RawSystem& phi, const RawSystem& psi,
                                      const Formula& interpolant, const AppRegistry& reg,
                                      const std::set<std::string>& common_vars,
                                      const std::set<std::string>& common_symbols,
                                      const std::map<std::string, int>& arities,
                                      const ValidateOptions& opt) {
    ValidationReport rep;
    rep.certificate_ok = true; // not this check's concern

    std::set<std::string> isyms;
    auto ivars = formula_vars(interpolant, reg, &isyms);
    rep.symbol_scope_ok = std::includes(common_vars.begin(), common_vars.end(), ivars.begin(),
                                        ivars.end()) &&
                          std::includes(common_symbols.begin(), common_symbols.end(),
                                        isyms.begin(), isyms.end());
    if (!rep.symbol_scope_ok) rep.detail = "interpolant mentions non-common symbols";

    SamplingSystem sphi = prepare(phi, reg);
    SamplingSystem spsi = prepare(psi, reg);
    std::set<std::string> free_vars = sphi.free_vars;
    free_vars.insert(spsi.free_vars.begin(), spsi.free_vars.end());

    int n_interp = std::max(1, arities.empty() ? 1 : opt.uf_interpretations);

    auto test_point = [&](std::map<std::string, Rat> pt, const UfInterpretation& interp) -> bool {
        // returns false when a counterexample was recorded
        std::map<std::string, Rat> p1 = pt;
        if (extend_point(sphi, p1, reg, interp) && holds(sphi, p1, reg, interp)) {
            if (!eval_formula(interpolant, p1, reg, interp)) {
                rep.sampling_counterexample = p1;
                rep.detail = "phi point violates the interpolant";
                return false;
            }
        }
        std::map<std::string, Rat> p2 = pt;
        if (extend_point(spsi, p2, reg, interp) && holds(spsi, p2, reg, interp)) {
            if (eval_formula(interpolant, p2, reg, interp)) {
                rep.sampling_counterexample = p2;
                rep.detail = "interpolant point satisfies psi";
                return false;
            }
        }
        return true;
    };

    for (int t = 0; t < n_interp; ++t) {
        UfInterpretation interp =
            arities.empty() ? UfInterpretation{}
                            : UfInterpretation::random(arities, opt.seed + 17 * t + 1);
        std::seed_seq seq{opt.seed, std::uint64_t(t), std::uint64_t(0xbeef)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<long> num(-opt.box * 64, opt.box * 64);

        int nsamp = std::max(1, opt.n_samples / n_interp);
        for (int k = 0; k < nsamp; ++k) {
            std::map<std::string, Rat> pt;
            for (auto& v : free_vars) {
                Rat r(num(rng), 64);
                r.canonicalize();
                pt[v] = r;
            }
            if (!test_point(pt, interp)) return rep;
        }

        // Boundary-biased points: bisect a random atom's sign change along a
        // random segment (dyadic midpoints keep everything exact).
        std::vector<const RawConjunct*> batoms;
        for (auto& a : phi.atoms) batoms.push_back(&a);
        for (auto& a : psi.atoms) batoms.push_back(&a);
        int nbound = std::max(0, opt.n_boundary / n_interp);
        if (!batoms.empty() && !free_vars.empty()) {
            std::uniform_int_distribution<size_t> pick(0, batoms.size() - 1);
            for (int k = 0; k < nbound; ++k) {
                const Polynomial& target = batoms[pick(rng)]->p;
                std::map<std::string, Rat> a, b;
                for (auto& v : free_vars) {
                    Rat r1(num(rng), 64), r2(num(rng), 64);
                    r1.canonicalize();
                    r2.canonicalize();
                    a[v] = r1;
                    b[v] = r2;
                }
                auto value_at = [&](const std::map<std::string, Rat>& pt) -> std::optional<Rat> {
                    std::map<std::string, Rat> full = pt;
                    if (!extend_point(sphi, full, reg, interp)) return std::nullopt;
                    if (!extend_point(spsi, full, reg, interp)) return std::nullopt;
                    try {
                        return eval_poly(target, full, reg, interp, 0);
                    } catch (const std::invalid_argument&) {
                        return std::nullopt;
                    }
                };
                auto va = value_at(a), vb = value_at(b);
                if (!va || !vb) continue;
                if ((*va > 0) == (*vb > 0)) continue;
                for (int step = 0; step < 24; ++step) {
                    std::map<std::string, Rat> mid;
                    for (auto& v : free_vars) {
                        Rat m = (a[v] + b[v]) / 2;
                        m.canonicalize();
                        mid[v] = m;
                    }
                    auto vm = value_at(mid);
                    if (!vm) break;
                    if ((*vm > 0) == (*va > 0)) {
                        a = mid;
                        va = vm;
                    } else {
                        b = mid;
                        vb = vm;
                    }
                }
                if (!test_point(a, interp)) return rep;
                if (!test_point(b, interp)) return rep;
            }
        }
    }
    return rep;
}

} // namespace cqi
