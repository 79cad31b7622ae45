#include "cqinterp/euf.hpp"

#include <algorithm>

namespace cqi {

namespace {

struct FlattenCtx {
    const AppRegistry* parse_reg;
    PurifyResult* out;
    int fresh_counter{0};
    std::map<std::string, std::string> leaf_var; // parse leaf -> fresh variable
    std::map<std::string, int> leaf_sides;       // bit 0 phi, bit 1 psi
    std::vector<Polynomial> arg_eqs_phi, arg_eqs_psi, arg_eqs_both;

    std::string fresh(const std::string& stem) {
        return "@" + stem + std::to_string(fresh_counter++);
    }
};

void mark_leaf_sides(const Polynomial& p, const AppRegistry& reg, int side_bit,
                     std::map<std::string, int>& sides, int depth = 0) {
    if (depth > 64) throw std::runtime_error("registry cycle");
    for (auto& v : p.vars()) {
        auto it = reg.find(v);
        if (it == reg.end()) continue;
        sides[v] |= side_bit;
        for (auto& a : it->second.args) mark_leaf_sides(a, reg, side_bit, sides, depth + 1);
    }
}

std::string flatten_leaf(FlattenCtx& ctx, const std::string& leaf);

Polynomial flatten_poly(FlattenCtx& ctx, const Polynomial& p) {
    std::map<std::string, Polynomial> sub;
    for (auto& v : p.vars())
        if (ctx.parse_reg->count(v)) sub[v] = Polynomial::var(flatten_leaf(ctx, v));
    return sub.empty() ? p : p.substitute(sub);
}

std::string flatten_leaf(FlattenCtx& ctx, const std::string& leaf) {
    auto done = ctx.leaf_var.find(leaf);
    if (done != ctx.leaf_var.end()) return done->second;
    const AppTerm& app = ctx.parse_reg->at(leaf);
    int sides = ctx.leaf_sides.at(leaf);

    DefEntry entry;
    entry.symbol = app.symbol;
    AppTerm resolved;
    resolved.symbol = app.symbol;
    for (auto& argpoly : app.args) {
        Polynomial flat = flatten_poly(ctx, argpoly);
        if (flat.degree() > 1)
            throw NonCqAfterFlattening("nonlinear argument to " + app.symbol + ": " +
                                       argpoly.str());
        std::string argvar;
        auto vs = flat.vars();
        if (vs.size() == 1 && flat == Polynomial::var(*vs.begin())) {
            argvar = *vs.begin();
        } else {
            argvar = ctx.fresh("p");
            Polynomial eq = Polynomial::var(argvar) - flat;
            if (sides == 1) ctx.arg_eqs_phi.push_back(eq);
            else if (sides == 2) ctx.arg_eqs_psi.push_back(eq);
            else ctx.arg_eqs_both.push_back(eq);
        }
        entry.args.push_back(argvar);
        resolved.args.push_back(Polynomial::var(argvar));
    }
    std::string var = ctx.fresh("a");
    entry.var = var;
    entry.origin = sides == 1   ? DefEntry::Origin::Phi
                   : sides == 2 ? DefEntry::Origin::Psi
                                : DefEntry::Origin::Shared;
    ctx.out->defs.entries.push_back(entry);
    ctx.out->backsub[var] = resolved;
    ctx.leaf_var[leaf] = var;
    return var;
}

void push_atom(CqConjunction& side, const Polynomial& p, AtomRel rel) {
    switch (rel) {
    case AtomRel::Ge:
        side.atoms.push_back({p, false});
        break;
    case AtomRel::Gt:
        side.atoms.push_back({p, true});
        break;
    case AtomRel::Eq:
        if (p.degree() > 1) throw NonLinearEquality("nonlinear equality: " + p.str());
        side.atoms.push_back({p, false});
        side.atoms.push_back({-p, false});
        break;
    }
}

} // namespace

PurifyResult purify(const RawSystem& phi_raw, const RawSystem& psi_raw, const AppRegistry& reg,
                    const std::vector<std::string>& declared,
                    const std::map<std::string, int>& arities) {
    (void)arities;
    PurifyResult out;
    FlattenCtx ctx;
    ctx.parse_reg = &reg;
    ctx.out = &out;

    for (auto& a : phi_raw.atoms) mark_leaf_sides(a.p, reg, 1, ctx.leaf_sides);
    for (auto& a : psi_raw.atoms) mark_leaf_sides(a.p, reg, 2, ctx.leaf_sides);

    for (auto& a : phi_raw.atoms) push_atom(out.phi, flatten_poly(ctx, a.p), a.rel);
    for (auto& a : psi_raw.atoms) push_atom(out.psi, flatten_poly(ctx, a.p), a.rel);
    for (auto& eq : ctx.arg_eqs_phi) push_atom(out.phi, eq, AtomRel::Eq);
    for (auto& eq : ctx.arg_eqs_psi) push_atom(out.psi, eq, AtomRel::Eq);
    for (auto& eq : ctx.arg_eqs_both) {
        push_atom(out.phi, eq, AtomRel::Eq);
        push_atom(out.psi, eq, AtomRel::Eq);
    }

    for (auto& a : out.phi.atoms)
        if (!atom_is_cq(a)) throw NonCqAfterFlattening("phi atom after flattening: " + a.p.str());
    for (auto& a : out.psi.atoms)
        if (!atom_is_cq(a)) throw NonCqAfterFlattening("psi atom after flattening: " + a.p.str());

    std::set<std::string> phi_syms, psi_syms;
    phi_raw.vars(reg, &phi_syms);
    psi_raw.vars(reg, &psi_syms);
    for (auto& s : phi_syms)
        if (psi_syms.count(s)) out.common_symbols.insert(s);

    std::set<std::string> pv = phi_raw.vars(reg), qv = psi_raw.vars(reg);
    out.order = declared;
    for (auto& v : declared) {
        bool inp = pv.count(v), inq = qv.count(v);
        if (inp && inq) out.common_vars.insert(v);
        else if (inp) out.phi_vars.insert(v);
        else if (inq) out.psi_vars.insert(v);
    }

    std::map<std::string, const DefEntry*> by_var;
    for (auto& e : out.defs.entries) by_var[e.var] = &e;
    std::vector<std::string> fresh_order;
    {
        std::set<std::string> seen(declared.begin(), declared.end());
        auto note = [&](const std::string& v) {
            if (!seen.count(v)) {
                fresh_order.push_back(v);
                seen.insert(v);
            }
        };
        for (auto& e : out.defs.entries) {
            for (auto& a : e.args) note(a);
            note(e.var);
        }
    }
    for (auto& v : fresh_order) out.order.push_back(v);

    // Commonness of fresh variables: an application variable is common iff
    // its symbol is common and all argument variables are common; argument
    // helpers are classified by which flattened side uses them.
    for (int round = 0; round < 8; ++round) {
        for (auto& v : fresh_order) {
            if (out.common_vars.count(v) || out.phi_vars.count(v) || out.psi_vars.count(v))
                continue;
            auto it = by_var.find(v);
            if (it == by_var.end()) {
                bool in_phi = false, in_psi = false;
                for (auto& a : out.phi.atoms)
                    if (a.p.vars().count(v)) in_phi = true;
                for (auto& a : out.psi.atoms)
                    if (a.p.vars().count(v)) in_psi = true;
                if (in_phi && in_psi) out.common_vars.insert(v);
                else if (in_psi) out.psi_vars.insert(v);
                else out.phi_vars.insert(v);
                continue;
            }
            const DefEntry& e = *it->second;
            bool args_ready = true, args_common = true;
            for (auto& a : e.args) {
                if (out.common_vars.count(a)) continue;
                if (out.phi_vars.count(a) || out.psi_vars.count(a)) args_common = false;
                else args_ready = false;
            }
            if (!args_ready) continue;
            if (out.common_symbols.count(e.symbol) && args_common) {
                out.common_vars.insert(v);
            } else if (e.origin == DefEntry::Origin::Psi) {
                out.psi_vars.insert(v);
            } else {
                out.phi_vars.insert(v);
            }
        }
    }
    return out;
}

HornSets horn_instances(const DefSet& defs, const PurifyResult& ctx) {
    HornSets out;
    for (size_t i = 0; i < defs.entries.size(); ++i) {
        for (size_t j = i + 1; j < defs.entries.size(); ++j) {
            const DefEntry& a = defs.entries[i];
            const DefEntry& b = defs.entries[j];
            if (a.symbol != b.symbol || a.args.size() != b.args.size()) continue;
            HornClause c;
            c.symbol = a.symbol;
            for (size_t k = 0; k < a.args.size(); ++k)
                c.hyps.emplace_back(Polynomial::var(a.args[k]), Polynomial::var(b.args[k]));
            c.concl = {Polynomial::var(a.var), Polynomial::var(b.var)};
            std::set<std::string> cv;
            for (auto& [l, r] : c.hyps) {
                for (auto& v : l.vars()) cv.insert(v);
                for (auto& v : r.vars()) cv.insert(v);
            }
            for (auto& v : c.concl.first.vars()) cv.insert(v);
            for (auto& v : c.concl.second.vars()) cv.insert(v);
            bool has_phi = false, has_psi = false;
            for (auto& v : cv) {
                if (ctx.phi_vars.count(v)) has_phi = true;
                if (ctx.psi_vars.count(v)) has_psi = true;
            }
            if (has_phi && has_psi) out.n_mix.push_back(c);
            else if (has_psi) out.n_psi.push_back(c);
            else out.n_phi.push_back(c);
        }
    }
    return out;
}

namespace {

LinearSystem linear_part(const CqConjunction& side) {
    LinearSystem out;
    for (auto& a : side.atoms) {
        if (a.p.degree() > 1) continue;
        (a.strict ? out.strict : out.nonstrict).push_back(a.p);
    }
    return out;
}

LinearSystem combined_relaxed(const SepmixState& st) {
    LinearSystem sys;
    auto add = [&sys](const LinearSystem& l) {
        sys.nonstrict.insert(sys.nonstrict.end(), l.nonstrict.begin(), l.nonstrict.end());
        sys.nonstrict.insert(sys.nonstrict.end(), l.strict.begin(), l.strict.end());
    };
    add(st.L1);
    add(st.L2);
    for (auto& w : st.W) {
        sys.nonstrict.push_back(w);
        sys.nonstrict.push_back(-w);
    }
    return sys;
}

bool side_has(const std::set<std::string>& klass, const Polynomial& p) {
    for (auto& v : p.vars())
        if (klass.count(v)) return true;
    return false;
}

} // namespace

SepTerms separating_terms(const LinearSystem& L1, const LinearSystem& L2, const std::string& ck,
                          const std::string& bk, const std::set<std::string>& common) {
    auto rows = [](const LinearSystem& l) {
        std::vector<Polynomial> out = l.nonstrict;
        out.insert(out.end(), l.strict.begin(), l.strict.end());
        return out;
    };
    std::vector<Polynomial> R1 = rows(L1), R2 = rows(L2);

    std::set<std::string> allvars;
    for (auto& p : R1)
        for (auto& v : p.vars()) allvars.insert(v);
    for (auto& p : R2)
        for (auto& v : p.vars()) allvars.insert(v);
    allvars.insert(ck);
    allvars.insert(bk);

    // Multiplier problem: rows as a - A x >= 0, so the A-row of p is
    // -coeffs(p) and a = const(p). Find nu, mu >= 0 with
    // e = nu A + mu B pinned to +-1 on ck/bk and 0 elsewhere, nu a + mu b <= 0.
    auto solve_side = [&](bool plus) -> std::vector<Rat> {
        LpProblem lp;
        for (size_t i = 0; i < R1.size(); ++i) lp.add_var("n" + std::to_string(i));
        for (size_t j = 0; j < R2.size(); ++j) lp.add_var("m" + std::to_string(j));
        for (auto& v : allvars) {
            LpConstraint c;
            c.rel = LpRel::Eq;
            Monomial mv{{v, 1}};
            for (size_t i = 0; i < R1.size(); ++i) {
                Rat k = -R1[i].coeff(mv);
                if (k != 0) c.terms.emplace_back("n" + std::to_string(i), k);
            }
            for (size_t j = 0; j < R2.size(); ++j) {
                Rat k = -R2[j].coeff(mv);
                if (k != 0) c.terms.emplace_back("m" + std::to_string(j), k);
            }
            Rat target(0);
            if (v == ck) target += plus ? 1 : -1;
            if (v == bk) target += plus ? -1 : 1;
            c.rhs = target;
            lp.constraints.push_back(std::move(c));
        }
        {
            LpConstraint c;
            c.rel = LpRel::Le;
            c.rhs = 0;
            for (size_t i = 0; i < R1.size(); ++i) {
                Rat k = R1[i].constant_term();
                if (k != 0) c.terms.emplace_back("n" + std::to_string(i), k);
            }
            for (size_t j = 0; j < R2.size(); ++j) {
                Rat k = R2[j].constant_term();
                if (k != 0) c.terms.emplace_back("m" + std::to_string(j), k);
            }
            lp.constraints.push_back(std::move(c));
        }
        LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::Feasible && sol.status != LpStatus::Optimal)
            throw LpInfeasible("separating-term multipliers infeasible for " + ck + " = " + bk);
        std::vector<Rat> out;
        for (size_t i = 0; i < R1.size(); ++i) out.push_back(sol.point["n" + std::to_string(i)]);
        for (size_t j = 0; j < R2.size(); ++j) out.push_back(sol.point["m" + std::to_string(j)]);
        return out;
    };

    auto mults_plus = solve_side(true);
    auto mults_minus = solve_side(false);

    SepTerms terms;
    terms.t_plus = Polynomial::var(bk);
    for (size_t j = 0; j < R2.size(); ++j) terms.t_plus -= R2[j] * mults_plus[R1.size() + j];
    terms.t_minus = Polynomial::var(ck);
    for (size_t i = 0; i < R1.size(); ++i) terms.t_minus -= R1[i] * mults_minus[i];

    for (auto& v : terms.t_plus.vars())
        if (!common.count(v))
            throw InternalInconsistency("separating term escapes common variables: " + v);
    for (auto& v : terms.t_minus.vars())
        if (!common.count(v))
            throw InternalInconsistency("separating term escapes common variables: " + v);

    auto sup_le0 = [](const LinearSystem& sys, const Polynomial& t) {
        bool inf = false;
        auto hi = linear_sup(sys, t, inf);
        return inf || (hi && *hi <= 0);
    };
    bool ok = sup_le0(L1, Polynomial::var(ck) - terms.t_plus) &&
              sup_le0(L1, terms.t_minus - Polynomial::var(ck)) &&
              sup_le0(L2, terms.t_plus - Polynomial::var(bk)) &&
              sup_le0(L2, Polynomial::var(bk) - terms.t_minus);
    if (!ok) throw LpInfeasible("separating terms failed exact entailment verification");
    return terms;
}

void split_mixed_instances(SepmixState& st, PurifyResult& ctx, Session& session) {
    (void)session;
    size_t before = st.horn.n_mix.size();
    int fresh_t = 0;
    while (true) {
        LinearSystem sys = combined_relaxed(st);
        int fired = -1;
        for (size_t k = 0; k < st.horn.n_mix.size(); ++k) {
            bool all = true;
            for (auto& [l, r] : st.horn.n_mix[k].hyps)
                if (!linear_entails_eq(sys, l - r)) { all = false; break; }
            if (all) {
                fired = static_cast<int>(k);
                break;
            }
        }
        if (fired < 0) break;
        HornClause c = st.horn.n_mix[fired];
        st.horn.n_mix.erase(st.horn.n_mix.begin() + fired);

        // Orient: first components phi-side-or-common, second psi-side-or-common.
        bool flip = side_has(ctx.psi_vars, c.concl.first) || side_has(ctx.phi_vars, c.concl.second);
        if (flip) {
            std::swap(c.concl.first, c.concl.second);
            for (auto& h : c.hyps) std::swap(h.first, h.second);
        }

        std::set<std::string> cv;
        auto note = [&cv](const Polynomial& p) {
            for (auto& v : p.vars()) cv.insert(v);
        };
        for (auto& [l, r] : c.hyps) { note(l); note(r); }
        note(c.concl.first);
        note(c.concl.second);
        bool has_phi = false, has_psi = false;
        for (auto& v : cv) {
            if (ctx.phi_vars.count(v)) has_phi = true;
            if (ctx.psi_vars.count(v)) has_psi = true;
        }
        if (!has_psi) {
            st.horn.n_phi.push_back(c);
            st.W.push_back(c.concl.first - c.concl.second);
            continue;
        }
        if (!has_phi) {
            st.horn.n_psi.push_back(c);
            st.W.push_back(c.concl.first - c.concl.second);
            continue;
        }

        // Separating term per hypothesis. Hypothesis sides are single
        // variables in the original instances.
        std::vector<Polynomial> tks;
        for (auto& [l, r] : c.hyps) {
            if (!side_has(ctx.phi_vars, l) && !side_has(ctx.psi_vars, l) &&
                !side_has(ctx.phi_vars, r) && !side_has(ctx.psi_vars, r)) {
                tks.push_back(l); // already common on both sides
                continue;
            }
            auto lv = l.vars();
            auto rv = r.vars();
            if (lv.size() != 1 || rv.size() != 1)
                throw InternalInconsistency("mixed hypothesis is not a variable pair");
            SepTerms sep = separating_terms(st.L1, st.L2, *lv.begin(), *rv.begin(),
                                            ctx.common_vars);
            tks.push_back(sep.t_plus);
        }

        std::string t = "@t" + std::to_string(ctx.order.size()) + "_" + std::to_string(fresh_t++);
        ctx.common_vars.insert(t);
        ctx.order.push_back(t);
        AppTerm app;
        app.symbol = c.symbol;
        app.args = tks;
        ctx.backsub[t] = app;

        HornClause cphi, cpsi;
        cphi.symbol = c.symbol;
        cpsi.symbol = c.symbol;
        for (size_t k = 0; k < c.hyps.size(); ++k) {
            cphi.hyps.emplace_back(c.hyps[k].first, tks[k]);
            cpsi.hyps.emplace_back(tks[k], c.hyps[k].second);
        }
        cphi.concl = {c.concl.first, Polynomial::var(t)};
        cpsi.concl = {Polynomial::var(t), c.concl.second};
        st.horn.n_phi.push_back(cphi);
        st.horn.n_psi.push_back(cpsi);
        st.W.push_back(cphi.concl.first - cphi.concl.second);
        st.W.push_back(cpsi.concl.first - cpsi.concl.second);
        if (st.horn.n_mix.size() >= before)
            throw InternalInconsistency("mixed-instance set did not shrink");
        before = st.horn.n_mix.size();
    }
}

namespace {

using Disjunct = std::vector<PolyAtom>;

std::vector<Disjunct> expand_dnf(const CqConjunction& base, const std::vector<HornClause>& clauses,
                                 int max_disjuncts) {
    std::vector<Disjunct> out{base.atoms};
    for (auto& c : clauses) {
        std::vector<Disjunct> branches;
        for (auto& [l, r] : c.hyps) {
            branches.push_back({PolyAtom{l - r, true}});
            branches.push_back({PolyAtom{r - l, true}});
        }
        Polynomial cd = c.concl.first - c.concl.second;
        branches.push_back({PolyAtom{cd, false}, PolyAtom{-cd, false}});
        std::vector<Disjunct> next;
        for (auto& d : out) {
            for (auto& b : branches) {
                Disjunct merged = d;
                merged.insert(merged.end(), b.begin(), b.end());
                next.push_back(std::move(merged));
                if (static_cast<int>(next.size()) > max_disjuncts)
                    throw DnfBlowup("DNF expansion exceeded max_disjuncts");
            }
        }
        out = std::move(next);
    }
    return out;
}

bool disjunct_feasible(const Disjunct& d) {
    LinearSystem sys;
    for (auto& a : d) {
        if (a.p.degree() > 1) continue;
        (a.strict ? sys.strict : sys.nonstrict).push_back(a.p);
    }
    return linear_feasible(sys);
}

} // namespace

InterpolationResult interpolate_unmixed(const PurifyResult& ctx, const HornSets& horn,
                                        Session& session) {
    auto phis = expand_dnf(ctx.phi, horn.n_phi, session.cfg.max_disjuncts);
    auto psis = expand_dnf(ctx.psi, horn.n_psi, session.cfg.max_disjuncts);

    std::vector<Disjunct> live_phi, live_psi;
    for (auto& d : phis)
        if (disjunct_feasible(d)) live_phi.push_back(d);
    for (auto& d : psis)
        if (disjunct_feasible(d)) live_psi.push_back(d);

    InterpolationResult res;
    if (live_phi.empty()) {
        res.interpolant = Formula::falsity();
        return res;
    }
    if (live_psi.empty()) {
        res.interpolant = Formula::truth();
        return res;
    }

    std::vector<Formula> disjuncts;
    for (size_t i = 0; i < live_phi.size(); ++i) {
        std::vector<Formula> conjuncts;
        for (size_t j = 0; j < live_psi.size(); ++j) {
            CqConjunction cp{live_phi[i]}, cq{live_psi[j]};
            ProblemPair pair = make_pair(cp, cq, ctx.order);
            try {
                InterpolationResult sub = interpolate_cq(pair, session);
                conjuncts.push_back(sub.interpolant);
                for (auto& lc : sub.leaf_certs) res.leaf_certs.push_back(lc);
                for (auto& lvl : sub.trace.levels) res.trace.levels.push_back(lvl);
            } catch (const NotMutuallyContradictory& e) {
                throw NotMutuallyContradictory("DNF branch (" + std::to_string(i) + "," +
                                               std::to_string(j) +
                                               ") is jointly satisfiable: " + e.what());
            }
        }
        disjuncts.push_back(Formula::conj(std::move(conjuncts)));
    }
    res.interpolant = simplify(Formula::disj(std::move(disjuncts)));
    return res;
}

namespace {

Formula euf_level(CqConjunction phi, CqConjunction psi, PurifyResult& ctx, const HornSets& horn,
                  Session& session, EufResult& acc, std::set<std::string> bound, int depth) {
    if (depth > static_cast<int>(ctx.order.size()) + 1)
        throw InternalInconsistency("combination recursion exceeded the variable budget");

    VarPartition part;
    for (auto& v : ctx.order) {
        if (ctx.common_vars.count(v)) part.x.push_back(v);
        else if (ctx.phi_vars.count(v)) part.y.push_back(v);
        else if (ctx.psi_vars.count(v)) part.z.push_back(v);
    }
    ProblemPair pair;
    pair.phi = phi;
    pair.psi = psi;
    pair.part = part;

    auto vars = part.all();
    size_t r1 = pair.r1();
    auto fs = pair.fs();
    std::vector<Polynomial> phi_fs(fs.begin(), fs.begin() + r1);
    std::vector<Polynomial> psi_fs(fs.begin() + r1, fs.end());

    std::optional<NsoscViolation> violation;
    {
        auto out = check_nsosc(phi_fs, vars, session);
        if (auto* v = std::get_if<NsoscViolation>(&out)) {
            std::vector<Rat> delta = v->delta;
            delta.resize(fs.size(), Rat(0));
            violation = NsoscViolation{delta, v->h};
        }
    }
    if (!violation) {
        auto out = check_nsosc(psi_fs, vars, session);
        if (auto* v = std::get_if<NsoscViolation>(&out)) {
            std::vector<Rat> delta(r1, Rat(0));
            delta.insert(delta.end(), v->delta.begin(), v->delta.end());
            violation = NsoscViolation{delta, v->h};
        }
    }
    if (!violation && !phi_fs.empty() && !psi_fs.empty()) {
        auto out = check_nsosc(fs, vars, session);
        if (auto* v = std::get_if<NsoscViolation>(&out)) violation = *v;
    }

    if (!violation) {
        SepmixState st;
        st.L1 = linear_part(phi);
        st.L2 = linear_part(psi);
        st.horn = horn;
        split_mixed_instances(st, ctx, session);
        PurifyResult view = ctx;
        view.phi = phi;
        view.psi = psi;
        InterpolationResult sub = interpolate_unmixed(view, st.horn, session);
        for (auto& lc : sub.leaf_certs) acc.leaf_certs.push_back(lc);
        for (auto& lvl : sub.trace.levels) acc.trace.levels.push_back(lvl);
        acc.trace.leaf = RecursionTrace::Leaf::BaseCase;
        return sub.interpolant;
    }

    Bridge bridge = derive_bridge(*violation, pair);
    LevelRecord level;
    level.delta = violation->delta;
    level.f = bridge.f;
    level.vars_before = static_cast<int>(vars.size()) - static_cast<int>(bound.size());

    auto phi_out = derive_substitutions(bridge.h1);
    auto psi_out = derive_substitutions(bridge.h2);
    Formula inner;
    bool recursed = false;
    if (std::holds_alternative<ContradictionFound>(phi_out)) {
        level.constant_case = true;
        inner = Formula::falsity();
    } else if (std::holds_alternative<ContradictionFound>(psi_out)) {
        level.constant_case = true;
        inner = Formula::truth();
    } else {
        Substitution sub_phi = std::get<Substitution>(phi_out);
        Substitution sub_psi = std::get<Substitution>(psi_out);
        std::set<std::string> newly;
        for (auto& b : sub_phi.bindings) newly.insert(b.var);
        for (auto& b : sub_psi.bindings) newly.insert(b.var);
        bool progress = false;
        for (auto& v : newly)
            if (!bound.count(v)) progress = true;
        if (!progress)
            throw SolverInconclusive("combination driver made no elimination progress");
        for (auto& v : newly) bound.insert(v);
        level.vars_after = static_cast<int>(vars.size()) - static_cast<int>(bound.size());

        CqConjunction phi2, psi2;
        for (auto& a : phi.atoms) phi2.atoms.push_back(substitute_atom(a, sub_phi));
        for (auto& a : psi.atoms) psi2.atoms.push_back(substitute_atom(a, sub_psi));
        auto add_binding = [](CqConjunction& side, const Binding& b) {
            Polynomial eq = Polynomial::var(b.var) - b.rhs;
            side.atoms.push_back({eq, false});
            side.atoms.push_back({-eq, false});
        };
        for (auto& b : sub_phi.bindings) {
            add_binding(phi2, b);
            if (ctx.common_vars.count(b.var)) add_binding(psi2, b);
        }
        for (auto& b : sub_psi.bindings) {
            if (ctx.common_vars.count(b.var)) {
                bool already = false;
                for (auto& bb : sub_phi.bindings)
                    if (bb.var == b.var) already = true;
                if (!already) add_binding(phi2, b);
                if (already) continue;
            }
            add_binding(psi2, b);
        }
        level.sub_phi = sub_phi;
        level.sub_psi = sub_psi;
        inner =
            euf_level(std::move(phi2), std::move(psi2), ctx, horn, session, acc, bound, depth + 1);
        recursed = true;
    }
    acc.trace.levels.insert(acc.trace.levels.begin(), level);
    if (!recursed && level.constant_case)
        acc.trace.leaf = RecursionTrace::Leaf::SideContradiction;

    if (bridge.f.is_zero()) return simplify(inner);
    Formula fgt = Formula::atom(bridge.f, Rel::Gt);
    Formula fge = Formula::atom(bridge.f, Rel::Ge);
    return simplify(Formula::disj({fgt, Formula::conj({fge, inner})}));
}

} // namespace

EufResult interpolate_cq_euf(const RawSystem& phi_raw, const RawSystem& psi_raw,
                             const AppRegistry& reg, const std::vector<std::string>& declared,
                             const std::map<std::string, int>& arities, Session& session) {
    PurifyResult ctx = purify(phi_raw, psi_raw, reg, declared, arities);
    HornSets horn = horn_instances(ctx.defs, ctx);

    EufResult out;
    Formula interp = euf_level(ctx.phi, ctx.psi, ctx, horn, session, out, {}, 0);
    out.interpolant = simplify(interp);
    out.registry = ctx.backsub;

    std::set<std::string> syms;
    auto vars = formula_vars(out.interpolant, out.registry, &syms);
    for (auto& v : vars)
        if (!ctx.common_vars.count(v) || v[0] == '@')
            throw InternalInconsistency("combination output escapes common variables: " + v);
    for (auto& s : syms)
        if (!ctx.common_symbols.count(s))
            throw InternalInconsistency("combination output uses a non-common symbol: " + s);
    return out;
}

} // namespace cqi
