#include "cqinterp/recursion.hpp"

#include <algorithm>
#include <random>

namespace cqi {

std::map<std::string, Polynomial> Substitution::as_map() const {
    std::map<std::string, Polynomial> m;
    for (auto& b : bindings) m.emplace(b.var, b.rhs);
    return m;
}

SubstOutcome derive_substitutions(const SosDecomposition& hside) {
    if (hside.constant > 0) return ContradictionFound{};
    Substitution sub;
    // Squares arrive in pivot order; resolve right-hand sides back to front so
    // no bound variable survives in any rhs.
    std::map<std::string, Polynomial> resolved;
    for (auto it = hside.squares.rbegin(); it != hside.squares.rend(); ++it) {
        if (it->coeff == 0) continue;
        if (it->pivot.empty())
            throw InternalInconsistency("square without pivot in elimination");
        Polynomial l = Polynomial::var(it->pivot) - it->form; // v = l
        l = l.substitute(resolved);
        resolved[it->pivot] = l;
    }
    // Emit in forward pivot order for determinism.
    for (auto& sq : hside.squares) {
        auto it = resolved.find(sq.pivot);
        if (it != resolved.end()) {
            sub.bindings.push_back(Binding{sq.pivot, it->second});
            resolved.erase(it);
        }
    }
    return sub;
}

Bridge derive_bridge(const NsoscViolation& violation, const ProblemPair& pair) {
    auto fs = pair.fs();
    if (violation.delta.size() != fs.size())
        throw InternalInconsistency("delta length mismatch");
    SosSplit split = split_sos(violation.h, pair.part.x, pair.part.y, pair.part.z);

    size_t r1 = pair.r1();
    Polynomial f_phi = split.h1.reconstruct();
    for (size_t i = 0; i < r1; ++i) f_phi += fs[i] * violation.delta[i];
    Polynomial f_psi = -split.h2.reconstruct();
    for (size_t i = r1; i < fs.size(); ++i) f_psi -= fs[i] * violation.delta[i];
    if (f_phi != f_psi)
        throw InternalInconsistency("the two bridge expressions disagree: " + f_phi.str() +
                                    " vs " + f_psi.str());
    std::set<std::string> common(pair.part.x.begin(), pair.part.x.end());
    if (!f_phi.uses_only(common))
        throw InternalInconsistency("bridge polynomial escapes common variables");
    return Bridge{f_phi, split.h1, split.h2};
}

QuadForm substitute_cq(const QuadForm& q, const Substitution& sub) {
    Polynomial p = q.expand().substitute(sub.as_map());
    std::set<std::string> vs = p.vars();
    std::vector<std::string> order;
    for (auto& v : q.vars)
        if (vs.count(v)) order.push_back(v);
    for (auto& v : vs)
        if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    QuadForm out = quadratic_form(p, order);
    if (!is_cq(out))
        throw InternalInconsistency("affine substitution broke concavity");
    return out;
}

PolyAtom substitute_atom(const PolyAtom& a, const Substitution& sub) {
    return PolyAtom{a.p.substitute(sub.as_map()), a.strict};
}

namespace {

std::mt19937_64 seeded_rng(const Session& s, std::uint64_t stream) {
    std::seed_seq seq{s.cfg.seed, stream};
    return std::mt19937_64(seq);
}

} // namespace

void satisfiability_prepass(const ProblemPair& pair, Session& session) {
    if (!session.cfg.sampling || session.cfg.sat_prepass_samples <= 0) return;
    auto vars = pair.part.all();
    if (vars.empty()) {
        if (in_feasible_region(pair, {})) {
            throw NotMutuallyContradictory("constant system is satisfiable");
        }
        return;
    }
    auto rng = seeded_rng(session, 0x5a7);
    std::uniform_int_distribution<long> num(-10 * 64, 10 * 64);
    for (int k = 0; k < session.cfg.sat_prepass_samples; ++k) {
        std::map<std::string, Rat> pt;
        for (auto& v : vars) pt[v] = Rat(num(rng), 64);
        if (in_feasible_region(pair, pt)) {
            std::string w;
            for (auto& [v, r] : pt) w += v + "=" + r.get_str() + " ";
            throw NotMutuallyContradictory("common satisfying point found: " + w);
        }
    }
}

namespace {

CqConjunction fold_conjunction(const CqConjunction& c, bool& is_false) {
    CqConjunction out;
    is_false = false;
    for (auto& a : c.atoms) {
        if (a.p.is_constant()) {
            Rat v = a.p.constant_term();
            bool holds = a.strict ? v > 0 : v >= 0;
            if (!holds) is_false = true;
            continue; // true atoms drop, false flagged
        }
        out.atoms.push_back(a);
    }
    return out;
}

InterpolationResult interpolate_cq_impl(const ProblemPair& pair_in, Session& session, int depth,
                                        int var_budget) {
    if (depth > var_budget + 1)
        throw InternalInconsistency("elimination recursion exceeded the variable budget");

    // Constant folding; a false conjunct collapses the side.
    bool phi_false = false, psi_false = false;
    CqConjunction phi = fold_conjunction(pair_in.phi, phi_false);
    CqConjunction psi = fold_conjunction(pair_in.psi, psi_false);

    InterpolationResult res;
    if (phi_false) {
        res.interpolant = Formula::falsity();
        res.trace.leaf = RecursionTrace::Leaf::SideContradiction;
        return res;
    }
    if (psi_false) {
        res.interpolant = Formula::truth();
        res.trace.leaf = RecursionTrace::Leaf::SideContradiction;
        return res;
    }

    ProblemPair pair = make_pair(phi, psi, pair_in.part.all());

    if (session.cfg.subset_shortcut) {
        auto pv = phi.vars();
        auto qv = psi.vars();
        if (std::includes(qv.begin(), qv.end(), pv.begin(), pv.end())) {
            res.interpolant = conjunction_formula(phi);
            res.trace.leaf = RecursionTrace::Leaf::VarSubset;
            return res;
        }
    }

    // Sided search keeps eliminations one side at a time.
    auto vars = pair.part.all();
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
        BaseResult base = interpolate_base(pair, session);
        res.interpolant = base.interpolant;
        res.trace.leaf = RecursionTrace::Leaf::BaseCase;
        res.leaf_certs.push_back(LeafCertificate{pair, base.cert});
        return res;
    }

    Bridge bridge = derive_bridge(*violation, pair);

    LevelRecord level;
    level.delta = violation->delta;
    level.f = bridge.f;
    level.vars_before = static_cast<int>(vars.size());

    auto phi_out = derive_substitutions(bridge.h1);
    auto psi_out = derive_substitutions(bridge.h2);

    Formula inner;
    if (std::holds_alternative<ContradictionFound>(phi_out)) {
        level.constant_case = true;
        inner = Formula::falsity(); // phi-side contradiction: I' = (0 > 0)
    } else if (std::holds_alternative<ContradictionFound>(psi_out)) {
        level.constant_case = true;
        inner = Formula::truth(); // psi-side contradiction: I' = (0 >= 0)
    } else {
        Substitution sub_phi = std::get<Substitution>(phi_out);
        Substitution sub_psi = std::get<Substitution>(psi_out);
        if (sub_phi.empty() && sub_psi.empty())
            throw InternalInconsistency("violation produced no elimination");
        level.sub_phi = sub_phi;
        level.sub_psi = sub_psi;

        CqConjunction phi2, psi2;
        for (auto& a : phi.atoms) phi2.atoms.push_back(substitute_atom(a, sub_phi));
        for (auto& a : psi.atoms) psi2.atoms.push_back(substitute_atom(a, sub_psi));
        std::set<std::string> bound;
        for (auto& b : sub_phi.bindings) bound.insert(b.var);
        for (auto& b : sub_psi.bindings) bound.insert(b.var);
        std::vector<std::string> remaining;
        for (auto& v : vars)
            if (!bound.count(v)) remaining.push_back(v);
        level.vars_after = static_cast<int>(remaining.size());
        if (level.vars_after >= level.vars_before)
            throw InternalInconsistency("elimination did not reduce the variable count");

        ProblemPair sub_pair = make_pair(phi2, psi2, remaining);
        InterpolationResult inner_res =
            interpolate_cq_impl(sub_pair, session, depth + 1, var_budget);
        inner = inner_res.interpolant;
        for (auto& lvl : inner_res.trace.levels) res.trace.levels.push_back(lvl);
        res.trace.leaf = inner_res.trace.leaf;
        for (auto& lc : inner_res.leaf_certs) res.leaf_certs.push_back(lc);
    }
    if (level.constant_case) res.trace.leaf = RecursionTrace::Leaf::SideContradiction;

    res.trace.levels.insert(res.trace.levels.begin(), level);

    if (bridge.f.is_zero()) {
        res.interpolant = simplify(inner);
        return res;
    }
    Formula fgt = Formula::atom(bridge.f, Rel::Gt);
    Formula fge = Formula::atom(bridge.f, Rel::Ge);
    res.interpolant = simplify(Formula::disj({fgt, Formula::conj({fge, inner})}));
    return res;
}

} // namespace

InterpolationResult interpolate_cq(const ProblemPair& pair, Session& session) {
    satisfiability_prepass(pair, session);
    int budget = static_cast<int>(pair.part.all().size());
    return interpolate_cq_impl(pair, session, 0, budget);
}

} // namespace cqi
