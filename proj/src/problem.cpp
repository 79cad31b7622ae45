#include "cqinterp/problem.hpp"

namespace cqi {

std::vector<Polynomial> CqConjunction::nonstricts() const {
    std::vector<Polynomial> out;
    for (auto& a : atoms)
        if (!a.strict) out.push_back(a.p);
    return out;
}

std::vector<Polynomial> CqConjunction::stricts() const {
    std::vector<Polynomial> out;
    for (auto& a : atoms)
        if (a.strict) out.push_back(a.p);
    return out;
}

std::set<std::string> CqConjunction::vars() const {
    std::set<std::string> out;
    for (auto& a : atoms)
        for (auto& v : a.p.vars()) out.insert(v);
    return out;
}

std::vector<std::string> VarPartition::all() const {
    std::vector<std::string> out = x;
    out.insert(out.end(), y.begin(), y.end());
    out.insert(out.end(), z.begin(), z.end());
    return out;
}

std::vector<Polynomial> ProblemPair::fs() const {
    auto out = phi.nonstricts();
    auto more = psi.nonstricts();
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

std::vector<Polynomial> ProblemPair::gs() const {
    auto out = phi.stricts();
    auto more = psi.stricts();
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

bool atom_is_cq(const PolyAtom& a) {
    if (a.p.degree() > 2) return false;
    auto vs = a.p.vars();
    std::vector<std::string> vars(vs.begin(), vs.end());
    return is_cq(quadratic_form(a.p, vars));
}

ProblemPair make_pair(const CqConjunction& phi, const CqConjunction& psi,
                      const std::vector<std::string>& declared) {
    for (auto& a : phi.atoms)
        if (!atom_is_cq(a)) throw NonCqAtom("phi atom not concave quadratic: " + a.p.str());
    for (auto& a : psi.atoms)
        if (!atom_is_cq(a)) throw NonCqAtom("psi atom not concave quadratic: " + a.p.str());

    auto pv = phi.vars();
    auto qv = psi.vars();
    ProblemPair pair;
    pair.phi = phi;
    pair.psi = psi;
    for (auto& v : declared) {
        bool inp = pv.count(v), inq = qv.count(v);
        if (inp && inq) pair.part.x.push_back(v);
        else if (inp) pair.part.y.push_back(v);
        else if (inq) pair.part.z.push_back(v);
    }
    // Occurring variables missing from the declared list are an internal
    // error at call sites; catch it early.
    std::set<std::string> decl(declared.begin(), declared.end());
    for (auto& v : pv)
        if (!decl.count(v)) throw UnknownVariable("make_pair: undeclared " + v);
    for (auto& v : qv)
        if (!decl.count(v)) throw UnknownVariable("make_pair: undeclared " + v);
    return pair;
}

Formula conjunction_formula(const CqConjunction& c) {
    std::vector<Formula> kids;
    for (auto& a : c.atoms) kids.push_back(Formula::atom(a.p, a.strict ? Rel::Gt : Rel::Ge));
    return simplify(Formula::conj(std::move(kids)));
}

} // namespace cqi
