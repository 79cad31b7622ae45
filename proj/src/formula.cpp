#include "cqinterp/formula.hpp"

#include <sstream>

namespace cqi {

Formula Formula::conj(std::vector<Formula> kids) {
    Formula f;
    f.kind = Kind::And;
    f.kids = std::move(kids);
    return f;
}

Formula Formula::disj(std::vector<Formula> kids) {
    Formula f;
    f.kind = Kind::Or;
    f.kids = std::move(kids);
    return f;
}

Formula simplify(const Formula& f) {
    switch (f.kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
        return f;
    case Formula::Kind::Atom: {
        if (f.poly.is_constant()) {
            Rat c = f.poly.constant_term();
            bool holds = (f.rel == Rel::Gt) ? c > 0 : c >= 0;
            return holds ? Formula::truth() : Formula::falsity();
        }
        return f;
    }
    case Formula::Kind::And: {
        std::vector<Formula> kids;
        for (auto& k : f.kids) {
            Formula s = simplify(k);
            if (s.kind == Formula::Kind::False) return Formula::falsity();
            if (s.kind == Formula::Kind::True) continue;
            if (s.kind == Formula::Kind::And) {
                for (auto& g : s.kids) kids.push_back(g);
            } else {
                kids.push_back(std::move(s));
            }
        }
        if (kids.empty()) return Formula::truth();
        if (kids.size() == 1) return kids[0];
        return Formula::conj(std::move(kids));
    }
    case Formula::Kind::Or: {
        std::vector<Formula> kids;
        for (auto& k : f.kids) {
            Formula s = simplify(k);
            if (s.kind == Formula::Kind::True) return Formula::truth();
            if (s.kind == Formula::Kind::False) continue;
            if (s.kind == Formula::Kind::Or) {
                for (auto& g : s.kids) kids.push_back(g);
            } else {
                kids.push_back(std::move(s));
            }
        }
        if (kids.empty()) return Formula::falsity();
        if (kids.size() == 1) return kids[0];
        return Formula::disj(std::move(kids));
    }
    }
    return f;
}

namespace {

void collect_poly_vars(const Polynomial& p, const AppRegistry& reg, std::set<std::string>& vars,
                       std::set<std::string>* symbols, int depth = 0) {
    if (depth > 64) throw std::runtime_error("application registry cycle");
    for (auto& v : p.vars()) {
        auto it = reg.find(v);
        if (it == reg.end()) {
            vars.insert(v);
        } else {
            if (symbols) symbols->insert(it->second.symbol);
            for (auto& arg : it->second.args)
                collect_poly_vars(arg, reg, vars, symbols, depth + 1);
        }
    }
}

} // namespace

std::set<std::string> formula_vars(const Formula& f, const AppRegistry& reg,
                                   std::set<std::string>* symbols) {
    std::set<std::string> vars;
    if (f.kind == Formula::Kind::Atom) {
        collect_poly_vars(f.poly, reg, vars, symbols);
    } else {
        for (auto& k : f.kids) {
            auto sub = formula_vars(k, reg, symbols);
            vars.insert(sub.begin(), sub.end());
        }
    }
    return vars;
}

std::string poly_str_resolved(const Polynomial& p, const AppRegistry& reg) {
    // Render with registry leaves expanded as symbol(arg, ...).
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : p.terms()) {
        Rat a = c;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool coeff_one = (a == 1) && !m.empty();
        if (!coeff_one) os << a.get_str();
        bool lead = coeff_one;
        for (auto& [v, e] : m) {
            if (!lead) os << "*";
            lead = false;
            auto it = reg.find(v);
            if (it == reg.end()) {
                os << v;
            } else {
                os << it->second.symbol << "(";
                for (size_t k = 0; k < it->second.args.size(); ++k) {
                    if (k) os << ", ";
                    os << poly_str_resolved(it->second.args[k], reg);
                }
                os << ")";
            }
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

std::string formula_str(const Formula& f, const AppRegistry& reg) {
    switch (f.kind) {
    case Formula::Kind::True:
        return "true";
    case Formula::Kind::False:
        return "false";
    case Formula::Kind::Atom:
        return poly_str_resolved(f.poly, reg) + (f.rel == Rel::Gt ? " > 0" : " >= 0");
    case Formula::Kind::And: {
        std::string out;
        for (size_t i = 0; i < f.kids.size(); ++i) {
            if (i) out += " and ";
            bool paren = f.kids[i].kind == Formula::Kind::Or;
            out += paren ? "(" + formula_str(f.kids[i], reg) + ")" : formula_str(f.kids[i], reg);
        }
        return out.empty() ? "true" : out;
    }
    case Formula::Kind::Or: {
        std::string out;
        for (size_t i = 0; i < f.kids.size(); ++i) {
            if (i) out += " or ";
            bool paren = f.kids[i].kind == Formula::Kind::And;
            out += paren ? "(" + formula_str(f.kids[i], reg) + ")" : formula_str(f.kids[i], reg);
        }
        return out.empty() ? "false" : out;
    }
    }
    return "";
}

namespace {

std::string smt_rat(const Rat& r) {
    if (r < 0) return "(- " + smt_rat(-r) + ")";
    if (r.get_den() == 1) return r.get_num().get_str();
    return "(/ " + r.get_num().get_str() + " " + r.get_den().get_str() + ")";
}

std::string smt_poly(const Polynomial& p, const AppRegistry& reg) {
    if (p.is_zero()) return "0";
    std::vector<std::string> terms;
    for (auto& [m, c] : p.terms()) {
        std::vector<std::string> factors;
        if (c != 1 || m.empty()) factors.push_back(smt_rat(c));
        for (auto& [v, e] : m) {
            std::string leaf;
            auto it = reg.find(v);
            if (it == reg.end()) {
                leaf = v;
            } else {
                leaf = "(" + it->second.symbol;
                for (auto& arg : it->second.args) leaf += " " + smt_poly(arg, reg);
                leaf += ")";
            }
            for (int k = 0; k < e; ++k) factors.push_back(leaf);
        }
        if (factors.size() == 1) {
            terms.push_back(factors[0]);
        } else {
            std::string t = "(*";
            for (auto& f : factors) t += " " + f;
            terms.push_back(t + ")");
        }
    }
    if (terms.size() == 1) return terms[0];
    std::string out = "(+";
    for (auto& t : terms) out += " " + t;
    return out + ")";
}

} // namespace

std::string formula_smt(const Formula& f, const AppRegistry& reg) {
    switch (f.kind) {
    case Formula::Kind::True:
        return "true";
    case Formula::Kind::False:
        return "false";
    case Formula::Kind::Atom:
        return std::string(f.rel == Rel::Gt ? "(> " : "(>= ") + smt_poly(f.poly, reg) + " 0)";
    case Formula::Kind::And: {
        std::string out = "(and";
        for (auto& k : f.kids) out += " " + formula_smt(k, reg);
        return out + ")";
    }
    case Formula::Kind::Or: {
        std::string out = "(or";
        for (auto& k : f.kids) out += " " + formula_smt(k, reg);
        return out + ")";
    }
    }
    return "true";
}

} // namespace cqi
