#include "cqinterp/parser.hpp"

#include <fstream>
#include <sstream>

namespace cqi {

namespace {

struct Sexp {
    // atom when kids empty and text nonempty
    std::string text;
    std::vector<Sexp> kids;
    int line{0}, col{0};
    bool is_atom() const { return kids.empty() && !text.empty(); }
};

struct Lexer {
    const std::string& s;
    size_t pos{0};
    int line{1}, col{1};

    void advance() {
        if (pos < s.size() && s[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    void skip_ws() {
        while (pos < s.size()) {
            char c = s[pos];
            if (c == ';') {
                while (pos < s.size() && s[pos] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    Sexp parse() {
        skip_ws();
        if (pos >= s.size()) throw ParseError("unexpected end of input", line, col);
        Sexp out;
        out.line = line;
        out.col = col;
        if (s[pos] == '(') {
            advance();
            for (;;) {
                skip_ws();
                if (pos >= s.size()) throw ParseError("unterminated list", out.line, out.col);
                if (s[pos] == ')') {
                    advance();
                    return out;
                }
                out.kids.push_back(parse());
            }
        }
        if (s[pos] == ')') throw ParseError("unexpected ')'", line, col);
        std::string tok;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')' && s[pos] != ';') {
            tok += s[pos];
            advance();
        }
        out.text = tok;
        return out;
    }
};

bool is_number_token(const std::string& t) {
    if (t.empty()) return false;
    size_t k = 0;
    if (t[0] == '-' || t[0] == '+') k = 1;
    if (k >= t.size()) return false;
    bool digit = false;
    for (; k < t.size(); ++k) {
        if (std::isdigit(static_cast<unsigned char>(t[k]))) digit = true;
        else if (t[k] != '.' && t[k] != '/') return false;
    }
    return digit;
}

struct ProblemBuilder {
    ParsedProblem out;
    std::map<std::string, int> var_index;
    int leaf_counter{0};
    // hash-cons applications by rendered key
    std::map<std::string, std::string> app_keys;

    std::string intern_app(const AppTerm& app) {
        std::string key = app.symbol + "(";
        for (auto& a : app.args) key += a.str() + ";";
        key += ")";
        auto it = app_keys.find(key);
        if (it != app_keys.end()) return it->second;
        std::string leaf = "@u" + std::to_string(leaf_counter++);
        out.registry[leaf] = app;
        app_keys[key] = leaf;
        return leaf;
    }

    Polynomial term(const Sexp& e) {
        if (e.is_atom()) {
            if (is_number_token(e.text)) {
                try {
                    return Polynomial::constant(parse_rational(e.text));
                } catch (const std::exception&) {
                    throw ParseError("bad numeral '" + e.text + "'", e.line, e.col);
                }
            }
            if (var_index.count(e.text)) return Polynomial::var(e.text);
            if (out.uf_arities.count(e.text))
                throw ParseError("symbol '" + e.text + "' used without arguments", e.line, e.col);
            throw ParseError("undeclared identifier '" + e.text + "'", e.line, e.col);
        }
        if (e.kids.empty()) throw ParseError("empty term", e.line, e.col);
        const Sexp& head = e.kids[0];
        if (!head.is_atom()) throw ParseError("expected operator", head.line, head.col);
        const std::string& op = head.text;
        if (op == "+") {
            Polynomial acc;
            for (size_t k = 1; k < e.kids.size(); ++k) acc += term(e.kids[k]);
            return acc;
        }
        if (op == "-") {
            if (e.kids.size() < 2) throw ParseError("'-' needs arguments", e.line, e.col);
            if (e.kids.size() == 2) return -term(e.kids[1]);
            Polynomial acc = term(e.kids[1]);
            for (size_t k = 2; k < e.kids.size(); ++k) acc -= term(e.kids[k]);
            return acc;
        }
        if (op == "*") {
            Polynomial acc = Polynomial::constant(Rat(1));
            for (size_t k = 1; k < e.kids.size(); ++k) acc = acc * term(e.kids[k]);
            return acc;
        }
        if (op == "/") {
            if (e.kids.size() != 3) throw ParseError("'/' needs two arguments", e.line, e.col);
            Polynomial num = term(e.kids[1]);
            Polynomial den = term(e.kids[2]);
            if (!den.is_constant() || den.constant_term() == 0)
                throw ParseError("division by a non-constant", e.line, e.col);
            return num * (Rat(1) / den.constant_term());
        }
        auto ar = out.uf_arities.find(op);
        if (ar != out.uf_arities.end()) {
            if (static_cast<int>(e.kids.size()) - 1 != ar->second)
                throw ParseError("symbol '" + op + "' expects " + std::to_string(ar->second) +
                                     " arguments",
                                 e.line, e.col);
            AppTerm app;
            app.symbol = op;
            for (size_t k = 1; k < e.kids.size(); ++k) app.args.push_back(term(e.kids[k]));
            return Polynomial::var(intern_app(app));
        }
        throw ParseError("unknown operator '" + op + "'", e.line, e.col);
    }

    void check_cq(const Polynomial& p, const Sexp& at) {
        if (p.degree() > 2)
            throw NonCqAtom("atom of degree " + std::to_string(p.degree()) + " at line " +
                            std::to_string(at.line));
        auto vset = p.vars();
        std::vector<std::string> vs(vset.begin(), vset.end());
        if (!is_cq(quadratic_form(p, vs)))
            throw NonCqAtom("quadratic part not negative semidefinite at line " +
                            std::to_string(at.line));
    }

    RawConjunct atom(const Sexp& e) {
        if (e.kids.size() != 3 || !e.kids[0].is_atom())
            throw ParseError("expected a relational atom", e.line, e.col);
        const std::string& rel = e.kids[0].text;
        Polynomial lhs = term(e.kids[1]);
        Polynomial rhs = term(e.kids[2]);
        RawConjunct out;
        if (rel == ">=") {
            out.p = lhs - rhs;
            out.rel = AtomRel::Ge;
        } else if (rel == ">") {
            out.p = lhs - rhs;
            out.rel = AtomRel::Gt;
        } else if (rel == "<=") {
            out.p = rhs - lhs;
            out.rel = AtomRel::Ge;
        } else if (rel == "<") {
            out.p = rhs - lhs;
            out.rel = AtomRel::Gt;
        } else if (rel == "=") {
            out.p = lhs - rhs;
            out.rel = AtomRel::Eq;
            if (out.p.degree() > 1)
                throw NonLinearEquality(
                    "nonlinear equality at line " + std::to_string(e.line) +
                    " (equalities over nonlinear polynomials are out of scope)");
        } else {
            throw ParseError("unknown relation '" + rel + "'", e.kids[0].line, e.kids[0].col);
        }
        if (out.rel != AtomRel::Eq) check_cq(out.p, e);
        return out;
    }

    void top(const Sexp& e) {
        if (e.kids.empty() || !e.kids[0].is_atom())
            throw ParseError("expected a top-level form", e.line, e.col);
        const std::string& head = e.kids[0].text;
        if (head == "declare-fun") {
            if (e.kids.size() != 4 || !e.kids[1].is_atom())
                throw ParseError("declare-fun needs (declare-fun name (args) Real)", e.line,
                                 e.col);
            const std::string& name = e.kids[1].text;
            if (var_index.count(name) || out.uf_arities.count(name))
                throw ParseError("'" + name + "' declared twice", e.kids[1].line, e.kids[1].col);
            if (!e.kids[3].is_atom() || e.kids[3].text != "Real")
                throw ParseError("only Real sorts are supported", e.kids[3].line, e.kids[3].col);
            const Sexp& args = e.kids[2];
            if (args.is_atom()) throw ParseError("argument sort list expected", args.line, args.col);
            for (auto& a : args.kids)
                if (!a.is_atom() || a.text != "Real")
                    throw ParseError("only Real sorts are supported", a.line, a.col);
            if (args.kids.empty()) {
                var_index[name] = static_cast<int>(out.vars.size());
                out.vars.push_back(name);
            } else {
                out.uf_arities[name] = static_cast<int>(args.kids.size());
            }
            return;
        }
        if (head == "declare-const") {
            if (e.kids.size() != 3 || !e.kids[1].is_atom())
                throw ParseError("declare-const needs a name and sort", e.line, e.col);
            var_index[e.kids[1].text] = static_cast<int>(out.vars.size());
            out.vars.push_back(e.kids[1].text);
            return;
        }
        if (head == "assert-A" || head == "assert-B") {
            if (e.kids.size() != 2)
                throw ParseError(head + " takes one formula", e.line, e.col);
            RawConjunct a = atom(e.kids[1]);
            (head == "assert-A" ? out.phi : out.psi).atoms.push_back(a);
            return;
        }
        if (head == "set-info" || head == "set-logic" || head == "check-sat" || head == "exit")
            return; // tolerated SMT-LIB boilerplate
        throw ParseError("unknown form '" + head + "'", e.line, e.col);
    }
};

} // namespace

ParsedProblem parse_problem_string(const std::string& text) {
    Lexer lex{text};
    ProblemBuilder b;
    while (!lex.eof()) b.top(lex.parse());
    if (b.out.phi.atoms.empty())
        throw ParseError("no assert-A atoms (both sides required)", lex.line, lex.col);
    if (b.out.psi.atoms.empty())
        throw ParseError("no assert-B atoms (both sides required)", lex.line, lex.col);
    return std::move(b.out);
}

ParsedProblem parse_problem(std::istream& in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_string(ss.str());
}

ParsedProblem parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_problem(in);
}

// ---------------------------------------------------------------------------
// Interpolant text grammar (round-trip of formula_str output).

namespace {

struct FLexer {
    const std::string& s;
    size_t pos{0};

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(const std::string& tok) {
        skip_ws();
        if (s.compare(pos, tok.size(), tok) == 0) {
            // keyword tokens must not run into identifiers
            if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
                size_t end = pos + tok.size();
                if (end < s.size() &&
                    (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
                    return false;
            }
            pos += tok.size();
            return true;
        }
        return false;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    char next() { return pos < s.size() ? s[pos] : '\0'; }
    std::string ident() {
        skip_ws();
        std::string out;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '_' || s[pos] == '@')) {
            out += s[pos++];
        }
        return out;
    }
    std::string number() {
        skip_ws();
        std::string out;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '/' || s[pos] == '.')) {
            out += s[pos++];
        }
        return out;
    }
};

struct FParser {
    FLexer lex;
    AppRegistry reg;
    int leaf_counter{0};
    std::map<std::string, std::string> app_keys;

    std::string intern(const AppTerm& app) {
        std::string key = app.symbol + "(";
        for (auto& a : app.args) key += a.str() + ";";
        key += ")";
        auto it = app_keys.find(key);
        if (it != app_keys.end()) return it->second;
        std::string leaf = "@r" + std::to_string(leaf_counter++);
        reg[leaf] = app;
        app_keys[key] = leaf;
        return leaf;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw ParseError("interpolant text: " + why, 1, static_cast<int>(lex.pos) + 1);
    }

    Polynomial factor() {
        lex.skip_ws();
        if (lex.peek('(')) {
            lex.eat("(");
            Polynomial p = poly();
            if (!lex.eat(")")) fail("missing ')'");
            return p;
        }
        char c = lex.next();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return Polynomial::constant(parse_rational(lex.number()));
        }
        std::string id = lex.ident();
        if (id.empty()) fail("expected a factor");
        if (lex.peek('(')) {
            lex.eat("(");
            AppTerm app;
            app.symbol = id;
            if (!lex.peek(')')) {
                app.args.push_back(poly());
                while (lex.eat(",")) app.args.push_back(poly());
            }
            if (!lex.eat(")")) fail("missing ')' in application");
            id = intern(app);
        }
        Polynomial base = Polynomial::var(id);
        if (lex.eat("^")) {
            std::string e = lex.number();
            int k = std::stoi(e);
            Polynomial out = Polynomial::constant(Rat(1));
            for (int i = 0; i < k; ++i) out = out * base;
            return out;
        }
        return base;
    }

    Polynomial monomial() {
        Polynomial acc = factor();
        while (lex.eat("*")) {
            Polynomial f = factor();
            // exponent binds to the factor
            acc = acc * f;
        }
        return acc;
    }

    Polynomial poly() {
        lex.skip_ws();
        bool neg = lex.eat("-");
        Polynomial acc = monomial();
        if (neg) acc = -acc;
        for (;;) {
            if (lex.eat("+")) acc += monomial();
            else if (lex.eat("-")) acc -= monomial();
            else break;
        }
        return acc;
    }

    Formula atom_or_group() {
        lex.skip_ws();
        if (lex.eat("true")) return Formula::truth();
        if (lex.eat("false")) return Formula::falsity();
        size_t save = lex.pos;
        if (lex.peek('(')) {
            // Try a parenthesized formula; if it turns out to be a polynomial
            // group, fall back.
            lex.eat("(");
            try {
                Formula f = disj();
                if (lex.eat(")")) return f;
            } catch (const ParseError&) {
            }
            lex.pos = save;
        }
        Polynomial p = poly();
        Rel rel;
        if (lex.eat(">=")) rel = Rel::Ge;
        else if (lex.eat(">")) rel = Rel::Gt;
        else fail("expected '>' or '>='");
        Polynomial rhs = poly();
        return Formula::atom(p - rhs, rel);
    }

    Formula conj() {
        std::vector<Formula> kids{atom_or_group()};
        while (lex.eat("and")) kids.push_back(atom_or_group());
        return kids.size() == 1 ? kids[0] : Formula::conj(std::move(kids));
    }

    Formula disj() {
        std::vector<Formula> kids{conj()};
        while (lex.eat("or")) kids.push_back(conj());
        return kids.size() == 1 ? kids[0] : Formula::disj(std::move(kids));
    }
};

} // namespace

ParsedFormula parse_interpolant_text(const std::string& text) {
    FParser p{FLexer{text}};
    Formula f = p.disj();
    p.lex.skip_ws();
    if (p.lex.pos != text.size())
        throw ParseError("trailing input in interpolant text", 1, static_cast<int>(p.lex.pos) + 1);
    return ParsedFormula{f, p.reg};
}

} // namespace cqi
