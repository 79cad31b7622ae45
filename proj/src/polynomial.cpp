#include "cqinterp/polynomial.hpp"

#include <sstream>

namespace cqi {

Rat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat r(s);
        r.canonicalize();
        return r;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        Rat r(s);
        r.canonicalize();
        return r;
    }
    std::string intpart = s.substr(0, dot);
    std::string fracpart = s.substr(dot + 1);
    bool neg = !intpart.empty() && intpart[0] == '-';
    if (neg) intpart = intpart.substr(1);
    if (!intpart.empty() && intpart[0] == '+') intpart = intpart.substr(1);
    if (intpart.empty()) intpart = "0";
    mpz_class num(intpart);
    mpz_class den(1);
    for (char c : fracpart) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad decimal literal: " + s);
        num = num * 10 + (c - '0');
        den *= 10;
    }
    Rat r(num, den);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

Rat rationalize_value(double v, unsigned long denom_bound, double snap_tol) {
    Rat x = rat_from_double(v);
    if (denom_bound == 0) denom_bound = 1;
    mpz_class bound(denom_bound);
    if (x.get_den() <= bound) {
        // Exact value already within budget; still prefer a simpler snap.
        if (snap_tol <= 0) return x;
    }
    // Continued-fraction convergents p_k/q_k of x.
    mpz_class p_prev(0), q_prev(1); // k-2
    mpz_class p_cur(1), q_cur(0);   // k-1 (seeded so first step lands on floor)
    Rat rem = x;
    Rat best;
    bool have_best = false;
    Rat snap(rat_from_double(snap_tol < 0 ? 0.0 : snap_tol));
    for (int it = 0; it < 128; ++it) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
        mpz_class p_next = a * p_cur + p_prev;
        mpz_class q_next = a * q_cur + q_prev;
        if (q_next > bound) {
            if (q_cur == 0) break;
            // Best semiconvergent with denominator within the bound.
            mpz_class t = (bound - q_prev) / q_cur;
            mpz_class p_semi = t * p_cur + p_prev;
            mpz_class q_semi = t * q_cur + q_prev;
            Rat cand_semi(p_semi, q_semi);
            if (q_semi > 0) {
                cand_semi.canonicalize();
                if (!have_best || abs(cand_semi - x) < abs(best - x)) best = cand_semi;
            }
            Rat cand_conv(p_cur, q_cur);
            cand_conv.canonicalize();
            if (!have_best || abs(cand_conv - x) < abs(best - x)) best = cand_conv;
            have_best = true;
            break;
        }
        Rat conv(p_next, q_next);
        conv.canonicalize();
        best = conv;
        have_best = true;
        if (snap_tol > 0 && abs(conv - x) <= snap) return conv;
        Rat frac = rem - Rat(a);
        if (frac == 0) return conv; // exact
        rem = 1 / frac;
        p_prev = p_cur; q_prev = q_cur;
        p_cur = p_next; q_cur = q_next;
    }
    return have_best ? best : x;
}

std::vector<Rat> to_coprime_integers(const std::vector<Rat>& v) {
    mpz_class den_lcm(1);
    bool all_zero = true;
    for (auto& r : v) {
        if (r != 0) {
            all_zero = false;
            mpz_class d = r.get_den();
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
        }
    }
    if (all_zero) return v;
    std::vector<Rat> out;
    out.reserve(v.size());
    mpz_class g(0);
    for (auto& r : v) {
        Rat scaled = r * Rat(den_lcm);
        scaled.canonicalize();
        mpz_class num = scaled.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
        out.push_back(scaled);
    }
    if (g == 0) g = 1;
    for (auto& r : out) {
        r /= Rat(g);
        r.canonicalize();
    }
    return out;
}

int monomial_degree(const Monomial& m) {
    int d = 0;
    for (auto& [v, e] : m) d += e;
    return d;
}

Polynomial::Polynomial(const Rat& c) {
    add_term(Monomial{}, c);
}

Polynomial Polynomial::var(const std::string& name) {
    Polynomial p;
    p.terms_[Monomial{{name, 1}}] = 1;
    return p;
}

Polynomial Polynomial::constant(const Rat& c) { return Polynomial(c); }

int Polynomial::degree() const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
    return d;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rat Polynomial::constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rat(0) : it->second;
}

Rat Polynomial::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

std::set<std::string> Polynomial::vars() const {
    std::set<std::string> out;
    for (auto& [m, c] : terms_)
        for (auto& [v, e] : m) out.insert(v);
    return out;
}

bool Polynomial::uses_only(const std::set<std::string>& allowed) const {
    for (auto& [m, c] : terms_)
        for (auto& [v, e] : m)
            if (!allowed.count(v)) return false;
    return true;
}

void Polynomial::add_term(const Monomial& m, const Rat& c) {
    Rat cc = c;
    cc.canonicalize(); // two-argument mpq_class construction does not reduce
    if (cc == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, cc);
    } else {
        it->second += cc;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial out;
    for (auto& [m, c] : terms_) out.terms_[m] = -c;
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial out = *this;
    out += o;
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial out = *this;
    out -= o;
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial out;
    for (auto& [m1, c1] : terms_) {
        for (auto& [m2, c2] : o.terms_) {
            Monomial m = m1;
            for (auto& [v, e] : m2) m[v] += e;
            out.add_term(m, c1 * c2);
        }
    }
    return out;
}

Polynomial Polynomial::operator*(const Rat& c) const {
    Rat cc = c;
    cc.canonicalize();
    Polynomial out;
    if (cc == 0) return out;
    for (auto& [m, k] : terms_) out.terms_[m] = k * cc;
    return out;
}

Rat Polynomial::evaluate(const std::map<std::string, Rat>& point) const {
    Rat total(0);
    for (auto& [m, c] : terms_) {
        Rat t = c;
        for (auto& [v, e] : m) {
            auto it = point.find(v);
            if (it == point.end())
                throw std::invalid_argument("evaluate: unbound variable " + v);
            for (int k = 0; k < e; ++k) t *= it->second;
        }
        total += t;
    }
    total.canonicalize();
    return total;
}

Polynomial Polynomial::substitute(const std::map<std::string, Polynomial>& sub) const {
    Polynomial out;
    for (auto& [m, c] : terms_) {
        Polynomial tupd(c);
        for (auto& [v, e] : m) {
            auto it = sub.find(v);
            Polynomial base = (it == sub.end()) ? Polynomial::var(v) : it->second;
            for (int k = 0; k < e; ++k) tupd = tupd * base;
        }
        out += tupd;
    }
    return out;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms_) {
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
            os << v;
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

} // namespace cqi
