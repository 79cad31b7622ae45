#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqinterp/quadform.hpp"

#include <random>

using namespace cqi;

namespace {

Polynomial pvar(const char* n) { return Polynomial::var(n); }

} // namespace

TEST_CASE("quadratic_form follows the half-coefficient conventions") {
    // g1 = -x1^2 + 2x1 - x2^2 + 2x2 - y^2
    Polynomial g1 = -(pvar("x1") * pvar("x1")) + pvar("x1") * Rat(2) - pvar("x2") * pvar("x2") +
                    pvar("x2") * Rat(2) - pvar("y") * pvar("y");
    QuadForm q = quadratic_form(g1, {"x1", "x2", "y"});
    CHECK(q.A(0, 0) == -1);
    CHECK(q.A(1, 1) == -1);
    CHECK(q.A(2, 2) == -1);
    CHECK(q.A(0, 1) == 0);
    CHECK(q.alpha[0] == 1);
    CHECK(q.alpha[1] == 1);
    CHECK(q.alpha[2] == 0);
    CHECK(q.a == 0);
    CHECK(is_cq(q));

    // linear case: f = x over (x): A = [0], alpha = (1/2)
    QuadForm lin = quadratic_form(pvar("x"), {"x"});
    CHECK(lin.A(0, 0) == 0);
    CHECK(lin.alpha[0] == Rat(1, 2));
    CHECK(lin.a == 0);
    CHECK(is_cq(lin));
}

TEST_CASE("quadratic_form errors") {
    Polynomial cube = pvar("x") * pvar("x") * pvar("x");
    CHECK_THROWS_AS(quadratic_form(cube, {"x"}), DegreeTooHigh);
    CHECK_THROWS_AS(quadratic_form(pvar("x"), {"y"}), UnknownVariable);
}

TEST_CASE("is_cq on the running examples") {
    Polynomial f3 = -(pvar("x1") * pvar("x1")) - pvar("x2") * pvar("x2") - pvar("x2") * Rat(2) -
                    pvar("z") * pvar("z");
    CHECK(is_cq(quadratic_form(f3, {"x1", "x2", "z"})));
    Polynomial notcq = pvar("x1") * pvar("x1");
    CHECK_FALSE(is_cq(quadratic_form(notcq, {"x1"})));
}

TEST_CASE("is_cq invariant under reordering and fresh variables") {
    Polynomial g1 = -(pvar("x1") * pvar("x1")) + pvar("x1") * Rat(2) - pvar("x2") * pvar("x2");
    CHECK(is_cq(quadratic_form(g1, {"x1", "x2"})));
    CHECK(is_cq(quadratic_form(g1, {"x2", "x1"})));
    CHECK(is_cq(quadratic_form(g1, {"w", "x2", "q", "x1"})));
}

TEST_CASE("p_matrix bordered layout") {
    QuadForm lin = quadratic_form(pvar("x"), {"x"});
    SymMatrix p = p_matrix(lin);
    CHECK(p.dim() == 2);
    CHECK(p(0, 0) == 0);
    CHECK(p(0, 1) == Rat(1, 2));
    CHECK(p(1, 0) == Rat(1, 2));
    CHECK(p(1, 1) == 0);
}

TEST_CASE("expand/quadratic_form round-trip and evaluation oracle") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-4, 4);
    std::vector<std::string> vars{"x1", "x2", "y"};
    for (int it = 0; it < 60; ++it) {
        Polynomial p;
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j)
                p += Polynomial::var(vars[i]) * Polynomial::var(vars[j]) * Rat(coef(rng), 2);
            p += Polynomial::var(vars[i]) * Rat(coef(rng), 3);
        }
        p += Polynomial::constant(Rat(coef(rng)));
        QuadForm q = quadratic_form(p, vars);
        CHECK(q.expand() == p);

        SymMatrix pm = p_matrix(q);
        for (int s = 0; s < 5; ++s) {
            std::vector<Rat> x{Rat(coef(rng), 2), Rat(coef(rng), 5), Rat(coef(rng), 3)};
            std::map<std::string, Rat> pt{{"x1", x[0]}, {"x2", x[1]}, {"y", x[2]}};
            CHECK(bordered_inner(pm, x) == p.evaluate(pt));
        }
    }
}

TEST_CASE("exact psd test agrees with definition on small matrices") {
    SymMatrix m(2);
    m.set(0, 0, Rat(2));
    m.set(0, 1, Rat(1));
    m.set(1, 1, Rat(2));
    CHECK(is_psd(m));
    m.set(0, 1, Rat(3)); // det negative
    CHECK_FALSE(is_psd(m));

    SymMatrix z(3); // zero matrix is PSD
    CHECK(is_psd(z));
    z.set(0, 1, Rat(1)); // zero diagonal with coupling is not
    CHECK_FALSE(is_psd(z));
    SymMatrix neg(1);
    neg.set(0, 0, Rat(-1, 7));
    CHECK_FALSE(is_psd(neg));
}
