#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqinterp/sos.hpp"

#include <random>

using namespace cqi;

namespace {

Polynomial pvar(const char* n) { return Polynomial::var(n); }

bool sos_ok(const SosResult& r) { return std::holds_alternative<SosDecomposition>(r); }

} // namespace

TEST_CASE("complete_squares on a perfect square") {
    Polynomial h = pvar("x") * pvar("x") + pvar("x") * Rat(2) + Polynomial::constant(Rat(1));
    auto res = complete_squares(h, {"x"});
    REQUIRE(sos_ok(res));
    auto dec = std::get<SosDecomposition>(res);
    REQUIRE(dec.squares.size() == 1);
    CHECK(dec.squares[0].coeff == 1);
    CHECK(dec.squares[0].form == pvar("x") + Polynomial::constant(Rat(1)));
    CHECK(dec.constant == 0);
    CHECK(dec.reconstruct() == h);
}

TEST_CASE("complete_squares matches the two-decimal worked decomposition") {
    // 3.96x^2 + 6.10x + 15.84y^2 - 12.99y + 6.315
    Polynomial h = pvar("x") * pvar("x") * Rat(396, 100) + pvar("x") * Rat(610, 100) +
                   pvar("y") * pvar("y") * Rat(1584, 100) - pvar("y") * Rat(1299, 100) +
                   Polynomial::constant(Rat(6315, 1000));
    auto res = complete_squares(h, {"x", "y"});
    REQUIRE(sos_ok(res));
    auto dec = std::get<SosDecomposition>(res);
    REQUIRE(dec.squares.size() == 2);
    CHECK(dec.squares[0].coeff == rat(396, 100));
    CHECK(dec.squares[0].form == pvar("x") + Polynomial::constant(Rat(305, 396)));
    CHECK(dec.squares[1].coeff == rat(1584, 100));
    CHECK(dec.squares[1].form == pvar("y") - Polynomial::constant(Rat(1299, 3168)));
    CHECK(dec.constant == Rat(825383, 633600));
    CHECK(dec.reconstruct() == h);
}

TEST_CASE("complete_squares produces exact negative witnesses") {
    Polynomial h = -(pvar("x") * pvar("x"));
    auto res = complete_squares(h, {"x"});
    REQUIRE_FALSE(sos_ok(res));
    auto w = std::get<NotSos>(res).witness;
    CHECK(h.evaluate(w) < 0);

    // indefinite with coupling
    Polynomial g = pvar("x") * pvar("y");
    auto res2 = complete_squares(g, {"x", "y"});
    REQUIRE_FALSE(sos_ok(res2));
    CHECK(g.evaluate(std::get<NotSos>(res2).witness) < 0);

    // PSD quadratic part but negative minimum
    Polynomial q = pvar("x") * pvar("x") - pvar("x") * Rat(3) + Polynomial::constant(Rat(2));
    auto res3 = complete_squares(q, {"x"});
    REQUIRE_FALSE(sos_ok(res3));
    CHECK(q.evaluate(std::get<NotSos>(res3).witness) < 0);

    // zero quadratic coefficient with a linear term
    Polynomial l = pvar("x") + Polynomial::constant(Rat(5));
    auto res4 = complete_squares(l, {"x"});
    REQUIRE_FALSE(sos_ok(res4));
    CHECK(l.evaluate(std::get<NotSos>(res4).witness) < 0);
}

TEST_CASE("check_sos_exact basics") {
    Polynomial p = (pvar("x") + pvar("y")) * (pvar("x") + pvar("y")) + Polynomial::constant(Rat(2));
    CHECK(sos_ok(check_sos_exact(p)));
    CHECK_FALSE(sos_ok(check_sos_exact(-(pvar("x") * pvar("x")))));
    Polynomial cube = pvar("x") * pvar("x") * pvar("x");
    CHECK_THROWS_AS(check_sos_exact(cube), DegreeTooHigh);
}

TEST_CASE("split_sos on the running example") {
    Polynomial h = pvar("x1") * pvar("x1") + pvar("x2") * pvar("x2") + pvar("z") * pvar("z");
    auto split = split_sos(h, {"x1", "x2"}, {"y"}, {"z"});
    Polynomial h1 = split.h1.reconstruct();
    Polynomial h2 = split.h2.reconstruct();
    CHECK(h1 == pvar("x1") * pvar("x1") * Rat(1, 2) + pvar("x2") * pvar("x2") * Rat(1, 2));
    CHECK(h1 + h2 == h);
    CHECK(h1.uses_only({"x1", "x2", "y"}));
    CHECK(h2.uses_only({"x1", "x2", "z"}));
}

TEST_CASE("split_sos handles pure local squares") {
    Polynomial h = pvar("y1") * pvar("y1");
    auto split = split_sos(h, {"x"}, {"y1"}, {"z"});
    CHECK(split.h1.reconstruct() == h);
    CHECK(split.h2.reconstruct().is_zero());
}

TEST_CASE("split_sos rejects y-z coupling") {
    Polynomial h = pvar("y1") * pvar("z1") * Rat(2) + pvar("y1") * pvar("y1") +
                   pvar("z1") * pvar("z1");
    CHECK_THROWS_AS(split_sos(h, {}, {"y1"}, {"z1"}), MixedTermPresent);
}

TEST_CASE("split_sos exactness on random PSD Gram matrices without y-z coupling") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::vector<std::string> x{"x1", "x2"}, y{"y1"}, z{"z1"};
    std::vector<std::string> xy{"x1", "x2", "y1"}, xz{"x1", "x2", "z1"};
    int built = 0;
    for (int it = 0; it < 400 && built < 200; ++it) {
        // Sum of random squares over x∪y plus squares over x∪z is SOS with no
        // y-z monomials.
        Polynomial h;
        for (int k = 0; k < 2; ++k) {
            Polynomial f1 = Polynomial::constant(Rat(coef(rng), 2));
            for (auto& v : xy) f1 += pvar(v.c_str()) * Rat(coef(rng), 2);
            Polynomial f2 = Polynomial::constant(Rat(coef(rng), 2));
            for (auto& v : xz) f2 += pvar(v.c_str()) * Rat(coef(rng), 2);
            h += f1 * f1 + f2 * f2;
        }
        ++built;
        auto split = split_sos(h, x, y, z);
        CHECK(split.h1.reconstruct() + split.h2.reconstruct() == h);
        CHECK(split.h1.reconstruct().uses_only({"x1", "x2", "y1"}));
        CHECK(split.h2.reconstruct().uses_only({"x1", "x2", "z1"}));
        // Both parts are SOS by construction of the split.
        for (auto& sq : split.h1.squares) CHECK(sq.coeff > 0);
        for (auto& sq : split.h2.squares) CHECK(sq.coeff > 0);
        CHECK(split.h1.constant >= 0);
        CHECK(split.h2.constant >= 0);
    }
    CHECK(built == 200);
}

TEST_CASE("degree-2 SOS agrees with grid sign on random polynomials") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::vector<std::string> vars{"a", "b", "c"};
    for (int it = 0; it < 100; ++it) {
        Polynomial p;
        for (size_t i = 0; i < vars.size(); ++i) {
            for (size_t j = i; j < vars.size(); ++j)
                p += pvar(vars[i].c_str()) * pvar(vars[j].c_str()) * Rat(coef(rng));
            p += pvar(vars[i].c_str()) * Rat(coef(rng));
        }
        p += Polynomial::constant(Rat(coef(rng)));
        bool sos = sos_ok(check_sos_exact(p));
        bool neg_found = false;
        for (int a = -6; a <= 6 && !neg_found; a += 2)
            for (int b = -6; b <= 6 && !neg_found; b += 2)
                for (int c = -6; c <= 6 && !neg_found; c += 2) {
                    std::map<std::string, Rat> pt{{"a", Rat(a, 2)}, {"b", Rat(b, 2)}, {"c", Rat(c, 2)}};
                    if (p.evaluate(pt) < 0) neg_found = true;
                }
        if (sos) CHECK_FALSE(neg_found);
        if (neg_found) CHECK_FALSE(sos);
    }
}
