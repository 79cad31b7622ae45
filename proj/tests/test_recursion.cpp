#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqinterp/recursion.hpp"

#include <random>

using namespace cqi;

namespace {

Polynomial pvar(const char* n) { return Polynomial::var(n); }
Polynomial pc(long num, long den = 1) { return Polynomial::constant(rat(num, den)); }

ProblemPair running_example() {
    // phi: x1 >= 0, x2 >= 0, -x1^2+2x1-x2^2+2x2-y^2 > 0 ; psi: -x1^2-x2^2-2x2-z^2 >= 0
    Polynomial x1 = pvar("x1"), x2 = pvar("x2"), y = pvar("y"), z = pvar("z");
    CqConjunction phi, psi;
    phi.atoms.push_back({x1, false});
    phi.atoms.push_back({x2, false});
    phi.atoms.push_back({-(x1 * x1) + x1 * Rat(2) - x2 * x2 + x2 * Rat(2) - y * y, true});
    psi.atoms.push_back({-(x1 * x1) - x2 * x2 - x2 * Rat(2) - z * z, false});
    return make_pair(phi, psi, {"x1", "x2", "y", "z"});
}

} // namespace

TEST_CASE("derive_substitutions on the running example's h1") {
    Polynomial h = pvar("x1") * pvar("x1") + pvar("x2") * pvar("x2") + pvar("z") * pvar("z");
    auto split = split_sos(h, {"x1", "x2"}, {"y"}, {"z"});
    auto phi_out = derive_substitutions(split.h1);
    auto* sub = std::get_if<Substitution>(&phi_out);
    REQUIRE(sub != nullptr);
    REQUIRE(sub->bindings.size() == 2);
    CHECK(sub->bindings[0].var == "x1");
    CHECK(sub->bindings[0].rhs.is_zero());
    CHECK(sub->bindings[1].var == "x2");
    CHECK(sub->bindings[1].rhs.is_zero());

    auto psi_out = derive_substitutions(split.h2);
    auto* sub2 = std::get_if<Substitution>(&psi_out);
    REQUIRE(sub2 != nullptr);
    CHECK(sub2->bindings.size() == 3); // z, x1, x2
}

TEST_CASE("derive_substitutions solves shifted squares") {
    Polynomial h = (pvar("y1") - pvar("x1") + pc(1)) * (pvar("y1") - pvar("x1") + pc(1));
    auto split = split_sos(h, {"x1"}, {"y1"}, {});
    auto out = derive_substitutions(split.h1);
    auto* sub = std::get_if<Substitution>(&out);
    REQUIRE(sub != nullptr);
    REQUIRE(sub->bindings.size() == 1);
    CHECK(sub->bindings[0].var == "y1");
    CHECK(sub->bindings[0].rhs == pvar("x1") - pc(1));
}

TEST_CASE("derive_substitutions reports side contradictions") {
    SosDecomposition dec;
    dec.constant = rat(1, 2);
    CHECK(std::holds_alternative<ContradictionFound>(derive_substitutions(dec)));
}

TEST_CASE("derive_bridge on the running example") {
    ProblemPair pair = running_example();
    NsoscViolation v;
    v.delta = {Rat(0), Rat(2), Rat(1)};
    v.h = pvar("x1") * pvar("x1") + pvar("x2") * pvar("x2") + pvar("z") * pvar("z");
    Bridge b = derive_bridge(v, pair);
    CHECK(b.f == pvar("x1") * pvar("x1") * rat(1, 2) + pvar("x2") * pvar("x2") * rat(1, 2) +
                     pvar("x2") * Rat(2));
}

TEST_CASE("derive_bridge on the flattened combination example") {
    // f1 = -(y1-x1+1)^2 - x1 + x2 (phi), f2 = -(z1-x2+1)^2 + x1 - x2 (psi)
    Polynomial x1 = pvar("x1"), x2 = pvar("x2"), y1 = pvar("y1"), z1 = pvar("z1");
    Polynomial f1 = -((y1 - x1 + pc(1)) * (y1 - x1 + pc(1))) - x1 + x2;
    Polynomial f2 = -((z1 - x2 + pc(1)) * (z1 - x2 + pc(1))) + x1 - x2;
    CqConjunction phi, psi;
    phi.atoms.push_back({f1, false});
    psi.atoms.push_back({f2, false});
    ProblemPair pair = make_pair(phi, psi, {"x1", "x2", "y1", "z1"});
    NsoscViolation v;
    v.delta = {Rat(1), Rat(1)};
    v.h = -(f1 + f2);
    Bridge b = derive_bridge(v, pair);
    CHECK(b.f == -x1 + x2);
    CHECK(b.h1.reconstruct() == (y1 - x1 + pc(1)) * (y1 - x1 + pc(1)));
    CHECK(b.h2.reconstruct() == (z1 - x2 + pc(1)) * (z1 - x2 + pc(1)));
}

TEST_CASE("substitute_cq preserves concavity on random affine maps") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::vector<std::string> vars{"a", "b", "c"};
    int checked = 0;
    for (int it = 0; it < 100; ++it) {
        // random concave quadratic: -(sum of squares of affine forms) + affine
        Polynomial p;
        for (int k = 0; k < 2; ++k) {
            Polynomial l = pc(coef(rng));
            for (auto& v : vars) l += pvar(v.c_str()) * Rat(coef(rng));
            p -= l * l;
        }
        for (auto& v : vars) p += pvar(v.c_str()) * Rat(coef(rng));
        QuadForm q = quadratic_form(p, vars);
        REQUIRE(is_cq(q));
        Substitution sub;
        Polynomial rhs = pc(coef(rng));
        rhs += pvar("b") * Rat(coef(rng));
        rhs += pvar("c") * Rat(coef(rng));
        sub.bindings.push_back({"a", rhs});
        QuadForm out = substitute_cq(q, sub); // asserts concavity internally
        CHECK(is_cq(out));
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("substitute_cq identity substitution") {
    Polynomial g1 = -(pvar("x1") * pvar("x1")) + pvar("x1") * Rat(2);
    QuadForm q = quadratic_form(g1, {"x1"});
    QuadForm out = substitute_cq(q, Substitution{});
    CHECK(out.expand() == g1);
}

TEST_CASE("running example end-to-end: exact published interpolant") {
    ProblemPair pair = running_example();
    Session session;
    InterpolationResult res = interpolate_cq(pair, session);
    // 1/2 x1^2 + 1/2 x2^2 + 2 x2 > 0
    REQUIRE(res.interpolant.kind == Formula::Kind::Atom);
    CHECK(res.interpolant.rel == Rel::Gt);
    CHECK(res.interpolant.poly == pvar("x1") * pvar("x1") * rat(1, 2) +
                                      pvar("x2") * pvar("x2") * rat(1, 2) + pvar("x2") * Rat(2));
    CHECK(res.trace.levels.size() == 1);
    CHECK(res.trace.leaf == RecursionTrace::Leaf::BaseCase);
    for (auto& lc : res.leaf_certs) CHECK(verify_certificate(lc.pair, lc.cert).certificate_ok);
}

TEST_CASE("two-level recursion ends in a strict base case") {
    // phi: f1..f3 >= 0, g1 > 0 ; psi: f4..f6 >= 0, g2 > 0
    Polynomial x1 = pvar("x1"), x2 = pvar("x2"), y1 = pvar("y1"), y2 = pvar("y2"),
               z1 = pvar("z1"), z2 = pvar("z2");
    Polynomial f1 = -y1 + x1 - pc(2);
    Polynomial f2 = -(y1 * y1) - x1 * x1 + x1 * y1 * Rat(2) - y1 * Rat(2) + x1 * Rat(2);
    Polynomial f3 = -(y2 * y2) - y1 * y1 - x2 * x2 - y1 * Rat(4) + x2 * Rat(2) - pc(4);
    Polynomial g1 = x2 * Rat(2) - x1 - pc(1);
    Polynomial f4 = -z1 + x2 * Rat(2) + pc(1);
    Polynomial f5 = -(z1 * z1) - x2 * x2 * Rat(4) + x2 * z1 * Rat(4) + z1 * Rat(3) -
                    x2 * Rat(6) - pc(2);
    Polynomial f6 = -(z2 * z2) - x1 * x1 - x2 * x2 + x1 * Rat(2) + z1 - x2 * Rat(2) - pc(1);
    Polynomial g2 = x1 * Rat(2) - x2 - pc(1);
    CqConjunction phi, psi;
    phi.atoms.push_back({f1, false});
    phi.atoms.push_back({f2, false});
    phi.atoms.push_back({f3, false});
    phi.atoms.push_back({g1, true});
    psi.atoms.push_back({f4, false});
    psi.atoms.push_back({f5, false});
    psi.atoms.push_back({f6, false});
    psi.atoms.push_back({g2, true});
    ProblemPair pair = make_pair(phi, psi, {"x1", "x2", "y1", "y2", "z1", "z2"});
    Session session;
    InterpolationResult res = interpolate_cq(pair, session);

    REQUIRE(res.trace.levels.size() == 2);
    CHECK(res.trace.leaf == RecursionTrace::Leaf::BaseCase);
    // level 1 eliminates y1 = x1 - 2 on the phi side
    REQUIRE(res.trace.levels[0].sub_phi.bindings.size() == 1);
    CHECK(res.trace.levels[0].sub_phi.bindings[0].var == "y1");
    CHECK(res.trace.levels[0].sub_phi.bindings[0].rhs == x1 - pc(2));
    CHECK(res.trace.levels[0].f.is_zero());
    // level 2 eliminates z1 = 2x2 + 1 on the psi side
    REQUIRE(res.trace.levels[1].sub_psi.bindings.size() == 1);
    CHECK(res.trace.levels[1].sub_psi.bindings[0].var == "z1");
    CHECK(res.trace.levels[1].sub_psi.bindings[0].rhs == x2 * Rat(2) + pc(1));
    CHECK(res.trace.levels[1].f.is_zero());
    // strict base-case atom over common variables
    REQUIRE(res.interpolant.kind == Formula::Kind::Atom);
    CHECK(res.interpolant.rel == Rel::Gt);
    CHECK(res.interpolant.poly.uses_only({"x1", "x2"}));
    REQUIRE(res.leaf_certs.size() == 1);
    CHECK(verify_certificate(res.leaf_certs[0].pair, res.leaf_certs[0].cert).certificate_ok);
}

TEST_CASE("variable-subset shortcut returns phi") {
    // Var(phi) subset of Var(psi): I := phi
    CqConjunction phi, psi;
    phi.atoms.push_back({pvar("x") - pc(1), false});
    psi.atoms.push_back({-pvar("x"), false});
    psi.atoms.push_back({pvar("w"), false});
    ProblemPair pair = make_pair(phi, psi, {"x", "w"});
    Session session;
    session.cfg.sampling = true;
    InterpolationResult res = interpolate_cq(pair, session);
    CHECK(res.trace.leaf == RecursionTrace::Leaf::VarSubset);
    REQUIRE(res.interpolant.kind == Formula::Kind::Atom);
    CHECK(res.interpolant.poly == pvar("x") - pc(1));
}

TEST_CASE("satisfiability pre-pass raises on joint satisfiability") {
    CqConjunction phi, psi;
    phi.atoms.push_back({pvar("x"), false});
    psi.atoms.push_back({pvar("x") - pc(1), false});
    ProblemPair pair = make_pair(phi, psi, {"x"});
    Session session;
    CHECK_THROWS_AS(interpolate_cq(pair, session), NotMutuallyContradictory);
}

TEST_CASE("recursion depth never exceeds the variable count") {
    ProblemPair pair = running_example();
    Session session;
    InterpolationResult res = interpolate_cq(pair, session);
    CHECK(res.trace.depth() <= 4);
}
