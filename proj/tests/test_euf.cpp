#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqinterp/euf.hpp"
#include "cqinterp/parser.hpp"

using namespace cqi;

namespace {

Polynomial pvar(const char* n) { return Polynomial::var(n); }
Polynomial pc(long num, long den = 1) { return Polynomial::constant(rat(num, den)); }

} // namespace

TEST_CASE("purify flattens applications with fresh definition variables") {
    // phi: y2 = alpha(y1) + 1 ; psi: z2 = alpha(z1) - 1 (plus trivial bounds)
    AppRegistry reg;
    reg["@u0"] = AppTerm{"alpha", {pvar("y1")}};
    reg["@u1"] = AppTerm{"alpha", {pvar("z1")}};
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("y2") - pvar("@u0") - pc(1), AtomRel::Eq});
    psi.atoms.push_back({pvar("z2") - pvar("@u1") + pc(1), AtomRel::Eq});
    auto res = purify(phi, psi, reg, {"y1", "y2", "z1", "z2"}, {{"alpha", 1}});
    REQUIRE(res.defs.entries.size() == 2);
    CHECK(res.defs.entries[0].symbol == "alpha");
    CHECK(res.defs.entries[0].args == std::vector<std::string>{"y1"});
    CHECK(res.defs.entries[0].origin == DefEntry::Origin::Phi);
    CHECK(res.defs.entries[1].origin == DefEntry::Origin::Psi);
    // equality expanded into two nonstrict atoms per side
    CHECK(res.phi.atoms.size() == 2);
    CHECK(res.psi.atoms.size() == 2);
    // locality: both application variables are local (local arguments)
    CHECK(res.phi_vars.count(res.defs.entries[0].var));
    CHECK(res.psi_vars.count(res.defs.entries[1].var));
    CHECK(res.common_symbols.count("alpha"));
}

TEST_CASE("purify handles nested applications") {
    // alpha(beta(a)): a1 = beta(a), a2 = alpha(a1)
    AppRegistry reg;
    reg["@u0"] = AppTerm{"beta", {pvar("a")}};
    reg["@u1"] = AppTerm{"alpha", {pvar("@u0")}};
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("w") - pvar("@u1"), AtomRel::Eq});
    psi.atoms.push_back({pvar("w"), AtomRel::Gt});
    auto res = purify(phi, psi, reg, {"a", "w"}, {{"alpha", 1}, {"beta", 1}});
    REQUIRE(res.defs.entries.size() == 2);
    CHECK(res.defs.entries[0].symbol == "beta");
    CHECK(res.defs.entries[1].symbol == "alpha");
    // the alpha entry's argument is the beta entry's variable
    CHECK(res.defs.entries[1].args[0] == res.defs.entries[0].var);
}

TEST_CASE("purify without symbols is the identity") {
    AppRegistry reg;
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("x"), AtomRel::Ge});
    psi.atoms.push_back({-pvar("x"), AtomRel::Gt});
    auto res = purify(phi, psi, reg, {"x"}, {});
    CHECK(res.defs.entries.empty());
    CHECK(res.phi.atoms.size() == 1);
    CHECK(res.psi.atoms.size() == 1);
}

TEST_CASE("purify rejects nonlinear application arguments") {
    AppRegistry reg;
    reg["@u0"] = AppTerm{"alpha", {pvar("x") * pvar("x")}};
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("@u0"), AtomRel::Ge});
    psi.atoms.push_back({pvar("x"), AtomRel::Gt});
    CHECK_THROWS_AS(purify(phi, psi, reg, {"x"}, {{"alpha", 1}}), NonCqAfterFlattening);
}

TEST_CASE("horn instances pair same-symbol definitions") {
    AppRegistry reg;
    reg["@u0"] = AppTerm{"alpha", {pvar("y1")}};
    reg["@u1"] = AppTerm{"alpha", {pvar("z1")}};
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("y2") - pvar("@u0"), AtomRel::Eq});
    psi.atoms.push_back({pvar("z2") - pvar("@u1"), AtomRel::Eq});
    auto ctx = purify(phi, psi, reg, {"y1", "y2", "z1", "z2"}, {{"alpha", 1}});
    auto horn = horn_instances(ctx.defs, ctx);
    CHECK(horn.n_phi.empty());
    CHECK(horn.n_psi.empty());
    REQUIRE(horn.n_mix.size() == 1);
    CHECK(horn.n_mix[0].hyps.size() == 1);
    CHECK(horn.n_mix[0].hyps[0].first == pvar("y1"));
    CHECK(horn.n_mix[0].hyps[0].second == pvar("z1"));
}

TEST_CASE("horn instance count is sum over symbols of k choose 2") {
    AppRegistry reg;
    reg["@u0"] = AppTerm{"alpha", {pvar("p")}};
    reg["@u1"] = AppTerm{"alpha", {pvar("q")}};
    reg["@u2"] = AppTerm{"alpha", {pvar("r")}};
    reg["@u3"] = AppTerm{"beta", {pvar("p")}};
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("@u0") + pvar("@u1") + pvar("@u3") - pvar("p"), AtomRel::Ge});
    psi.atoms.push_back({pvar("@u2") + pvar("q") + pvar("r"), AtomRel::Gt});
    auto ctx = purify(phi, psi, reg, {"p", "q", "r"}, {{"alpha", 1}, {"beta", 1}});
    auto horn = horn_instances(ctx.defs, ctx);
    size_t total = horn.n_phi.size() + horn.n_psi.size() + horn.n_mix.size();
    CHECK(total == 3); // C(3,2) for alpha, C(1,2)=0 for beta
}

TEST_CASE("two same-side definitions give a one-sided instance") {
    AppRegistry reg;
    reg["@u0"] = AppTerm{"alpha", {pvar("y1")}};
    reg["@u1"] = AppTerm{"alpha", {pvar("y2")}};
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("@u0") - pvar("@u1"), AtomRel::Ge});
    psi.atoms.push_back({pvar("x"), AtomRel::Gt});
    auto ctx = purify(phi, psi, reg, {"x", "y1", "y2"}, {{"alpha", 1}});
    auto horn = horn_instances(ctx.defs, ctx);
    CHECK(horn.n_phi.size() == 1);
    CHECK(horn.n_mix.empty());
}

TEST_CASE("separating terms on the worked combination example") {
    // L1: x2 - x1 >= 0, y1 = x1 - 1 ; L2: x1 - x2 >= 0, z1 = x2 - 1
    LinearSystem L1, L2;
    L1.nonstrict = {pvar("x2") - pvar("x1"), pvar("y1") - pvar("x1") + pc(1),
                    pvar("x1") - pc(1) - pvar("y1")};
    L2.nonstrict = {pvar("x1") - pvar("x2"), pvar("z1") - pvar("x2") + pc(1),
                    pvar("x2") - pc(1) - pvar("z1")};
    auto terms = separating_terms(L1, L2, "y1", "z1", {"x1", "x2"});
    CHECK(terms.t_plus == pvar("x2") - pc(1));
    CHECK(terms.t_minus == pvar("x1") - pc(1));
}

TEST_CASE("separating terms for shared constants") {
    LinearSystem L1, L2;
    L1.nonstrict = {pvar("c") - pc(5), pc(5) - pvar("c")};
    L2.nonstrict = {pvar("b") - pc(5), pc(5) - pvar("b")};
    auto terms = separating_terms(L1, L2, "c", "b", {});
    CHECK(terms.t_plus == pc(5));
    CHECK(terms.t_minus == pc(5));
}

TEST_CASE("separating terms verify their entailments on randomized systems") {
    // c <= u <= b via shared common bounds u (common), forcing c = b when
    // combined with b <= u.
    for (int shift = -2; shift <= 2; ++shift) {
        LinearSystem L1, L2;
        Polynomial u = pvar("u"), c = pvar("c"), b = pvar("b");
        L1.nonstrict = {u - c + pc(shift), c - pc(shift) - u}; // c = u + shift
        L2.nonstrict = {u - b + pc(shift), b - pc(shift) - u}; // b = u + shift
        auto terms = separating_terms(L1, L2, "c", "b", {"u"});
        // entailments are verified inside; also check shape
        CHECK(terms.t_plus.uses_only({"u"}));
        CHECK(terms.t_minus.uses_only({"u"}));
    }
}

TEST_CASE("split_mixed_instances splits the worked clause") {
    AppRegistry reg;
    reg["@u0"] = AppTerm{"alpha", {pvar("y1")}};
    reg["@u1"] = AppTerm{"alpha", {pvar("z1")}};
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("y2") - pvar("@u0"), AtomRel::Eq});
    phi.atoms.push_back({pvar("y1") - pvar("x1") + pc(1), AtomRel::Eq});
    phi.atoms.push_back({pvar("x2") - pvar("x1"), AtomRel::Ge});
    psi.atoms.push_back({pvar("z2") - pvar("@u1"), AtomRel::Eq});
    psi.atoms.push_back({pvar("z1") - pvar("x2") + pc(1), AtomRel::Eq});
    psi.atoms.push_back({pvar("x1") - pvar("x2"), AtomRel::Ge});
    auto ctx = purify(phi, psi, reg, {"x1", "x2", "y1", "y2", "z1", "z2"}, {{"alpha", 1}});
    auto horn = horn_instances(ctx.defs, ctx);
    REQUIRE(horn.n_mix.size() == 1);

    SepmixState st;
    for (auto& a : ctx.phi.atoms) (a.strict ? st.L1.strict : st.L1.nonstrict).push_back(a.p);
    for (auto& a : ctx.psi.atoms) (a.strict ? st.L2.strict : st.L2.nonstrict).push_back(a.p);
    st.horn = horn;
    Session session;
    split_mixed_instances(st, ctx, session);
    CHECK(st.horn.n_mix.empty());
    REQUIRE(st.horn.n_phi.size() == 1);
    REQUIRE(st.horn.n_psi.size() == 1);
    // C_phi: y1 = x2-1 -> @a.. = t ; C_psi: x2-1 = z1 -> t = @a..
    CHECK(st.horn.n_phi[0].hyps[0].second == pvar("x2") - pc(1));
    CHECK(st.horn.n_psi[0].hyps[0].first == pvar("x2") - pc(1));
    // the shared variable resolves to alpha(x2 - 1)
    std::string t;
    for (auto& v : st.horn.n_phi[0].concl.second.vars()) t = v;
    REQUIRE(ctx.backsub.count(t));
    CHECK(ctx.backsub[t].symbol == "alpha");
    CHECK(ctx.backsub[t].args[0] == pvar("x2") - pc(1));
    CHECK(ctx.common_vars.count(t));
}

TEST_CASE("empty mixed set is untouched") {
    PurifyResult ctx;
    SepmixState st;
    Session session;
    split_mixed_instances(st, ctx, session);
    CHECK(st.horn.n_phi.empty());
    CHECK(st.horn.n_psi.empty());
}

TEST_CASE("combination end-to-end: linear with shared symbol") {
    // phi: f(x) >= 0, x - y >= 0, y - x >= 0 ; psi: -f(y) > 0
    auto parsed = parse_problem_string(R"(
        (declare-fun x () Real)
        (declare-fun y () Real)
        (declare-fun f (Real) Real)
        (assert-A (>= (f x) 0))
        (assert-A (>= (- x y) 0))
        (assert-A (>= (- y x) 0))
        (assert-B (> (- 0 (f y)) 0))
    )");
    Session session;
    EufResult res = interpolate_cq_euf(parsed.phi, parsed.psi, parsed.registry, parsed.vars,
                                       parsed.uf_arities, session);
    CHECK(formula_str(res.interpolant, res.registry) == "f(y) >= 0");
    for (auto& lc : res.leaf_certs) CHECK(verify_certificate(lc.pair, lc.cert).certificate_ok);
}

TEST_CASE("combination end-to-end: quadratic with unary symbol") {
    auto parsed = parse_problem_string(R"(
        (declare-fun x1 () Real)
        (declare-fun x2 () Real)
        (declare-fun y1 () Real)
        (declare-fun y2 () Real)
        (declare-fun z1 () Real)
        (declare-fun z2 () Real)
        (declare-fun alpha (Real) Real)
        (assert-A (>= (- x2 (+ x1 (* (+ (- y1 x1) 1) (+ (- y1 x1) 1)))) 0))
        (assert-A (= y2 (+ (alpha y1) 1)))
        (assert-A (> (- 1 (+ (* x1 x1) (* x2 x2) (* y2 y2))) 0))
        (assert-B (>= (- x1 (+ x2 (* (+ (- z1 x2) 1) (+ (- z1 x2) 1)))) 0))
        (assert-B (= z2 (- (alpha z1) 1)))
        (assert-B (> (- 1 (+ (* x1 x1) (* x2 x2) (* z2 z2))) 0))
    )");
    Session session;
    EufResult res = interpolate_cq_euf(parsed.phi, parsed.psi, parsed.registry, parsed.vars,
                                       parsed.uf_arities, session);
    // One elimination level (y1 = x1-1 / z1 = x2-1), then the unmixed grid.
    REQUIRE(res.trace.levels.size() >= 1);
    CHECK(res.trace.levels[0].f == pvar("x2") - pvar("x1"));
    for (auto& lc : res.leaf_certs) CHECK(verify_certificate(lc.pair, lc.cert).certificate_ok);
    // the resolved output mentions alpha(x2 - 1) and only common symbols
    std::set<std::string> syms;
    auto vars = formula_vars(res.interpolant, res.registry, &syms);
    CHECK(vars == std::set<std::string>{"x1", "x2"});
    CHECK(syms == std::set<std::string>{"alpha"});
}

TEST_CASE("UF-free inputs take the plain CQ path with identical results") {
    auto parsed = parse_problem_string(R"(
        (declare-fun x () Real)
        (assert-A (>= x 0))
        (assert-B (> (- 0 x) 0))
    )");
    Session s1, s2;
    EufResult res = interpolate_cq_euf(parsed.phi, parsed.psi, parsed.registry, parsed.vars,
                                       parsed.uf_arities, s1);
    CqConjunction phi, psi;
    phi.atoms.push_back({pvar("x"), false});
    psi.atoms.push_back({-pvar("x"), true});
    ProblemPair pair = make_pair(phi, psi, {"x"});
    InterpolationResult direct = interpolate_cq(pair, s2);
    CHECK(formula_str(res.interpolant, res.registry) ==
          formula_str(direct.interpolant, AppRegistry{}));
}
