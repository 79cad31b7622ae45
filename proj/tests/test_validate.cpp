#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqinterp/parser.hpp"
#include "cqinterp/validate.hpp"

using namespace cqi;

namespace {

Polynomial pvar(const char* n) { return Polynomial::var(n); }
Polynomial pc(long num, long den = 1) { return Polynomial::constant(rat(num, den)); }

std::string data_dir() {
    const char* d = std::getenv("CQITP_DATA_DIR");
    return d ? d : "tests/data";
}

} // namespace

TEST_CASE("published ellipsoid interpolant validates with zero counterexamples") {
    auto p = parse_problem_file(data_dir() + "/ellipsoid.itp");
    // -3 + 2x1 + x1^2 + 1/2 x2^2 > 0
    Formula I = Formula::atom(pc(-3) + pvar("x1") * Rat(2) + pvar("x1") * pvar("x1") +
                                  pvar("x2") * pvar("x2") * rat(1, 2),
                              Rel::Gt);
    ValidateOptions opt;
    opt.n_samples = 10000;
    opt.n_boundary = 1000;
    auto rep = validate_interpolant(p.phi, p.psi, I, p.registry, {"x1", "x2"}, {}, {}, opt);
    CHECK(rep.symbol_scope_ok);
    CHECK_FALSE(rep.sampling_counterexample.has_value());
}

TEST_CASE("a wrong candidate is refuted by sampling") {
    auto p = parse_problem_file(data_dir() + "/ellipsoid.itp");
    Formula I = Formula::atom(pvar("x1") - pc(10), Rel::Gt); // x1 > 10
    ValidateOptions opt;
    opt.n_samples = 10000;
    opt.n_boundary = 1000;
    auto rep = validate_interpolant(p.phi, p.psi, I, p.registry, {"x1", "x2"}, {}, {}, opt);
    REQUIRE(rep.sampling_counterexample.has_value());
    // the counterexample is a phi point violating I (exact rationals)
    auto& pt = *rep.sampling_counterexample;
    Rat f1 = (-(pvar("x1") * pvar("x1")) + pvar("x1") * Rat(4) + pvar("x2") - pc(4)).evaluate(pt);
    CHECK(f1 >= 0);
    CHECK(pt.at("x1") <= 10);
}

TEST_CASE("I = phi is valid when Var(phi) is a subset of Var(psi)") {
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("x") - pc(1), AtomRel::Ge});
    psi.atoms.push_back({-pvar("x"), AtomRel::Ge});
    psi.atoms.push_back({pvar("w"), AtomRel::Ge});
    Formula I = Formula::atom(pvar("x") - pc(1), Rel::Ge);
    ValidateOptions opt;
    opt.n_samples = 3000;
    opt.n_boundary = 200;
    auto rep = validate_interpolant(phi, psi, I, {}, {"x"}, {}, {}, opt);
    CHECK(rep.symbol_scope_ok);
    CHECK_FALSE(rep.sampling_counterexample.has_value());
}

TEST_CASE("symbol scope violations are flagged") {
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("x") - pvar("y"), AtomRel::Ge});
    psi.atoms.push_back({-pvar("x"), AtomRel::Gt});
    Formula I = Formula::atom(pvar("y"), Rel::Ge); // y is phi-local
    ValidateOptions opt;
    opt.n_samples = 10;
    opt.n_boundary = 0;
    auto rep = validate_interpolant(phi, psi, I, {}, {"x"}, {}, {}, opt);
    CHECK_FALSE(rep.symbol_scope_ok);
}

TEST_CASE("equality atoms become definitions so sampling is not vacuous") {
    // phi: y2 = x + 1 and y2 >= 3 ; psi: x <= 0. I: x >= 2 must hold on phi.
    RawSystem phi, psi;
    phi.atoms.push_back({pvar("y2") - pvar("x") - pc(1), AtomRel::Eq});
    phi.atoms.push_back({pvar("y2") - pc(3), AtomRel::Ge});
    psi.atoms.push_back({-pvar("x"), AtomRel::Ge});
    Formula good = Formula::atom(pvar("x") - pc(2), Rel::Ge);
    Formula bad = Formula::atom(pvar("x") - pc(3), Rel::Ge); // phi point x=2 violates
    ValidateOptions opt;
    opt.n_samples = 4000;
    opt.n_boundary = 400;
    auto rep1 = validate_interpolant(phi, psi, good, {}, {"x"}, {}, {}, opt);
    CHECK_FALSE(rep1.sampling_counterexample.has_value());
    auto rep2 = validate_interpolant(phi, psi, bad, {}, {"x"}, {}, {}, opt);
    CHECK(rep2.sampling_counterexample.has_value());
}

TEST_CASE("uninterpreted symbols are evaluated under random interpretations") {
    auto p = parse_problem_file(data_dir() + "/euf_linear.itp");
    // candidate: f(y) >= 0 resolved through a registry
    auto parsed = parse_interpolant_text("f(y) >= 0");
    AppRegistry merged = p.registry;
    for (auto& [k, v] : parsed.registry) merged[k] = v;
    ValidateOptions opt;
    opt.n_samples = 2000;
    opt.n_boundary = 100;
    opt.uf_interpretations = 50;
    auto rep = validate_interpolant(p.phi, p.psi, parsed.formula, merged, {"y"}, {"f"},
                                    p.uf_arities, opt);
    CHECK(rep.symbol_scope_ok);
    CHECK_FALSE(rep.sampling_counterexample.has_value());

    // x > 0 is not an interpolant (x is phi-local) and also refutable.
    auto repx = validate_interpolant(p.phi, p.psi, Formula::atom(pvar("x"), Rel::Gt), merged,
                                     {"y"}, {"f"}, p.uf_arities, opt);
    CHECK_FALSE(repx.symbol_scope_ok);
}

TEST_CASE("exact evaluation of registry terms") {
    AppRegistry reg;
    reg["@u0"] = AppTerm{"f", {pvar("x") - pc(1)}};
    UfInterpretation interp;
    interp.tables["f"] = {rat(1, 2), {Rat(2)}, {Rat(1)}}; // f(t) = 1/2 + 2t + t^2
    Polynomial p = pvar("@u0") * Rat(3) + pvar("x");
    // x = 3: f(2) = 1/2 + 4 + 4 = 17/2 ; p = 51/2 + 3 = 57/2
    Rat v = eval_ext(p, {{"x", Rat(3)}}, reg, interp);
    CHECK(v == rat(57, 2));
}
