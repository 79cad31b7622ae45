#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqinterp/parser.hpp"

using namespace cqi;

namespace {
std::string data_dir() {
    const char* d = std::getenv("CQITP_DATA_DIR");
    return d ? d : "tests/data";
}
} // namespace

TEST_CASE("octagon problem file parses with the expected atom counts") {
    auto p = parse_problem_file(data_dir() + "/octagon2.itp");
    CHECK(p.phi.atoms.size() == 9);
    CHECK(p.psi.atoms.size() == 9);
    CHECK(p.vars == std::vector<std::string>{"x", "y"});
    CHECK_FALSE(p.has_uf());
}

TEST_CASE("decimal literals parse exactly") {
    auto p = parse_problem_string(R"(
        (declare-fun x () Real)
        (assert-A (>= (- x 0.5) 0))
        (assert-B (> (- 3.63 x) 0))
    )");
    CHECK(p.phi.atoms[0].p == Polynomial::var("x") - Polynomial::constant(rat(1, 2)));
    CHECK(p.psi.atoms[0].p == Polynomial::constant(rat(363, 100)) - Polynomial::var("x"));
}

TEST_CASE("both assertion blocks are required") {
    CHECK_THROWS_AS(parse_problem_string(R"(
        (declare-fun x () Real)
        (assert-A (>= x 0))
    )"),
                    ParseError);
}

TEST_CASE("degree-3 atoms are rejected") {
    CHECK_THROWS_AS(parse_problem_string(R"(
        (declare-fun x () Real)
        (assert-A (>= (* x x x) 0))
        (assert-B (> x 0))
    )"),
                    NonCqAtom);
}

TEST_CASE("convex quadratic atoms are rejected") {
    CHECK_THROWS_AS(parse_problem_string(R"(
        (declare-fun x () Real)
        (assert-A (>= (* x x) 0))
        (assert-B (> x 0))
    )"),
                    NonCqAtom);
}

TEST_CASE("nonlinear equalities are rejected with the extension pointer") {
    try {
        parse_problem_string(R"(
            (declare-fun x () Real)
            (declare-fun y () Real)
            (assert-A (= (* x x) y))
            (assert-B (> x 0))
        )");
        FAIL("expected NonLinearEquality");
    } catch (const NonLinearEquality& e) {
        CHECK(std::string(e.what()).find("out of scope") != std::string::npos);
    }
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_problem_string("(declare-fun x () Real)\n(assert-A (>= q 0))\n(assert-B (> x 0))");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("application arity is checked") {
    CHECK_THROWS_AS(parse_problem_string(R"(
        (declare-fun x () Real)
        (declare-fun f (Real Real) Real)
        (assert-A (>= (f x) 0))
        (assert-B (> x 0))
    )"),
                    ParseError);
}

TEST_CASE("identical applications are shared") {
    auto p = parse_problem_string(R"(
        (declare-fun x () Real)
        (declare-fun f (Real) Real)
        (assert-A (>= (f x) 0))
        (assert-B (> (- 0 (f x)) 0))
    )");
    CHECK(p.registry.size() == 1);
}

TEST_CASE("interpolant text round-trips through its grammar") {
    std::vector<std::string> samples{
        "1/2*x1^2 + 2*x2 + 1/2*x2^2 > 0",
        "-x1 + x2 > 0 or (-x1 + x2 >= 0 and (3*q > 0 or -alpha(-1 + x2) > 0))",
        "x >= 0",
        "true",
        "false",
        "f(y) >= 0",
        "-3 + 2*x1 + x1^2 + 1/2*x2^2 > 0",
    };
    for (auto& s : samples) {
        auto once = parse_interpolant_text(s);
        std::string printed = formula_str(once.formula, once.registry);
        auto twice = parse_interpolant_text(printed);
        CHECK(formula_str(twice.formula, twice.registry) == printed);
    }
}

TEST_CASE("formula text of parsed candidates evaluates as expected") {
    auto c = parse_interpolant_text("1/4*(-4*alpha(-1 + x2) - x1^2 - x2^2) > 0");
    REQUIRE(c.formula.kind == Formula::Kind::Atom);
    // structure: a single registry leaf for alpha(x2 - 1)
    REQUIRE(c.registry.size() == 1);
    CHECK(c.registry.begin()->second.symbol == "alpha");
}
