#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqinterp/driver.hpp"

using namespace cqi;

namespace {
std::string data_dir() {
    const char* d = std::getenv("CQITP_DATA_DIR");
    return d ? d : "tests/data";
}
} // namespace

TEST_CASE("running the quadrant example yields the exact published atom") {
    auto p = parse_problem_file(data_dir() + "/exam1.itp");
    RunConfig cfg;
    auto doc = run_problem(p, cfg);
    REQUIRE(doc.status == ResultDocument::Status::Interpolant);
    CHECK(formula_str(doc.interpolant, doc.registry) == "1/2*x1^2 + 2*x2 + 1/2*x2^2 > 0");
    CHECK(exit_code(doc.status) == 0);
    CHECK(doc.validation.symbol_scope_ok);
}

TEST_CASE("jointly satisfiable input maps to exit code 2") {
    auto p = parse_problem_file(data_dir() + "/satisfiable.itp");
    RunConfig cfg;
    auto doc = run_problem(p, cfg);
    CHECK(doc.status == ResultDocument::Status::NotMutuallyContradictory);
    CHECK(exit_code(doc.status) == 2);
}

TEST_CASE("json output is byte-identical across runs and carries the schema") {
    auto p = parse_problem_file(data_dir() + "/exam1.itp");
    RunConfig cfg;
    cfg.seed = 42;
    auto d1 = run_problem(p, cfg);
    auto d2 = run_problem(p, cfg);
    std::string j1 = emit(d1, EmitFormat::Json);
    std::string j2 = emit(d2, EmitFormat::Json);
    CHECK(j1 == j2);
    CHECK(j1.find("\"schema_version\": 1") != std::string::npos);
    CHECK(j1.find("\"lambda\"") != std::string::npos);
    CHECK(j1.find("\"eta\"") != std::string::npos);
    CHECK(j1.find("\"squares\"") != std::string::npos);
    CHECK(j1.find("\"trace\"") != std::string::npos);
    // timing only with the flag
    CHECK(j1.find("timing_ms") == std::string::npos);
    CHECK(emit(d1, EmitFormat::Json, true).find("timing_ms") != std::string::npos);
}

TEST_CASE("smt output renders the interpolant as a term") {
    auto p = parse_problem_file(data_dir() + "/euf_linear.itp");
    RunConfig cfg;
    auto doc = run_problem(p, cfg);
    REQUIRE(doc.status == ResultDocument::Status::Interpolant);
    std::string smt = emit(doc, EmitFormat::Smt);
    CHECK(smt == "(>= (f y) 0)\n");
}

TEST_CASE("text output round-trips through the interpolant grammar") {
    for (const char* name : {"exam1", "recursion2", "euf_alpha"}) {
        auto p = parse_problem_file(data_dir() + "/" + std::string(name) + ".itp");
        RunConfig cfg;
        auto doc = run_problem(p, cfg);
        REQUIRE(doc.status == ResultDocument::Status::Interpolant);
        std::string text = formula_str(doc.interpolant, doc.registry);
        auto back = parse_interpolant_text(text);
        CHECK(formula_str(back.formula, back.registry) == text);
    }
}

TEST_CASE("inconclusive status surfaces as exit code 3") {
    CHECK(exit_code(ResultDocument::Status::Inconclusive) == 3);
    CHECK(exit_code(ResultDocument::Status::Error) == 1);
}

TEST_CASE("subset shortcut is honored and can be disabled") {
    auto p = parse_problem_file(data_dir() + "/octagon1.itp");
    RunConfig cfg;
    auto with = run_problem(p, cfg);
    REQUIRE(with.status == ResultDocument::Status::Interpolant);
    CHECK(with.interpolant.kind == Formula::Kind::And); // I := phi

    cfg.subset_shortcut = false;
    auto without = run_problem(p, cfg);
    REQUIRE(without.status == ResultDocument::Status::Interpolant);
    CHECK(without.interpolant.kind == Formula::Kind::Atom);
    CHECK(without.interpolant.rel == Rel::Gt);
}

TEST_CASE("sdpa file-exchange backend writes problems and picks up solutions") {
    auto p = parse_problem_file(data_dir() + "/exam1.itp");
    std::string dir = "/tmp/cqitp_backend_test";
    std::filesystem::remove_all(dir);
    RunConfig cfg;
    cfg.backend = RunConfig::Backend::SdpaFile;
    cfg.sdpa_dir = dir;
    auto doc = run_problem(p, cfg);
    // No external solver ran: inconclusive, with the problem files exported.
    CHECK(doc.status == ResultDocument::Status::Inconclusive);
    REQUIRE(std::filesystem::exists(dir + "/sdp_0.dat-s"));

    // Play the external solver with the internal one and re-run.
    int rounds = 0;
    while (doc.status == ResultDocument::Status::Inconclusive && rounds < 8) {
        int k = 0;
        while (std::filesystem::exists(dir + "/sdp_" + std::to_string(k) + ".dat-s")) {
            std::string stem = dir + "/sdp_" + std::to_string(k);
            if (!std::filesystem::exists(stem + ".out")) {
                SdpProblem prob = import_sdpa_problem(stem + ".dat-s");
                SolverConfig sc;
                sc.strict_slack = true;
                SdpSolution sol = solve_sdp(prob, sc);
                export_sdpa_solution(sol, prob, stem + ".out");
            }
            ++k;
        }
        doc = run_problem(p, cfg);
        ++rounds;
    }
    REQUIRE(doc.status == ResultDocument::Status::Interpolant);
    CHECK(formula_str(doc.interpolant, doc.registry) == "1/2*x1^2 + 2*x2 + 1/2*x2^2 > 0");
    std::filesystem::remove_all(dir);
}
