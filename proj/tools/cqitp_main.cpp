#include <CLI11.hpp>

#include "cqinterp/driver.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"cqitp - certified Craig interpolants for concave quadratic formulas"};

    std::string input = "-";
    app.add_option("input", input, "problem file ('-' for stdin)");

    cqi::RunConfig cfg;
    double tolerance = cfg.sdp.feas_tol;
    double infeas_margin = cfg.sdp.infeas_margin;
    unsigned long denom_bound = cfg.denom_bound;
    int max_disjuncts = cfg.max_disjuncts;
    std::uint64_t seed = 0;
    std::string backend = "internal";
    std::string format = "text";
    bool no_sampling = false, no_subset_shortcut = false, timings = false;

    app.add_option("--tolerance", tolerance, "numeric feasibility tolerance");
    app.add_option("--infeas-margin", infeas_margin, "infeasibility declaration margin");
    app.add_option("--denom-bound", denom_bound, "denominator cap for rational recovery");
    app.add_option("--max-disjuncts", max_disjuncts, "DNF expansion cap");
    app.add_option("--seed", seed, "sampling seed");
    app.add_option("--backend", backend, "internal | sdpa-file:<dir>");
    app.add_option("--format", format, "text | json | smt");
    app.add_flag("--no-sampling", no_sampling, "skip the sampling validation backstop");
    app.add_flag("--no-subset-shortcut", no_subset_shortcut,
                 "disable the Var(A) subset-of Var(B) shortcut");
    app.add_flag("--timings", timings, "include wall-clock timing in json output");

    CLI11_PARSE(app, argc, argv);

    cfg.sdp.feas_tol = tolerance;
    cfg.sdp.infeas_margin = infeas_margin;
    cfg.denom_bound = denom_bound;
    cfg.max_disjuncts = max_disjuncts;
    cfg.seed = seed;
    cfg.sampling = !no_sampling;
    cfg.subset_shortcut = !no_subset_shortcut;
    if (backend == "internal") {
        cfg.backend = cqi::RunConfig::Backend::Internal;
    } else if (backend.rfind("sdpa-file:", 0) == 0) {
        cfg.backend = cqi::RunConfig::Backend::SdpaFile;
        cfg.sdpa_dir = backend.substr(std::string("sdpa-file:").size());
        if (cfg.sdpa_dir.empty()) {
            std::cerr << "error: sdpa-file backend needs a directory\n";
            return 1;
        }
    } else {
        std::cerr << "error: unknown backend '" << backend << "'\n";
        return 1;
    }

    cqi::EmitFormat fmt;
    if (format == "text") fmt = cqi::EmitFormat::Text;
    else if (format == "json") fmt = cqi::EmitFormat::Json;
    else if (format == "smt") fmt = cqi::EmitFormat::Smt;
    else {
        std::cerr << "error: unknown format '" << format << "'\n";
        return 1;
    }

    cqi::ParsedProblem problem;
    try {
        if (input == "-") problem = cqi::parse_problem(std::cin);
        else problem = cqi::parse_problem_file(input);
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    }

    cqi::ResultDocument doc = cqi::run_problem(problem, cfg);
    std::cout << cqi::emit(doc, fmt, timings);
    return cqi::exit_code(doc.status);
}
