#include "cqinterp/driver.hpp"

#include <json.hpp>

#include <chrono>
#include <random>

namespace cqi {

namespace {

using ordered_json = nlohmann::ordered_json;

CqConjunction to_conjunction(const RawSystem& sys) {
    CqConjunction out;
    for (auto& a : sys.atoms) {
        switch (a.rel) {
        case AtomRel::Ge:
            out.atoms.push_back({a.p, false});
            break;
        case AtomRel::Gt:
            out.atoms.push_back({a.p, true});
            break;
        case AtomRel::Eq:
            out.atoms.push_back({a.p, false});
            out.atoms.push_back({-a.p, false});
            break;
        }
    }
    return out;
}

// Joint-satisfiability sampling over the raw systems (with random symbol
// interpretations when uninterpreted symbols are present).
void raw_satisfiability_prepass(const ParsedProblem& p, const RunConfig& cfg) {
    if (!cfg.sampling || cfg.sat_prepass_samples <= 0) return;
    std::set<std::string> vars = p.phi.vars(p.registry);
    for (auto& v : p.psi.vars(p.registry)) vars.insert(v);
    std::seed_seq seq{cfg.seed, std::uint64_t(0x9a77)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<long> num(-640, 640);
    int interps = p.uf_arities.empty() ? 1 : 5;
    for (int t = 0; t < interps; ++t) {
        UfInterpretation interp = p.uf_arities.empty()
                                      ? UfInterpretation{}
                                      : UfInterpretation::random(p.uf_arities, cfg.seed + t);
        for (int k = 0; k < cfg.sat_prepass_samples / interps; ++k) {
            std::map<std::string, Rat> pt;
            for (auto& v : vars) {
                Rat r(num(rng), 64);
                r.canonicalize();
                pt[v] = r;
            }
            auto sat = [&](const RawSystem& sys) {
                for (auto& a : sys.atoms) {
                    Rat v = eval_ext(a.p, pt, p.registry, interp);
                    if (a.rel == AtomRel::Ge && !(v >= 0)) return false;
                    if (a.rel == AtomRel::Gt && !(v > 0)) return false;
                    if (a.rel == AtomRel::Eq && v != 0) return false;
                }
                return true;
            };
            if (sat(p.phi) && sat(p.psi))
                throw NotMutuallyContradictory("sampling found a common model");
        }
    }
}

} // namespace

ResultDocument run_problem(const ParsedProblem& problem, const RunConfig& cfg) {
    ResultDocument doc;
    auto t0 = std::chrono::steady_clock::now();
    Session session{cfg};

    std::set<std::string> phi_syms, psi_syms;
    std::set<std::string> pv = problem.phi.vars(problem.registry, &phi_syms);
    std::set<std::string> qv = problem.psi.vars(problem.registry, &psi_syms);
    std::set<std::string> common_vars, common_syms;
    for (auto& v : pv)
        if (qv.count(v)) common_vars.insert(v);
    for (auto& s : phi_syms)
        if (psi_syms.count(s)) common_syms.insert(s);

    try {
        raw_satisfiability_prepass(problem, cfg);
        AppRegistry merged = problem.registry;
        if (problem.has_uf()) {
            EufResult res = interpolate_cq_euf(problem.phi, problem.psi, problem.registry,
                                               problem.vars, problem.uf_arities, session);
            doc.interpolant = res.interpolant;
            doc.registry = res.registry;
            doc.trace = res.trace;
            doc.leaf_certs = res.leaf_certs;
            for (auto& [k, v] : res.registry) merged[k] = v;
        } else {
            ProblemPair pair =
                make_pair(to_conjunction(problem.phi), to_conjunction(problem.psi), problem.vars);
            InterpolationResult res = interpolate_cq(pair, session);
            doc.interpolant = res.interpolant;
            doc.trace = res.trace;
            doc.leaf_certs = res.leaf_certs;
        }

        // Final gate: every leaf certificate re-verifies, and the sampling
        // validator finds no counterexample.
        for (auto& lc : doc.leaf_certs) {
            auto rep = verify_certificate(lc.pair, lc.cert);
            if (!rep.certificate_ok)
                throw InternalInconsistency("leaf certificate failed verification: " + rep.detail);
        }
        ValidateOptions vopt;
        vopt.seed = cfg.seed;
        vopt.uf_interpretations = problem.has_uf() ? 50 : 1;
        if (!cfg.sampling) {
            vopt.n_samples = 0;
            vopt.n_boundary = 0;
        }
        doc.validation = validate_interpolant(problem.phi, problem.psi, doc.interpolant, merged,
                                              common_vars, common_syms, problem.uf_arities, vopt);
        if (!doc.validation.symbol_scope_ok) {
            doc.status = ResultDocument::Status::Error;
            doc.detail = "interpolant failed the symbol-scope check";
        } else if (doc.validation.sampling_counterexample) {
            doc.status = ResultDocument::Status::Error;
            doc.detail = "sampling found a counterexample: " + doc.validation.detail;
        } else {
            doc.status = ResultDocument::Status::Interpolant;
        }
    } catch (const NotMutuallyContradictory& e) {
        doc.status = ResultDocument::Status::NotMutuallyContradictory;
        doc.detail = e.what();
    } catch (const SolverInconclusive& e) {
        doc.status = ResultDocument::Status::Inconclusive;
        doc.detail = e.what();
    } catch (const DnfBlowup& e) {
        doc.status = ResultDocument::Status::Inconclusive;
        doc.detail = e.what();
    } catch (const std::exception& e) {
        doc.status = ResultDocument::Status::Error;
        doc.detail = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    doc.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return doc;
}

namespace {

std::string status_str(ResultDocument::Status s) {
    switch (s) {
    case ResultDocument::Status::Interpolant:
        return "interpolant";
    case ResultDocument::Status::NotMutuallyContradictory:
        return "not-mutually-contradictory";
    case ResultDocument::Status::Inconclusive:
        return "inconclusive";
    case ResultDocument::Status::Error:
        return "error";
    }
    return "error";
}

ordered_json formula_ast(const Formula& f) {
    ordered_json j;
    switch (f.kind) {
    case Formula::Kind::True:
        j["kind"] = "true";
        break;
    case Formula::Kind::False:
        j["kind"] = "false";
        break;
    case Formula::Kind::Atom:
        j["kind"] = "atom";
        j["rel"] = f.rel == Rel::Gt ? ">" : ">=";
        j["poly"] = f.poly.str();
        break;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        j["kind"] = f.kind == Formula::Kind::And ? "and" : "or";
        ordered_json kids = ordered_json::array();
        for (auto& k : f.kids) kids.push_back(formula_ast(k));
        j["kids"] = std::move(kids);
        break;
    }
    }
    return j;
}

ordered_json sos_json(const SosDecomposition& h) {
    ordered_json j;
    ordered_json squares = ordered_json::array();
    for (auto& s : h.squares) {
        ordered_json sq;
        sq["coeff"] = rat_str(s.coeff);
        sq["form"] = s.form.str();
        if (!s.pivot.empty()) sq["pivot"] = s.pivot;
        squares.push_back(std::move(sq));
    }
    j["squares"] = std::move(squares);
    j["constant"] = rat_str(h.constant);
    return j;
}

ordered_json cert_json(const LeafCertificate& lc) {
    ordered_json j;
    ordered_json lam = ordered_json::array(), eta = ordered_json::array();
    for (auto& l : lc.cert.lambda) lam.push_back(rat_str(l));
    for (auto& e : lc.cert.eta) eta.push_back(rat_str(e));
    j["lambda"] = std::move(lam);
    j["eta"] = std::move(eta);
    j["h1"] = sos_json(lc.cert.h1);
    j["h2"] = sos_json(lc.cert.h2);
    ordered_json fs = ordered_json::array(), gs = ordered_json::array();
    for (auto& f : lc.pair.fs()) fs.push_back(f.str());
    for (auto& g : lc.pair.gs()) gs.push_back(g.str());
    j["fs"] = std::move(fs);
    j["gs"] = std::move(gs);
    return j;
}

ordered_json trace_json(const RecursionTrace& t) {
    ordered_json j;
    ordered_json levels = ordered_json::array();
    for (auto& l : t.levels) {
        ordered_json lj;
        ordered_json d = ordered_json::array();
        for (auto& x : l.delta) d.push_back(rat_str(x));
        lj["delta"] = std::move(d);
        lj["f"] = l.f.str();
        auto subs = [](const Substitution& s) {
            ordered_json out = ordered_json::object();
            for (auto& b : s.bindings) out[b.var] = b.rhs.str();
            return out;
        };
        lj["eliminated_phi"] = subs(l.sub_phi);
        lj["eliminated_psi"] = subs(l.sub_psi);
        lj["constant_case"] = l.constant_case;
        lj["vars_before"] = l.vars_before;
        lj["vars_after"] = l.vars_after;
        levels.push_back(std::move(lj));
    }
    j["levels"] = std::move(levels);
    switch (t.leaf) {
    case RecursionTrace::Leaf::BaseCase:
        j["leaf"] = "base-case";
        break;
    case RecursionTrace::Leaf::VarSubset:
        j["leaf"] = "var-subset";
        break;
    case RecursionTrace::Leaf::SideContradiction:
        j["leaf"] = "side-contradiction";
        break;
    }
    return j;
}

} // namespace

std::string emit(const ResultDocument& doc, EmitFormat format, bool with_timing) {
    if (format == EmitFormat::Text) {
        std::string out = "status: " + status_str(doc.status) + "\n";
        if (doc.status == ResultDocument::Status::Interpolant)
            out += "interpolant: " + formula_str(doc.interpolant, doc.registry) + "\n";
        if (!doc.detail.empty()) out += "detail: " + doc.detail + "\n";
        if (doc.status == ResultDocument::Status::Interpolant) {
            out += "certificates: " + std::to_string(doc.leaf_certs.size()) + " leaf(s), " +
                   std::to_string(doc.trace.levels.size()) + " elimination level(s)\n";
        }
        out += "time: " + std::to_string(doc.wall_ms) + " ms\n";
        return out;
    }
    if (format == EmitFormat::Smt) {
        if (doc.status != ResultDocument::Status::Interpolant)
            return "; status: " + status_str(doc.status) + "\n";
        return formula_smt(doc.interpolant, doc.registry) + "\n";
    }
    ordered_json j;
    j["schema_version"] = 1;
    j["status"] = status_str(doc.status);
    if (doc.status == ResultDocument::Status::Interpolant) {
        ordered_json ij;
        ij["text"] = formula_str(doc.interpolant, doc.registry);
        ij["smt"] = formula_smt(doc.interpolant, doc.registry);
        ij["ast"] = formula_ast(doc.interpolant);
        j["interpolant"] = std::move(ij);
        ordered_json reg = ordered_json::object();
        for (auto& [leaf, app] : doc.registry) {
            ordered_json aj;
            aj["symbol"] = app.symbol;
            ordered_json args = ordered_json::array();
            for (auto& a : app.args) args.push_back(a.str());
            aj["args"] = std::move(args);
            reg[leaf] = std::move(aj);
        }
        j["registry"] = std::move(reg);
        if (!doc.leaf_certs.empty()) j["certificate"] = cert_json(doc.leaf_certs.front());
        ordered_json leaves = ordered_json::array();
        for (auto& lc : doc.leaf_certs) leaves.push_back(cert_json(lc));
        j["leaves"] = std::move(leaves);
        j["trace"] = trace_json(doc.trace);
        ordered_json vj;
        vj["certificate_ok"] = true;
        vj["symbol_scope_ok"] = doc.validation.symbol_scope_ok;
        vj["counterexample"] = nullptr;
        j["validation"] = std::move(vj);
    } else {
        j["detail"] = doc.detail;
    }
    if (with_timing) j["timing_ms"] = doc.wall_ms;
    return j.dump(2) + "\n";
}

int exit_code(ResultDocument::Status s) {
    switch (s) {
    case ResultDocument::Status::Interpolant:
        return 0;
    case ResultDocument::Status::NotMutuallyContradictory:
        return 2;
    case ResultDocument::Status::Inconclusive:
        return 3;
    case ResultDocument::Status::Error:
        return 1;
    }
    return 1;
}

} // namespace cqi
