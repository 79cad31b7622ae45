#include "cqinterp/cqcore.hpp"

#include "cqinterp/sdpa_io.hpp"

#include <algorithm>
#include <filesystem>
#include <random>

namespace cqi {

SdpSolution Session::solve(const SdpProblem& prob, bool strict_slack) {
    SolverConfig sc = cfg.sdp;
    sc.strict_slack = strict_slack;
    if (cfg.backend == RunConfig::Backend::Internal) return solve_sdp(prob, sc);

    // File-exchange backend: write the problem; pick up the solution if the
    // external solver already produced one.
    namespace fs = std::filesystem;
    fs::create_directories(cfg.sdpa_dir);
    std::string stem = cfg.sdpa_dir + "/sdp_" + std::to_string(sdp_counter++);
    export_sdpa(prob, stem + ".dat-s");
    std::string out = stem + ".out";
    if (!fs::exists(out))
        throw SolverInconclusive("sdpa-file backend: waiting for external solution " + out);
    SdpSolution sol = import_sdpa_solution(out, prob);
    if (sol.status == SdpStatus::Unknown)
        throw SolverInconclusive("sdpa-file backend: external solver did not report feasibility");
    return sol;
}

std::vector<RationalizeSpec> rationalize_ladder(const RunConfig& cfg) {
    // Coarse snaps first: they recover the simple certificates the feasible
    // set usually contains, and the exact verification step rejects any wrong
    // snap. Later rungs raise the denominator cap and drop the snapping.
    std::vector<RationalizeSpec> out;
    unsigned long bound = cfg.denom_bound;
    for (int k = 0; k <= cfg.denom_escalations; ++k) {
        out.push_back(RationalizeSpec{bound, 1e-3});
        out.push_back(RationalizeSpec{bound, 1e-5});
        out.push_back(RationalizeSpec{bound, std::max(cfg.sdp.feas_tol * 100, 1e-10)});
        out.push_back(RationalizeSpec{bound, 0.0});
        if (bound > 10000000000UL / 100) bound = 10000000000UL;
        else bound *= 100;
    }
    return out;
}

namespace {

std::vector<std::string> poly_vars_union(const std::vector<Polynomial>& ps) {
    std::set<std::string> s;
    for (auto& p : ps)
        for (auto& v : p.vars()) s.insert(v);
    return {s.begin(), s.end()};
}

bool all_linear(const std::vector<Polynomial>& ps) {
    return std::all_of(ps.begin(), ps.end(), [](const Polynomial& p) { return p.degree() <= 1; });
}

// Exact route for linear nonstricts: a combination -sum delta f that is a
// nonzero SOS must be a positive constant, so scale it to 1.
std::optional<std::vector<Rat>> linear_sos_combination(const std::vector<Polynomial>& fs) {
    LpProblem lp;
    for (size_t i = 0; i < fs.size(); ++i) lp.add_var("d" + std::to_string(i));
    std::set<std::string> vars;
    for (auto& f : fs)
        for (auto& v : f.vars()) vars.insert(v);
    for (auto& v : vars) {
        LpConstraint c;
        c.rel = LpRel::Eq;
        c.rhs = 0;
        Monomial mv{{v, 1}};
        for (size_t i = 0; i < fs.size(); ++i) {
            Rat k = fs[i].coeff(mv);
            if (k != 0) c.terms.emplace_back("d" + std::to_string(i), k);
        }
        lp.constraints.push_back(std::move(c));
    }
    {
        LpConstraint c;
        c.rel = LpRel::Eq;
        c.rhs = -1;
        for (size_t i = 0; i < fs.size(); ++i) {
            Rat k = fs[i].constant_term();
            if (k != 0) c.terms.emplace_back("d" + std::to_string(i), k);
        }
        lp.constraints.push_back(std::move(c));
    }
    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Feasible && sol.status != LpStatus::Optimal) return std::nullopt;
    std::vector<Rat> delta;
    for (size_t i = 0; i < fs.size(); ++i) delta.push_back(sol.point["d" + std::to_string(i)]);
    return delta;
}

// Index of variable v within the bordered order (1 + vars).
int border_index(const std::vector<std::string>& vars, const std::string& v) {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == v) return static_cast<int>(i) + 1;
    throw UnknownVariable("border_index: " + v);
}

SymMatrix bordered_gram(const Polynomial& p, const std::vector<std::string>& vars) {
    return p_matrix(quadratic_form(p, vars));
}

} // namespace

NsoscOutcome check_nsosc(const std::vector<Polynomial>& fs, const std::vector<std::string>& vars,
                         Session& session) {
    if (fs.empty()) return NsoscHolds{};

    if (all_linear(fs)) {
        auto delta = linear_sos_combination(fs);
        if (!delta) return NsoscHolds{};
        auto norm = to_coprime_integers(*delta);
        Polynomial h;
        for (size_t i = 0; i < fs.size(); ++i) h -= fs[i] * norm[i];
        return NsoscViolation{norm, h};
    }

    int n = static_cast<int>(vars.size());
    SdpProblem prob;
    int mblock = prob.add_block("M", n + 1, /*slack_eligible=*/true);
    for (size_t i = 0; i < fs.size(); ++i) prob.add_scalar("d" + std::to_string(i), true);
    std::vector<SymMatrix> P;
    for (auto& f : fs) P.push_back(bordered_gram(f, vars));

    for (int i = 0; i <= n; ++i) {
        for (int j = i; j <= n; ++j) {
            SdpConstraint c;
            c.rhs = 0;
            SdpTerm tm;
            tm.kind = SdpTerm::Kind::BlockEntry;
            tm.index = mblock;
            tm.i = i;
            tm.j = j;
            tm.coeff = 1;
            c.terms.push_back(tm);
            for (size_t k = 0; k < fs.size(); ++k) {
                if (P[k](i, j) == 0) continue;
                SdpTerm ts;
                ts.kind = SdpTerm::Kind::Scalar;
                ts.index = static_cast<int>(k);
                ts.coeff = P[k](i, j);
                c.terms.push_back(ts);
            }
            if (c.terms.size() > 1) prob.eq_constraints.push_back(std::move(c));
            else prob.eq_constraints.push_back(std::move(c)); // pins the entry to 0
        }
    }
    {
        // Nontriviality: trace(M) = 1.
        SdpConstraint c;
        c.rhs = 1;
        for (int i = 0; i <= n; ++i) {
            SdpTerm tm;
            tm.kind = SdpTerm::Kind::BlockEntry;
            tm.index = mblock;
            tm.i = i;
            tm.j = i;
            tm.coeff = 1;
            c.terms.push_back(tm);
        }
        prob.eq_constraints.push_back(std::move(c));
    }

    auto combo = [&fs](const std::vector<Rat>& d) {
        Polynomial h;
        for (size_t i = 0; i < fs.size(); ++i) h -= fs[i] * d[i];
        return h;
    };
    auto is_violation = [&combo](const std::vector<Rat>& d) -> std::optional<Polynomial> {
        Polynomial h = combo(d);
        if (h.is_zero()) return std::nullopt;
        auto res = check_sos_exact(h);
        if (!std::holds_alternative<SosDecomposition>(res)) return std::nullopt;
        return h;
    };
    // Support minimization keeps the combination clean: joint weight on
    // opposite rows (equality pairs) cancels exactly, and remaining entries
    // are dropped greedily under exact re-verification.
    auto sparsify = [&fs, &is_violation](std::vector<Rat> d) {
        for (size_t i = 0; i < d.size(); ++i) {
            for (size_t j = i + 1; j < d.size(); ++j) {
                if (d[i] == 0 || d[j] == 0) continue;
                if (!(fs[i] + fs[j]).is_zero()) continue;
                Rat m = std::min(d[i], d[j]);
                d[i] -= m;
                d[j] -= m;
            }
        }
        for (size_t i = 0; i < d.size(); ++i) {
            if (d[i] == 0) continue;
            std::vector<Rat> trial = d;
            trial[i] = 0;
            if (is_violation(trial)) d = std::move(trial);
        }
        return to_coprime_integers(d);
    };

    SdpSolution sol = session.solve(prob, /*strict_slack=*/false);
    if (sol.status == SdpStatus::Feasible) {
        for (auto spec : rationalize_ladder(session.cfg)) {
            std::vector<Rat> delta;
            for (size_t i = 0; i < fs.size(); ++i) {
                double v = sol.scalar_values.at("d" + std::to_string(i));
                Rat r = rationalize_value(v, spec.denom_bound, spec.snap_tol);
                if (r < 0) r = 0;
                delta.push_back(r);
            }
            auto norm = to_coprime_integers(delta);
            if (!is_violation(norm)) continue;
            norm = sparsify(norm);
            return NsoscViolation{norm, combo(norm)};
        }
        throw SolverInconclusive("SOS combination found numerically but not exactly recoverable");
    }
    if (sol.status == SdpStatus::Infeasible) {
        // Exact post-check of the best iterate before trusting infeasibility.
        std::vector<Rat> delta;
        bool have = true;
        for (size_t i = 0; i < fs.size(); ++i) {
            auto it = sol.scalar_values.find("d" + std::to_string(i));
            if (it == sol.scalar_values.end()) { have = false; break; }
            Rat r = rationalize_value(it->second, session.cfg.denom_bound, 1e-6);
            delta.push_back(r < 0 ? Rat(0) : r);
        }
        if (have) {
            auto norm = to_coprime_integers(delta);
            Polynomial h;
            for (size_t i = 0; i < fs.size(); ++i) h -= fs[i] * norm[i];
            if (!h.is_zero()) {
                auto res = check_sos_exact(h);
                if (std::holds_alternative<SosDecomposition>(res))
                    return NsoscViolation{norm, h};
            }
        }
        return NsoscHolds{};
    }
    throw SolverInconclusive("SOS-combination SDP inconclusive");
}

namespace {

// Shared assembly for the base-case SDP. Variable order: 1, x, y, z.
struct BaseSdp {
    SdpProblem prob;
    std::vector<std::string> order;       // x ++ y ++ z
    std::vector<int> xy_index, xz_index;  // bordered full index -> block index or -1
    int mb{-1}, mhatb{-1};
};

BaseSdp build_base_sdp(const ProblemPair& pair) {
    BaseSdp b;
    auto& part = pair.part;
    b.order = part.all();
    int n = static_cast<int>(b.order.size());
    int d = part.d(), u = part.u(), v = part.v();

    // M lives on (1, x, y); M_hat on (1, x, z).
    b.xy_index.assign(n + 1, -1);
    b.xz_index.assign(n + 1, -1);
    b.xy_index[0] = 0;
    b.xz_index[0] = 0;
    for (int i = 0; i < d + u; ++i) b.xy_index[1 + i] = 1 + i;
    for (int i = 0; i < d; ++i) b.xz_index[1 + i] = 1 + i;
    for (int i = 0; i < v; ++i) b.xz_index[1 + d + u + i] = 1 + d + i;

    b.mb = b.prob.add_block("M", 1 + d + u);
    b.mhatb = b.prob.add_block("Mh", 1 + d + v);

    auto fs = pair.fs();
    auto gs = pair.gs();
    for (size_t i = 0; i < fs.size(); ++i) b.prob.add_scalar("l" + std::to_string(i), true);
    for (size_t j = 0; j <= gs.size(); ++j) b.prob.add_scalar("e" + std::to_string(j), true);

    std::vector<SymMatrix> P, Q;
    for (auto& f : fs) P.push_back(bordered_gram(f, b.order));
    for (auto& g : gs) Q.push_back(bordered_gram(g, b.order));

    for (int i = 0; i <= n; ++i) {
        for (int j = i; j <= n; ++j) {
            SdpConstraint c;
            c.rhs = 0;
            for (size_t k = 0; k < fs.size(); ++k) {
                if (P[k](i, j) == 0) continue;
                SdpTerm t;
                t.kind = SdpTerm::Kind::Scalar;
                t.index = static_cast<int>(k);
                t.coeff = P[k](i, j);
                c.terms.push_back(t);
            }
            for (size_t k = 0; k < gs.size(); ++k) {
                if (Q[k](i, j) == 0) continue;
                SdpTerm t;
                t.kind = SdpTerm::Kind::Scalar;
                t.index = static_cast<int>(fs.size()) + 1 + static_cast<int>(k);
                t.coeff = Q[k](i, j);
                c.terms.push_back(t);
            }
            if (i == 0 && j == 0) {
                SdpTerm t;
                t.kind = SdpTerm::Kind::Scalar;
                t.index = static_cast<int>(fs.size()); // eta_0
                t.coeff = 1;
                c.terms.push_back(t);
            }
            if (b.xy_index[i] >= 0 && b.xy_index[j] >= 0) {
                SdpTerm t;
                t.kind = SdpTerm::Kind::BlockEntry;
                t.index = b.mb;
                t.i = b.xy_index[i];
                t.j = b.xy_index[j];
                t.coeff = 1;
                c.terms.push_back(t);
            }
            if (b.xz_index[i] >= 0 && b.xz_index[j] >= 0) {
                SdpTerm t;
                t.kind = SdpTerm::Kind::BlockEntry;
                t.index = b.mhatb;
                t.i = b.xz_index[i];
                t.j = b.xz_index[j];
                t.coeff = 1;
                c.terms.push_back(t);
            }
            b.prob.eq_constraints.push_back(std::move(c));
        }
    }
    {
        SdpConstraint c;
        c.rhs = 1;
        for (size_t j = 0; j <= gs.size(); ++j) {
            SdpTerm t;
            t.kind = SdpTerm::Kind::Scalar;
            t.index = static_cast<int>(fs.size()) + static_cast<int>(j);
            t.coeff = 1;
            c.terms.push_back(t);
        }
        b.prob.eq_constraints.push_back(std::move(c));
    }
    return b;
}

struct Multipliers {
    std::vector<Rat> lambda, eta;
};

// Clamp to the sign constraints and renormalize the eta block exactly.
std::optional<Multipliers> recover_multipliers(const SdpSolution& sol, size_t nf, size_t ng,
                                               const RationalizeSpec& spec) {
    Multipliers m;
    for (size_t i = 0; i < nf; ++i) {
        Rat r = rationalize_value(sol.scalar_values.at("l" + std::to_string(i)), spec.denom_bound,
                                  spec.snap_tol);
        m.lambda.push_back(r < 0 ? Rat(0) : r);
    }
    Rat esum(0);
    for (size_t j = 0; j <= ng; ++j) {
        Rat r = rationalize_value(sol.scalar_values.at("e" + std::to_string(j)), spec.denom_bound,
                                  spec.snap_tol);
        if (r < 0) r = 0;
        m.eta.push_back(r);
        esum += r;
    }
    if (esum == 0) return std::nullopt;
    for (auto& e : m.eta) e /= esum;
    return m;
}

std::optional<Certificate> finish_certificate(const ProblemPair& pair, const Multipliers& m) {
    auto fs = pair.fs();
    auto gs = pair.gs();
    Polynomial h = Polynomial::constant(-m.eta[0]);
    for (size_t i = 0; i < fs.size(); ++i) h -= fs[i] * m.lambda[i];
    for (size_t j = 0; j < gs.size(); ++j) h -= gs[j] * m.eta[j + 1];

    SosSplit split;
    try {
        split = split_sos(h, pair.part.x, pair.part.y, pair.part.z);
    } catch (const std::invalid_argument&) {
        return std::nullopt; // not SOS with these multipliers
    } catch (const MixedTermPresent&) {
        return std::nullopt;
    }
    Certificate cert;
    cert.lambda = m.lambda;
    cert.eta = m.eta;
    cert.h1 = split.h1;
    cert.h2 = split.h2;
    if (!verify_certificate(pair, cert).certificate_ok) return std::nullopt;
    return cert;
}

// Exact LP route for all-linear pairs: multipliers with
// sum lambda f + sum eta g + eta0 + c == 0, c >= 0 (split half/half).
std::optional<Certificate> linear_base_certificate(const ProblemPair& pair) {
    auto fs = pair.fs();
    auto gs = pair.gs();
    LinearSystem sys;
    sys.nonstrict = fs;
    sys.strict = gs;
    auto ref = linear_refute(sys);
    if (!ref) return std::nullopt;
    Certificate cert;
    cert.lambda = ref->lambda;
    cert.eta = ref->eta;
    // The refutation absorbs the constant into eta0; the residual constant is
    // the SOS part.
    Polynomial h = Polynomial::constant(-cert.eta[0]);
    for (size_t i = 0; i < fs.size(); ++i) h -= fs[i] * cert.lambda[i];
    for (size_t j = 0; j < gs.size(); ++j) h -= gs[j] * cert.eta[j + 1];
    if (!h.is_constant() || h.constant_term() < 0) return std::nullopt;
    cert.h1.constant = h.constant_term() / 2;
    cert.h2.constant = h.constant_term() / 2;
    if (!verify_certificate(pair, cert).certificate_ok) return std::nullopt;
    return cert;
}

Formula interpolant_from_certificate(const ProblemPair& pair, const Certificate& cert,
                                     const Rat& strictness_tol) {
    auto phif = pair.phi.nonstricts();
    auto phig = pair.phi.stricts();
    Polynomial I = Polynomial::constant(cert.eta[0]);
    for (size_t i = 0; i < phif.size(); ++i) I += phif[i] * cert.lambda[i];
    for (size_t j = 0; j < phig.size(); ++j) I += phig[j] * cert.eta[j + 1];
    I += cert.h1.reconstruct();

    std::set<std::string> common(pair.part.x.begin(), pair.part.x.end());
    if (!I.uses_only(common))
        throw InternalInconsistency("interpolant escapes the common variables: " + I.str());

    bool strict = cert.eta_phi_mass(pair.s1()) > strictness_tol;
    return Formula::atom(I, strict ? Rel::Gt : Rel::Ge);
}

} // namespace

BaseResult interpolate_base(const ProblemPair& pair, Session& session) {
    auto fs = pair.fs();
    auto gs = pair.gs();

    if (all_linear(fs) && all_linear(gs)) {
        auto cert = linear_base_certificate(pair);
        if (!cert)
            throw NotMutuallyContradictory(
                "linear pair jointly satisfiable (no multiplier refutation exists)");
        return BaseResult{interpolant_from_certificate(pair, *cert, session.cfg.strictness_tol),
                          *cert};
    }

    BaseSdp b = build_base_sdp(pair);
    SdpSolution sol = session.solve(b.prob, /*strict_slack=*/true);
    if (sol.status != SdpStatus::Feasible)
        throw SolverInconclusive("base-case SDP not solved to feasibility (status " +
                                 std::to_string(static_cast<int>(sol.status)) + ")");

    for (auto spec : rationalize_ladder(session.cfg)) {
        auto m = recover_multipliers(sol, fs.size(), gs.size(), spec);
        if (!m) continue;
        auto cert = finish_certificate(pair, *m);
        if (cert)
            return BaseResult{
                interpolant_from_certificate(pair, *cert, session.cfg.strictness_tol), *cert};
    }
    throw SolverInconclusive("no exact certificate recoverable from the numeric solution");
}

std::optional<Certificate> certify_candidate(const ProblemPair& pair, const Polynomial& candidate,
                                             bool strict, Session& session) {
    BaseSdp b = build_base_sdp(pair);
    // Pin the phi-side combination to the candidate, coefficient by
    // coefficient: sum_{i<=r1} lambda_i f_i + sum_{j<=s1} eta_j g_j + eta_0
    // + h1 = candidate. h1 = <M, W> restricted to (1,x,y).
    auto phif = pair.phi.nonstricts();
    auto phig = pair.phi.stricts();
    size_t nf = pair.fs().size();
    std::vector<std::string> xy = pair.part.x;
    xy.insert(xy.end(), pair.part.y.begin(), pair.part.y.end());
    SymMatrix C = bordered_gram(candidate, xy);
    std::vector<SymMatrix> P, Q;
    for (auto& f : phif) P.push_back(bordered_gram(f, xy));
    for (auto& g : phig) Q.push_back(bordered_gram(g, xy));
    int nb = static_cast<int>(xy.size());
    for (int i = 0; i <= nb; ++i) {
        for (int j = i; j <= nb; ++j) {
            SdpConstraint c;
            c.rhs = C(i, j);
            for (size_t k = 0; k < phif.size(); ++k) {
                if (P[k](i, j) == 0) continue;
                SdpTerm t;
                t.kind = SdpTerm::Kind::Scalar;
                t.index = static_cast<int>(k);
                t.coeff = P[k](i, j);
                c.terms.push_back(t);
            }
            for (size_t k = 0; k < phig.size(); ++k) {
                if (Q[k](i, j) == 0) continue;
                SdpTerm t;
                t.kind = SdpTerm::Kind::Scalar;
                t.index = static_cast<int>(nf) + 1 + static_cast<int>(k);
                t.coeff = Q[k](i, j);
                c.terms.push_back(t);
            }
            if (i == 0 && j == 0) {
                SdpTerm t;
                t.kind = SdpTerm::Kind::Scalar;
                t.index = static_cast<int>(nf);
                t.coeff = 1;
                c.terms.push_back(t);
            }
            {
                SdpTerm t;
                t.kind = SdpTerm::Kind::BlockEntry;
                t.index = b.mb;
                t.i = i;
                t.j = j;
                t.coeff = 1;
                c.terms.push_back(t);
            }
            b.prob.eq_constraints.push_back(std::move(c));
        }
    }
    SdpSolution sol = session.solve(b.prob, /*strict_slack=*/true);
    if (sol.status != SdpStatus::Feasible) return std::nullopt;
    auto gs = pair.gs();
    auto psif = pair.psi.nonstricts();
    auto psig = pair.psi.stricts();
    for (auto spec : rationalize_ladder(session.cfg)) {
        auto m = recover_multipliers(sol, nf, gs.size(), spec);
        if (!m) continue;
        // h1 and h2 are forced by the candidate once the multipliers are
        // fixed; both must come out as exact sums of squares.
        Polynomial phi_part = Polynomial::constant(m->eta[0]);
        for (size_t i = 0; i < phif.size(); ++i) phi_part += phif[i] * m->lambda[i];
        for (size_t j = 0; j < phig.size(); ++j) phi_part += phig[j] * m->eta[j + 1];
        Polynomial psi_part;
        for (size_t i = 0; i < psif.size(); ++i)
            psi_part += psif[i] * m->lambda[phif.size() + i];
        for (size_t j = 0; j < psig.size(); ++j)
            psi_part += psig[j] * m->eta[1 + phig.size() + j];
        Polynomial h1 = candidate - phi_part;
        Polynomial h2 = -candidate - psi_part;
        std::vector<std::string> oy = pair.part.y, oz = pair.part.z;
        oy.insert(oy.end(), pair.part.x.begin(), pair.part.x.end());
        oz.insert(oz.end(), pair.part.x.begin(), pair.part.x.end());
        auto r1res = complete_squares(h1, oy);
        auto r2res = complete_squares(h2, oz);
        auto* d1 = std::get_if<SosDecomposition>(&r1res);
        auto* d2 = std::get_if<SosDecomposition>(&r2res);
        if (!d1 || !d2) continue;
        Certificate cert;
        cert.lambda = m->lambda;
        cert.eta = m->eta;
        cert.h1 = *d1;
        cert.h2 = *d2;
        if (!verify_certificate(pair, cert).certificate_ok) continue;
        bool is_strict = cert.eta_phi_mass(pair.s1()) > 0;
        if (strict && !is_strict) continue;
        return cert;
    }
    return std::nullopt;
}

MembershipEncoding linearize(const ProblemPair& pair) {
    MembershipEncoding enc;
    enc.vars = pair.part.all();
    for (auto& f : pair.fs()) enc.P.push_back(bordered_gram(f, enc.vars));
    for (auto& g : pair.gs()) enc.Q.push_back(bordered_gram(g, enc.vars));
    return enc;
}

SdpProblem encode_membership(const MembershipEncoding& enc, const std::vector<Rat>& point,
                             const Rat& strict_eps) {
    int n = static_cast<int>(enc.vars.size());
    SdpProblem prob;
    int bb = prob.add_block("B", n + 1, /*slack_eligible=*/false);
    // Pin the border: B[0][0] = 1, B[0][k] = x_k.
    for (int k = 0; k <= n; ++k) {
        SdpConstraint c;
        c.rhs = (k == 0) ? Rat(1) : point[k - 1];
        SdpTerm t;
        t.kind = SdpTerm::Kind::BlockEntry;
        t.index = bb;
        t.i = 0;
        t.j = k;
        t.coeff = 1;
        c.terms.push_back(t);
        prob.eq_constraints.push_back(std::move(c));
    }
    auto add_row = [&](const SymMatrix& A, const Rat& margin, int slack_index) {
        SdpConstraint c;
        c.rhs = margin;
        for (int i = 0; i <= n; ++i) {
            for (int j = i; j <= n; ++j) {
                if (A(i, j) == 0) continue;
                SdpTerm t;
                t.kind = SdpTerm::Kind::BlockEntry;
                t.index = bb;
                t.i = i;
                t.j = j;
                t.coeff = (i == j) ? A(i, j) : 2 * A(i, j);
                c.terms.push_back(t);
            }
        }
        SdpTerm s;
        s.kind = SdpTerm::Kind::Scalar;
        s.index = slack_index;
        s.coeff = -1;
        c.terms.push_back(s);
        prob.eq_constraints.push_back(std::move(c));
    };
    int slack = 0;
    for (auto& A : enc.P) {
        prob.add_scalar("sP" + std::to_string(slack), true);
        add_row(A, Rat(0), slack);
        ++slack;
    }
    for (auto& A : enc.Q) {
        prob.add_scalar("sQ" + std::to_string(slack), true);
        add_row(A, strict_eps, slack);
        ++slack;
    }
    return prob;
}

bool in_feasible_region(const ProblemPair& pair, const std::map<std::string, Rat>& point) {
    for (auto& a : pair.phi.atoms) {
        Rat v = a.p.evaluate(point);
        if (a.strict ? !(v > 0) : !(v >= 0)) return false;
    }
    for (auto& a : pair.psi.atoms) {
        Rat v = a.p.evaluate(point);
        if (a.strict ? !(v > 0) : !(v >= 0)) return false;
    }
    return true;
}

} // namespace cqi
