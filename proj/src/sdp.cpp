#include "cqinterp/sdp.hpp"

#include <cmath>
#include <stdexcept>

namespace cqi {

int SdpProblem::add_block(const std::string& name, int dim, bool slack_eligible) {
    blocks.push_back(SdpBlockVar{name, dim, slack_eligible});
    return static_cast<int>(blocks.size()) - 1;
}

int SdpProblem::add_scalar(const std::string& name, bool nonneg) {
    scalars.push_back(SdpScalarVar{name, nonneg});
    return static_cast<int>(scalars.size()) - 1;
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Coordinate layout: per block, upper-triangle entries with off-diagonals
// scaled by sqrt(2) (so Euclidean distance equals Frobenius distance), then
// the scalars.
struct Layout {
    std::vector<int> block_offset;
    int scalar_offset{0};
    int total{0};

    static int tri(int dim) { return dim * (dim + 1) / 2; }
    int entry_index(const SdpProblem& p, int b, int i, int j) const {
        // i <= j; row-major upper triangle
        int dim = p.blocks[b].dim;
        return block_offset[b] + i * dim - i * (i - 1) / 2 + (j - i);
    }
};

Layout make_layout(const SdpProblem& p) {
    Layout l;
    int off = 0;
    for (auto& b : p.blocks) {
        l.block_offset.push_back(off);
        off += Layout::tri(b.dim);
    }
    l.scalar_offset = off;
    l.total = off + static_cast<int>(p.scalars.size());
    return l;
}

Eigen::MatrixXd block_from_vec(const SdpProblem& p, const Layout& l, const Eigen::VectorXd& v, int b) {
    int dim = p.blocks[b].dim;
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            double val = v[l.entry_index(p, b, i, j)];
            if (i != j) val /= kSqrt2;
            m(i, j) = val;
            m(j, i) = val;
        }
    }
    return m;
}

void block_to_vec(const SdpProblem& p, const Layout& l, const Eigen::MatrixXd& m, int b,
                  Eigen::VectorXd& v) {
    int dim = p.blocks[b].dim;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            v[l.entry_index(p, b, i, j)] = (i == j) ? m(i, j) : m(i, j) * kSqrt2;
}

struct ConeInfo {
    double min_eig;
    double violation; // Frobenius-ish distance moved by the projection
};

ConeInfo project_cone(const SdpProblem& p, const Layout& l, Eigen::VectorXd& v) {
    ConeInfo info{0.0, 0.0};
    bool first = true;
    for (size_t b = 0; b < p.blocks.size(); ++b) {
        Eigen::MatrixXd m = block_from_vec(p, l, v, static_cast<int>(b));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        double lo = p.blocks[b].dim ? es.eigenvalues().minCoeff() : 0.0;
        if (first || lo < info.min_eig) info.min_eig = lo;
        first = false;
        if (lo < 0) {
            Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
            Eigen::MatrixXd proj =
                es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
            info.violation = std::max(info.violation, (proj - m).norm());
            block_to_vec(p, l, proj, static_cast<int>(b), v);
        }
    }
    for (size_t s = 0; s < p.scalars.size(); ++s) {
        if (!p.scalars[s].nonneg) continue;
        double& val = v[l.scalar_offset + static_cast<int>(s)];
        if (val < 0) {
            info.violation = std::max(info.violation, -val);
            if (first || val < info.min_eig) info.min_eig = val;
            first = false;
            val = 0;
        }
    }
    return info;
}

struct AffineProjector {
    Eigen::MatrixXd E;
    Eigen::VectorXd d;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;

    void factor() { cod.compute(E); }
    Eigen::VectorXd project(const Eigen::VectorXd& v) const {
        return v - cod.solve(E * v - d);
    }
    double residual(const Eigen::VectorXd& v) const {
        if (E.rows() == 0) return 0.0;
        return (E * v - d).lpNorm<Eigen::Infinity>();
    }
};

SdpSolution run_once(const SdpProblem& p, const Layout& l, const AffineProjector& aff,
                     const SolverConfig& cfg, int iter_budget) {
    SdpSolution sol;
    int n = l.total;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

    // Affine part alone inconsistent: nothing to iterate on.
    {
        Eigen::VectorXd x0 = aff.project(u);
        if (aff.residual(x0) > std::sqrt(cfg.feas_tol)) {
            sol.status = SdpStatus::Infeasible;
            sol.residual = aff.residual(x0);
            return sol;
        }
    }

    double prev_gap = -1;
    int it = 0;
    for (; it < iter_budget; ++it) {
        Eigen::VectorXd x = aff.project(u);
        Eigen::VectorXd y = 2 * x - u;
        project_cone(p, l, y);
        Eigen::VectorXd diff = y - x;
        u += diff;
        if (it % 25 == 24 || it == iter_budget - 1) {
            double gap = diff.norm();
            Eigen::VectorXd probe = x;
            ConeInfo ci = project_cone(p, l, probe);
            if (ci.violation <= cfg.feas_tol && -ci.min_eig <= cfg.feas_tol) break;
            if (prev_gap >= 0 && gap > cfg.infeas_margin &&
                std::abs(gap - prev_gap) <= 1e-4 * std::max(1.0, gap) && it > 200) {
                sol.status = SdpStatus::Infeasible;
                sol.iterations = it + 1;
                sol.residual = gap;
                return sol;
            }
            prev_gap = gap;
        }
    }
    sol.iterations = it;

    // Polish: a few alternating projections, then report the affine point.
    Eigen::VectorXd x = aff.project(u);
    for (int k = 0; k < 8; ++k) {
        Eigen::VectorXd y = x;
        project_cone(p, l, y);
        x = aff.project(y);
    }
    ConeInfo ci{0, 0};
    {
        Eigen::VectorXd probe = x;
        ci = project_cone(p, l, probe);
    }
    sol.residual = aff.residual(x);
    sol.min_eig = ci.min_eig;
    if (ci.violation <= 10 * cfg.feas_tol && -ci.min_eig <= 10 * cfg.feas_tol) {
        sol.status = SdpStatus::Feasible;
    } else if (sol.iterations >= iter_budget) {
        sol.status = SdpStatus::Unknown;
    } else {
        sol.status = SdpStatus::Unknown;
    }
    for (size_t b = 0; b < p.blocks.size(); ++b)
        sol.block_values[p.blocks[b].name] = block_from_vec(p, l, x, static_cast<int>(b));
    for (size_t s = 0; s < p.scalars.size(); ++s)
        sol.scalar_values[p.scalars[s].name] = x[l.scalar_offset + static_cast<int>(s)];
    return sol;
}

} // namespace

SdpSolution solve_sdp(const SdpProblem& prob, const SolverConfig& cfg) {
    Layout l = make_layout(prob);

    // Assemble E v = d once; the slack tau only shifts d.
    int m = static_cast<int>(prob.eq_constraints.size());
    AffineProjector aff;
    aff.E = Eigen::MatrixXd::Zero(m, l.total);
    Eigen::VectorXd d0 = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < m; ++k) {
        const SdpConstraint& c = prob.eq_constraints[k];
        d0[k] = to_double(c.rhs);
        for (const SdpTerm& t : c.terms) {
            if (t.kind == SdpTerm::Kind::Scalar) {
                aff.E(k, l.scalar_offset + t.index) += to_double(t.coeff);
            } else {
                int i = std::min(t.i, t.j), j = std::max(t.i, t.j);
                double coef = to_double(t.coeff);
                // Off-diagonal coordinates carry the sqrt(2) scaling.
                aff.E(k, l.entry_index(prob, t.index, i, j)) +=
                    (i == j) ? coef : coef / kSqrt2;
                if (i == j && prob.blocks[t.index].slack_eligible) shift[k] += coef;
            }
        }
    }

    std::vector<double> ladder;
    if (cfg.strict_slack) {
        for (double tau = cfg.slack_cap; tau > 1e-4; tau /= 4) ladder.push_back(tau);
    }
    ladder.push_back(0.0);

    SdpSolution last;
    for (size_t step = 0; step < ladder.size(); ++step) {
        double tau = ladder[step];
        aff.d = d0 - tau * shift;
        aff.factor();
        int budget = (tau > 0) ? std::max(400, cfg.max_iter / 8) : cfg.max_iter;
        SdpSolution sol = run_once(prob, l, aff, cfg, budget);
        if (sol.status == SdpStatus::Feasible) {
            sol.slack_tau = tau;
            if (tau > 0) {
                // Undo the substitution M' = M - tau*I on reported blocks.
                for (size_t b = 0; b < prob.blocks.size(); ++b) {
                    if (!prob.blocks[b].slack_eligible) continue;
                    auto& mref = sol.block_values[prob.blocks[b].name];
                    mref += tau * Eigen::MatrixXd::Identity(mref.rows(), mref.cols());
                }
                sol.min_eig += tau;
            }
            return sol;
        }
        last = sol;
    }
    return last;
}

} // namespace cqi
