#include "lpvsyn/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lpvsyn {

namespace {

struct Triplet {
    Index r, c;
    double v;
};

// One PSD block of the canonical form F(x) = F0 + sum_i x_i Fi >= 0.
struct Block {
    Matrix F0;
    std::vector<int> vars;                       // variables touching this block
    std::vector<std::vector<Triplet>> coeffs;    // per entry of vars
    std::vector<double> coeffNorm;
    Index dim() const { return F0.rows(); }
};

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double sparseDot(const std::vector<Triplet>& a, const Matrix& m) {
    double s = 0.0;
    for (const auto& t : a) s += t.v * m(t.c, t.r);
    return s;
}

// Z * Fj * Sinv with Fj sparse.
Matrix sandwich(const Matrix& Z, const std::vector<Triplet>& Fj, const Matrix& Sinv) {
    const Index n = Z.rows();
    Matrix ZF = Matrix::Zero(n, n);
    for (const auto& t : Fj) ZF.col(t.c) += t.v * Z.col(t.r);
    Matrix out = Matrix::Zero(n, n);
    for (Index c = 0; c < n; ++c) {
        if (ZF.col(c).isZero(0.0)) continue;
        out.noalias() += ZF.col(c) * Sinv.row(c);
    }
    return out;
}

// Largest step alpha with M + alpha*D > 0, capped at 1/tau.
double maxStep(const Eigen::LLT<Matrix>& llt, const Matrix& D) {
    const Matrix L = llt.matrixL();
    const Matrix A = L.triangularView<Eigen::Lower>().solve(
        Matrix(L.triangularView<Eigen::Lower>().solve(D).transpose()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(A), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin >= -1e-14) return std::numeric_limits<double>::infinity();
    return -1.0 / lmin;
}

struct Canonical {
    std::vector<Block> blocks;
    Vector c;
    std::vector<int> varMap;    // canonical var -> original var
    int numOrigVars = 0;
};

Canonical canonicalize(const SdpProblem& p, double epsilon, std::string* err) {
    Canonical cn;
    cn.numOrigVars = p.numVars;
    std::vector<char> used(static_cast<size_t>(p.numVars), 0);
    for (const auto& cexpr : p.constraints)
        for (const auto& [i, coeff] : cexpr.expr.terms())
            if (coeff.cwiseAbs().maxCoeff() > 0.0) used[static_cast<size_t>(i)] = 1;
    std::vector<int> toCanon(static_cast<size_t>(p.numVars), -1);
    for (int i = 0; i < p.numVars; ++i) {
        if (used[static_cast<size_t>(i)]) {
            toCanon[static_cast<size_t>(i)] = static_cast<int>(cn.varMap.size());
            cn.varMap.push_back(i);
        } else if (std::abs(p.objective(i)) > 0.0) {
            *err = "objective variable " + std::to_string(i) + " is unconstrained";
            return cn;
        }
    }
    cn.c = Vector::Zero(static_cast<Index>(cn.varMap.size()));
    for (size_t i = 0; i < cn.varMap.size(); ++i)
        cn.c(static_cast<Index>(i)) = p.objective(cn.varMap[i]);

    for (const auto& cexpr : p.constraints) {
        if (cexpr.expr.rows() == 0) continue;
        if (cexpr.expr.rows() != cexpr.expr.cols()) {
            *err = "constraint '" + cexpr.name + "' is not square";
            return cn;
        }
        const double sgn = cexpr.sense == Sense::Positive ? 1.0 : -1.0;
        Block b;
        Matrix F0 = symmetrize(sgn * cexpr.expr.constant());
        if (cexpr.strict) {
            const double scale = std::max(1.0, cexpr.expr.constant().norm());
            F0 -= epsilon * scale * Matrix::Identity(F0.rows(), F0.cols());
        }
        const double rho = std::max(1.0, F0.norm());
        b.F0 = F0 / rho;
        for (const auto& [i, coeff] : cexpr.expr.terms()) {
            Matrix Fi = symmetrize(sgn * coeff) / rho;
            std::vector<Triplet> trips;
            for (Index r = 0; r < Fi.rows(); ++r)
                for (Index col = 0; col < Fi.cols(); ++col)
                    if (Fi(r, col) != 0.0) trips.push_back({r, col, Fi(r, col)});
            if (trips.empty()) continue;
            b.vars.push_back(toCanon[static_cast<size_t>(i)]);
            b.coeffNorm.push_back(Fi.norm());
            b.coeffs.push_back(std::move(trips));
        }
        cn.blocks.push_back(std::move(b));
    }
    return cn;
}

}  // namespace

void SdpProblem::addStrict(AffineMatrix expr, Sense sense, const std::string& name) {
    constraints.push_back({std::move(expr), sense, name, true});
}

void SdpProblem::addNonStrict(AffineMatrix expr, Sense sense, const std::string& name) {
    constraints.push_back({std::move(expr), sense, name, false});
}

void SdpProblem::dump(std::ostream& os) const {
    os << "nvars " << numVars << "\n";
    for (int i = 0; i < numVars; ++i)
        if (objective(i) != 0.0) os << "obj " << i << " " << objective(i) << "\n";
    for (size_t b = 0; b < constraints.size(); ++b) {
        const auto& c = constraints[b];
        os << "block " << b << " dim " << c.expr.rows() << " sense "
           << (c.sense == Sense::Positive ? "+" : "-") << " name " << c.name << "\n";
        const Matrix& m = c.expr.constant();
        for (Index r = 0; r < m.rows(); ++r)
            for (Index col = 0; col < m.cols(); ++col)
                if (m(r, col) != 0.0) os << "-1 " << b << " " << r << " " << col << " " << m(r, col) << "\n";
        for (const auto& [i, coeff] : c.expr.terms())
            for (Index r = 0; r < coeff.rows(); ++r)
                for (Index col = 0; col < coeff.cols(); ++col)
                    if (coeff(r, col) != 0.0)
                        os << i << " " << b << " " << r << " " << col << " " << coeff(r, col) << "\n";
    }
}

double constraint_margin(const AffineMatrixExpr& c, const Vector& x) {
    Matrix v = c.expr.eval(x);
    if (c.sense == Sense::Negative) v = -v;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(v), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

SolveResult InteriorPointBackend::solve(const SdpProblem& p, const SolverOptions& opts) {
    return solveWithEpsilon(p, opts, p.epsilon);
}

SolveResult InteriorPointBackend::solveWithEpsilon(const SdpProblem& p, const SolverOptions& opts,
                                                   double epsilon) {
    SolveResult res;
    std::string err;
    Canonical cn = canonicalize(p, epsilon, &err);
    if (!err.empty()) {
        res.message = err;
        return res;
    }
    const int m = static_cast<int>(cn.varMap.size());
    const auto& blocks = cn.blocks;

    auto expand = [&](const Vector& xc) {
        Vector full = Vector::Zero(p.numVars);
        for (int i = 0; i < m; ++i) full(cn.varMap[static_cast<size_t>(i)]) = xc(i);
        return full;
    };

    // No variables: a constant feasibility check.
    if (m == 0) {
        double worst = 0.0;
        for (const auto& b : blocks) {
            if (b.dim() == 0) continue;
            Eigen::SelfAdjointEigenSolver<Matrix> es(b.F0, Eigen::EigenvaluesOnly);
            worst = std::min(worst, es.eigenvalues().minCoeff());
        }
        res.status = worst >= -1e-12 ? SolveStatus::Optimal : SolveStatus::Infeasible;
        res.x = Vector::Zero(p.numVars);
        return res;
    }

    Index ntot = 0;
    double f0norm = 1.0, finorm = 1.0;
    for (const auto& b : blocks) {
        ntot += b.dim();
        f0norm = std::max(f0norm, b.F0.norm());
        for (double cn2 : b.coeffNorm) finorm = std::max(finorm, cn2);
    }
    if (ntot == 0) {
        res.status = SolveStatus::Optimal;
        res.x = Vector::Zero(p.numVars);
        return res;
    }

    const size_t nb = blocks.size();
    std::vector<Matrix> Z(nb), S(nb);
    Vector x = Vector::Zero(m);
    const double s0 = 1.0 + f0norm;
    const double z0 = std::max(1.0, (1.0 + cn.c.cwiseAbs().maxCoeff()) / (1.0 + finorm));
    for (size_t b = 0; b < nb; ++b) {
        Z[b] = z0 * Matrix::Identity(blocks[b].dim(), blocks[b].dim());
        S[b] = s0 * Matrix::Identity(blocks[b].dim(), blocks[b].dim());
    }

    auto evalF = [&](size_t b, const Vector& xv) {
        Matrix f = blocks[b].F0;
        for (size_t k = 0; k < blocks[b].vars.size(); ++k)
            for (const auto& t : blocks[b].coeffs[k]) f(t.r, t.c) += xv(blocks[b].vars[k]) * t.v;
        return f;
    };

    std::vector<Matrix> Sinv(nb), Rd(nb);
    Matrix M(m, m);
    Vector rp(m);

    for (int iter = 0; iter < opts.maxIter; ++iter) {
        // Residuals and gap.
        double gap = 0.0, trZ = 0.0;
        rp = cn.c;
        double rdnorm = 0.0;
        for (size_t b = 0; b < nb; ++b) {
            gap += (Z[b].array() * S[b].array()).sum();
            trZ += Z[b].trace();
            Rd[b] = evalF(b, x) - S[b];
            rdnorm = std::max(rdnorm, Rd[b].cwiseAbs().maxCoeff());
            for (size_t k = 0; k < blocks[b].coeffs.size(); ++k)
                rp(blocks[b].vars[k]) -= sparseDot(blocks[b].coeffs[k], Z[b]);
        }
        const double mu = gap / static_cast<double>(2 * ntot);
        const double pobj = cn.c.dot(x);
        const double relgap = gap / (1.0 + std::abs(pobj));
        const double rpnorm = rp.cwiseAbs().maxCoeff() / (1.0 + cn.c.cwiseAbs().maxCoeff());
        const double rdrel = rdnorm / (1.0 + f0norm);

        if (!std::isfinite(gap) || !std::isfinite(rpnorm) || !std::isfinite(rdrel) ||
            !std::isfinite(pobj)) {
            res.message = "iterates diverged";
            res.iterations = iter;
            return res;
        }
        if (pobj < -1e13 * (1.0 + cn.c.cwiseAbs().maxCoeff())) {
            res.message = "objective appears unbounded below";
            res.iterations = iter;
            return res;
        }

        if (opts.verbose)
            std::cerr << "ipm " << iter << " gap " << relgap << " rp " << rpnorm << " rd " << rdrel
                      << " obj " << pobj << "\n";

        if (relgap < opts.tol && rpnorm < opts.tol && rdrel < opts.tol) {
            res.status = SolveStatus::Optimal;
            res.x = expand(x);
            res.objective = pobj;
            res.iterations = iter;
            res.gap = relgap;
            return res;
        }

        // Farkas certificate for infeasibility of F(x) >= 0: a normalized
        // primal ray with A(Z) ~ 0 and <F0, Z> decidedly negative.
        if (trZ > 1.0) {
            double viol = 0.0, val = 0.0;
            for (size_t b = 0; b < nb; ++b) {
                val += (blocks[b].F0.array() * Z[b].array()).sum();
                for (size_t k = 0; k < blocks[b].coeffs.size(); ++k)
                    viol = std::max(viol, std::abs(sparseDot(blocks[b].coeffs[k], Z[b])) /
                                              std::max(1.0, blocks[b].coeffNorm[k]));
            }
            viol /= trZ;
            val /= trZ;
            if (viol < opts.infeasTol && val < -1e-6) {
                res.status = SolveStatus::Infeasible;
                res.x = expand(x);
                res.iterations = iter;
                res.message = "Farkas certificate found";
                return res;
            }
        }

        // Factorizations.
        std::vector<Eigen::LLT<Matrix>> lltS(nb), lltZ(nb);
        bool cholOk = true;
        for (size_t b = 0; b < nb && cholOk; ++b) {
            lltS[b].compute(S[b]);
            lltZ[b].compute(Z[b]);
            if (lltS[b].info() != Eigen::Success || lltZ[b].info() != Eigen::Success) cholOk = false;
            if (cholOk) Sinv[b] = lltS[b].solve(Matrix::Identity(blocks[b].dim(), blocks[b].dim()));
        }
        if (!cholOk) {
            res.message = "iterate left the cone";
            res.iterations = iter;
            return res;
        }

        // Schur complement M_ij = <Fi, Z Fj Sinv> and shared rhs pieces.
        M.setZero();
        Vector aS(m), hZR(m);
        aS.setZero();
        hZR.setZero();
        for (size_t b = 0; b < nb; ++b) {
            const auto& blk = blocks[b];
            const Matrix ZRS = Z[b] * Rd[b] * Sinv[b];
            for (size_t kj = 0; kj < blk.vars.size(); ++kj) {
                const Matrix T = sandwich(Z[b], blk.coeffs[kj], Sinv[b]);
                for (size_t ki = 0; ki < blk.vars.size(); ++ki) {
                    const int vi = blk.vars[ki], vj = blk.vars[kj];
                    if (vi > vj) continue;
                    M(vi, vj) += sparseDot(blk.coeffs[ki], T);
                }
                aS(blk.vars[kj]) += sparseDot(blk.coeffs[kj], Sinv[b]);
                hZR(blk.vars[kj]) += sparseDot(blk.coeffs[kj], ZRS);
            }
        }
        M = M.selfadjointView<Eigen::Upper>();

        Eigen::LDLT<Matrix> ldlt(M);
        double ridge = 1e-14 * (1.0 + M.trace() / m);
        while (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            M.diagonal().array() += ridge;
            ridge *= 100.0;
            ldlt.compute(M);
            if (ridge > 1e6) {
                res.message = "Schur complement factorization failed";
                res.iterations = iter;
                return res;
            }
        }

        Vector gZ(m);
        for (int i = 0; i < m; ++i) gZ(i) = cn.c(i) - rp(i);  // <Fi, Z>

        auto solveDirection = [&](double sigma, const std::vector<Matrix>* corrZS,
                                  std::vector<Matrix>& dZ, std::vector<Matrix>& dS, Vector& dx) {
            Vector rhs = sigma * mu * aS - gZ - hZR - rp;
            if (corrZS)
                for (size_t b = 0; b < nb; ++b) {
                    const auto& blk = blocks[b];
                    for (size_t k = 0; k < blk.vars.size(); ++k)
                        rhs(blk.vars[k]) -= sparseDot(blk.coeffs[k], (*corrZS)[b]);
                }
            dx = ldlt.solve(rhs);
            for (size_t b = 0; b < nb; ++b) {
                const auto& blk = blocks[b];
                dS[b] = Rd[b];
                for (size_t k = 0; k < blk.vars.size(); ++k)
                    for (const auto& t : blk.coeffs[k]) dS[b](t.r, t.c) += dx(blk.vars[k]) * t.v;
                dS[b] = symmetrize(dS[b]);
                Matrix raw = sigma * mu * Sinv[b] - Z[b] - Z[b] * dS[b] * Sinv[b];
                if (corrZS) raw -= (*corrZS)[b];
                dZ[b] = symmetrize(raw);
            }
        };

        std::vector<Matrix> dZa(nb), dSa(nb), dZ(nb), dS(nb);
        Vector dxa(m), dx(m);
        solveDirection(0.0, nullptr, dZa, dSa, dxa);

        double apA = 1.0, adA = 1.0;
        for (size_t b = 0; b < nb; ++b) {
            apA = std::min(apA, maxStep(lltZ[b], dZa[b]));
            adA = std::min(adA, maxStep(lltS[b], dSa[b]));
        }
        const double tauA = 0.98;
        apA = std::min(1.0, tauA * apA);
        adA = std::min(1.0, tauA * adA);

        double gapAff = 0.0;
        for (size_t b = 0; b < nb; ++b)
            gapAff += ((Z[b] + apA * dZa[b]).array() * (S[b] + adA * dSa[b]).array()).sum();
        double sigma = std::pow(std::max(0.0, gapAff / gap), 3.0);
        sigma = std::min(1.0, std::max(sigma, 1e-10));

        std::vector<Matrix> corr(nb);
        for (size_t b = 0; b < nb; ++b) corr[b] = dZa[b] * dSa[b] * Sinv[b];
        solveDirection(sigma, &corr, dZ, dS, dx);

        double ap = 1.0, ad = 1.0;
        for (size_t b = 0; b < nb; ++b) {
            ap = std::min(ap, maxStep(lltZ[b], dZ[b]));
            ad = std::min(ad, maxStep(lltS[b], dS[b]));
        }
        const double tau = relgap < 1e-4 ? 0.99 : 0.95;
        ap = std::min(1.0, tau * ap);
        ad = std::min(1.0, tau * ad);

        if (ap < 1e-10 && ad < 1e-10) {
            res.message = "step length collapsed";
            res.iterations = iter;
            res.gap = relgap;
            return res;
        }

        for (size_t b = 0; b < nb; ++b) {
            Z[b] += ap * dZ[b];
            S[b] += ad * dS[b];
        }
        x += ad * dx;
    }

    res.message = "iteration limit reached";
    res.iterations = opts.maxIter;
    return res;
}

namespace {

// Phase-1 problem: minimize t subject to F_k(x) + t I >= 0 for every block
// and t >= -1. Always strictly feasible and bounded, so the interior-point
// iteration is well behaved; sign(t*) decides feasibility of the original.
SolveResult phase1(InteriorPointBackend& backend, const SdpProblem& p, const SolverOptions& opts,
                   double epsilon) {
    SdpProblem q(p.numVars + 1);
    const int t = p.numVars;
    q.objective.setZero();
    q.objective(t) = 1.0;
    q.constraints = p.constraints;
    for (auto& c : q.constraints) {
        const double sgn = c.sense == Sense::Positive ? 1.0 : -1.0;
        c.expr.addTerm(t, sgn * Matrix::Identity(c.expr.rows(), c.expr.cols()));
    }
    AffineMatrix lb = AffineMatrix::constant(Matrix::Identity(1, 1));
    lb.addTerm(t, Matrix::Identity(1, 1));
    q.addNonStrict(lb, Sense::Positive, "phase1 slack bound");
    return backend.solveWithEpsilon(q, opts, epsilon);
}

}  // namespace

SolveResult solve_sdp(const SdpProblem& p, const SolverOptions& opts) {
    InteriorPointBackend backend;
    const double feasTol = 1e-8;

    SolveResult f1 = phase1(backend, p, opts, p.epsilon);
    if (!f1.ok()) {
        f1.status = SolveStatus::NumericalFailure;
        f1.message = "phase-1 feasibility solve failed: " + f1.message;
        return f1;
    }
    double tstar = f1.objective;
    double eps = p.epsilon;
    if (tstar > -feasTol && p.epsilon > 0.0) {
        // Near the feasibility boundary: retry once with a relaxed margin.
        eps = p.epsilon / 10.0;
        SolveResult f1b = phase1(backend, p, opts, eps);
        if (!f1b.ok()) {
            f1b.status = SolveStatus::NumericalFailure;
            f1b.message = "phase-1 retry failed: " + f1b.message;
            return f1b;
        }
        tstar = f1b.objective;
    }
    if (tstar > -feasTol) {
        SolveResult r;
        r.status = SolveStatus::Infeasible;
        r.message = "phase-1 slack optimum " + std::to_string(tstar);
        return r;
    }

    SolveResult r = backend.solveWithEpsilon(p, opts, eps);
    if (r.status == SolveStatus::Infeasible)
        r.status = SolveStatus::NumericalFailure;  // contradicts phase-1 verdict
    return r;
}

}  // namespace lpvsyn
