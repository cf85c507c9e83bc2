#pragma once

#include "lpvsyn/affine.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lpvsyn {

enum class Sense { Negative, Positive };  // expr < 0  /  expr > 0

// One affine matrix inequality. Strict inequalities carry a flag; the
// epsilon-identity shift is applied when the problem is canonicalized for a
// backend, so it can be relaxed on retry without rebuilding constraints.
struct AffineMatrixExpr {
    AffineMatrix expr;
    Sense sense = Sense::Positive;
    std::string name;
    bool strict = false;
};

struct SolverOptions {
    double tol = 1e-9;          // relative gap / residual target
    int maxIter = 120;
    double infeasTol = 1e-9;    // Farkas certificate threshold
    bool verbose = false;
};

// min objective . x  subject to a list of affine matrix inequalities.
struct SdpProblem {
    int numVars = 0;
    Vector objective;  // minimized; zero vector for feasibility problems
    std::vector<AffineMatrixExpr> constraints;
    double epsilon = 1e-7;  // strictness margin, scaled per constraint

    explicit SdpProblem(int nvars) : numVars(nvars), objective(Vector::Zero(nvars)) {}

    // Strict: expr < 0 is solved as expr + eps*scale*I <= 0 (and mirrored for
    // > 0), with scale = max(1, ||constant part||_F).
    void addStrict(AffineMatrix expr, Sense sense, const std::string& name);
    void addNonStrict(AffineMatrix expr, Sense sense, const std::string& name);

    // Sparse text dump (varIndex -1 = constant part): var block row col value.
    void dump(std::ostream& os) const;
};

enum class SolveStatus { Optimal, Infeasible, NumericalFailure };

struct SolveResult {
    SolveStatus status = SolveStatus::NumericalFailure;
    Vector x;
    double objective = 0.0;
    int iterations = 0;
    double gap = 0.0;
    std::string message;

    bool ok() const { return status == SolveStatus::Optimal; }
};

// Backend contract: everything is assembled to symmetric affine constraints
// plus a linear objective before a backend sees it.
class SdpBackend {
  public:
    virtual ~SdpBackend() = default;
    virtual SolveResult solve(const SdpProblem& p, const SolverOptions& opts) = 0;
};

// Dense primal-dual predictor-corrector interior-point method (HKM scaling).
// Reference backend; adequate for the problem sizes this library produces.
class InteriorPointBackend final : public SdpBackend {
  public:
    SolveResult solve(const SdpProblem& p, const SolverOptions& opts) override;
    // Epsilon override used by the boundary retry in solve_sdp.
    SolveResult solveWithEpsilon(const SdpProblem& p, const SolverOptions& opts, double epsilon);
};

// Solves with the default backend, retrying once with epsilon/10 when the
// first attempt comes back infeasible near the boundary.
SolveResult solve_sdp(const SdpProblem& p, const SolverOptions& opts = {});

// Smallest eigenvalue of the symmetrized evaluation; > 0 means the
// constraint holds strictly at x.
double constraint_margin(const AffineMatrixExpr& c, const Vector& x);

}  // namespace lpvsyn
