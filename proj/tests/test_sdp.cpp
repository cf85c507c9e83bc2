#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpvsyn/sdp.hpp"

#include <random>
#include <sstream>

using namespace lpvsyn;

TEST_CASE("scalar bound: min gamma s.t. gamma >= 1") {
    VarPool pool;
    int g = pool.fresh("gamma");
    SdpProblem p(pool.count());
    p.objective(g) = 1.0;
    AffineMatrix expr = AffineMatrix::constant(-Matrix::Identity(1, 1));
    expr.addTerm(g, Matrix::Identity(1, 1));
    p.addNonStrict(expr, Sense::Positive, "gamma-1 >= 0");
    auto r = solve_sdp(p);
    REQUIRE(r.ok());
    CHECK(r.x(g) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("constant negative block is infeasible") {
    SdpProblem p(0);
    p.addNonStrict(AffineMatrix::constant(-Matrix::Identity(1, 1)), Sense::Positive, "[-1] >= 0");
    auto r = solve_sdp(p);
    CHECK(r.status == SolveStatus::Infeasible);
}

TEST_CASE("min t s.t. [[t,1],[1,t]] >= 0") {
    VarPool pool;
    int t = pool.fresh("t");
    SdpProblem p(pool.count());
    p.objective(t) = 1.0;
    Matrix offdiag(2, 2);
    offdiag << 0, 1, 1, 0;
    AffineMatrix expr = AffineMatrix::constant(offdiag);
    expr.addTerm(t, Matrix::Identity(2, 2));
    p.addNonStrict(expr, Sense::Positive, "psd");
    auto r = solve_sdp(p);
    REQUIRE(r.ok());
    CHECK(r.x(t) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("infeasible strict pair") {
    VarPool pool;
    int a = pool.fresh("a");
    SdpProblem p(pool.count());
    // a >= 1 and -a >= 0 cannot hold together.
    AffineMatrix c1 = AffineMatrix::constant(-Matrix::Identity(1, 1));
    c1.addTerm(a, Matrix::Identity(1, 1));
    p.addNonStrict(c1, Sense::Positive, "a >= 1");
    AffineMatrix c2 = AffineMatrix::zero(1, 1);
    c2.addTerm(a, -Matrix::Identity(1, 1));
    p.addNonStrict(c2, Sense::Positive, "a <= 0");
    auto r = solve_sdp(p);
    CHECK(r.status == SolveStatus::Infeasible);
}

TEST_CASE("lyapunov feasibility and infeasibility") {
    // A stable: exists X>0 with A'X+XA < 0; A unstable: infeasible.
    auto build = [](double aval) {
        VarPool pool;
        int x = pool.fresh("x");
        SdpProblem p(pool.count());
        AffineMatrix X = AffineMatrix::zero(1, 1);
        X.addTerm(x, Matrix::Identity(1, 1));
        AffineMatrix lyap = X.scaled(2.0 * aval);
        p.addStrict(lyap, Sense::Negative, "lyapunov");
        AffineMatrix xpos = X;
        p.addStrict(xpos, Sense::Positive, "X > 0");
        // normalize: x <= 10
        AffineMatrix cap = AffineMatrix::constant(10.0 * Matrix::Identity(1, 1));
        cap.addTerm(x, -Matrix::Identity(1, 1));
        p.addNonStrict(cap, Sense::Positive, "cap");
        return solve_sdp(p);
    };
    CHECK(build(-1.0).ok());
    CHECK(build(+1.0).status == SolveStatus::Infeasible);
}

TEST_CASE("random feasible SDPs reproduce margins") {
    std::mt19937 rng(11);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 5; ++trial) {
        const int m = 6;
        const Index n = 5;
        VarPool pool;
        SdpProblem p(pool.count());
        p.numVars = m;
        p.objective = Vector::Zero(m);
        // F(x) = I + sum x_i F_i stays feasible near x=0; minimize sum x_i with box.
        AffineMatrix expr = AffineMatrix::constant(Matrix::Identity(n, n));
        for (int i = 0; i < m; ++i) {
            p.objective(i) = 1.0;
            Matrix Fi(n, n);
            for (Index r = 0; r < n; ++r)
                for (Index c = 0; c < n; ++c) Fi(r, c) = dist(rng);
            Fi = 0.5 * (Fi + Fi.transpose());
            expr.addTerm(i, Fi);
            AffineMatrix box = AffineMatrix::constant(Matrix::Identity(1, 1));
            box.addTerm(i, Matrix::Identity(1, 1));
            p.addNonStrict(box, Sense::Positive, "lb");
            AffineMatrix ub = AffineMatrix::constant(Matrix::Identity(1, 1));
            ub.addTerm(i, -Matrix::Identity(1, 1));
            p.addNonStrict(ub, Sense::Positive, "ub");
        }
        p.addNonStrict(expr, Sense::Positive, "psd");
        auto r = solve_sdp(p);
        REQUIRE(r.ok());
        for (const auto& c : p.constraints) CHECK(constraint_margin(c, r.x) >= -1e-8);
    }
}

TEST_CASE("unbounded objective variable reported as failure") {
    VarPool pool;
    int a = pool.fresh("a");
    SdpProblem p(pool.count());
    p.objective(a) = 1.0;
    auto r = solve_sdp(p);
    CHECK(r.status == SolveStatus::NumericalFailure);
}

TEST_CASE("dump format") {
    VarPool pool;
    int g = pool.fresh("g");
    SdpProblem p(pool.count());
    p.objective(g) = 1.0;
    AffineMatrix expr = AffineMatrix::constant(-Matrix::Identity(1, 1));
    expr.addTerm(g, Matrix::Identity(1, 1));
    p.addNonStrict(expr, Sense::Positive, "c0");
    std::ostringstream os;
    p.dump(os);
    CHECK(os.str().find("nvars 1") != std::string::npos);
    CHECK(os.str().find("-1 0 0 0 -1") != std::string::npos);
}
