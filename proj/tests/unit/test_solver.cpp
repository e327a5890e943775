#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "hysfem/fem/assembly.hpp"
#include "hysfem/fem/mesh.hpp"
#include "hysfem/solver/linear.hpp"
#include "hysfem/solver/nonlinear.hpp"
#include "problems.hpp"

using namespace hysfem;
using namespace hysfem::solver;
using testkit::ramp;
using testkit::scalar_problem;

namespace {

NewtonConfig tight_newton(double tol = 1e-12) {
    NewtonConfig cfg;
    cfg.tol = tol;
    return cfg;
}

ModelProblem linear_problem() {
    ModelProblem mp;
    const auto mesh = fem::build_uniform_mesh(1, 10);
    mp.A = fem::assemble_mass(mesh) + fem::assemble_stiffness(mesh);
    mp.f = fem::Vector::LinSpaced(11, -1.0, 2.0);
    mp.phi.assign(11, hysteresis::ScalarPiecewiseC2::affine(0.0, 0.0));
    return mp;
}

}  // namespace

TEST(SpdSolve, Identity) {
    const auto I = testkit::sparse(Eigen::MatrixXd::Identity(6, 6));
    const fem::Vector b = fem::Vector::LinSpaced(6, 1.0, 6.0);
    const auto r = spd_solve(I, b);
    EXPECT_LE(r.iterations, 1);
    EXPECT_LT((r.x - b).norm(), 1e-15);
}

TEST(SpdSolve, MatchesDenseFactorization) {
    const auto mesh = fem::build_uniform_mesh(1, 200);
    const fem::SparseMatrix A = fem::assemble_mass(mesh) + 0.01 * fem::assemble_stiffness(mesh);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N;
    fem::Vector b(A.rows());
    for (auto& v : b) v = N(rng);
    const fem::Vector oracle = testkit::dense(A).llt().solve(b);
    for (auto backend : {LinearBackend::pcg, LinearBackend::cholesky}) {
        const auto r = spd_solve(A, b, LinearSolverOptions{backend, 1e-14, 0});
        EXPECT_LT((r.x - oracle).lpNorm<Eigen::Infinity>(), 1e-10);
    }
    for (int trial = 0; trial < 20; ++trial) {
        fem::Vector z(A.rows());
        for (auto& v : z) v = N(rng);
        EXPECT_GT(z.dot(A * z), 0.0);
    }
}

TEST(SpdSolve, IterationCapIsReported) {
    const auto mesh = fem::build_uniform_mesh(1, 400);
    const fem::SparseMatrix A = fem::assemble_stiffness(mesh) + 1e-3 * fem::assemble_mass(mesh);
    const fem::Vector b = fem::Vector::Ones(A.rows());
    EXPECT_THROW(spd_solve(A, b, LinearSolverOptions{LinearBackend::pcg, 1e-14, 3}), LinearSolverFailure);
}

TEST(SpdSolve, SmallestEigenvalue) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(4, 4);
    D.diagonal() << 3.0, 0.25, 7.0, 1.0;
    EXPECT_NEAR(smallest_eigenvalue(testkit::sparse(D)), 0.25, 1e-9);
}

TEST(SmoothingNewton, ScalarRampActive) {
    const auto r = smoothing_newton(scalar_problem(1.0, 1.0, ramp()), tight_newton(), fem::Vector::Zero(1));
    ASSERT_TRUE(r.report.converged());
    EXPECT_NEAR(r.x[0], 0.5, 1e-12);
}

TEST(SmoothingNewton, ScalarRampInactive) {
    const auto r = smoothing_newton(scalar_problem(1.0, -1.0, ramp()), tight_newton(), fem::Vector::Zero(1));
    ASSERT_TRUE(r.report.converged());
    EXPECT_NEAR(r.x[0], -1.0, 1e-12);
}

TEST(SmoothingNewton, ReportInvariants) {
    std::mt19937_64 rng(8);
    const auto mp = testkit::random_problem(rng, 20);
    const auto r = smoothing_newton(mp, tight_newton(), fem::Vector::Zero(20));
    ASSERT_TRUE(r.report.converged());
    EXPECT_EQ(r.report.residual_history.size(), static_cast<std::size_t>(r.report.nonlinear_iterations) + 1);
    EXPECT_EQ(r.report.jacobian_evaluations, r.report.nonlinear_iterations);
    EXPECT_GE(r.report.smoothed_evaluations, r.report.nonlinear_iterations);
    EXPECT_LE(r.report.final_residual(), 1e-12);
    EXPECT_NEAR(mp.residual(r.x).norm(), r.report.final_residual(), 1e-14);
}

TEST(SmoothingNewton, ConfigValidation) {
    NewtonConfig cfg;
    cfg.sigma = 0.5;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = NewtonConfig{};
    cfg.rho = 1.0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = NewtonConfig{};
    cfg.max_iter = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(SmoothingNewton, MaxIterationsReport) {
    std::mt19937_64 rng(9);
    const auto mp = testkit::random_problem(rng, 30);
    NewtonConfig cfg = tight_newton(0.0);
    cfg.max_iter = 1;
    const auto r = smoothing_newton(mp, cfg, fem::Vector::Zero(30));
    EXPECT_EQ(r.report.status, SolveStatus::max_iterations);
    EXPECT_EQ(r.report.residual_history.size(), 2u);
    EXPECT_FALSE(r.report.message.empty());
}

TEST(FixedPoint, ScalarRampIterates) {
    const auto r = fixed_point(scalar_problem(1.0, 1.0, ramp()), FixedPointConfig{1.0, 1e-14, 10, {}}, fem::Vector::Zero(1));
    ASSERT_TRUE(r.report.converged());
    EXPECT_EQ(r.x[0], 0.5);
    EXPECT_EQ(r.report.nonlinear_iterations, 1);
    ASSERT_EQ(r.report.residual_history.size(), 2u);
    EXPECT_EQ(r.report.residual_history[0], 1.0);
    EXPECT_EQ(r.report.residual_history[1], 0.0);
}

TEST(FixedPoint, LinearProblemOneIteration) {
    const auto mp = linear_problem();
    const auto r = fixed_point(mp, FixedPointConfig{0.0, 1e-10, 10, {}}, fem::Vector::Zero(11));
    ASSERT_TRUE(r.report.converged());
    EXPECT_EQ(r.report.nonlinear_iterations, 1);
}

TEST(FixedPoint, DivergesWhenNonlinearityDominates) {
    // x + 10 max(x, 0) = 1 with beta = 0 oscillates
    auto steep = hysteresis::ScalarPiecewiseC2({0.0}, [](std::size_t piece, double x) -> Jet {
        return piece == 0 ? Jet{0.0, 0.0, 0.0} : Jet{10.0 * x, 10.0, 0.0};
    }, 10.0);
    const auto r = fixed_point(scalar_problem(1.0, 1.0, steep), FixedPointConfig{0.0, 1e-12, 50, {}}, fem::Vector::Zero(1));
    EXPECT_EQ(r.report.status, SolveStatus::max_iterations);
    EXPECT_EQ(r.report.residual_history.size(), 51u);
}

TEST(Resolvent, ScalarRamp) {
    const auto phi = ramp();
    for (double y : {-3.0, -0.1, 0.0, 0.4, 5.0}) EXPECT_NEAR(resolvent(phi, y, 0.0, 1.0), y >= 0 ? y / 2 : y, 1e-14) << y;
}

TEST(Resolvent, PlayLevelFunctionRoots) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto phi = testkit::random_play_level(rng);
        const double y = U(rng);
        const double lambda = 0.1 + std::abs(U(rng)) / 4;
        const double z = resolvent(phi, y, 0.0, lambda);
        EXPECT_NEAR(z + lambda * phi.value(z), y, 1e-12 * (1 + std::abs(y)));
    }
}

TEST(DualIteration, LinearProblemSingleSolve) {
    const auto mp = linear_problem();
    const auto r = dual_iteration(mp, DualIterationConfig{0.0, 1.0, 1e-10, 10, {}}, fem::Vector::Zero(11));
    ASSERT_TRUE(r.report.converged());
    EXPECT_EQ(r.report.nonlinear_iterations, 1);
}

TEST(DualIteration, RejectsBadLambda) {
    const auto mp = scalar_problem(1.0, 1.0, ramp());
    EXPECT_THROW(dual_iteration(mp, DualIterationConfig{2.0, 1.0, 1e-10, 10, {}}, fem::Vector::Zero(1)), InvalidArgument);
    EXPECT_THROW(dual_iteration(mp, DualIterationConfig{0.0, 0.0, 1e-10, 10, {}}, fem::Vector::Zero(1)), InvalidArgument);
}

TEST(DualIteration, ScalarRamp) {
    const auto r = dual_iteration(scalar_problem(1.0, 1.0, ramp()), DualIterationConfig{0.0, 1.0, 1e-12, 200, {}},
                                  fem::Vector::Zero(1));
    ASSERT_TRUE(r.report.converged());
    EXPECT_NEAR(r.x[0], 0.5, 1e-12);
}

// Properties of the smoothing Newton iteration on random problems

TEST(NewtonProperties, GlobalConvergenceOnRandomProblems) {
    std::mt19937_64 rng(100);
    std::uniform_int_distribution<int> size(1, 50);
    std::normal_distribution<double> N;
    int converged = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = size(rng);
        const auto mp = testkit::random_problem(rng, n, 0.05 + 0.5 * std::abs(N(rng)));
        fem::Vector x0(n);
        for (auto& v : x0) v = 10.0 * N(rng);
        const auto r = smoothing_newton(mp, tight_newton(1e-10), x0);
        EXPECT_TRUE(r.report.converged()) << "trial " << trial << " n " << n << ": " << to_string(r.report.status) << ' '
                                          << r.report.message;
        converged += r.report.converged();
    }
    EXPECT_EQ(converged, 200);
}

TEST(NewtonProperties, NonsingularLinearization) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const auto mp = testkit::random_problem(rng, 25, 0.1);
        const double lmin = smallest_eigenvalue(mp.A);
        double worst = std::numeric_limits<double>::infinity();
        const auto r = smoothing_newton(mp, tight_newton(), fem::Vector::Zero(25), [&](const NewtonStepInfo& info) {
            const Eigen::MatrixXd J = testkit::dense(*info.jacobian);
            worst = std::min(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(J).eigenvalues().minCoeff());
            EXPECT_LT((J - J.transpose()).norm(), 1e-12);
        });
        ASSERT_TRUE(r.report.converged());
        EXPECT_GE(worst, lmin - 1e-10);
    }
}

TEST(NewtonProperties, SufficientDecreaseOfSmoothedMerit) {
    std::mt19937_64 rng(102);
    const NewtonConfig cfg = tight_newton();
    for (int trial = 0; trial < 20; ++trial) {
        const auto mp = testkit::random_problem(rng, 30);
        int steps = 0;
        const auto r = smoothing_newton(mp, cfg, fem::Vector::Constant(30, 3.0), [&](const NewtonStepInfo& info) {
            ++steps;
            EXPECT_LE(info.theta_smoothed_new - info.theta_smoothed,
                      -2.0 * cfg.sigma * info.step * info.theta + 1e-14 * info.theta_smoothed);
            EXPECT_NEAR(info.step, std::pow(cfg.rho, info.backtracks), 1e-15);
        });
        ASSERT_TRUE(r.report.converged());
        EXPECT_EQ(steps, r.report.nonlinear_iterations);
    }
}

TEST(NewtonProperties, LevelSetBound) {
    std::mt19937_64 rng(103);
    const NewtonConfig cfg = tight_newton();
    for (int trial = 0; trial < 20; ++trial) {
        const auto mp = testkit::random_problem(rng, 30);
        const auto r = smoothing_newton(mp, cfg, fem::Vector::Constant(30, -4.0));
        ASSERT_TRUE(r.report.converged());
        const double h0 = r.report.residual_history.front();
        for (double h : r.report.residual_history) EXPECT_LE(h, (1 + cfg.alpha) * h0 * (1 + 1e-12));
    }
}

TEST(NewtonProperties, QuadraticTail) {
    std::mt19937_64 rng(104);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto mp = testkit::random_problem(rng, 40);
        const auto r = smoothing_newton(mp, tight_newton(1e-13), fem::Vector::Constant(40, 1.0));
        ASSERT_TRUE(r.report.converged());
        const auto& h = r.report.residual_history;
        if (h.size() < 4) continue;
        const std::size_t n = h.size();
        // skip tails that end in the roundoff floor
        if (h[n - 2] < 1e-9) continue;
        const double c1 = h[n - 2] / (h[n - 3] * h[n - 3]);
        const double c2 = h[n - 1] / (h[n - 2] * h[n - 2]);
        EXPECT_LE(c2, 10.0 * c1 + 1e-300) << trial;
        ++checked;
    }
    EXPECT_GT(checked, 0);
}

TEST(SolverAgreement, AllSolversOnRandomProblems) {
    // beta >= L makes the fixed-point map a contraction; lambda beta = 1/2 for the dual iteration
    std::mt19937_64 rng(105);
    LinearSolverOptions direct;
    direct.backend = LinearBackend::cholesky;
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 15;
        auto mp = testkit::random_problem(rng, n, 2.0);
        double L = 0.0;
        for (const auto& p : mp.phi) L = std::max(L, p.lipschitz_bound());
        const fem::Vector x0 = fem::Vector::Zero(n);
        const auto newton = smoothing_newton(mp, tight_newton(1e-12), x0);
        const auto fp = fixed_point(mp, FixedPointConfig{L, 1e-12, 5000, direct}, x0);
        const auto dual = dual_iteration(mp, DualIterationConfig{0.5 * L, 1.0 / L, 1e-12, 5000, direct}, x0);
        ASSERT_TRUE(newton.report.converged()) << trial;
        ASSERT_TRUE(fp.report.converged()) << trial << ' ' << fp.report.message;
        ASSERT_TRUE(dual.report.converged()) << trial << ' ' << dual.report.message;
        EXPECT_LT((fp.x - newton.x).lpNorm<Eigen::Infinity>(), 1e-9) << trial;
        EXPECT_LT((dual.x - newton.x).lpNorm<Eigen::Infinity>(), 1e-9) << trial;
    }
}

TEST(NonlinearSolvers, PolymorphicInterface) {
    const auto mp = scalar_problem(1.0, 1.0, ramp());
    const SmoothingNewtonSolver a(tight_newton());
    const FixedPointSolver b(FixedPointConfig{1.0, 1e-12, 100, {}});
    const DualIterationSolver c(DualIterationConfig{0.0, 1.0, 1e-12, 100, {}});
    for (const NonlinearSolver* s : {static_cast<const NonlinearSolver*>(&a), static_cast<const NonlinearSolver*>(&b),
                                     static_cast<const NonlinearSolver*>(&c)}) {
        const auto r = s->solve(mp, fem::Vector::Zero(1));
        EXPECT_EQ(r.report.solver, s->name());
        EXPECT_NEAR(r.x[0], 0.5, 1e-12);
    }
}

TEST(SolveReport, CsvRow) {
    SolveReport rep;
    rep.solver = "fixed_point";
    rep.status = SolveStatus::converged;
    rep.nonlinear_iterations = 2;
    rep.residual_history = {1.0, 0.5, 1e-13};
    std::ostringstream out;
    write_report_csv_header(out);
    write_report_csv_row(out, rep, "step1");
    const auto text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "label,solver,status,nonlinear_its,linear_its,func_evals,smoothed_evals,jac_evals,wall_time_s,final_residual");
    EXPECT_NE(text.find("step1,fixed_point,converged,2,"), std::string::npos);
}
