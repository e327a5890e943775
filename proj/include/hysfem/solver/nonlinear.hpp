#pragma once

#include <functional>
#include <memory>
#include <string>

#include "hysfem/model_problem.hpp"
#include "hysfem/solver/linear.hpp"
#include "hysfem/solver/report.hpp"
#include "hysfem/solver/smoothing.hpp"

namespace hysfem::solver {

struct NewtonConfig {
    double rho = 0.1;     // backtracking factor
    double alpha = 0.1;
    double eta = 0.1;
    double gamma = 10.0;
    double sigma = 1e-4;  // line-search constant, must be below (1 - alpha) / 2
    double mu = 0.0;      // smoothing approximation constant; 0 derives it from the nonlinearities
    double tol = 1e-10;
    int max_iter = 100;
    int max_backtracks = 60;
    int max_epsilon_halvings = 60;
    SmoothingOptions smoothing;
    LinearSolverOptions linear;

    void validate() const;
};

// Snapshot handed to an observer after each accepted Newton step.
struct NewtonStepInfo {
    int iteration = 0;
    double epsilon = 0.0;  // smoothing parameter used for the step
    double beta = 0.0;
    double theta = 0.0;               // 0.5 ||H(x^k)||^2
    double theta_smoothed = 0.0;      // 0.5 ||H~(x^k, eps)||^2
    double theta_smoothed_new = 0.0;  // 0.5 ||H~(x^{k+1}, eps)||^2
    double step = 1.0;                // rho^m
    int backtracks = 0;
    const fem::SparseMatrix* jacobian = nullptr;
    const fem::Vector* x = nullptr;  // x^k
    const fem::Vector* direction = nullptr;
};

using NewtonObserver = std::function<void(const NewtonStepInfo&)>;

SolveResult smoothing_newton(const ModelProblem& mp, const NewtonConfig& cfg, const fem::Vector& x0,
                             const NewtonObserver& observer = {});

struct FixedPointConfig {
    double beta = 0.0;
    double tol = 1e-10;
    int max_iter = 1000;
    LinearSolverOptions linear;
};

// (A + beta I) u^{n+1} = f - F(u^n) + beta u^n
SolveResult fixed_point(const ModelProblem& mp, const FixedPointConfig& cfg, const fem::Vector& x0);

struct DualIterationConfig {
    double beta = 0.0;
    double lambda = 1.0;
    double tol = 1e-10;
    int max_iter = 1000;
    LinearSolverOptions linear;
};

// Alternates (A + beta I) u^{n+1} = f - q^n with the resolvent update
// q^{n+1} = (y - J(y)) / lambda, y = u^{n+1} + lambda q^n.
SolveResult dual_iteration(const ModelProblem& mp, const DualIterationConfig& cfg, const fem::Vector& x0);

// Root z of (1 - lambda beta) z + lambda phi(z) = y.
double resolvent(const ScalarPiecewiseC2& phi, double y, double beta, double lambda);

class NonlinearSolver {
public:
    virtual ~NonlinearSolver() = default;
    virtual std::string name() const = 0;
    virtual SolveResult solve(const ModelProblem& mp, const fem::Vector& x0) const = 0;
};

class SmoothingNewtonSolver final : public NonlinearSolver {
public:
    explicit SmoothingNewtonSolver(NewtonConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }
    std::string name() const override { return "smoothing_newton"; }
    SolveResult solve(const ModelProblem& mp, const fem::Vector& x0) const override {
        return smoothing_newton(mp, cfg_, x0);
    }
    const NewtonConfig& config() const noexcept { return cfg_; }

private:
    NewtonConfig cfg_;
};

class FixedPointSolver final : public NonlinearSolver {
public:
    explicit FixedPointSolver(FixedPointConfig cfg) : cfg_(cfg) {}
    std::string name() const override { return "fixed_point"; }
    SolveResult solve(const ModelProblem& mp, const fem::Vector& x0) const override { return fixed_point(mp, cfg_, x0); }

private:
    FixedPointConfig cfg_;
};

class DualIterationSolver final : public NonlinearSolver {
public:
    explicit DualIterationSolver(DualIterationConfig cfg) : cfg_(cfg) {}
    std::string name() const override { return "dual_iteration"; }
    SolveResult solve(const ModelProblem& mp, const fem::Vector& x0) const override {
        return dual_iteration(mp, cfg_, x0);
    }

private:
    DualIterationConfig cfg_;
};

}  // namespace hysfem::solver
