#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "hysfem/solver/nonlinear.hpp"

namespace hysfem::solver {

namespace {

fem::SparseMatrix shifted(const fem::SparseMatrix& A, double beta) {
    fem::SparseMatrix B = A;
    if (beta != 0.0) {
        const auto diag = fem::diagonal_positions(B);
        for (auto p : diag) B.valuePtr()[p] += beta;
    }
    return B;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

SolveResult fixed_point(const ModelProblem& mp, const FixedPointConfig& cfg, const fem::Vector& x0) {
    mp.validate();
    if (!(cfg.beta >= 0.0)) throw InvalidArgument("fixed point: beta must be nonnegative");
    if (x0.size() != mp.f.size()) throw InvalidArgument("fixed point: initial guess has wrong size");
    const auto start = Clock::now();
    SolveResult result;
    auto& rep = result.report;
    rep.solver = "fixed_point";
    auto finish = [&](SolveStatus status, std::string message) {
        rep.status = status;
        rep.message = std::move(message);
        rep.wall_time = seconds_since(start);
        return result;
    };

    std::optional<SpdSolver> solver;
    try {
        solver.emplace(shifted(mp.A, cfg.beta), cfg.linear);
    } catch (const LinearSolverFailure& e) {
        return finish(SolveStatus::linear_failure, e.what());
    }
    ++rep.jacobian_evaluations;

    fem::Vector& u = result.x;
    u = x0;
    fem::Vector F = mp.nonlinearity(u);
    double normH = (mp.A * u + F - mp.f).norm();
    ++rep.function_evaluations;
    rep.residual_history.push_back(normH);
    for (int n = 0; n < cfg.max_iter; ++n) {
        if (normH <= cfg.tol) return finish(SolveStatus::converged, "");
        try {
            auto lin = solver->solve(mp.f - F + cfg.beta * u);
            u = std::move(lin.x);
            rep.linear_iterations += lin.iterations;
        } catch (const LinearSolverFailure& e) {
            return finish(SolveStatus::linear_failure, e.what());
        }
        ++rep.nonlinear_iterations;
        F = mp.nonlinearity(u);
        normH = (mp.A * u + F - mp.f).norm();
        ++rep.function_evaluations;
        rep.residual_history.push_back(normH);
    }
    if (normH <= cfg.tol) return finish(SolveStatus::converged, "");
    std::ostringstream msg;
    msg << "no convergence after " << cfg.max_iter << " iterations (residual " << normH << ")";
    return finish(SolveStatus::max_iterations, msg.str());
}

double resolvent(const ScalarPiecewiseC2& phi, double y, double beta, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("resolvent: lambda must be positive");
    const double c = 1.0 - lambda * beta;
    if (!(c > 0.0)) throw InvalidArgument("resolvent: requires 1 - lambda * beta > 0");
    auto psi = [&](double z) { return c * z + lambda * phi.value(z) - y; };

    const auto& kinks = phi.kinks();
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    // first kink with psi >= 0
    std::size_t first = 0;
    std::size_t last = kinks.size();
    while (first < last) {
        const std::size_t mid = first + (last - first) / 2;
        const double v = psi(kinks[mid]);
        if (v == 0.0) return kinks[mid];
        if (v > 0.0) {
            last = mid;
        } else {
            first = mid + 1;
        }
    }
    if (first < kinks.size()) hi = kinks[first];
    if (first > 0) lo = kinks[first - 1];

    // open-ended brackets: march outward until the sign changes
    const double anchor = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : y / c);
    double step = std::max({1.0, std::abs(y), std::abs(anchor)});
    if (!std::isfinite(lo)) {
        double z = std::isfinite(hi) ? hi - step : anchor;
        int guard = 0;
        while (psi(z) > 0.0) {
            step *= 2.0;
            z = (std::isfinite(hi) ? hi : anchor) - step;
            if (++guard > 2000) throw Error("resolvent: failed to bracket the root from below");
        }
        lo = z;
    }
    if (!std::isfinite(hi)) {
        step = std::max({1.0, std::abs(y), std::abs(lo)});
        double z = lo + step;
        int guard = 0;
        while (psi(z) < 0.0) {
            step *= 2.0;
            z = lo + step;
            if (++guard > 2000) throw Error("resolvent: failed to bracket the root from above");
        }
        hi = z;
    }
    if (psi(lo) > 0.0 || psi(hi) < 0.0) throw Error("resolvent: bracketing failed (nonlinearity not monotone?)");

    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double width = std::max(1e-14, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid));
        if (hi - lo <= width || mid <= lo || mid >= hi) break;
        (psi(mid) > 0.0 ? hi : lo) = mid;
    }
    const double z = 0.5 * (lo + hi);
    const Jet j = phi(z);
    const double dpsi = c + lambda * j.d1;
    if (dpsi > 0.0) {
        const double polished = z - (c * z + lambda * j.value - y) / dpsi;
        if (polished >= lo && polished <= hi) return polished;
    }
    return z;
}

SolveResult dual_iteration(const ModelProblem& mp, const DualIterationConfig& cfg, const fem::Vector& x0) {
    mp.validate();
    if (!(cfg.beta >= 0.0)) throw InvalidArgument("dual iteration: beta must be nonnegative");
    if (!(cfg.lambda > 0.0)) throw InvalidArgument("dual iteration: lambda must be positive");
    if (!(1.0 - cfg.lambda * cfg.beta > 0.0)) throw InvalidArgument("dual iteration: requires 1 - lambda * beta > 0");
    if (x0.size() != mp.f.size()) throw InvalidArgument("dual iteration: initial guess has wrong size");
    const auto start = Clock::now();
    SolveResult result;
    auto& rep = result.report;
    rep.solver = "dual_iteration";
    auto finish = [&](SolveStatus status, std::string message) {
        rep.status = status;
        rep.message = std::move(message);
        rep.wall_time = seconds_since(start);
        return result;
    };

    std::optional<SpdSolver> solver;
    try {
        solver.emplace(shifted(mp.A, cfg.beta), cfg.linear);
    } catch (const LinearSolverFailure& e) {
        return finish(SolveStatus::linear_failure, e.what());
    }
    ++rep.jacobian_evaluations;

    fem::Vector& u = result.x;
    u = x0;
    fem::Vector F = mp.nonlinearity(u);
    double normH = (mp.A * u + F - mp.f).norm();
    ++rep.function_evaluations;
    rep.residual_history.push_back(normH);
    if (normH <= cfg.tol) return finish(SolveStatus::converged, "");

    fem::Vector q = F - cfg.beta * u;
    const auto n = u.size();
    for (int it = 0; it < cfg.max_iter; ++it) {
        try {
            auto lin = solver->solve(mp.f - q);
            u = std::move(lin.x);
            rep.linear_iterations += lin.iterations;
        } catch (const LinearSolverFailure& e) {
            return finish(SolveStatus::linear_failure, e.what());
        }
        ++rep.nonlinear_iterations;
        F = mp.nonlinearity(u);
        normH = (mp.A * u + F - mp.f).norm();
        ++rep.function_evaluations;
        rep.residual_history.push_back(normH);
        if (normH <= cfg.tol) return finish(SolveStatus::converged, "");

        for (Eigen::Index i = 0; i < n; ++i) {
            const double y = u[i] + cfg.lambda * q[i];
            const double z = resolvent(mp.phi[static_cast<std::size_t>(i)], y, cfg.beta, cfg.lambda);
            q[i] = (y - z) / cfg.lambda;
        }
    }
    std::ostringstream msg;
    msg << "no convergence after " << cfg.max_iter << " iterations (residual " << normH << ")";
    return finish(SolveStatus::max_iterations, msg.str());
}

}  // namespace hysfem::solver
