#include <chrono>
#include <cmath>
#include <sstream>

#include "hysfem/solver/nonlinear.hpp"

namespace hysfem::solver {

void NewtonConfig::validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in_unit(rho)) throw InvalidArgument("newton: rho must lie in (0, 1)");
    if (!in_unit(alpha)) throw InvalidArgument("newton: alpha must lie in (0, 1)");
    if (!in_unit(eta)) throw InvalidArgument("newton: eta must lie in (0, 1)");
    if (!(gamma > 0.0)) throw InvalidArgument("newton: gamma must be positive");
    if (!(sigma > 0.0 && sigma < 0.5 * (1.0 - alpha))) throw InvalidArgument("newton: sigma must lie in (0, (1 - alpha) / 2)");
    if (!(mu >= 0.0)) throw InvalidArgument("newton: mu must be nonnegative (0 selects the derived constant)");
    if (!(tol >= 0.0)) throw InvalidArgument("newton: tol must be nonnegative");
    if (max_iter < 1) throw InvalidArgument("newton: max_iter must be at least 1");
}

SolveResult smoothing_newton(const ModelProblem& mp, const NewtonConfig& cfg, const fem::Vector& x0,
                             const NewtonObserver& observer) {
    cfg.validate();
    mp.validate();
    if (x0.size() != mp.f.size()) throw InvalidArgument("newton: initial guess has wrong size");
    const auto start = std::chrono::steady_clock::now();

    SolveResult result;
    auto& rep = result.report;
    rep.solver = "smoothing_newton";
    auto finish = [&](SolveStatus status, std::string message) {
        rep.status = status;
        rep.message = std::move(message);
        rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return result;
    };

    fem::Vector& x = result.x;
    x = x0;
    SmoothedSystem smooth(mp.phi, cfg.smoothing);
    double mu = cfg.mu > 0.0 ? cfg.mu : smooth.approximation_constant();
    if (!(mu > 0.0)) mu = 1.0;  // no kinks at all: the smoothing parameter is irrelevant

    const auto diag = fem::diagonal_positions(mp.A);
    fem::Vector H = mp.residual(x);
    ++rep.function_evaluations;
    double normH = H.norm();
    rep.residual_history.push_back(normH);
    if (normH <= cfg.tol) return finish(SolveStatus::converged, "");

    double beta = normH;
    double eps = cfg.alpha * beta / (2.0 * mu);
    smooth.set_epsilon(eps);

    fem::Vector Fs;
    fem::Vector dFs;
    fem::Vector trial;
    fem::Vector Ht_trial;
    fem::SparseMatrix J;
    for (int k = 0; k < cfg.max_iter; ++k) {
        smooth.eval(x, Fs, dFs);
        J = mp.A;
        for (std::size_t i = 0; i < diag.size(); ++i) J.valuePtr()[diag[i]] += dFs[static_cast<Eigen::Index>(i)];
        ++rep.jacobian_evaluations;

        fem::Vector d;
        try {
            auto lin = SpdSolver(J, cfg.linear).solve(-H);
            d = std::move(lin.x);
            rep.linear_iterations += lin.iterations;
        } catch (const LinearSolverFailure& e) {
            return finish(SolveStatus::linear_failure, e.what());
        }

        const fem::Vector Ht_x = mp.A * x + Fs - mp.f;
        ++rep.smoothed_evaluations;
        const double theta_k = 0.5 * Ht_x.squaredNorm();
        const double theta = 0.5 * normH * normH;

        double t = 1.0;
        int m = 0;
        double theta_k_trial = 0.0;
        for (;;) {
            trial = x + t * d;
            Ht_trial = mp.A * trial + smooth.values(trial) - mp.f;
            ++rep.smoothed_evaluations;
            theta_k_trial = 0.5 * Ht_trial.squaredNorm();
            if (theta_k_trial - theta_k <= -2.0 * cfg.sigma * t * theta) break;
            if (++m > cfg.max_backtracks) {
                std::ostringstream msg;
                msg << "line search found no sufficient decrease after " << cfg.max_backtracks
                    << " backtracks at iteration " << k << " (residual " << normH << ")";
                return finish(SolveStatus::stagnation, msg.str());
            }
            t *= cfg.rho;
        }

        if (observer) {
            NewtonStepInfo info;
            info.iteration = k;
            info.epsilon = eps;
            info.beta = beta;
            info.theta = theta;
            info.theta_smoothed = theta_k;
            info.theta_smoothed_new = theta_k_trial;
            info.step = t;
            info.backtracks = m;
            info.jacobian = &J;
            info.x = &x;
            info.direction = &d;
            observer(info);
        }

        x = trial;
        H = mp.residual(x);
        ++rep.function_evaluations;
        normH = H.norm();
        rep.residual_history.push_back(normH);
        ++rep.nonlinear_iterations;
        if (normH <= cfg.tol) return finish(SolveStatus::converged, "");

        const double smoothing_gap = (H - Ht_trial).norm();
        if (normH <= std::max(cfg.eta * beta, smoothing_gap / cfg.alpha)) {
            beta = normH;
            double e = std::min(cfg.alpha * beta / (2.0 * mu), 0.5 * eps);
            smooth.set_epsilon(e);
            int halvings = 0;
            while (cdist(smooth, x) > cfg.gamma * beta) {
                if (++halvings > cfg.max_epsilon_halvings) {
                    std::ostringstream msg;
                    msg << "smoothing parameter selection did not reach the Jacobian-consistency bound after "
                        << cfg.max_epsilon_halvings << " halvings at iteration " << k;
                    return finish(SolveStatus::epsilon_failure, msg.str());
                }
                e *= 0.5;
                smooth.set_epsilon(e);
            }
            eps = e;
        }
    }
    std::ostringstream msg;
    msg << "no convergence after " << cfg.max_iter << " iterations (residual " << normH << ")";
    return finish(SolveStatus::max_iterations, msg.str());
}

}  // namespace hysfem::solver
