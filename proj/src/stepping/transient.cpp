#include "hysfem/stepping/transient.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hysfem/fem/assembly.hpp"

namespace hysfem::stepping {

std::string to_string(ProblemKind kind) {
    return kind == ProblemKind::semilinear ? "semilinear" : "quasilinear";
}

ProblemKind parse_problem_kind(const std::string& name) {
    if (name == "semilinear") return ProblemKind::semilinear;
    if (name == "quasilinear") return ProblemKind::quasilinear;
    throw InvalidArgument("unknown problem kind '" + name + "' (expected semilinear or quasilinear)");
}

void TransientProblem::validate() const {
    if (!mesh) throw InvalidArgument("transient problem: mesh is missing");
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("transient problem: T must be positive");
    if (K_steps < 0) throw InvalidArgument("transient problem: K_steps must be nonnegative");
    if (!(hysteresis_weight >= 0.0)) throw InvalidArgument("transient problem: hysteresis weight must be nonnegative");
    if (const auto* play = std::get_if<PlayHysteresis>(&hysteresis)) {
        play->params.validate();
    } else if (!std::get<PreisachHysteresis>(hysteresis).params) {
        throw InvalidArgument("transient problem: Preisach parameters are missing");
    }
}

TransientDriver::TransientDriver(TransientProblem prob) : prob_(std::move(prob)) {
    prob_.validate();
    const auto& mesh = *prob_.mesh;
    M_ = fem::assemble_mass(mesh);
    K_ = fem::assemble_stiffness(mesh);
    D_ = fem::assemble_lumped_mass(mesh);
    const double tau = prob_.K_steps > 0 ? prob_.tau() : prob_.T;
    A_ = M_ + tau * K_;
    reduction_ = std::make_unique<fem::DirichletReduction>(A_, mesh.boundary_nodes);
}

TransientState TransientDriver::initial_state() const {
    const auto& mesh = *prob_.mesh;
    const auto n = mesh.vertices.size();
    TransientState s;
    s.k = 0;
    s.t = 0.0;
    s.u = prob_.u0 ? fem::interpolate(mesh, prob_.u0) : fem::Vector::Zero(static_cast<Eigen::Index>(n));
    s.w.resize(static_cast<Eigen::Index>(n));
    if (const auto* play = std::get_if<PlayHysteresis>(&prob_.hysteresis)) {
        PlayMemories mem(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double w0 = play->w0 ? play->w0(mesh.vertices[i]) : 0.0;
            mem[i] = hysteresis::play_init(s.u[static_cast<Eigen::Index>(i)], w0, play->params);
            s.w[static_cast<Eigen::Index>(i)] = mem[i].w;
        }
        s.memory = std::move(mem);
    } else {
        const auto& pre = std::get<PreisachHysteresis>(prob_.hysteresis);
        PreisachMemories mem(n);
        for (std::size_t i = 0; i < n; ++i) {
            mem[i] = hysteresis::preisach_init(s.u[static_cast<Eigen::Index>(i)], pre.init, *pre.params);
            s.w[static_cast<Eigen::Index>(i)] = hysteresis::preisach_output(mem[i], *pre.params);
        }
        s.memory = std::move(mem);
    }
    return s;
}

fem::Vector TransientDriver::boundary_values(double t) const {
    const auto& nodes = reduction_->constrained_nodes();
    fem::Vector g(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t c = 0; c < nodes.size(); ++c) {
        g[static_cast<Eigen::Index>(c)] =
            prob_.g ? prob_.g(prob_.mesh->vertices[static_cast<std::size_t>(nodes[c])], t) : 0.0;
    }
    return g;
}

ModelProblem TransientDriver::build_step_system(const TransientState& state) const {
    if (state.k >= prob_.K_steps) throw InvalidArgument("build_step_system: state is already at the final step");
    const auto& mesh = *prob_.mesh;
    const double tau = prob_.tau();
    const double t0 = state.t;
    const double t1 = t0 + tau;

    fem::Vector rhs = M_ * state.u;
    if (prob_.f || prob_.f_average) {
        fem::Vector fbar(static_cast<Eigen::Index>(mesh.vertices.size()));
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
            const auto& x = mesh.vertices[i];
            fbar[static_cast<Eigen::Index>(i)] =
                prob_.f_average ? prob_.f_average(x, t0, t1) : prob_.f(x, t0 + 0.5 * tau);
        }
        rhs += tau * (M_ * fbar);
    }

    ModelProblem mp;
    mp.A = reduction_->free_block();
    mp.f = reduction_->reduce_rhs(rhs, boundary_values(t1));

    const auto& free = reduction_->free_nodes();
    mp.phi.reserve(free.size());
    const double weight = prob_.hysteresis_weight;
    const bool semi = prob_.kind == ProblemKind::semilinear;
    for (int node : free) {
        const auto i = static_cast<std::size_t>(node);
        const double Dii = D_[node];
        const double scale = weight * Dii * (semi ? tau : 1.0);
        const double offset = semi ? 0.0 : -scale * state.w[node];
        if (const auto* play_mem = std::get_if<PlayMemories>(&state.memory)) {
            const auto& play = std::get<PlayHysteresis>(prob_.hysteresis);
            mp.phi.push_back(hysteresis::play_level_function((*play_mem)[i].w, play.params, scale, offset));
        } else {
            const auto& pre = std::get<PreisachHysteresis>(prob_.hysteresis);
            const auto& mem = std::get<PreisachMemories>(state.memory)[i];
            mp.phi.push_back(hysteresis::preisach_level_function(mem, pre.params, scale, offset));
        }
    }
    return mp;
}

TransientState TransientDriver::advance(const TransientState& state, const solver::NonlinearSolver& solver,
                                        solver::SolveReport* report) const {
    const ModelProblem mp = build_step_system(state);
    const fem::Vector x0 = reduction_->restrict_free(state.u);
    auto result = solver.solve(mp, x0);
    if (report) *report = result.report;
    if (!result.report.converged()) {
        std::ostringstream msg;
        msg << "step " << state.k + 1 << " of " << prob_.K_steps << ": " << result.report.solver << " "
            << solver::to_string(result.report.status) << " (residual " << result.report.final_residual() << ")";
        if (!result.report.message.empty()) msg << ": " << result.report.message;
        throw solver::SolverFailure(msg.str(), result.report);
    }

    TransientState next;
    next.k = state.k + 1;
    next.t = next.k == prob_.K_steps ? prob_.T : state.t + prob_.tau();
    next.u = reduction_->expand(result.x, boundary_values(state.t + prob_.tau()));
    next.w.resize(next.u.size());
    if (const auto* play_mem = std::get_if<PlayMemories>(&state.memory)) {
        const auto& params = std::get<PlayHysteresis>(prob_.hysteresis).params;
        PlayMemories mem(play_mem->size());
        for (std::size_t i = 0; i < mem.size(); ++i) {
            mem[i] = hysteresis::play_update((*play_mem)[i], next.u[static_cast<Eigen::Index>(i)], params);
            next.w[static_cast<Eigen::Index>(i)] = mem[i].w;
        }
        next.memory = std::move(mem);
    } else {
        const auto& params = *std::get<PreisachHysteresis>(prob_.hysteresis).params;
        PreisachMemories mem = std::get<PreisachMemories>(state.memory);
        for (std::size_t i = 0; i < mem.size(); ++i) {
            hysteresis::preisach_update_in_place(mem[i], next.u[static_cast<Eigen::Index>(i)], params);
            next.w[static_cast<Eigen::Index>(i)] = hysteresis::preisach_output(mem[i], params);
        }
        next.memory = std::move(mem);
    }
    return next;
}

ModelProblem build_step_system(const TransientState& state, const TransientProblem& prob) {
    return TransientDriver(prob).build_step_system(state);
}

TransientState advance(const TransientState& state, const TransientProblem& prob, const solver::NonlinearSolver& solver) {
    return TransientDriver(prob).advance(state, solver);
}

Trajectory run_transient(const TransientDriver& driver, const solver::NonlinearSolver& solver, const RunOptions& options) {
    Trajectory traj;
    TransientState state = driver.initial_state();
    traj.snapshots.push_back(state);
    const int K = driver.problem().K_steps;
    traj.reports.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        solver::SolveReport report;
        state = driver.advance(state, solver, &report);
        traj.reports.push_back(std::move(report));
        const bool wanted = std::find(options.snapshot_steps.begin(), options.snapshot_steps.end(), state.k) !=
                            options.snapshot_steps.end();
        if (wanted && state.k != K) traj.snapshots.push_back(state);
    }
    if (K > 0) traj.snapshots.push_back(std::move(state));
    return traj;
}

Trajectory run_transient(const TransientProblem& prob, const solver::NonlinearSolver& solver, const RunOptions& options) {
    return run_transient(TransientDriver(prob), solver, options);
}

void write_snapshot_csv(std::ostream& out, const fem::Mesh& mesh, const TransientState& state) {
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << "node,x,y,z,u,w\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const auto& p = mesh.vertices[i];
        out << i << ',' << p[0] << ',' << p[1] << ',' << p[2] << ',' << state.u[static_cast<Eigen::Index>(i)] << ','
            << state.w[static_cast<Eigen::Index>(i)] << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

}  // namespace hysfem::stepping
