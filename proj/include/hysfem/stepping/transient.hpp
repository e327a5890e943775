#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <variant>
#include <vector>

#include "hysfem/fem/dirichlet.hpp"
#include "hysfem/fem/function.hpp"
#include "hysfem/hysteresis/play.hpp"
#include "hysfem/hysteresis/preisach.hpp"
#include "hysfem/model_problem.hpp"
#include "hysfem/solver/nonlinear.hpp"

namespace hysfem::stepping {

// semilinear:  u_t - Laplace u + k W(u) = f
// quasilinear: (u + k W(u))_t - Laplace u = f
// with k the hysteresis weight.
enum class ProblemKind { semilinear, quasilinear };

std::string to_string(ProblemKind kind);
ProblemKind parse_problem_kind(const std::string& name);

using SpaceTimeFn = std::function<double(const fem::Point&, double t)>;
// Exact time average of f over [t0, t1]; optional.
using TimeAverageFn = std::function<double(const fem::Point&, double t0, double t1)>;

struct PlayHysteresis {
    hysteresis::PlayParams params;
    fem::SpaceFn w0;  // initial memory argument; empty means zero
};

struct PreisachHysteresis {
    std::shared_ptr<const hysteresis::PreisachParams> params;
    hysteresis::PreisachInitPolicy init;
};

using Hysteresis = std::variant<PlayHysteresis, PreisachHysteresis>;

struct TransientProblem {
    ProblemKind kind = ProblemKind::semilinear;
    std::shared_ptr<const fem::Mesh> mesh;
    double T = 1.0;
    int K_steps = 1;
    SpaceTimeFn f;   // empty means zero
    TimeAverageFn f_average;
    SpaceTimeFn g;   // Dirichlet data on the whole boundary; empty means zero
    fem::SpaceFn u0; // empty means zero
    Hysteresis hysteresis;
    double hysteresis_weight = 1.0;

    double tau() const { return T / K_steps; }
    void validate() const;
};

using PlayMemories = std::vector<hysteresis::PlayState>;
using PreisachMemories = std::vector<hysteresis::PreisachMemory>;

struct TransientState {
    int k = 0;
    double t = 0.0;
    fem::Vector u;
    std::variant<PlayMemories, PreisachMemories> memory;
    fem::Vector w;  // hysteresis output per node
};

// Caches the assembled operators of one problem and performs the per-step work.
class TransientDriver {
public:
    explicit TransientDriver(TransientProblem prob);

    const TransientProblem& problem() const noexcept { return prob_; }
    const fem::Mesh& mesh() const noexcept { return *prob_.mesh; }
    const fem::SparseMatrix& mass() const noexcept { return M_; }
    const fem::SparseMatrix& stiffness() const noexcept { return K_; }
    const fem::Vector& lumped_mass() const noexcept { return D_; }
    // M + tau K on all nodes
    const fem::SparseMatrix& step_matrix() const noexcept { return A_; }
    const fem::DirichletReduction& reduction() const noexcept { return *reduction_; }

    TransientState initial_state() const;
    // Problem on the free nodes for the step k -> k+1.
    ModelProblem build_step_system(const TransientState& state) const;
    // Dirichlet values at t_{k+1}, ordered like reduction().constrained_nodes().
    fem::Vector boundary_values(double t) const;
    // Throws solver::SolverFailure when the solve does not converge.
    TransientState advance(const TransientState& state, const solver::NonlinearSolver& solver,
                           solver::SolveReport* report = nullptr) const;

private:
    TransientProblem prob_;
    fem::SparseMatrix M_;
    fem::SparseMatrix K_;
    fem::Vector D_;
    fem::SparseMatrix A_;
    std::unique_ptr<fem::DirichletReduction> reduction_;
};

ModelProblem build_step_system(const TransientState& state, const TransientProblem& prob);
TransientState advance(const TransientState& state, const TransientProblem& prob, const solver::NonlinearSolver& solver);

struct RunOptions {
    std::vector<int> snapshot_steps;  // initial and final states are always kept
};

struct Trajectory {
    std::vector<TransientState> snapshots;  // ordered by step
    std::vector<solver::SolveReport> reports;  // one per step
    const TransientState& final_state() const { return snapshots.back(); }
};

Trajectory run_transient(const TransientProblem& prob, const solver::NonlinearSolver& solver,
                         const RunOptions& options = {});
Trajectory run_transient(const TransientDriver& driver, const solver::NonlinearSolver& solver,
                         const RunOptions& options = {});

// node,x,y,z,u,w
void write_snapshot_csv(std::ostream& out, const fem::Mesh& mesh, const TransientState& state);

}  // namespace hysfem::stepping
