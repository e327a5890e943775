#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "hysfem/hysteresis/play.hpp"
#include "hysfem/hysteresis/preisach.hpp"
#include "hysfem/solver/nonlinear.hpp"
#include "hysfem/stepping/transient.hpp"

namespace hysfem::harness {

// Raised for malformed configuration; carries the 1-based source line when known.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0);
    int line() const noexcept { return line_; }

private:
    int line_ = 0;
};

// Built-in data sets for f, g and u0.
//   table1    : f = 0, g = g0(t) (1D) or (x - 1/2) g0(t), u0 = 0 / 1e3 h(x)h(y) / 1e4 h(x)h(y)h(z)
//   benchmark : f = 2000 sin(3 pi t), g = 0, u0 = 0
//   heat_mms  : manufactured u = exp(-t) prod sin(pi x_i), f chosen for the pure heat equation
//   zero      : f = g = u0 = 0
enum class DataSet { table1, benchmark, heat_mms, zero };

std::string to_string(DataSet d);
DataSet parse_data_set(const std::string& name);

struct HysteresisConfig {
    std::string model = "play";  // play | preisach
    hysteresis::PlayParams play{-0.5, 0.5, 2.0};
    double w0 = 0.0;
    hysteresis::LorentzianDensity lorentzian;
    int r_nodes = 100;
    double r_max = 0.0;           // 0 derives it from tail_fraction
    double tail_fraction = 1e-2;
    double sigma_step = 0.5;
    std::string init = "demagnetized";  // demagnetized | saturation_drive
    std::vector<double> drive;          // inputs applied after negative saturation

    std::shared_ptr<const hysteresis::PreisachParams> preisach() const;
    stepping::Hysteresis make() const;
};

struct SolverConfig {
    std::string name = "smoothing_newton";  // smoothing_newton | fixed_point | dual_iteration
    double tol = 1e-12;
    int max_iter = 200;
    solver::NewtonConfig newton;
    double beta = 0.0;
    double lambda = 1.0;
    solver::LinearSolverOptions linear;

    std::unique_ptr<solver::NonlinearSolver> make(const std::string& which) const;
    std::unique_ptr<solver::NonlinearSolver> make() const { return make(name); }
};

struct BenchConfig {
    int N = 20;
    int K = 64;
    int step = 7;  // solve for u^step from u^(step-1)
    double tol = 1e-11;
    std::vector<std::string> solvers{"fixed_point", "dual_iteration", "smoothing_newton"};
    bool full_transient = false;
};

struct DemoConfig {
    double amplitude1 = 170.0;  // H(t) = A1 sin(4 pi t) + A2 sin(20 pi t + pi)
    double amplitude2 = 170.0;
    int periods = 2;
    int samples_per_period = 4000;
    double peak = 308.672;  // turning point of the initial drive
    bool red_dot_init = true;
};

struct StudyConfig {
    std::string case_id = "custom";
    int dim = 1;
    stepping::ProblemKind kind = stepping::ProblemKind::semilinear;
    double T = 1.0;
    DataSet data = DataSet::table1;
    double hysteresis_weight = 1.0;
    HysteresisConfig hysteresis;

    int N_ref = 64;
    int K_ref = 64;
    int K_ref_tau = 0;  // reference steps for the tau-study; 0 reuses K_ref
    int N_init = 4;
    int K_init = 4;
    int R_h = 2;
    int R_tau = 2;

    SolverConfig solver;
    BenchConfig bench;
    DemoConfig demo;
    std::string output_dir = "out";
    bool use_cache = true;

    void validate() const;
    int tau_reference_steps() const { return K_ref_tau > 0 ? K_ref_tau : K_ref; }
    // Problem on the uniform mesh with n intervals per side and K steps.
    stepping::TransientProblem make_problem(int n, int K) const;
    // Deterministic text covering every field that influences a trajectory at (n, K).
    std::string trajectory_key(int n, int K) const;
};

// case1 .. case6 (full size), case1_desk .. case6_desk, benchmark, benchmark_full,
// preisach_demo, heat_mms, zero
StudyConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// TOML document; an optional top-level `preset = "..."` seeds the defaults.
StudyConfig parse_config(const std::string& text, const std::string& source_name = "<string>");
StudyConfig load_config(const std::filesystem::path& path);
// key=value with a dotted key, e.g. "study.N_ref=128"; applied on top of `text`.
StudyConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                         const std::string& source_name = "<string>");
StudyConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

// The configuration as a TOML document that parse_config reads back unchanged.
std::string to_toml(const StudyConfig& cfg);

}  // namespace hysfem::harness
