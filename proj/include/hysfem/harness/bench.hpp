#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hysfem/harness/config.hpp"
#include "hysfem/harness/study.hpp"

namespace hysfem::harness {

struct SolverRun {
    std::string solver;
    solver::SolveResult result;
};

struct TransientRun {
    std::string solver;
    std::vector<int> nonlinear_iterations;  // per completed step
    bool finished = true;
    std::string failure;
};

struct BenchResult {
    std::string case_id;
    int step = 0;
    double t = 0.0;
    ModelProblem problem;      // the matched step system
    fem::Vector initial_guess; // previous step solution on the free nodes
    std::vector<SolverRun> runs;
    std::vector<TransientRun> transient;
};

BenchResult bench_solvers(const StudyConfig& cfg, const LogFn& log = {});

// bench_<id>.csv, bench_<id>_residuals.csv, bench_<id>_residuals.svg and, for full
// transients, bench_<id>_transient.csv / .svg. Returns the written paths.
std::vector<std::filesystem::path> write_bench_outputs(const std::filesystem::path& dir, const BenchResult& result);

}  // namespace hysfem::harness
