#include "hysfem/harness/bench.hpp"

#include <fstream>

#include "hysfem/harness/output.hpp"

namespace hysfem::harness {

namespace {

SolverConfig bench_solver_config(const StudyConfig& cfg) {
    SolverConfig s = cfg.solver;
    s.tol = cfg.bench.tol;
    return s;
}

}  // namespace

BenchResult bench_solvers(const StudyConfig& cfg, const LogFn& log) {
    cfg.validate();
    const auto scfg = bench_solver_config(cfg);
    stepping::TransientDriver driver(cfg.make_problem(cfg.bench.N, cfg.bench.K));

    // march to the step before the matched one with the smoothing Newton method
    const auto newton = scfg.make("smoothing_newton");
    auto state = driver.initial_state();
    while (state.k < cfg.bench.step - 1) state = driver.advance(state, *newton);
    if (log) log("reached step " + std::to_string(state.k));

    BenchResult out;
    out.case_id = cfg.case_id;
    out.step = cfg.bench.step;
    out.t = cfg.T * cfg.bench.step / cfg.bench.K;
    out.problem = driver.build_step_system(state);
    out.initial_guess = driver.reduction().restrict_free(state.u);
    for (const auto& name : cfg.bench.solvers) {
        auto result = scfg.make(name)->solve(out.problem, out.initial_guess);
        if (log)
            log(name + ": " + solver::to_string(result.report.status) + " after " +
                std::to_string(result.report.nonlinear_iterations) + " iterations");
        out.runs.push_back({name, std::move(result)});
    }

    if (cfg.bench.full_transient) {
        for (const auto& name : cfg.bench.solvers) {
            TransientRun run;
            run.solver = name;
            const auto s = scfg.make(name);
            auto st = driver.initial_state();
            while (st.k < cfg.bench.K) {
                solver::SolveReport report;
                try {
                    st = driver.advance(st, *s, &report);
                } catch (const solver::SolverFailure& e) {
                    run.finished = false;
                    run.failure = e.what();
                    break;
                }
                run.nonlinear_iterations.push_back(report.nonlinear_iterations);
            }
            if (log) log(name + " transient: " + (run.finished ? "finished" : "DNF"));
            out.transient.push_back(std::move(run));
        }
    }
    return out;
}

std::vector<std::filesystem::path> write_bench_outputs(const std::filesystem::path& dir, const BenchResult& result) {
    ensure_dir(dir);
    std::vector<std::filesystem::path> paths;
    const std::string base = "bench_" + result.case_id;

    {
        const auto p = dir / (base + ".csv");
        std::ofstream out(p);
        solver::write_report_csv_header(out);
        for (const auto& run : result.runs) {
            const std::string label = "step" + std::to_string(result.step) + (run.result.report.converged() ? "" : "_DNF");
            solver::write_report_csv_row(out, run.result.report, label);
        }
        paths.push_back(p);
    }
    std::vector<Series> series;
    {
        const auto p = dir / (base + "_residuals.csv");
        std::ofstream out(p);
        out << "solver,iteration,residual\n";
        for (const auto& run : result.runs) {
            Series s{run.solver, {}, {}};
            const auto& h = run.result.report.residual_history;
            for (std::size_t k = 0; k < h.size(); ++k) {
                out << run.solver << ',' << k << ',' << format_double(h[k]) << '\n';
                s.x.push_back(static_cast<double>(k));
                s.y.push_back(h[k]);
            }
            series.push_back(std::move(s));
        }
        paths.push_back(p);
    }
    {
        const auto p = dir / (base + "_residuals.svg");
        std::ofstream out(p);
        write_svg_plot(out, {"Residual at step " + std::to_string(result.step) + " (t = " + format_double(result.t, 6) + ")",
                             "iteration", "||r||_2", true},
                       series);
        paths.push_back(p);
    }
    if (!result.transient.empty()) {
        std::vector<Series> its;
        const auto p = dir / (base + "_transient.csv");
        std::ofstream out(p);
        out << "solver,step,nonlinear_its\n";
        for (const auto& run : result.transient) {
            Series s{run.solver + (run.finished ? "" : " (DNF)"), {}, {}};
            for (std::size_t k = 0; k < run.nonlinear_iterations.size(); ++k) {
                out << run.solver << ',' << k + 1 << ',' << run.nonlinear_iterations[k] << '\n';
                s.x.push_back(static_cast<double>(k + 1));
                s.y.push_back(run.nonlinear_iterations[k]);
            }
            if (!run.finished) out << run.solver << ',' << run.nonlinear_iterations.size() + 1 << ",DNF\n";
            its.push_back(std::move(s));
        }
        paths.push_back(p);
        const auto ps = dir / (base + "_transient.svg");
        std::ofstream svg(ps);
        write_svg_plot(svg, {"Outer iterations per time step", "step", "nonlinear iterations", false}, its);
        paths.push_back(ps);
    }
    return paths;
}

}  // namespace hysfem::harness
