#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hysfem/fem/mesh.hpp"
#include "hysfem/harness/bench.hpp"
#include "hysfem/harness/config.hpp"
#include "hysfem/harness/demo.hpp"
#include "hysfem/harness/output.hpp"
#include "hysfem/harness/study.hpp"

namespace {

using namespace hysfem;
using namespace hysfem::harness;

struct ConfigArgs {
    std::string config;
    std::string preset;
    std::vector<std::string> overrides;
    std::string output;
    bool quiet = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("-c,--config", config, "TOML config file");
        cmd->add_option("-p,--preset", preset, "built-in preset (used when no config file is given)");
        cmd->add_option("-s,--set", overrides, "override a config key, e.g. study.N_ref=128")->take_all();
        cmd->add_option("-o,--output", output, "output directory (overrides output.dir)");
        cmd->add_flag("-q,--quiet", quiet, "suppress progress messages");
    }

    StudyConfig load() const {
        auto sets = overrides;
        if (!output.empty()) sets.push_back("output.dir=\"" + output + "\"");
        if (!config.empty()) return load_config(config, sets);
        const std::string base = preset.empty() ? "" : "preset = \"" + preset + "\"\n";
        return parse_config(base, sets, preset.empty() ? "<defaults>" : "<preset " + preset + ">");
    }

    LogFn log() const {
        if (quiet) return {};
        return [](const std::string& msg) { std::cerr << "[hysfem] " << msg << '\n'; };
    }
};

std::filesystem::path out_dir(const StudyConfig& cfg) { return ensure_dir(resolve_output_dir(cfg.output_dir)); }

void print_table(const ErrorTable& t) { t.write_csv(std::cout); }

int run_case(const ConfigArgs& args, int n, int K) {
    const auto cfg = args.load();
    if (n <= 0) n = cfg.N_ref;
    if (K <= 0) K = cfg.K_ref;
    const auto log = args.log();
    stepping::TransientDriver driver(cfg.make_problem(n, K));
    const auto solver = cfg.solver.make();
    if (log) log("running " + cfg.case_id + " n=" + std::to_string(n) + " K=" + std::to_string(K));
    auto traj = stepping::run_transient(driver, *solver);
    const auto dir = out_dir(cfg);
    const auto final_path = dir / (cfg.case_id + "_final.csv");
    {
        std::ofstream out(final_path);
        stepping::write_snapshot_csv(out, driver.mesh(), traj.final_state());
    }
    const auto steps_path = dir / (cfg.case_id + "_steps.csv");
    {
        std::ofstream out(steps_path);
        solver::write_report_csv_header(out);
        for (std::size_t k = 0; k < traj.reports.size(); ++k)
            solver::write_report_csv_row(out, traj.reports[k], "step" + std::to_string(k + 1));
    }
    std::cout << final_path.string() << '\n' << steps_path.string() << '\n';
    return 0;
}

int study(const ConfigArgs& args, bool h, int jobs) {
    const auto cfg = args.load();
    StudyOptions opts;
    opts.jobs = jobs;
    opts.log = args.log();
    const auto table = h ? run_h_study(cfg, opts) : run_tau_study(cfg, opts);
    const auto path = out_dir(cfg) / (cfg.case_id + (h ? "_h.csv" : "_tau.csv"));
    std::ofstream out(path);
    table.write_csv(out);
    print_table(table);
    std::cerr << "wrote " << path.string() << '\n';
    return 0;
}

int bench(const ConfigArgs& args) {
    const auto cfg = args.load();
    const auto result = bench_solvers(cfg, args.log());
    for (const auto& p : write_bench_outputs(out_dir(cfg), result)) std::cout << p.string() << '\n';
    return 0;
}

int demo(const ConfigArgs& args) {
    const auto cfg = args.load();
    const auto result = preisach_demo(cfg);
    for (const auto& p : write_demo_outputs(out_dir(cfg), cfg.case_id, result)) std::cout << p.string() << '\n';
    std::cout << "loop_height " << format_double(result.loop_height, 10) << '\n'
              << "first_period_gap " << format_double(result.first_period_gap, 6) << '\n'
              << "periodic_gap " << format_double(result.periodic_gap, 6) << '\n'
              << "odd_symmetry_error " << format_double(result.odd_symmetry_error, 6) << '\n';
    return 0;
}

int mesh_info(int dim, int n, const std::string& write) {
    const auto mesh = fem::build_uniform_mesh(dim, n);
    double volume = 0.0;
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) volume += fem::element_geometry(mesh, e).volume;
    std::cout << "dim " << mesh.dim << '\n'
              << "n " << mesh.n << '\n'
              << "vertices " << mesh.vertices.size() << '\n'
              << "elements " << mesh.elements.size() << '\n'
              << "boundary_nodes " << mesh.boundary_nodes.size() << '\n'
              << "volume " << format_double(volume, 15) << '\n';
    if (!write.empty()) {
        std::ofstream out(write);
        if (!out) throw hysfem::Error("cannot write '" + write + "'");
        fem::write_mesh_text(out, mesh);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite element solver for parabolic problems with hysteresis"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    ConfigArgs run_args, h_args, tau_args, bench_args, demo_args;
    int run_n = 0, run_k = 0, jobs = 0;

    auto* run = app.add_subcommand("run-case", "run one transient and write the final snapshot");
    run_args.attach(run);
    run->add_option("--n", run_n, "intervals per side (default study.N_ref)");
    run->add_option("--k", run_k, "time steps (default study.K_ref)");

    auto* sh = app.add_subcommand("study-h", "spatial convergence study");
    h_args.attach(sh);
    sh->add_option("-j,--jobs", jobs, "concurrent refinement levels");

    auto* st = app.add_subcommand("study-tau", "temporal convergence study");
    tau_args.attach(st);
    st->add_option("-j,--jobs", jobs, "concurrent refinement levels");

    auto* bs = app.add_subcommand("bench-solvers", "compare nonlinear solvers on one time step");
    bench_args.attach(bs);

    auto* pd = app.add_subcommand("preisach-demo", "scalar Preisach loop under the benchmark excitation");
    demo_args.attach(pd);

    int dim = 1, n = 1;
    std::string write;
    auto* mi = app.add_subcommand("mesh-info", "print uniform mesh statistics");
    mi->add_option("--dim", dim, "space dimension")->check(CLI::Range(1, 3));
    mi->add_option("--n", n, "intervals per side")->check(CLI::PositiveNumber);
    mi->add_option("--write", write, "write the mesh in text form");

    auto* lp = app.add_subcommand("list-presets", "print the built-in preset names");
    auto* sc = app.add_subcommand("show-config", "print the resolved configuration as TOML");
    ConfigArgs show_args;
    show_args.attach(sc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return run_case(run_args, run_n, run_k);
        if (*sh) return study(h_args, true, jobs);
        if (*st) return study(tau_args, false, jobs);
        if (*bs) return bench(bench_args);
        if (*pd) return demo(demo_args);
        if (*mi) return mesh_info(dim, n, write);
        if (*lp) {
            for (const auto& name : preset_names()) std::cout << name << '\n';
            return 0;
        }
        if (*sc) {
            std::cout << to_toml(show_args.load());
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
