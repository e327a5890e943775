#include "hysfem/harness/study.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hysfem/harness/output.hpp"

namespace hysfem::harness {

std::optional<double> convergence_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !std::isfinite(e_coarse) || !std::isfinite(e_fine)) return std::nullopt;
    return std::log2(e_coarse / e_fine);
}

void ErrorTable::add(int N, int K, double l2, double h1) {
    ErrorRow row;
    row.level = static_cast<int>(rows.size());
    row.N = N;
    row.K = K;
    row.l2 = l2;
    row.h1 = h1;
    if (!rows.empty()) {
        row.l2_order = convergence_order(rows.back().l2, l2);
        row.h1_order = convergence_order(rows.back().h1, h1);
    }
    rows.push_back(row);
}

void ErrorTable::write_csv(std::ostream& out) const {
    auto order = [](const std::optional<double>& o) {
        if (!o) return std::string("-");
        std::ostringstream s;
        s << std::fixed << std::setprecision(4) << *o;
        return s.str();
    };
    auto err = [](double e) {
        std::ostringstream s;
        s << std::scientific << std::setprecision(6) << e;
        return s.str();
    };
    out << "level,N,K,l2,l2_order,h1,h1_order\n";
    for (const auto& r : rows) {
        out << r.level << ',' << r.N << ',' << r.K << ',' << err(r.l2) << ',' << order(r.l2_order) << ',' << err(r.h1)
            << ',' << order(r.h1_order) << '\n';
    }
}

namespace {

constexpr const char* kCacheMagic = "hysfem-reference 1";

std::filesystem::path cache_path(const StudyConfig& cfg, const std::string& key) {
    return resolve_output_dir(cfg.output_dir) / "cache" / ("ref_" + hex64(fnv1a64(key)) + ".txt");
}

std::optional<fem::Vector> read_cache(const std::filesystem::path& path, const std::string& key) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || line != kCacheMagic) return std::nullopt;
    std::size_t key_len = 0;
    if (!(in >> key_len)) return std::nullopt;
    in.get();
    std::string stored(key_len, '\0');
    if (!in.read(stored.data(), static_cast<std::streamsize>(key_len)) || stored != key) return std::nullopt;
    Eigen::Index n = 0;
    if (!(in >> n) || n < 0) return std::nullopt;
    fem::Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::string tok;
        if (!(in >> tok)) return std::nullopt;
        v[i] = std::strtod(tok.c_str(), nullptr);  // hexfloat round-trips exactly
    }
    return v;
}

void write_cache(const std::filesystem::path& path, const std::string& key, const fem::Vector& v) {
    ensure_dir(path.parent_path());
    const auto tmp = path.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp);
        out << kCacheMagic << '\n' << key.size() << '\n' << key << v.size() << '\n';
        out << std::hexfloat;
        for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i] << '\n';
    }
    std::filesystem::rename(tmp, path);
}

int job_count(const StudyOptions& options) {
    if (options.jobs > 0) return options.jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads; results in index order.
template <class Fn>
auto parallel_map(int count, int jobs, Fn fn) {
    using R = decltype(fn(0));
    std::vector<std::optional<R>> results(static_cast<std::size_t>(count));
    std::vector<std::future<void>> running;
    std::exception_ptr error;
    std::mutex error_mutex;
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next++;
            if (i >= count) return;
            try {
                results[static_cast<std::size_t>(i)].emplace(fn(i));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const int threads = std::min(count, jobs);
    for (int t = 0; t < threads; ++t) running.push_back(std::async(std::launch::async, worker));
    for (auto& f : running) f.get();
    if (error) std::rethrow_exception(error);
    std::vector<R> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

}  // namespace

FinalSolution final_solution(const StudyConfig& cfg, int n, int K, const LogFn& log) {
    const std::string key = cfg.trajectory_key(n, K);
    const auto path = cache_path(cfg, key);
    auto mesh = std::make_shared<const fem::Mesh>(fem::build_uniform_mesh(cfg.dim, n));
    if (cfg.use_cache) {
        if (auto cached = read_cache(path, key); cached && cached->size() == static_cast<Eigen::Index>(mesh->vertices.size())) {
            if (log) log("cache hit n=" + std::to_string(n) + " K=" + std::to_string(K));
            return {{mesh, std::move(*cached)}, true};
        }
    }
    auto prob = cfg.make_problem(n, K);
    prob.mesh = mesh;
    const auto solver = cfg.solver.make();
    if (log) log("solving n=" + std::to_string(n) + " K=" + std::to_string(K));
    auto traj = stepping::run_transient(prob, *solver);
    FinalSolution out{{mesh, traj.final_state().u}, false};
    if (cfg.use_cache && n == cfg.N_ref) write_cache(path, key, out.u.values);
    return out;
}

namespace {

ErrorTable run_study(const StudyConfig& cfg, const StudyOptions& options, const std::string& variable) {
    cfg.validate();
    const bool h_study = variable == "h";
    const int levels = (h_study ? cfg.R_h : cfg.R_tau) + 1;
    const int K_ref = h_study ? cfg.K_ref : cfg.tau_reference_steps();

    // task 0 is the reference, tasks 1..levels the refinement levels
    auto sizes = [&](int task) -> std::pair<int, int> {
        if (task == 0) return {cfg.N_ref, K_ref};
        const int r = task - 1;
        return h_study ? std::pair{cfg.N_init << r, cfg.K_ref} : std::pair{cfg.N_ref, cfg.K_init << r};
    };
    // the reference is by far the most expensive task, so it starts first
    auto solutions = parallel_map(levels + 1, job_count(options), [&](int task) {
        const auto [n, K] = sizes(task);
        return final_solution(cfg, n, K, options.log);
    });

    ErrorTable table;
    table.case_id = cfg.case_id;
    table.variable = variable;
    const auto& ref = solutions[0].u;
    for (int r = 0; r < levels; ++r) {
        const auto [n, K] = sizes(r + 1);
        const auto e = fem::error_norms(ref, solutions[static_cast<std::size_t>(r + 1)].u);
        table.add(n, K, e.l2, e.h1);
    }
    return table;
}

}  // namespace

ErrorTable run_h_study(const StudyConfig& cfg, const StudyOptions& options) { return run_study(cfg, options, "h"); }

ErrorTable run_tau_study(const StudyConfig& cfg, const StudyOptions& options) { return run_study(cfg, options, "tau"); }

}  // namespace hysfem::harness
