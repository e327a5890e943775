#include "hysfem/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "hysfem/fem/mesh.hpp"

namespace hysfem::harness {

ConfigError::ConfigError(const std::string& what, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string to_string(DataSet d) {
    switch (d) {
        case DataSet::table1: return "table1";
        case DataSet::benchmark: return "benchmark";
        case DataSet::heat_mms: return "heat_mms";
        case DataSet::zero: return "zero";
    }
    return "table1";
}

DataSet parse_data_set(const std::string& name) {
    if (name == "table1") return DataSet::table1;
    if (name == "benchmark") return DataSet::benchmark;
    if (name == "heat_mms") return DataSet::heat_mms;
    if (name == "zero") return DataSet::zero;
    throw InvalidArgument("unknown data set '" + name + "' (expected table1, benchmark, heat_mms or zero)");
}

std::shared_ptr<const hysteresis::PreisachParams> HysteresisConfig::preisach() const {
    const double rmax = r_max > 0.0 ? r_max : hysteresis::lorentzian_r_max_for_tail(lorentzian, tail_fraction);
    hysteresis::SigmaTableOptions table;
    table.sigma_step = sigma_step;
    return hysteresis::make_lorentzian_preisach(lorentzian, static_cast<std::size_t>(r_nodes), rmax, table);
}

stepping::Hysteresis HysteresisConfig::make() const {
    if (model == "play") {
        stepping::PlayHysteresis h;
        h.params = play;
        const double w = w0;
        if (w != 0.0) h.w0 = [w](const fem::Point&) { return w; };
        return h;
    }
    if (model == "preisach") {
        stepping::PreisachHysteresis h;
        h.params = preisach();
        if (init == "demagnetized") {
            h.init = hysteresis::ExplicitPlays{std::vector<double>(h.params->size(), 0.0)};
        } else if (init == "saturation_drive") {
            h.init = hysteresis::DriveFromSaturation{0.0, drive};
        } else {
            throw InvalidArgument("unknown Preisach initialization '" + init + "'");
        }
        return h;
    }
    throw InvalidArgument("unknown hysteresis model '" + model + "' (expected play or preisach)");
}

std::unique_ptr<solver::NonlinearSolver> SolverConfig::make(const std::string& which) const {
    if (which == "smoothing_newton") {
        auto cfg = newton;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        cfg.linear = linear;
        return std::make_unique<solver::SmoothingNewtonSolver>(cfg);
    }
    if (which == "fixed_point") {
        solver::FixedPointConfig cfg;
        cfg.beta = beta;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        cfg.linear = linear;
        return std::make_unique<solver::FixedPointSolver>(cfg);
    }
    if (which == "dual_iteration") {
        solver::DualIterationConfig cfg;
        cfg.beta = beta;
        cfg.lambda = lambda;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        cfg.linear = linear;
        return std::make_unique<solver::DualIterationSolver>(cfg);
    }
    throw InvalidArgument("unknown solver '" + which + "' (expected smoothing_newton, fixed_point or dual_iteration)");
}

void StudyConfig::validate() const {
    if (dim < 1 || dim > 3) throw ConfigError("case.dim must be 1, 2 or 3");
    if (!(T > 0.0)) throw ConfigError("case.T must be positive");
    if (!(hysteresis_weight >= 0.0)) throw ConfigError("case.hysteresis_weight must be nonnegative");
    if (hysteresis.model != "play" && hysteresis.model != "preisach")
        throw ConfigError("hysteresis.model must be play or preisach");
    if (hysteresis.model == "play") {
        try {
            hysteresis.play.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
    }
    if (hysteresis.r_nodes < 1) throw ConfigError("hysteresis.r_nodes must be positive");
    if (hysteresis.init != "demagnetized" && hysteresis.init != "saturation_drive")
        throw ConfigError("hysteresis.init must be demagnetized or saturation_drive");
    if (N_ref < 1 || N_init < 1 || K_ref < 1 || K_init < 1) throw ConfigError("study grid sizes must be positive");
    if (R_h < 0 || R_tau < 0) throw ConfigError("study refinement levels must be nonnegative");
    for (int r = 0; r <= R_h; ++r) {
        const long long n = static_cast<long long>(N_init) << r;
        if (n > N_ref || N_ref % n != 0) throw ConfigError("study.N_ref must be a multiple of every coarse N");
    }
    const int Kt = tau_reference_steps();
    for (int r = 0; r <= R_tau; ++r) {
        const long long K = static_cast<long long>(K_init) << r;
        if (K > Kt) throw ConfigError("tau reference steps must not be below the finest coarse K");
    }
    if (bench.N < 1 || bench.K < 1 || bench.step < 1 || bench.step > bench.K)
        throw ConfigError("bench.step must lie in 1..bench.K");
    if (bench.solvers.empty()) throw ConfigError("bench.solvers must not be empty");
    for (const auto& s : bench.solvers) {
        if (s != "smoothing_newton" && s != "fixed_point" && s != "dual_iteration")
            throw ConfigError("unknown solver '" + s + "' in bench.solvers");
    }
    if (solver.name != "smoothing_newton" && solver.name != "fixed_point" && solver.name != "dual_iteration")
        throw ConfigError("unknown solver '" + solver.name + "'");
    if (demo.periods < 1 || demo.samples_per_period < 2) throw ConfigError("demo needs at least one period and two samples");
}

namespace {

double g0(double t) { return 2.0 * t * std::sin(2.0 * std::numbers::pi * t); }
double bump(double x) { return x * (0.5 - x) * (1.0 - x); }

}  // namespace

stepping::TransientProblem StudyConfig::make_problem(int n, int K) const {
    stepping::TransientProblem p;
    p.kind = kind;
    p.mesh = std::make_shared<const fem::Mesh>(fem::build_uniform_mesh(dim, n));
    p.T = T;
    p.K_steps = K;
    p.hysteresis = hysteresis.make();
    p.hysteresis_weight = hysteresis_weight;
    const int d = dim;
    switch (data) {
        case DataSet::table1:
            if (d == 1) {
                p.g = [](const fem::Point&, double t) { return g0(t); };
            } else {
                p.g = [](const fem::Point& x, double t) { return (x[0] - 0.5) * g0(t); };
                const double amp = d == 2 ? 1e3 : 1e4;
                p.u0 = [amp, d](const fem::Point& x) {
                    double v = amp;
                    for (int i = 0; i < d; ++i) v *= bump(x[static_cast<std::size_t>(i)]);
                    return v;
                };
            }
            break;
        case DataSet::benchmark:
            p.f = [](const fem::Point&, double t) { return 2000.0 * std::sin(3.0 * std::numbers::pi * t); };
            break;
        case DataSet::heat_mms: {
            auto shape = [d](const fem::Point& x) {
                double v = 1.0;
                for (int i = 0; i < d; ++i) v *= std::sin(std::numbers::pi * x[static_cast<std::size_t>(i)]);
                return v;
            };
            const double lam = d * std::numbers::pi * std::numbers::pi - 1.0;
            p.f = [shape, lam](const fem::Point& x, double t) { return lam * std::exp(-t) * shape(x); };
            p.f_average = [shape, lam](const fem::Point& x, double t0, double t1) {
                return lam * shape(x) * (std::exp(-t0) - std::exp(-t1)) / (t1 - t0);
            };
            p.u0 = shape;
            break;
        }
        case DataSet::zero:
            break;
    }
    return p;
}

namespace {

// shortest text that reads back to the same double
std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

// Field table shared by the parser, the serializer and the trajectory key.
namespace {

enum class Kind { integer, real, boolean, string, real_list, string_list };

struct Field {
    std::string key;  // dotted
    Kind kind;
    bool affects_trajectory;
    std::function<void(StudyConfig&, const toml::node&)> set;
    std::function<std::string(const StudyConfig&)> get;  // TOML literal
};

int node_line(const toml::node& n) { return static_cast<int>(n.source().begin.line); }

double as_real(const toml::node& n, const std::string& key) {
    if (auto v = n.value_exact<double>()) return *v;
    if (auto v = n.value_exact<int64_t>()) return static_cast<double>(*v);
    throw ConfigError(key + " must be a number", node_line(n));
}

int as_int(const toml::node& n, const std::string& key) {
    if (auto v = n.value_exact<int64_t>()) {
        if (*v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max())
            throw ConfigError(key + " is out of range", node_line(n));
        return static_cast<int>(*v);
    }
    throw ConfigError(key + " must be an integer", node_line(n));
}

bool as_bool(const toml::node& n, const std::string& key) {
    if (auto v = n.value_exact<bool>()) return *v;
    throw ConfigError(key + " must be true or false", node_line(n));
}

std::string as_string(const toml::node& n, const std::string& key) {
    if (auto v = n.value_exact<std::string>()) return *v;
    throw ConfigError(key + " must be a string", node_line(n));
}

std::vector<double> as_real_list(const toml::node& n, const std::string& key) {
    const auto* arr = n.as_array();
    if (!arr) throw ConfigError(key + " must be an array of numbers", node_line(n));
    std::vector<double> out;
    for (const auto& e : *arr) out.push_back(as_real(e, key));
    return out;
}

std::vector<std::string> as_string_list(const toml::node& n, const std::string& key) {
    const auto* arr = n.as_array();
    if (!arr) throw ConfigError(key + " must be an array of strings", node_line(n));
    std::vector<std::string> out;
    for (const auto& e : *arr) out.push_back(as_string(e, key));
    return out;
}

std::string quote(const std::string& s) {
    std::ostringstream o;
    o << '"';
    for (char c : s) {
        if (c == '"' || c == '\\') o << '\\';
        o << c;
    }
    o << '"';
    return o.str();
}

template <class Ref>
Field real_field(std::string key, bool traj, Ref ref) {
    return {key, Kind::real, traj,
            [ref, key](StudyConfig& c, const toml::node& n) { ref(c) = as_real(n, key); },
            [ref](const StudyConfig& c) { return fmt_double(ref(c)); }};
}

template <class Ref>
Field int_field(std::string key, bool traj, Ref ref) {
    return {key, Kind::integer, traj,
            [ref, key](StudyConfig& c, const toml::node& n) { ref(c) = as_int(n, key); },
            [ref](const StudyConfig& c) { return std::to_string(ref(c)); }};
}

template <class Ref>
Field bool_field(std::string key, bool traj, Ref ref) {
    return {key, Kind::boolean, traj,
            [ref, key](StudyConfig& c, const toml::node& n) { ref(c) = as_bool(n, key); },
            [ref](const StudyConfig& c) { return std::string(ref(c) ? "true" : "false"); }};
}

template <class Ref>
Field string_field(std::string key, bool traj, Ref ref) {
    return {key, Kind::string, traj,
            [ref, key](StudyConfig& c, const toml::node& n) { ref(c) = as_string(n, key); },
            [ref](const StudyConfig& c) { return quote(ref(c)); }};
}

// String-valued field backed by an enum (or other parsed type).
template <class Get, class Set>
Field enum_field(std::string key, bool traj, Get get, Set set) {
    return {key, Kind::string, traj,
            [set, key](StudyConfig& c, const toml::node& n) {
                try {
                    set(c, as_string(n, key));
                } catch (const InvalidArgument& e) {
                    throw ConfigError(key + ": " + e.what(), node_line(n));
                }
            },
            [get](const StudyConfig& c) { return quote(get(c)); }};
}

const std::vector<Field>& fields() {
    using C = StudyConfig;
    static const std::vector<Field> table = {
        string_field("case.id", false, [](auto& c) -> auto& { return c.case_id; }),
        int_field("case.dim", true, [](auto& c) -> auto& { return c.dim; }),
        enum_field("case.kind", true, [](const C& c) { return stepping::to_string(c.kind); },
                   [](C& c, const std::string& s) { c.kind = stepping::parse_problem_kind(s); }),
        real_field("case.T", true, [](auto& c) -> auto& { return c.T; }),
        enum_field("case.data", true, [](const C& c) { return to_string(c.data); },
                   [](C& c, const std::string& s) { c.data = parse_data_set(s); }),
        real_field("case.hysteresis_weight", true, [](auto& c) -> auto& { return c.hysteresis_weight; }),

        string_field("hysteresis.model", true, [](auto& c) -> auto& { return c.hysteresis.model; }),
        real_field("hysteresis.a", true, [](auto& c) -> auto& { return c.hysteresis.play.a; }),
        real_field("hysteresis.b", true, [](auto& c) -> auto& { return c.hysteresis.play.b; }),
        real_field("hysteresis.c", true, [](auto& c) -> auto& { return c.hysteresis.play.c; }),
        real_field("hysteresis.w0", true, [](auto& c) -> auto& { return c.hysteresis.w0; }),
        real_field("hysteresis.N", true, [](auto& c) -> auto& { return c.hysteresis.lorentzian.N; }),
        real_field("hysteresis.gamma", true, [](auto& c) -> auto& { return c.hysteresis.lorentzian.gamma; }),
        real_field("hysteresis.mu", true, [](auto& c) -> auto& { return c.hysteresis.lorentzian.mu; }),
        int_field("hysteresis.r_nodes", true, [](auto& c) -> auto& { return c.hysteresis.r_nodes; }),
        real_field("hysteresis.r_max", true, [](auto& c) -> auto& { return c.hysteresis.r_max; }),
        real_field("hysteresis.tail_fraction", true, [](auto& c) -> auto& { return c.hysteresis.tail_fraction; }),
        real_field("hysteresis.sigma_step", true, [](auto& c) -> auto& { return c.hysteresis.sigma_step; }),
        string_field("hysteresis.init", true, [](auto& c) -> auto& { return c.hysteresis.init; }),
        Field{"hysteresis.drive", Kind::real_list, true,
              [](C& c, const toml::node& n) { c.hysteresis.drive = as_real_list(n, "hysteresis.drive"); },
              [](const C& c) {
                  std::string s = "[";
                  for (std::size_t i = 0; i < c.hysteresis.drive.size(); ++i)
                      s += (i ? ", " : "") + fmt_double(c.hysteresis.drive[i]);
                  return s + "]";
              }},

        int_field("study.N_ref", false, [](auto& c) -> auto& { return c.N_ref; }),
        int_field("study.K_ref", false, [](auto& c) -> auto& { return c.K_ref; }),
        int_field("study.K_ref_tau", false, [](auto& c) -> auto& { return c.K_ref_tau; }),
        int_field("study.N_init", false, [](auto& c) -> auto& { return c.N_init; }),
        int_field("study.K_init", false, [](auto& c) -> auto& { return c.K_init; }),
        int_field("study.R_h", false, [](auto& c) -> auto& { return c.R_h; }),
        int_field("study.R_tau", false, [](auto& c) -> auto& { return c.R_tau; }),
        bool_field("study.use_cache", false, [](auto& c) -> auto& { return c.use_cache; }),

        string_field("solver.name", true, [](auto& c) -> auto& { return c.solver.name; }),
        real_field("solver.tol", true, [](auto& c) -> auto& { return c.solver.tol; }),
        int_field("solver.max_iter", true, [](auto& c) -> auto& { return c.solver.max_iter; }),
        real_field("solver.rho", true, [](auto& c) -> auto& { return c.solver.newton.rho; }),
        real_field("solver.alpha", true, [](auto& c) -> auto& { return c.solver.newton.alpha; }),
        real_field("solver.eta", true, [](auto& c) -> auto& { return c.solver.newton.eta; }),
        real_field("solver.gamma", true, [](auto& c) -> auto& { return c.solver.newton.gamma; }),
        real_field("solver.sigma", true, [](auto& c) -> auto& { return c.solver.newton.sigma; }),
        real_field("solver.mu", true, [](auto& c) -> auto& { return c.solver.newton.mu; }),
        int_field("solver.max_backtracks", true, [](auto& c) -> auto& { return c.solver.newton.max_backtracks; }),
        int_field("solver.max_epsilon_halvings", true,
                  [](auto& c) -> auto& { return c.solver.newton.max_epsilon_halvings; }),
        real_field("solver.initial_window", true, [](auto& c) -> auto& { return c.solver.newton.smoothing.initial_window; }),
        real_field("solver.contraction", true, [](auto& c) -> auto& { return c.solver.newton.smoothing.contraction; }),
        real_field("solver.beta", true, [](auto& c) -> auto& { return c.solver.beta; }),
        real_field("solver.lambda", true, [](auto& c) -> auto& { return c.solver.lambda; }),
        enum_field("solver.linear_backend", true, [](const C& c) { return solver::to_string(c.solver.linear.backend); },
                   [](C& c, const std::string& s) { c.solver.linear.backend = solver::parse_linear_backend(s); }),
        real_field("solver.linear_tol", true, [](auto& c) -> auto& { return c.solver.linear.rel_tol; }),
        int_field("solver.linear_max_iter", true, [](auto& c) -> auto& { return c.solver.linear.max_iter; }),

        int_field("bench.N", false, [](auto& c) -> auto& { return c.bench.N; }),
        int_field("bench.K", false, [](auto& c) -> auto& { return c.bench.K; }),
        int_field("bench.step", false, [](auto& c) -> auto& { return c.bench.step; }),
        real_field("bench.tol", false, [](auto& c) -> auto& { return c.bench.tol; }),
        Field{"bench.solvers", Kind::string_list, false,
              [](C& c, const toml::node& n) { c.bench.solvers = as_string_list(n, "bench.solvers"); },
              [](const C& c) {
                  std::string s = "[";
                  for (std::size_t i = 0; i < c.bench.solvers.size(); ++i)
                      s += (i ? ", " : "") + quote(c.bench.solvers[i]);
                  return s + "]";
              }},
        bool_field("bench.full_transient", false, [](auto& c) -> auto& { return c.bench.full_transient; }),

        real_field("demo.amplitude1", false, [](auto& c) -> auto& { return c.demo.amplitude1; }),
        real_field("demo.amplitude2", false, [](auto& c) -> auto& { return c.demo.amplitude2; }),
        int_field("demo.periods", false, [](auto& c) -> auto& { return c.demo.periods; }),
        int_field("demo.samples_per_period", false, [](auto& c) -> auto& { return c.demo.samples_per_period; }),
        real_field("demo.peak", false, [](auto& c) -> auto& { return c.demo.peak; }),
        bool_field("demo.red_dot_init", false, [](auto& c) -> auto& { return c.demo.red_dot_init; }),

        string_field("output.dir", false, [](auto& c) -> auto& { return c.output_dir; }),
    };
    return table;
}

const Field* find_field(const std::string& key) {
    for (const auto& f : fields())
        if (f.key == key) return &f;
    return nullptr;
}

void apply_table(StudyConfig& cfg, const toml::table& root) {
    for (auto&& [section_key, section_node] : root) {
        const std::string section(section_key.str());
        if (section == "preset") continue;
        const auto* section_table = section_node.as_table();
        if (!section_table)
            throw ConfigError("unknown top-level key '" + section + "'", node_line(section_node));
        for (auto&& [key, node] : *section_table) {
            const std::string dotted = section + "." + std::string(key.str());
            const Field* f = find_field(dotted);
            if (!f) throw ConfigError("unknown key '" + dotted + "'", node_line(node));
            f->set(cfg, node);
        }
    }
}

// Recursive insert-or-assign of `src` into `dst`.
void merge(toml::table& dst, const toml::table& src) {
    for (auto&& [k, v] : src) {
        auto* existing = dst.get(k);
        if (existing && existing->is_table() && v.is_table()) {
            merge(*existing->as_table(), *v.as_table());
        } else {
            dst.insert_or_assign(k, v);
        }
    }
}

toml::table parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + text + "' is not of the form key=value");
    const std::string key = text.substr(0, eq);
    const std::string value = text.substr(eq + 1);
    try {
        return toml::parse(key + " = " + value);
    } catch (const toml::parse_error&) {
        // bare words are strings
        try {
            return toml::parse(key + " = " + quote(value));
        } catch (const toml::parse_error& e) {
            throw ConfigError("override '" + text + "': " + std::string(e.description()));
        }
    }
}

StudyConfig build(const toml::table& root) {
    StudyConfig cfg;
    if (const auto* p = root.get("preset")) {
        const auto name = p->value_exact<std::string>();
        if (!name) throw ConfigError("preset must be a string", node_line(*p));
        try {
            cfg = preset(*name);
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what(), node_line(*p));
        }
    }
    apply_table(cfg, root);
    cfg.validate();
    return cfg;
}

toml::table parse_document(const std::string& text, const std::string& source_name) {
    try {
        return toml::parse(text, source_name);
    } catch (const toml::parse_error& e) {
        throw ConfigError(source_name + ": " + std::string(e.description()), static_cast<int>(e.source().begin.line));
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

StudyConfig parse_config(const std::string& text, const std::string& source_name) {
    return build(parse_document(text, source_name));
}

StudyConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                         const std::string& source_name) {
    auto root = parse_document(text, source_name);
    for (const auto& o : overrides) {
        const auto patch = parse_override(o);
        merge(root, patch);
    }
    return build(root);
}

StudyConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path), path.string()); }

StudyConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    return parse_config(read_file(path), overrides, path.string());
}

std::string to_toml(const StudyConfig& cfg) {
    std::ostringstream out;
    std::string section;
    for (const auto& f : fields()) {
        const auto dot = f.key.find('.');
        const std::string sec = f.key.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) out << '\n';
            out << '[' << sec << "]\n";
            section = sec;
        }
        out << f.key.substr(dot + 1) << " = " << f.get(cfg) << '\n';
    }
    return out.str();
}

std::string StudyConfig::trajectory_key(int n, int K) const {
    std::ostringstream out;
    out << "hysfem-trajectory v1\n";
    for (const auto& f : fields())
        if (f.affects_trajectory) out << f.key << '=' << f.get(*this) << '\n';
    out << "n=" << n << "\nK=" << K << '\n';
    return out.str();
}

// Presets

namespace {

StudyConfig table1_case(int id) {
    StudyConfig c;
    c.case_id = "case" + std::to_string(id);
    c.data = DataSet::table1;
    c.kind = id % 2 == 1 ? stepping::ProblemKind::semilinear : stepping::ProblemKind::quasilinear;
    c.hysteresis.model = "play";
    c.hysteresis.play = {-0.5, 0.5, 2.0};
    c.hysteresis.w0 = 0.0;
    c.solver.name = "smoothing_newton";
    c.solver.tol = 1e-12;
    c.R_h = 3;
    c.R_tau = 3;
    switch (id) {
        case 1:
        case 2:
            c.dim = 1;
            c.T = id == 1 ? 4.9 : 5.0;
            c.K_ref = 262144;
            c.N_ref = 32768;
            c.K_init = 256;
            c.N_init = 32;
            c.solver.linear.backend = solver::LinearBackend::cholesky;
            break;
        case 3:
        case 4:
            c.dim = 2;
            c.T = id == 3 ? 0.5 : 3.0;
            c.K_ref = id == 3 ? 5120 : 7680;
            c.N_ref = 640;
            c.K_init = id == 3 ? 10 : 40;
            c.N_init = id == 3 ? 5 : 10;
            if (id == 4) c.R_h = 3;
            break;
        case 5:
        case 6:
            c.dim = 3;
            c.T = id == 5 ? 1.0 : 3.0;
            c.K_ref = id == 5 ? 2000 : 900;
            c.N_ref = 100;
            c.K_init = 10;
            c.N_init = 5;
            c.R_h = 2;
            c.R_tau = 2;
            break;
        default: throw InvalidArgument("unknown case id");
    }
    return c;
}

StudyConfig desk_case(int id) {
    StudyConfig c = table1_case(id);
    c.case_id += "_desk";
    switch (id) {
        case 1:
        case 2:
            c.N_ref = 1024;
            c.K_ref = 8192;
            c.K_ref_tau = 65536;
            break;
        case 3:
            c.N_ref = 160;
            c.K_ref = 1280;
            c.R_h = 2;
            c.K_init = 10;
            c.R_tau = 2;
            break;
        case 4:
            c.N_ref = 160;
            c.K_ref = 1920;
            c.R_h = 2;
            c.R_tau = 2;
            break;
        case 5:
        case 6:
            c.N_ref = 40;
            c.K_ref = id == 5 ? 200 : 180;
            c.N_init = 5;
            c.R_h = 2;
            c.K_init = id == 5 ? 10 : 9;
            c.R_tau = 2;
            break;
        default: break;
    }
    return c;
}

StudyConfig benchmark_case(bool full_scale) {
    StudyConfig c;
    c.case_id = full_scale ? "benchmark_full" : "benchmark";
    c.dim = 3;
    c.kind = stepping::ProblemKind::quasilinear;
    c.T = 1.0;
    c.data = DataSet::benchmark;
    c.hysteresis.model = "preisach";
    c.hysteresis.init = "demagnetized";
    c.solver.name = "smoothing_newton";
    c.solver.tol = 1e-11;
    c.solver.newton.mu = 100.0;
    c.bench.N = full_scale ? 60 : 20;
    c.bench.K = full_scale ? 320 : 64;
    c.bench.step = full_scale ? 35 : 7;
    c.bench.tol = 1e-11;
    c.N_ref = c.bench.N;
    c.K_ref = c.bench.K;
    c.N_init = c.bench.N;
    c.K_init = c.bench.K;
    c.R_h = 0;
    c.R_tau = 0;
    return c;
}

}  // namespace

StudyConfig preset(const std::string& name) {
    for (int id = 1; id <= 6; ++id) {
        if (name == "case" + std::to_string(id)) return table1_case(id);
        if (name == "case" + std::to_string(id) + "_desk") return desk_case(id);
    }
    if (name == "benchmark") return benchmark_case(false);
    if (name == "benchmark_full") return benchmark_case(true);
    if (name == "preisach_demo") {
        StudyConfig c = benchmark_case(false);
        c.case_id = "preisach_demo";
        c.hysteresis.init = "saturation_drive";
        c.hysteresis.drive = {c.demo.peak, 0.0};
        return c;
    }
    if (name == "heat_mms") {
        StudyConfig c;
        c.case_id = "heat_mms";
        c.dim = 1;
        c.T = 0.1;
        c.data = DataSet::heat_mms;
        c.hysteresis_weight = 0.0;
        c.N_ref = 256;
        c.K_ref = 1024;
        c.N_init = 8;
        c.K_init = 8;
        c.R_h = 3;
        c.R_tau = 3;
        c.solver.linear.backend = solver::LinearBackend::cholesky;
        return c;
    }
    if (name == "zero") {
        StudyConfig c;
        c.case_id = "zero";
        c.dim = 1;
        c.T = 1.0;
        c.data = DataSet::zero;
        c.N_ref = 16;
        c.K_ref = 16;
        c.N_init = 2;
        c.K_init = 2;
        c.R_h = 2;
        c.R_tau = 2;
        return c;
    }
    throw InvalidArgument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (int id = 1; id <= 6; ++id) names.push_back("case" + std::to_string(id));
    for (int id = 1; id <= 6; ++id) names.push_back("case" + std::to_string(id) + "_desk");
    for (const char* n : {"benchmark", "benchmark_full", "preisach_demo", "heat_mms", "zero"}) names.emplace_back(n);
    return names;
}

}  // namespace hysfem::harness
