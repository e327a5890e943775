#include "hysfem/harness/demo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "hysfem/harness/output.hpp"

namespace hysfem::harness {

double demo_excitation(const DemoConfig& cfg, double t) {
    constexpr double pi = std::numbers::pi;
    return cfg.amplitude1 * std::sin(4.0 * pi * t) + cfg.amplitude2 * std::sin(20.0 * pi * t + pi);
}

namespace {

std::vector<double> run_outputs(hysteresis::PreisachMemory m, const hysteresis::PreisachParams& p,
                                const std::vector<double>& inputs) {
    std::vector<double> w;
    w.reserve(inputs.size());
    for (double u : inputs) {
        hysteresis::preisach_update_in_place(m, u, p);
        w.push_back(hysteresis::preisach_output(m, p));
    }
    return w;
}

}  // namespace

DemoResult preisach_demo(const StudyConfig& cfg) { return preisach_demo(cfg, *cfg.hysteresis.preisach()); }

DemoResult preisach_demo(const StudyConfig& cfg, const hysteresis::PreisachParams& p) {
    const auto& d = cfg.demo;
    const int S = d.samples_per_period;
    const int total = d.periods * S;

    DemoResult out;
    out.t.resize(static_cast<std::size_t>(total) + 1);
    out.u.resize(out.t.size());
    for (int i = 0; i <= total; ++i) {
        out.t[static_cast<std::size_t>(i)] = kDemoPeriod * i / S;
        out.u[static_cast<std::size_t>(i)] = demo_excitation(d, out.t[static_cast<std::size_t>(i)]);
    }

    const hysteresis::PreisachMemory demagnetized{std::vector<double>(p.size(), 0.0)};
    hysteresis::PreisachMemory start = demagnetized;
    if (d.red_dot_init) start = hysteresis::preisach_init(out.u.front(), hysteresis::DriveFromSaturation{0.0, {d.peak, 0.0}}, p);
    out.w = run_outputs(start, p, out.u);

    const auto [lo, hi] = std::minmax_element(out.w.begin(), out.w.end());
    out.loop_height = *hi - *lo;
    auto at_period = [&](int k) { return out.w[static_cast<std::size_t>(k * S)]; };
    if (out.loop_height > 0.0) {
        out.first_period_gap = std::abs(at_period(1) - at_period(0)) / out.loop_height;
        out.periodic_gap = d.periods >= 2
                               ? std::abs(at_period(d.periods) - at_period(d.periods - 1)) / out.loop_height
                               : out.first_period_gap;
    }

    std::vector<double> neg(out.u.size());
    std::transform(out.u.begin(), out.u.end(), neg.begin(), [](double u) { return -u; });
    const auto w_pos = run_outputs(demagnetized, p, out.u);
    const auto w_neg = run_outputs(demagnetized, p, neg);
    for (std::size_t i = 0; i < w_pos.size(); ++i)
        out.odd_symmetry_error = std::max(out.odd_symmetry_error, std::abs(w_pos[i] + w_neg[i]));
    return out;
}

std::vector<std::filesystem::path> write_demo_outputs(const std::filesystem::path& dir, const std::string& id,
                                                      const DemoResult& result) {
    ensure_dir(dir);
    const auto csv = dir / ("demo_" + id + ".csv");
    {
        std::ofstream out(csv);
        out << "t,u,w\n";
        for (std::size_t i = 0; i < result.t.size(); ++i)
            out << format_double(result.t[i]) << ',' << format_double(result.u[i]) << ',' << format_double(result.w[i]) << '\n';
    }
    const auto svg = dir / ("demo_" + id + "_loop.svg");
    {
        std::ofstream out(svg);
        write_svg_plot(out, {"Preisach input-output loop", "u", "w", false}, {{"w(u)", result.u, result.w}});
    }
    return {csv, svg};
}

}  // namespace hysfem::harness
