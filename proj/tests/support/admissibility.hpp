#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hysfem/hysteresis/play.hpp"
#include "hysfem/hysteresis/preisach.hpp"
#include "hysfem/solver/smoothing.hpp"

namespace hysfem::testkit {

// Worst-case measurements of the four admissibility conditions for one smoothed
// nonlinearity at one epsilon, plus the ladder and Jacobian-consistency checks.
struct Admissibility {
    double c1_defect = 0.0;          // value / slope jumps at the junctions, relative
    double approximation_ratio = 0;  // max |smoothed - base| / (mu eps)
    double min_derivative = std::numeric_limits<double>::infinity();
    double hull_violation = 0.0;     // distance of the smoothed slope to the hull over the window
    bool ladder_shrinks = true;      // active widths stay below eps and go to zero
    double cdist_tail = 0.0;         // slope distance at eps = 1e-14 for the sampled points

    bool passes() const {
        return c1_defect < 1e-10 && approximation_ratio <= 1.0 && min_derivative >= -1e-12 &&
               hull_violation <= 1e-10 && ladder_shrinks && cdist_tail <= 1e-12;
    }
};

inline double rel_gap(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b)); }

// Checks at most `max_kinks` kinks (chosen at random) with `samples` points per window.
inline Admissibility check_admissibility(const hysteresis::ScalarPiecewiseC2& phi, double eps, std::mt19937_64& rng,
                                         std::size_t max_kinks = 16, int samples = 64) {
    using solver::SmoothedNonlinearity;
    Admissibility out;
    SmoothedNonlinearity s(phi);
    s.set_epsilon(eps);
    const double mu = s.approximation_constant();
    const auto& kinks = phi.kinks();

    std::vector<std::size_t> chosen(kinks.size());
    for (std::size_t j = 0; j < kinks.size(); ++j) chosen[j] = j;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    if (chosen.size() > max_kinks) chosen.resize(max_kinks);

    std::uniform_real_distribution<double> U01(0.0, 1.0);
    std::vector<double> points;
    for (std::size_t j : chosen) {
        const auto* rung = s.active_rung(j);
        if (!rung || !rung->smoothed) continue;
        const double a = kinks[j];
        const double d = rung->delta;
        if (d > eps && d > s.initial_window(j)) out.ladder_shrinks = false;
        const double lo = a - d, hi = a + d;

        // condition 1: C^1 junctions
        const Jet jl = phi.piece(j, lo), jr = phi.piece(j + 1, hi);
        const auto& L = rung->lines;
        out.c1_defect = std::max({out.c1_defect, rel_gap(jl.value, L.left(lo)), rel_gap(jl.d1, L.left_slope),
                                  rel_gap(jr.value, L.right(hi)), rel_gap(jr.d1, L.right_slope)});
        if (rung->arc) {
            const auto& arc = *rung->arc;
            out.c1_defect = std::max({out.c1_defect, rel_gap(arc.value(arc.x1), L.left(arc.x1)),
                                      rel_gap(arc.derivative(arc.x1), L.left_slope),
                                      rel_gap(arc.value(arc.x2), L.right(arc.x2)),
                                      rel_gap(arc.derivative(arc.x2), L.right_slope)});
        }
        // two-sided evaluation through the public entry point at the window ends
        for (double x : {lo, hi}) {
            const auto inside = s.eval(x);
            const double step = 1e-13 * (1.0 + std::abs(x));
            const auto outside = s.eval(x == lo ? x - step : x + step);
            out.c1_defect = std::max(out.c1_defect, rel_gap(inside.second, outside.second));
        }

        // hull of base slopes over the window
        double slope_lo = std::min(jl.d1, jr.d1), slope_hi = std::max(jl.d1, jr.d1);
        for (int k = 0; k <= samples; ++k) {
            const double x = lo + (hi - lo) * k / samples;
            const double sl = x <= a ? phi.piece(j, x).d1 : phi.piece(j + 1, x).d1;
            slope_lo = std::min(slope_lo, sl);
            slope_hi = std::max(slope_hi, sl);
        }
        for (int k = 0; k <= samples; ++k) {
            const double x = k == samples ? hi : lo + (hi - lo) * (k + U01(rng)) / samples;
            points.push_back(x);
            const auto [v, dv] = s.eval(x);
            const double base = phi.value(x);
            if (mu > 0.0) out.approximation_ratio = std::max(out.approximation_ratio, std::abs(v - base) / (mu * eps));
            out.min_derivative = std::min(out.min_derivative, dv);
            const double tol = 1e-12 * (1.0 + std::abs(slope_hi));
            out.hull_violation = std::max({out.hull_violation, slope_lo - tol - dv, dv - slope_hi - tol});
        }
        points.push_back(a);
    }
    // points away from all windows must reproduce the base exactly
    for (int k = 0; k < samples; ++k) {
        const double x = kinks.empty() ? -10.0 + 20.0 * U01(rng)
                                       : kinks.front() - 2.0 + (kinks.back() - kinks.front() + 4.0) * U01(rng);
        points.push_back(x);
        const auto [v, dv] = s.eval(x);
        out.min_derivative = std::min(out.min_derivative, dv);
        if (mu > 0.0) out.approximation_ratio = std::max(out.approximation_ratio, std::abs(v - phi.value(x)) / (mu * eps));
        else if (v != phi.value(x)) out.approximation_ratio = std::numeric_limits<double>::infinity();
    }

    // ladder: widths shrink with eps and reach zero
    for (double e = eps; e > 1e-14; e *= 0.5) {
        s.set_epsilon(e);
        for (std::size_t j : chosen)
            if (e < s.initial_window(j) && s.window(j) > e) out.ladder_shrinks = false;
    }
    // Jacobian consistency: slope distance to the Clarke hull vanishes as eps -> 0
    s.set_epsilon(1e-14);
    for (double x : points) out.cdist_tail = std::max(out.cdist_tail, solver::slope_distance(phi, x, s.eval(x).second));
    return out;
}

// Play level function with random band, slope, memory, scale and offset.
inline hysteresis::ScalarPiecewiseC2 random_play_level(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    hysteresis::PlayParams p;
    p.a = -3.0 * U(rng);
    p.b = p.a + 0.05 + 3.0 * U(rng);
    p.c = 0.1 + 5.0 * U(rng);
    const double w = -10.0 + 20.0 * U(rng);
    const double scale = std::pow(10.0, -3.0 + 4.0 * U(rng));
    return hysteresis::play_level_function(w, p, scale, -5.0 + 10.0 * U(rng));
}

// Preisach level function after a random drive from negative saturation.
inline hysteresis::ScalarPiecewiseC2 random_preisach_level(std::mt19937_64& rng,
                                                           const std::shared_ptr<const hysteresis::PreisachParams>& p) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> drive;
    const int turns = 1 + static_cast<int>(6 * U(rng));
    for (int k = 0; k < turns; ++k) drive.push_back(-400.0 + 800.0 * U(rng));
    const auto m = hysteresis::preisach_init(drive.back(), hysteresis::DriveFromSaturation{0.0, drive}, *p);
    const double scale = std::pow(10.0, -3.0 + 3.0 * U(rng));
    return hysteresis::preisach_level_function(m, p, scale, -scale * 50.0 * U(rng));
}

inline double random_epsilon(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-8.0, 0.5);
    return std::pow(10.0, U(rng));
}

}  // namespace hysfem::testkit
