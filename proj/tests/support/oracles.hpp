#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "hysfem/fem/assembly.hpp"
#include "hysfem/hysteresis/play.hpp"
#include "hysfem/hysteresis/preisach.hpp"

namespace hysfem::testkit {

// Play through the stop operator: s = u - w / c stays in [a, b] and follows the input
// increments, s_n = clamp(s_{n-1} + u_n - u_{n-1}); each input segment is split into
// `substeps` equal pieces. Between clamps the increments telescope, so s is kept as
// anchor_s + (u - anchor_u) rather than a running sum.
class StopOracle {
public:
    StopOracle(double u0, double w0, const hysteresis::PlayParams& p) : p_(p), u_(u0), anchor_u_(u0) {
        s_ = std::clamp(u0 - w0 / p.c, p.a, p.b);
        anchor_s_ = s_;
    }

    double advance(double u_new, int substeps) {
        const double u_start = u_;
        for (int n = 1; n <= substeps; ++n) {
            const double u = n == substeps ? u_new : u_start + (u_new - u_start) * n / substeps;
            const double free = anchor_s_ + (u - anchor_u_);
            s_ = std::clamp(free, p_.a, p_.b);
            if (s_ != free) {
                anchor_s_ = s_;
                anchor_u_ = u;
            }
            u_ = u;
        }
        return output();
    }

    double output() const { return p_.c * (u_ - s_); }

private:
    hysteresis::PlayParams p_;
    double u_;
    double s_;
    double anchor_u_;
    double anchor_s_;
};

// Preisach memory by one stop oracle per r-node (a = -r, b = r, c = 1).
class PreisachOracle {
public:
    PreisachOracle(double u0, const hysteresis::PreisachMemory& m, const hysteresis::PreisachParams& p) {
        for (std::size_t j = 0; j < p.size(); ++j) stops_.emplace_back(u0, m.plays[j], hysteresis::PlayParams{-p.r(j), p.r(j), 1.0});
    }

    void advance(double u_new, int substeps) {
        for (auto& s : stops_) s.advance(u_new, substeps);
    }

    std::vector<double> plays() const {
        std::vector<double> out;
        for (const auto& s : stops_) out.push_back(s.output());
        return out;
    }

private:
    std::vector<StopOracle> stops_;
};

// int_0^sigma f(s) ds by composite 20-point Gauss-Legendre on panels of width <= panel.
template <class F>
double composite_gauss(F f, double sigma, double panel = 1.0) {
    if (sigma == 0.0) return 0.0;
    const double s = std::abs(sigma);
    const int n = std::max(1, static_cast<int>(std::ceil(s / panel)));
    double total = 0.0;
    for (int k = 0; k < n; ++k)
        total += boost::math::quadrature::gauss<double, 20>::integrate(f, s * k / n, s * (k + 1) / n);
    return sigma < 0.0 ? -total : total;
}

// 2 sum_j w_j Omega(r_j, plays_j) with Omega by composite Gauss-Legendre on the density.
inline double preisach_output_oracle(const std::vector<double>& plays, const hysteresis::PreisachParams& p) {
    double sum = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double r = p.r(j);
        sum += p.weight(j) * composite_gauss([&](double s) { return p.density(r, s); }, plays[j]);
    }
    return 2.0 * sum;
}

// Piecewise-linear input with `reversals` turning points drawn uniformly in [lo, hi].
inline std::vector<double> random_reversal_input(std::mt19937_64& rng, int reversals, double lo, double hi) {
    std::uniform_real_distribution<double> U(lo, hi);
    std::vector<double> u{U(rng)};
    double dir = U(rng) > 0.5 * (lo + hi) ? 1.0 : -1.0;
    while (static_cast<int>(u.size()) <= reversals) {
        const double next = U(rng);
        if ((next - u.back()) * dir > 0.0) {
            u.push_back(next);
            dir = -dir;
        }
    }
    return u;
}

inline Eigen::MatrixXd dense(const fem::SparseMatrix& A) { return Eigen::MatrixXd(A); }

}  // namespace hysfem::testkit

namespace hysfem::testkit {

// Lorentzian Preisach operator with the benchmark density on the default r-grid.
inline std::shared_ptr<const hysteresis::PreisachParams> benchmark_preisach() {
    static const auto params = [] {
        const hysteresis::LorentzianDensity d;
        return hysteresis::make_lorentzian_preisach(d, 100, hysteresis::lorentzian_r_max_for_tail(d, 1e-2));
    }();
    return params;
}

}  // namespace hysfem::testkit
