#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "hysfem/hysteresis/piecewise.hpp"

namespace hysfem::hysteresis {

using DensityFn = std::function<double(double r, double sigma)>;

// Factorized Lorentzian Preisach density in the (sigma - r, sigma + r) variables.
struct LorentzianDensity {
    double N = 0.080422;
    double gamma = 0.27382;
    double mu = 91.24317;

    double operator()(double r, double sigma) const;
    double dsigma(double r, double sigma) const;
    // max over sigma of the density at half-width r
    double sup_sigma(double r) const;
};

struct SigmaTableOptions {
    double sigma_max = 0.0;  // 0 selects a default from the r-grid
    double sigma_step = 0.5;
    double rel_tol = 1e-13;
};

// Discretized Preisach operator: midpoint-type r-grid with weights, plus a
// memoized sigma-antiderivative Omega(r_j, s) = int_0^s omega(r_j, t) dt per node,
// extended to negative s by oddness.
class PreisachParams {
public:
    PreisachParams(std::vector<double> r_nodes, std::vector<double> r_weights, DensityFn density,
                   DensityFn density_dsigma = {}, SigmaTableOptions table = {});

    std::size_t size() const noexcept { return r_nodes_.size(); }
    const std::vector<double>& r_nodes() const noexcept { return r_nodes_; }
    const std::vector<double>& r_weights() const noexcept { return r_weights_; }
    double r(std::size_t j) const { return r_nodes_[j]; }
    double weight(std::size_t j) const { return r_weights_[j]; }

    double density(double r, double sigma) const { return density_(r, sigma); }
    double density_dsigma(double r, double sigma) const;

    // Omega(r_j, sigma) with its first two sigma-derivatives (omega and d omega / d sigma).
    Jet antiderivative(std::size_t j, double sigma) const;
    // Omega(r, sigma) by adaptive quadrature, bypassing the table.
    double antiderivative_direct(double r, double sigma) const;

    double sup_density(std::size_t j) const { return sup_density_[j]; }
    double sup_abs_density_dsigma(std::size_t j) const { return sup_abs_dsigma_[j]; }
    // 2 * sum_j weight_j * sup_sigma omega(r_j, .)
    double lipschitz_bound() const noexcept { return lipschitz_; }
    // 2 * sum_j weight_j * sup_sigma |d omega / d sigma|
    double curvature_bound() const noexcept { return curvature_; }
    double sigma_max() const noexcept { return sigma_max_; }

private:
    double tail_integral(double r, double from, double to) const;

    std::vector<double> r_nodes_;
    std::vector<double> r_weights_;
    DensityFn density_;
    DensityFn density_dsigma_;
    double sigma_step_ = 0.5;
    double sigma_max_ = 0.0;
    double rel_tol_ = 1e-13;
    std::size_t cells_ = 0;
    // per node: (cells_+1) values of Omega, omega, d omega
    std::vector<std::vector<double>> omega_values_;
    std::vector<std::vector<double>> omega_d1_;
    std::vector<std::vector<double>> omega_d2_;
    std::vector<double> sup_density_;
    std::vector<double> sup_abs_dsigma_;
    double lipschitz_ = 0.0;
    double curvature_ = 0.0;
};

struct MidpointGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n midpoint nodes on (0, r_max] with equal weights r_max / n.
MidpointGrid midpoint_r_grid(std::size_t n, double r_max);

// Smallest r_max such that the r-tail of sup_sigma omega beyond r_max is below
// `fraction` of the total (integral of sup_sigma omega over (0, inf)).
double lorentzian_r_max_for_tail(const LorentzianDensity& d, double fraction);

std::shared_ptr<const PreisachParams> make_lorentzian_preisach(const LorentzianDensity& d, std::size_t n_nodes,
                                                               double r_max, SigmaTableOptions table = {});

// One play per r-node with a = -r, b = r, c = 1.
struct PreisachMemory {
    std::vector<double> plays;
};

// Plays start at the lower saturation band edge (-saturation + r) and are driven
// through `inputs` and finally to u0.
struct DriveFromSaturation {
    double saturation = 0.0;  // 0 selects sigma_max of the table
    std::vector<double> inputs;
};

struct ExplicitPlays {
    std::vector<double> plays;
};

using PreisachInitPolicy = std::variant<DriveFromSaturation, ExplicitPlays>;

PreisachMemory preisach_init(double u0, const PreisachInitPolicy& policy, const PreisachParams& p);
PreisachMemory preisach_update(PreisachMemory m, double u_new, const PreisachParams& p);
void preisach_update_in_place(PreisachMemory& m, double u_new, const PreisachParams& p);
double preisach_output(const PreisachMemory& m, const PreisachParams& p);

// x -> scale * preisach_output(preisach_update(m, x)) + offset
ScalarPiecewiseC2 preisach_level_function(const PreisachMemory& m, std::shared_ptr<const PreisachParams> p,
                                          double scale, double offset = 0.0);

// Kink merge tolerance used by the level function.
inline constexpr double kKinkMergeTolerance = 1e-12;

}  // namespace hysfem::hysteresis
