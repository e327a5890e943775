#include "hysfem/hysteresis/preisach.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hysfem::hysteresis {

namespace {

using Kronrod15 = boost::math::quadrature::gauss_kronrod<double, 15>;
using Kronrod61 = boost::math::quadrature::gauss_kronrod<double, 61>;

// Quintic Hermite interpolation on [0, 1] from value, first and second derivative
// data at both ends; h converts derivatives between t and the physical variable.
Jet quintic_hermite(double t, double h, double p0, double m0, double a0, double p1, double m1, double a1) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    const double t5 = t4 * t;

    const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double h3 = 0.5 * t3 - t4 + 0.5 * t5;
    const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;

    const double dh0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    const double dh1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    const double dh2 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
    const double dh3 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
    const double dh4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    const double dh5 = -dh0;

    const double ddh0 = -60.0 * t + 180.0 * t2 - 120.0 * t3;
    const double ddh1 = -36.0 * t + 96.0 * t2 - 60.0 * t3;
    const double ddh2 = 1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3;
    const double ddh3 = 3.0 * t - 12.0 * t2 + 10.0 * t3;
    const double ddh4 = -24.0 * t + 84.0 * t2 - 60.0 * t3;
    const double ddh5 = -ddh0;

    const double hm0 = h * m0;
    const double hm1 = h * m1;
    const double hha0 = h * h * a0;
    const double hha1 = h * h * a1;

    Jet out;
    out.value = p0 * h0 + hm0 * h1 + hha0 * h2 + hha1 * h3 + hm1 * h4 + p1 * h5;
    out.d1 = (p0 * dh0 + hm0 * dh1 + hha0 * dh2 + hha1 * dh3 + hm1 * dh4 + p1 * dh5) / h;
    out.d2 = (p0 * ddh0 + hm0 * ddh1 + hha0 * ddh2 + hha1 * ddh3 + hm1 * ddh4 + p1 * ddh5) / (h * h);
    return out;
}

double lorentz(double z) { return 1.0 / (1.0 + z * z); }

}  // namespace

double LorentzianDensity::operator()(double r, double sigma) const {
    const double s = gamma * mu;
    return 0.5 * N * lorentz((sigma + r - mu) / s) * lorentz((sigma - r + mu) / s);
}

double LorentzianDensity::dsigma(double r, double sigma) const {
    const double s = gamma * mu;
    const double z1 = (sigma + r - mu) / s;
    const double z2 = (sigma - r + mu) / s;
    const double l1 = lorentz(z1);
    const double l2 = lorentz(z2);
    // d/dz (1+z^2)^-1 = -2 z (1+z^2)^-2
    return 0.5 * N * (-2.0 * z1 * l1 * l1 * l2 - 2.0 * z2 * l2 * l2 * l1) / s;
}

double LorentzianDensity::sup_sigma(double r) const {
    const double s = gamma * mu;
    const double d = r - mu;
    if (d * d > s * s) return 0.5 * N * s * s / (4.0 * d * d);
    const double q = 1.0 + d * d / (s * s);
    return 0.5 * N / (q * q);
}

PreisachParams::PreisachParams(std::vector<double> r_nodes, std::vector<double> r_weights, DensityFn density,
                               DensityFn density_dsigma, SigmaTableOptions table)
    : r_nodes_(std::move(r_nodes)),
      r_weights_(std::move(r_weights)),
      density_(std::move(density)),
      density_dsigma_(std::move(density_dsigma)),
      sigma_step_(table.sigma_step),
      rel_tol_(table.rel_tol) {
    if (r_nodes_.empty()) throw InvalidArgument("preisach: empty r-grid");
    if (r_nodes_.size() != r_weights_.size()) throw InvalidArgument("preisach: r_nodes and r_weights differ in length");
    if (!density_) throw InvalidArgument("preisach: missing density");
    if (!(sigma_step_ > 0.0)) throw InvalidArgument("preisach: sigma_step must be positive");
    for (std::size_t j = 0; j < r_nodes_.size(); ++j) {
        if (!(r_nodes_[j] > 0.0)) throw InvalidArgument("preisach: r_nodes must be positive");
        if (!(r_weights_[j] >= 0.0)) throw InvalidArgument("preisach: r_weights must be nonnegative");
    }
    {
        auto sorted = r_nodes_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidArgument("preisach: r_nodes must be distinct");
    }

    const double r_top = *std::max_element(r_nodes_.begin(), r_nodes_.end());
    sigma_max_ = table.sigma_max > 0.0 ? table.sigma_max : 3.0 * r_top + 1.0;
    cells_ = static_cast<std::size_t>(std::ceil(sigma_max_ / sigma_step_));
    sigma_max_ = static_cast<double>(cells_) * sigma_step_;

    const std::size_t n = r_nodes_.size();
    omega_values_.assign(n, std::vector<double>(cells_ + 1));
    omega_d1_.assign(n, std::vector<double>(cells_ + 1));
    omega_d2_.assign(n, std::vector<double>(cells_ + 1));
    sup_density_.assign(n, 0.0);
    sup_abs_dsigma_.assign(n, 0.0);

    for (std::size_t j = 0; j < n; ++j) {
        const double r = r_nodes_[j];
        auto f = [this, r](double s) { return density_(r, s); };
        auto& V = omega_values_[j];
        auto& D1 = omega_d1_[j];
        auto& D2 = omega_d2_[j];
        std::size_t argmax = 0;
        for (std::size_t i = 0; i <= cells_; ++i) {
            const double s = static_cast<double>(i) * sigma_step_;
            D1[i] = f(s);
            if (D1[i] < 0.0) throw InvalidArgument("preisach: density must be nonnegative");
            D2[i] = this->density_dsigma(r, s);
            if (i == 0) {
                V[i] = 0.0;
            } else {
                V[i] = V[i - 1] + Kronrod15::integrate(f, s - sigma_step_, s, 10, rel_tol_);
            }
            if (D1[i] > D1[argmax]) argmax = i;
            sup_abs_dsigma_[j] = std::max(sup_abs_dsigma_[j], std::abs(D2[i]));
        }
        // refine the sampled maximum around the best node
        const double lo = std::max(0.0, (static_cast<double>(argmax) - 1.0) * sigma_step_);
        const double hi = std::min(sigma_max_, (static_cast<double>(argmax) + 1.0) * sigma_step_);
        double best = D1[argmax];
        constexpr int kRefine = 256;
        for (int k = 0; k <= kRefine; ++k) best = std::max(best, f(lo + (hi - lo) * k / kRefine));
        sup_density_[j] = best;
    }

    for (std::size_t j = 0; j < n; ++j) {
        lipschitz_ += 2.0 * r_weights_[j] * sup_density_[j];
        curvature_ += 2.0 * r_weights_[j] * sup_abs_dsigma_[j];
    }
}

double PreisachParams::density_dsigma(double r, double sigma) const {
    if (density_dsigma_) return density_dsigma_(r, sigma);
    const double h = 1e-4 * sigma_step_;
    return (density_(r, sigma + h) - density_(r, sigma - h)) / (2.0 * h);
}

double PreisachParams::tail_integral(double r, double from, double to) const {
    auto f = [this, r](double s) { return density_(r, s); };
    return Kronrod61::integrate(f, from, to, 15, rel_tol_);
}

Jet PreisachParams::antiderivative(std::size_t j, double sigma) const {
    const bool negative = sigma < 0.0;
    const double s = std::abs(sigma);
    Jet out;
    if (s >= sigma_max_) {
        const double r = r_nodes_[j];
        out.value = omega_values_[j][cells_] + (s > sigma_max_ ? tail_integral(r, sigma_max_, s) : 0.0);
        out.d1 = density_(r, s);
        out.d2 = density_dsigma(r, s);
    } else {
        const auto i = std::min(static_cast<std::size_t>(s / sigma_step_), cells_ - 1);
        const double t = (s - static_cast<double>(i) * sigma_step_) / sigma_step_;
        const auto& V = omega_values_[j];
        const auto& D1 = omega_d1_[j];
        const auto& D2 = omega_d2_[j];
        out = quintic_hermite(t, sigma_step_, V[i], D1[i], D2[i], V[i + 1], D1[i + 1], D2[i + 1]);
    }
    if (negative) {
        out.value = -out.value;
        out.d2 = -out.d2;
    }
    return out;
}

double PreisachParams::antiderivative_direct(double r, double sigma) const {
    if (sigma == 0.0) return 0.0;
    const double s = std::abs(sigma);
    auto f = [this, r](double x) { return density_(r, x); };
    // split at the table step so that narrow peaks are not skipped by the adaptive rule
    double total = 0.0;
    const double chunk = std::max(sigma_step_ * 16.0, 1.0);
    for (double a = 0.0; a < s; a += chunk) {
        const double b = std::min(s, a + chunk);
        total += Kronrod61::integrate(f, a, b, 15, 1e-15);
    }
    return sigma < 0.0 ? -total : total;
}

MidpointGrid midpoint_r_grid(std::size_t n, double r_max) {
    if (n == 0) throw InvalidArgument("preisach: r-grid needs at least one node");
    if (!(r_max > 0.0)) throw InvalidArgument("preisach: r_max must be positive");
    MidpointGrid g;
    const double dr = r_max / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        g.nodes.push_back((static_cast<double>(j) + 0.5) * dr);
        g.weights.push_back(dr);
    }
    return g;
}

double lorentzian_r_max_for_tail(const LorentzianDensity& d, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("preisach: tail fraction must lie in (0, 1)");
    auto sup = [&d](double r) { return d.sup_sigma(r); };
    const double inf = std::numeric_limits<double>::infinity();
    const double peak = d.mu;
    const double total = Kronrod61::integrate(sup, 0.0, peak, 15, 1e-12) + Kronrod61::integrate(sup, peak, inf, 15, 1e-12);
    auto tail = [&](double r) { return Kronrod61::integrate(sup, r, inf, 15, 1e-12); };
    double lo = 0.0;
    double hi = peak;
    while (tail(hi) > fraction * total) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid) > fraction * total ? lo : hi) = mid;
    }
    return hi;
}

std::shared_ptr<const PreisachParams> make_lorentzian_preisach(const LorentzianDensity& d, std::size_t n_nodes,
                                                               double r_max, SigmaTableOptions table) {
    const auto grid = midpoint_r_grid(n_nodes, r_max);
    if (table.sigma_max <= 0.0) table.sigma_max = r_max + d.mu + 40.0 * d.gamma * d.mu;
    return std::make_shared<const PreisachParams>(
        grid.nodes, grid.weights, [d](double r, double s) { return d(r, s); },
        [d](double r, double s) { return d.dsigma(r, s); }, table);
}

PreisachMemory preisach_init(double u0, const PreisachInitPolicy& policy, const PreisachParams& p) {
    PreisachMemory m;
    if (const auto* drive = std::get_if<DriveFromSaturation>(&policy)) {
        const double sat = drive->saturation > 0.0 ? drive->saturation : p.sigma_max();
        m.plays.resize(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) m.plays[j] = -sat + p.r(j);
        for (double u : drive->inputs) preisach_update_in_place(m, u, p);
        preisach_update_in_place(m, u0, p);
        return m;
    }
    const auto& explicit_plays = std::get<ExplicitPlays>(policy);
    if (explicit_plays.plays.size() != p.size()) throw InvalidArgument("preisach: explicit play count differs from r-grid size");
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double w = explicit_plays.plays[j];
        const double tol = 1e-12 * (1.0 + std::abs(u0) + p.r(j));
        if (w < u0 - p.r(j) - tol || w > u0 + p.r(j) + tol) {
            std::ostringstream msg;
            msg << "preisach: explicit play " << j << " = " << w << " violates its band at input " << u0;
            throw InvalidArgument(msg.str());
        }
    }
    m.plays = explicit_plays.plays;
    return m;
}

void preisach_update_in_place(PreisachMemory& m, double u_new, const PreisachParams& p) {
    for (std::size_t j = 0; j < m.plays.size(); ++j) {
        const double r = p.r(j);
        m.plays[j] = std::max(u_new - r, std::min(u_new + r, m.plays[j]));
    }
}

PreisachMemory preisach_update(PreisachMemory m, double u_new, const PreisachParams& p) {
    preisach_update_in_place(m, u_new, p);
    return m;
}

double preisach_output(const PreisachMemory& m, const PreisachParams& p) {
    if (m.plays.size() != p.size()) throw InvalidArgument("preisach: memory size differs from r-grid size");
    double out = 0.0;
    for (std::size_t j = 0; j < m.plays.size(); ++j) out += p.weight(j) * p.antiderivative(j, m.plays[j]).value;
    return 2.0 * out;
}

ScalarPiecewiseC2 preisach_level_function(const PreisachMemory& m, std::shared_ptr<const PreisachParams> p,
                                          double scale, double offset) {
    if (!p) throw InvalidArgument("preisach level function: missing parameters");
    if (m.plays.size() != p->size()) throw InvalidArgument("preisach: memory size differs from r-grid size");
    if (scale < 0.0) throw InvalidArgument("preisach level function: scale must be nonnegative");
    if (scale == 0.0) return ScalarPiecewiseC2::affine(offset, 0.0);

    std::vector<double> raw;
    raw.reserve(2 * m.plays.size());
    for (std::size_t j = 0; j < m.plays.size(); ++j) {
        raw.push_back(m.plays[j] - p->r(j));
        raw.push_back(m.plays[j] + p->r(j));
    }
    std::sort(raw.begin(), raw.end());
    std::vector<double> kinks;
    for (double x : raw) {
        if (kinks.empty() || x - kinks.back() > kKinkMergeTolerance * (1.0 + std::abs(x))) kinks.push_back(x);
    }

    auto plays = std::make_shared<const std::vector<double>>(m.plays);
    auto kink_ptr = std::make_shared<const std::vector<double>>(kinks);
    auto pieces = [p, plays, kink_ptr, scale, offset](std::size_t piece, double x) -> Jet {
        const auto& k = *kink_ptr;
        double rep;
        if (piece == 0) {
            rep = k.front() - 1.0;
        } else if (piece >= k.size()) {
            rep = k.back() + 1.0;
        } else {
            rep = 0.5 * (k[piece - 1] + k[piece]);
        }
        Jet sum;
        for (std::size_t j = 0; j < plays->size(); ++j) {
            const double r = p->r(j);
            const double w = (*plays)[j];
            const double wt = p->weight(j);
            if (rep > w + r) {
                const Jet om = p->antiderivative(j, x - r);
                sum.value += wt * om.value;
                sum.d1 += wt * om.d1;
                sum.d2 += wt * om.d2;
            } else if (rep < w - r) {
                const Jet om = p->antiderivative(j, x + r);
                sum.value += wt * om.value;
                sum.d1 += wt * om.d1;
                sum.d2 += wt * om.d2;
            } else {
                sum.value += wt * p->antiderivative(j, w).value;
            }
        }
        const double s2 = 2.0 * scale;
        return Jet{s2 * sum.value + offset, s2 * sum.d1, s2 * sum.d2};
    };
    return ScalarPiecewiseC2(std::move(kinks), pieces, scale * p->lipschitz_bound(), scale * p->curvature_bound());
}

}  // namespace hysfem::hysteresis
