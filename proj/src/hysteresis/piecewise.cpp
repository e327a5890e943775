#include "hysfem/hysteresis/piecewise.hpp"

#include <algorithm>
#include <cmath>

namespace hysfem::hysteresis {

ScalarPiecewiseC2::ScalarPiecewiseC2() : ScalarPiecewiseC2(affine(0.0, 0.0)) {}

ScalarPiecewiseC2::ScalarPiecewiseC2(std::vector<double> kinks, PieceFn pieces, double lipschitz_bound,
                                     double curvature_bound)
    : kinks_(std::move(kinks)), pieces_(std::move(pieces)), lipschitz_(lipschitz_bound), curvature_(curvature_bound) {
    if (!pieces_) throw InvalidArgument("piecewise function: missing piece evaluator");
    if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_))
        throw InvalidArgument("piecewise function: lipschitz bound must be finite and nonnegative");
    if (!(curvature_ >= 0.0) || !std::isfinite(curvature_))
        throw InvalidArgument("piecewise function: curvature bound must be finite and nonnegative");
    for (std::size_t i = 0; i < kinks_.size(); ++i) {
        if (!std::isfinite(kinks_[i])) throw InvalidArgument("piecewise function: non-finite kink");
        if (i > 0 && !(kinks_[i] > kinks_[i - 1]))
            throw InvalidArgument("piecewise function: kinks must be strictly increasing");
    }
}

ScalarPiecewiseC2 ScalarPiecewiseC2::affine(double value_at_zero, double slope) {
    return ScalarPiecewiseC2(
        {}, [value_at_zero, slope](std::size_t, double x) { return Jet{value_at_zero + slope * x, slope, 0.0}; },
        std::abs(slope));
}

std::size_t ScalarPiecewiseC2::piece_index(double x) const noexcept {
    return static_cast<std::size_t>(std::lower_bound(kinks_.begin(), kinks_.end(), x) - kinks_.begin());
}

double ScalarPiecewiseC2::left_derivative(double x) const { return pieces_(piece_index(x), x).d1; }

double ScalarPiecewiseC2::right_derivative(double x) const {
    const auto idx = static_cast<std::size_t>(std::upper_bound(kinks_.begin(), kinks_.end(), x) - kinks_.begin());
    return pieces_(idx, x).d1;
}

double ScalarPiecewiseC2::piece_point(std::size_t index) const {
    if (kinks_.empty()) return 0.0;
    if (index == 0) return kinks_.front() - 1.0;
    if (index >= kinks_.size()) return kinks_.back() + 1.0;
    return 0.5 * (kinks_[index - 1] + kinks_[index]);
}

double ScalarPiecewiseC2::max_continuity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < kinks_.size(); ++i) {
        const double left = pieces_(i, kinks_[i]).value;
        const double right = pieces_(i + 1, kinks_[i]).value;
        worst = std::max(worst, std::abs(left - right));
    }
    return worst;
}

}  // namespace hysfem::hysteresis
