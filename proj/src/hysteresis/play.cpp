#include "hysfem/hysteresis/play.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hysfem::hysteresis {

void PlayParams::validate() const {
    if (!(a < b)) throw InvalidArgument("play: requires a < b");
    if (!(c > 0.0)) throw InvalidArgument("play: requires c > 0");
}

PlayState play_init(double u0, double w0, const PlayParams& p) {
    return PlayState{std::max(p.c * (u0 - p.b), std::min(p.c * (u0 - p.a), w0))};
}

PlayState play_update(PlayState s, double u_new, const PlayParams& p) {
    return PlayState{std::max(p.c * (u_new - p.b), std::min(p.c * (u_new - p.a), s.w))};
}

double generalized_play_update(double w_prev, double u_new, const GeneralizedPlayParams& p) {
    if (!p.gamma_l || !p.gamma_r) throw InvalidArgument("generalized play: missing boundary curve");
    const double lo = p.gamma_r(u_new);
    const double hi = p.gamma_l(u_new);
    if (lo > hi) {
        std::ostringstream msg;
        msg << "generalized play: gamma_r(" << u_new << ") = " << lo << " exceeds gamma_l = " << hi;
        throw InvalidArgument(msg.str());
    }
    return std::max(lo, std::min(hi, w_prev));
}

ScalarPiecewiseC2 play_level_function(double history_output, const PlayParams& p, double scale, double offset) {
    p.validate();
    if (scale < 0.0) throw InvalidArgument("play level function: scale must be nonnegative");
    if (scale == 0.0) return ScalarPiecewiseC2::affine(offset, 0.0);

    const double w = history_output;
    const double x1 = w / p.c + p.a;
    const double x2 = w / p.c + p.b;
    const double c = p.c;
    const double a = p.a;
    const double b = p.b;
    auto pieces = [=](std::size_t piece, double x) -> Jet {
        switch (piece) {
            case 0: return {scale * c * (x - a) + offset, scale * c, 0.0};
            case 1: return {scale * w + offset, 0.0, 0.0};
            default: return {scale * c * (x - b) + offset, scale * c, 0.0};
        }
    };
    return ScalarPiecewiseC2({x1, x2}, pieces, scale * c);
}

}  // namespace hysfem::hysteresis
