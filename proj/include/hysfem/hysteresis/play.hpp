#pragma once

#include <functional>

#include "hysfem/hysteresis/piecewise.hpp"

namespace hysfem::hysteresis {

// Linear play: output stays in the band c(u-b) <= w <= c(u-a).
struct PlayParams {
    double a = -0.5;
    double b = 0.5;
    double c = 1.0;

    void validate() const;
};

struct PlayState {
    double w = 0.0;
};

PlayState play_init(double u0, double w0, const PlayParams& p);
PlayState play_update(PlayState s, double u_new, const PlayParams& p);

struct GeneralizedPlayParams {
    std::function<double(double)> gamma_l;
    std::function<double(double)> gamma_r;
};

double generalized_play_update(double w_prev, double u_new, const GeneralizedPlayParams& p);

// x -> scale * play_update({history_output}, x, p).w + offset
ScalarPiecewiseC2 play_level_function(double history_output, const PlayParams& p, double scale,
                                      double offset = 0.0);

}  // namespace hysfem::hysteresis
