#pragma once

#include <filesystem>
#include <vector>

#include "hysfem/harness/config.hpp"

namespace hysfem::harness {

// Period of H(t) = A1 sin(4 pi t) + A2 sin(20 pi t + pi).
inline constexpr double kDemoPeriod = 0.5;

double demo_excitation(const DemoConfig& cfg, double t);

struct DemoResult {
    std::vector<double> t;
    std::vector<double> u;
    std::vector<double> w;
    double loop_height = 0.0;       // max w - min w
    double first_period_gap = 0.0;  // |w(P) - w(0)| / loop_height
    double periodic_gap = 0.0;      // |w(nP) - w((n-1)P)| / loop_height, last period
    double odd_symmetry_error = 0.0;  // max |w[H] + w[-H]| from demagnetized memory
};

DemoResult preisach_demo(const StudyConfig& cfg);
DemoResult preisach_demo(const StudyConfig& cfg, const hysteresis::PreisachParams& params);

// demo_<id>.csv (t,u,w) and demo_<id>_loop.svg
std::vector<std::filesystem::path> write_demo_outputs(const std::filesystem::path& dir, const std::string& id,
                                                      const DemoResult& result);

}  // namespace hysfem::harness
