#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hysfem/fem/function.hpp"
#include "hysfem/harness/config.hpp"

namespace hysfem::harness {

using LogFn = std::function<void(const std::string&)>;

// log2(e_coarse / e_fine); empty when either error is zero or not finite.
std::optional<double> convergence_order(double e_coarse, double e_fine);

struct ErrorRow {
    int level = 0;
    int N = 0;
    int K = 0;
    double l2 = 0.0;
    std::optional<double> l2_order;
    double h1 = 0.0;
    std::optional<double> h1_order;
};

struct ErrorTable {
    std::string case_id;
    std::string variable;  // "h" or "tau"
    std::vector<ErrorRow> rows;

    // Appends a row and fills its orders from the previous row.
    void add(int N, int K, double l2, double h1);
    // level,N,K,l2,l2_order,h1,h1_order; "-" for undefined orders
    void write_csv(std::ostream& out) const;
};

struct FinalSolution {
    fem::FeFunction u;
    bool from_cache = false;
};

struct StudyOptions {
    int jobs = 0;  // concurrent refinement levels; 0 uses the hardware concurrency
    LogFn log;
};

// Solution at t = T on the uniform mesh with n intervals per side and K steps;
// reads or writes the reference cache under <output>/cache when enabled.
FinalSolution final_solution(const StudyConfig& cfg, int n, int K, const LogFn& log = {});

ErrorTable run_h_study(const StudyConfig& cfg, const StudyOptions& options = {});
ErrorTable run_tau_study(const StudyConfig& cfg, const StudyOptions& options = {});

}  // namespace hysfem::harness
