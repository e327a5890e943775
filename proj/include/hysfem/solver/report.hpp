#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hysfem/common.hpp"
#include "hysfem/fem/assembly.hpp"

namespace hysfem::solver {

enum class SolveStatus { converged, max_iterations, stagnation, linear_failure, epsilon_failure };

std::string to_string(SolveStatus status);

struct SolveReport {
    std::string solver;
    SolveStatus status = SolveStatus::max_iterations;
    std::string message;
    int nonlinear_iterations = 0;
    long linear_iterations = 0;
    int function_evaluations = 0;  // evaluations of H
    int smoothed_evaluations = 0;  // evaluations of the smoothed merit (line-search trials included)
    int jacobian_evaluations = 0;
    double wall_time = 0.0;
    std::vector<double> residual_history;  // ||H(x^k)||_2, one entry per iterate including x^0

    bool converged() const noexcept { return status == SolveStatus::converged; }
    double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

struct SolveResult {
    fem::Vector x;
    SolveReport report;
};

// Raised by callers that cannot continue after a failed solve.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, SolveReport report) : Error(what), report_(std::move(report)) {}
    const SolveReport& report() const noexcept { return report_; }

private:
    SolveReport report_;
};

void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, const SolveReport& report, const std::string& label);

}  // namespace hysfem::solver
