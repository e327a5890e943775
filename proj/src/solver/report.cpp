#include "hysfem/solver/report.hpp"

#include <iomanip>
#include <ostream>

namespace hysfem::solver {

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::stagnation: return "stagnation";
        case SolveStatus::linear_failure: return "linear_failure";
        case SolveStatus::epsilon_failure: return "epsilon_failure";
    }
    return "unknown";
}

void write_report_csv_header(std::ostream& out) {
    out << "label,solver,status,nonlinear_its,linear_its,func_evals,smoothed_evals,jac_evals,wall_time_s,final_residual\n";
}

void write_report_csv_row(std::ostream& out, const SolveReport& report, const std::string& label) {
    const auto flags = out.flags();
    out << label << ',' << report.solver << ',' << to_string(report.status) << ',' << report.nonlinear_iterations << ','
        << report.linear_iterations << ',' << report.function_evaluations << ',' << report.smoothed_evaluations << ','
        << report.jacobian_evaluations << ',' << std::setprecision(6) << std::fixed << report.wall_time << ','
        << std::scientific << std::setprecision(6) << report.final_residual() << '\n';
    out.flags(flags);
}

}  // namespace hysfem::solver
