#pragma once

#include <memory>
#include <string>

#include "hysfem/common.hpp"
#include "hysfem/fem/assembly.hpp"

namespace hysfem::solver {

enum class LinearBackend { pcg, cholesky };

LinearBackend parse_linear_backend(const std::string& name);
std::string to_string(LinearBackend backend);

struct LinearSolverOptions {
    LinearBackend backend = LinearBackend::pcg;
    double rel_tol = 1e-12;
    int max_iter = 0;  // 0: 10 * n, at least 1000
};

struct LinearSolveResult {
    fem::Vector x;
    int iterations = 0;
};

class LinearSolverFailure : public Error {
public:
    using Error::Error;
};

// Symmetric positive definite solver; the preconditioner (or factorization) is
// computed once in the constructor and reused by every solve.
class SpdSolver {
public:
    SpdSolver(const fem::SparseMatrix& A, LinearSolverOptions options = {});
    ~SpdSolver();
    SpdSolver(SpdSolver&&) noexcept;
    SpdSolver& operator=(SpdSolver&&) noexcept;

    LinearSolveResult solve(const fem::Vector& b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

LinearSolveResult spd_solve(const fem::SparseMatrix& A, const fem::Vector& b, double rel_tol = 1e-12);
LinearSolveResult spd_solve(const fem::SparseMatrix& A, const fem::Vector& b, const LinearSolverOptions& options);

// Smallest eigenvalue of an SPD matrix by inverse power iteration.
double smallest_eigenvalue(const fem::SparseMatrix& A, double rel_tol = 1e-10, int max_iter = 2000);

}  // namespace hysfem::solver
