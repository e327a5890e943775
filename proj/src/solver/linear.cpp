#include "hysfem/solver/linear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace hysfem::solver {

LinearBackend parse_linear_backend(const std::string& name) {
    if (name == "pcg") return LinearBackend::pcg;
    if (name == "cholesky") return LinearBackend::cholesky;
    throw InvalidArgument("unknown linear backend '" + name + "' (expected pcg or cholesky)");
}

std::string to_string(LinearBackend backend) { return backend == LinearBackend::pcg ? "pcg" : "cholesky"; }

struct SpdSolver::Impl {
    using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    LinearSolverOptions options;
    Eigen::Index n = 0;
    fem::SparseMatrix matrix;  // the iterative solver keeps a reference to its matrix
    Eigen::ConjugateGradient<fem::SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    Eigen::SimplicialLDLT<ColMatrix> ldlt;
};

SpdSolver::SpdSolver(const fem::SparseMatrix& A, LinearSolverOptions options) : impl_(std::make_unique<Impl>()) {
    if (A.rows() != A.cols()) throw InvalidArgument("spd solve: matrix must be square");
    impl_->options = options;
    impl_->n = A.rows();
    if (options.backend == LinearBackend::pcg) {
        const int cap = options.max_iter > 0 ? options.max_iter : std::max(1000, static_cast<int>(10 * A.rows()));
        impl_->cg.setTolerance(options.rel_tol);
        impl_->cg.setMaxIterations(cap);
        impl_->matrix = A;
        impl_->cg.compute(impl_->matrix);
        if (impl_->cg.info() != Eigen::Success) throw LinearSolverFailure("spd solve: preconditioner setup failed");
    } else {
        impl_->ldlt.compute(Impl::ColMatrix(A));
        if (impl_->ldlt.info() != Eigen::Success) throw LinearSolverFailure("spd solve: factorization failed (matrix not SPD?)");
    }
}

SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

LinearSolveResult SpdSolver::solve(const fem::Vector& b) const {
    if (b.size() != impl_->n) throw InvalidArgument("spd solve: right-hand side has wrong size");
    LinearSolveResult out;
    if (b.isZero(0.0)) {
        out.x = fem::Vector::Zero(b.size());
        return out;
    }
    if (impl_->options.backend == LinearBackend::pcg) {
        out.x = impl_->cg.solve(b);
        out.iterations = static_cast<int>(impl_->cg.iterations());
        if (impl_->cg.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "spd solve: conjugate gradient stopped after " << impl_->cg.iterations()
                << " iterations with relative residual " << impl_->cg.error();
            throw LinearSolverFailure(msg.str());
        }
    } else {
        out.x = impl_->ldlt.solve(b);
        out.iterations = 1;
        if (impl_->ldlt.info() != Eigen::Success) throw LinearSolverFailure("spd solve: triangular solves failed");
    }
    return out;
}

LinearSolveResult spd_solve(const fem::SparseMatrix& A, const fem::Vector& b, double rel_tol) {
    LinearSolverOptions options;
    options.rel_tol = rel_tol;
    return spd_solve(A, b, options);
}

LinearSolveResult spd_solve(const fem::SparseMatrix& A, const fem::Vector& b, const LinearSolverOptions& options) {
    return SpdSolver(A, options).solve(b);
}

double smallest_eigenvalue(const fem::SparseMatrix& A, double rel_tol, int max_iter) {
    LinearSolverOptions options;
    options.backend = LinearBackend::cholesky;
    const SpdSolver solver(A, options);
    fem::Vector v(A.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + static_cast<double>(i));
    v.normalize();
    double lambda = v.dot(A * v);
    for (int it = 0; it < max_iter; ++it) {
        fem::Vector w = solver.solve(v).x;
        w.normalize();
        const double next = w.dot(A * w);
        v = std::move(w);
        if (std::abs(next - lambda) <= rel_tol * std::abs(next)) return next;
        lambda = next;
    }
    return lambda;
}

}  // namespace hysfem::solver
