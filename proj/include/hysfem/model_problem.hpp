#pragma once

#include <vector>

#include "hysfem/fem/assembly.hpp"
#include "hysfem/hysteresis/piecewise.hpp"

namespace hysfem {

// H(x) = A x + F(x) - f with F(x)_i = phi_i(x_i); A symmetric positive definite,
// each phi_i nondecreasing piecewise C^2 with bounded derivative.
struct ModelProblem {
    fem::SparseMatrix A;
    fem::Vector f;
    std::vector<hysteresis::ScalarPiecewiseC2> phi;

    std::size_t size() const noexcept { return static_cast<std::size_t>(f.size()); }
    void validate() const;
    fem::Vector nonlinearity(const fem::Vector& x) const;
    fem::Vector residual(const fem::Vector& x) const;
};

}  // namespace hysfem
