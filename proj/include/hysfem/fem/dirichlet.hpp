#pragma once

#include <map>
#include <vector>

#include "hysfem/fem/assembly.hpp"

namespace hysfem::fem {

struct ConstrainedSystem {
    SparseMatrix matrix;
    Vector rhs;
};

// Full-size system with constrained rows and columns replaced by identity; the
// coupling columns are moved into the right-hand side so the matrix stays symmetric.
ConstrainedSystem apply_dirichlet(const SparseMatrix& A, const Vector& rhs, const std::map<int, double>& values);
// Same, additionally checking that every constrained node lies on the mesh boundary.
ConstrainedSystem apply_dirichlet(const Mesh& mesh, const SparseMatrix& A, const Vector& rhs,
                                  const std::map<int, double>& values);

// Splits unknowns into free and constrained sets and extracts the free-free and
// free-constrained blocks once, so repeated solves only touch the free unknowns.
class DirichletReduction {
public:
    DirichletReduction(const SparseMatrix& A, std::vector<int> constrained_nodes);

    const std::vector<int>& free_nodes() const noexcept { return free_; }
    const std::vector<int>& constrained_nodes() const noexcept { return constrained_; }
    int free_index(int node) const { return local_[static_cast<std::size_t>(node)]; }
    const SparseMatrix& free_block() const noexcept { return A_ff_; }
    const SparseMatrix& coupling_block() const noexcept { return A_fc_; }

    // rhs_free - A_fc * g
    Vector reduce_rhs(const Vector& full_rhs, const Vector& constrained_values) const;
    Vector restrict_free(const Vector& full) const;
    Vector restrict_constrained(const Vector& full) const;
    Vector expand(const Vector& free_values, const Vector& constrained_values) const;

private:
    std::size_t n_ = 0;
    std::vector<int> free_;
    std::vector<int> constrained_;
    std::vector<int> local_;  // free index, or -1 - (constrained index)
    SparseMatrix A_ff_;
    SparseMatrix A_fc_;
};

}  // namespace hysfem::fem
