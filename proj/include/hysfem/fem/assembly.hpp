#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hysfem/fem/mesh.hpp"

namespace hysfem::fem {

// Compressed row storage: outerIndexPtr = row offsets, innerIndexPtr = column indices.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;

// Vertex-adjacency pattern of the P1 space with all values zero.
SparseMatrix p1_pattern(const Mesh& mesh);

SparseMatrix assemble_mass(const Mesh& mesh);
Vector assemble_lumped_mass(const Mesh& mesh);
SparseMatrix assemble_stiffness(const Mesh& mesh);

// Position of each diagonal entry inside the value array of a compressed matrix.
std::vector<Eigen::Index> diagonal_positions(const SparseMatrix& A);

}  // namespace hysfem::fem
