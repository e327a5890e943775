#include "hysfem/fem/dirichlet.hpp"

#include <algorithm>
#include <string>

#include "hysfem/common.hpp"

namespace hysfem::fem {

ConstrainedSystem apply_dirichlet(const SparseMatrix& A, const Vector& rhs, const std::map<int, double>& values) {
    const auto n = A.rows();
    if (A.cols() != n || rhs.size() != n) throw InvalidArgument("apply_dirichlet: dimension mismatch");
    Vector g = Vector::Zero(n);
    std::vector<char> fixed(static_cast<std::size_t>(n), 0);
    for (const auto& [node, value] : values) {
        if (node < 0 || node >= n) throw InvalidArgument("apply_dirichlet: unknown node index " + std::to_string(node));
        fixed[static_cast<std::size_t>(node)] = 1;
        g[node] = value;
    }

    ConstrainedSystem out;
    out.rhs = rhs - A * g;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(A.nonZeros()));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (fixed[static_cast<std::size_t>(i)]) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
            out.rhs[i] = g[i];
            continue;
        }
        for (SparseMatrix::InnerIterator it(A, i); it; ++it) {
            if (!fixed[static_cast<std::size_t>(it.col())]) triplets.emplace_back(static_cast<int>(i), static_cast<int>(it.col()), it.value());
        }
    }
    out.matrix.resize(n, n);
    out.matrix.setFromTriplets(triplets.begin(), triplets.end());
    out.matrix.makeCompressed();
    return out;
}

ConstrainedSystem apply_dirichlet(const Mesh& mesh, const SparseMatrix& A, const Vector& rhs,
                                  const std::map<int, double>& values) {
    for (const auto& entry : values) {
        const int node = entry.first;
        if (node < 0 || static_cast<std::size_t>(node) >= mesh.num_vertices())
            throw InvalidArgument("apply_dirichlet: unknown node index " + std::to_string(node));
        if (!mesh.is_boundary(node)) throw InvalidArgument("apply_dirichlet: node " + std::to_string(node) + " is not on the boundary");
    }
    return apply_dirichlet(A, rhs, values);
}

DirichletReduction::DirichletReduction(const SparseMatrix& A, std::vector<int> constrained_nodes)
    : n_(static_cast<std::size_t>(A.rows())), constrained_(std::move(constrained_nodes)) {
    if (A.rows() != A.cols()) throw InvalidArgument("dirichlet reduction: matrix must be square");
    std::sort(constrained_.begin(), constrained_.end());
    constrained_.erase(std::unique(constrained_.begin(), constrained_.end()), constrained_.end());
    local_.assign(n_, 0);
    for (std::size_t c = 0; c < constrained_.size(); ++c) {
        const int node = constrained_[c];
        if (node < 0 || static_cast<std::size_t>(node) >= n_)
            throw InvalidArgument("dirichlet reduction: unknown node index " + std::to_string(node));
        local_[static_cast<std::size_t>(node)] = -1 - static_cast<int>(c);
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (local_[i] >= 0) {
            local_[i] = static_cast<int>(free_.size());
            free_.push_back(static_cast<int>(i));
        }
    }

    const auto nf = static_cast<Eigen::Index>(free_.size());
    const auto nc = static_cast<Eigen::Index>(constrained_.size());
    std::vector<Eigen::Triplet<double>> ff;
    std::vector<Eigen::Triplet<double>> fc;
    for (Eigen::Index r = 0; r < nf; ++r) {
        for (SparseMatrix::InnerIterator it(A, free_[static_cast<std::size_t>(r)]); it; ++it) {
            const int loc = local_[static_cast<std::size_t>(it.col())];
            if (loc >= 0) {
                ff.emplace_back(static_cast<int>(r), loc, it.value());
            } else {
                fc.emplace_back(static_cast<int>(r), -1 - loc, it.value());
            }
        }
    }
    A_ff_.resize(nf, nf);
    A_ff_.setFromTriplets(ff.begin(), ff.end());
    A_ff_.makeCompressed();
    A_fc_.resize(nf, nc);
    A_fc_.setFromTriplets(fc.begin(), fc.end());
    A_fc_.makeCompressed();
}

Vector DirichletReduction::reduce_rhs(const Vector& full_rhs, const Vector& constrained_values) const {
    Vector out = restrict_free(full_rhs);
    if (constrained_values.size() > 0) out -= A_fc_ * constrained_values;
    return out;
}

Vector DirichletReduction::restrict_free(const Vector& full) const {
    Vector out(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t r = 0; r < free_.size(); ++r) out[static_cast<Eigen::Index>(r)] = full[free_[r]];
    return out;
}

Vector DirichletReduction::restrict_constrained(const Vector& full) const {
    Vector out(static_cast<Eigen::Index>(constrained_.size()));
    for (std::size_t c = 0; c < constrained_.size(); ++c) out[static_cast<Eigen::Index>(c)] = full[constrained_[c]];
    return out;
}

Vector DirichletReduction::expand(const Vector& free_values, const Vector& constrained_values) const {
    Vector out(static_cast<Eigen::Index>(n_));
    for (std::size_t r = 0; r < free_.size(); ++r) out[free_[r]] = free_values[static_cast<Eigen::Index>(r)];
    for (std::size_t c = 0; c < constrained_.size(); ++c) out[constrained_[c]] = constrained_values[static_cast<Eigen::Index>(c)];
    return out;
}

}  // namespace hysfem::fem
