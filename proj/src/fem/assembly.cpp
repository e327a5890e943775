#include "hysfem/fem/assembly.hpp"

#include <algorithm>

#include "hysfem/common.hpp"

namespace hysfem::fem {

SparseMatrix p1_pattern(const Mesh& mesh) {
    const auto nv = static_cast<int>(mesh.num_vertices());
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(nv));
    const int nloc = mesh.vertices_per_element();
    for (const auto& e : mesh.elements) {
        for (int a = 0; a < nloc; ++a) {
            auto& row = rows[static_cast<std::size_t>(e[static_cast<std::size_t>(a)])];
            for (int b = 0; b < nloc; ++b) {
                const int col = e[static_cast<std::size_t>(b)];
                if (std::find(row.begin(), row.end(), col) == row.end()) row.push_back(col);
            }
        }
    }
    SparseMatrix A(nv, nv);
    Eigen::VectorXi sizes(nv);
    for (int i = 0; i < nv; ++i) sizes[i] = static_cast<int>(rows[static_cast<std::size_t>(i)].size());
    A.reserve(sizes);
    for (int i = 0; i < nv; ++i) {
        auto& row = rows[static_cast<std::size_t>(i)];
        std::sort(row.begin(), row.end());
        for (int col : row) A.insert(i, col) = 0.0;
    }
    A.makeCompressed();
    return A;
}

namespace {

template <class LocalFn>
SparseMatrix assemble(const Mesh& mesh, LocalFn local) {
    SparseMatrix A = p1_pattern(mesh);
    const int nloc = mesh.vertices_per_element();
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto geo = element_geometry(mesh, e);
        const auto& s = mesh.elements[e];
        for (int a = 0; a < nloc; ++a) {
            for (int b = 0; b < nloc; ++b) {
                A.coeffRef(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]) += local(geo, a, b, mesh.dim);
            }
        }
    }
    return A;
}

}  // namespace

SparseMatrix assemble_mass(const Mesh& mesh) {
    return assemble(mesh, [](const ElementGeometry& g, int a, int b, int d) {
        return g.volume * (a == b ? 2.0 : 1.0) / ((d + 1.0) * (d + 2.0));
    });
}

Vector assemble_lumped_mass(const Mesh& mesh) {
    Vector D = Vector::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
    const int nloc = mesh.vertices_per_element();
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double share = element_geometry(mesh, e).volume / nloc;
        for (int a = 0; a < nloc; ++a) D[mesh.elements[e][static_cast<std::size_t>(a)]] += share;
    }
    return D;
}

SparseMatrix assemble_stiffness(const Mesh& mesh) {
    return assemble(mesh, [](const ElementGeometry& g, int a, int b, int d) {
        double dot = 0.0;
        for (int r = 0; r < d; ++r)
            dot += g.grad[static_cast<std::size_t>(a)][static_cast<std::size_t>(r)] *
                   g.grad[static_cast<std::size_t>(b)][static_cast<std::size_t>(r)];
        return g.volume * dot;
    });
}

std::vector<Eigen::Index> diagonal_positions(const SparseMatrix& A) {
    if (!A.isCompressed()) throw InvalidArgument("diagonal_positions: matrix must be compressed");
    std::vector<Eigen::Index> pos(static_cast<std::size_t>(A.rows()), -1);
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index p = A.outerIndexPtr()[i]; p < A.outerIndexPtr()[i + 1]; ++p) {
            if (A.innerIndexPtr()[p] == i) pos[static_cast<std::size_t>(i)] = p;
        }
        if (pos[static_cast<std::size_t>(i)] < 0) throw InvalidArgument("diagonal_positions: missing diagonal entry");
    }
    return pos;
}

}  // namespace hysfem::fem
