#include "hysfem/fem/function.hpp"

#include <cmath>

#include "hysfem/common.hpp"

namespace hysfem::fem {

Vector interpolate(const Mesh& mesh, const SpaceFn& fn) {
    Vector out(static_cast<Eigen::Index>(mesh.num_vertices()));
    for (std::size_t i = 0; i < mesh.num_vertices(); ++i) out[static_cast<Eigen::Index>(i)] = fn(mesh.vertices[i]);
    return out;
}

double evaluate(const Mesh& mesh, const Vector& values, const Point& x) {
    const auto loc = locate(mesh, x);
    double v = 0.0;
    for (int m = 0; m <= mesh.dim; ++m)
        v += loc.weights[static_cast<std::size_t>(m)] * values[loc.vertices[static_cast<std::size_t>(m)]];
    return v;
}

std::array<double, 3> evaluate_gradient(const Mesh& mesh, const Vector& values, std::size_t element) {
    const auto geo = element_geometry(mesh, element);
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (int m = 0; m <= mesh.dim; ++m) {
        const double v = values[mesh.elements[element][static_cast<std::size_t>(m)]];
        for (int r = 0; r < mesh.dim; ++r)
            g[static_cast<std::size_t>(r)] += v * geo.grad[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)];
    }
    return g;
}

bool is_nested(const Mesh& coarse, const Mesh& fine) {
    return coarse.dim == fine.dim && fine.n >= coarse.n && fine.n % coarse.n == 0;
}

Vector prolongate(const Mesh& coarse, const Vector& values, const Mesh& fine) {
    if (!is_nested(coarse, fine)) throw InvalidArgument("prolongate: meshes are not nested");
    if (values.size() != static_cast<Eigen::Index>(coarse.num_vertices()))
        throw InvalidArgument("prolongate: value count differs from coarse vertex count");
    Vector out(static_cast<Eigen::Index>(fine.num_vertices()));
    for (std::size_t i = 0; i < fine.num_vertices(); ++i)
        out[static_cast<Eigen::Index>(i)] = evaluate(coarse, values, fine.vertices[i]);
    return out;
}

Vector restrict_nodal(const Mesh& fine, const Vector& values, const Mesh& coarse) {
    if (!is_nested(coarse, fine)) throw InvalidArgument("restrict: meshes are not nested");
    const int ratio = fine.n / coarse.n;
    const int ny = coarse.dim >= 2 ? coarse.n : 0;
    const int nz = coarse.dim >= 3 ? coarse.n : 0;
    Vector out(static_cast<Eigen::Index>(coarse.num_vertices()));
    for (int k = 0; k <= nz; ++k)
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= coarse.n; ++i)
                out[coarse.vertex_index(i, j, k)] = values[fine.vertex_index(i * ratio, j * ratio, k * ratio)];
    return out;
}

ErrorNorms p1_norms(const Mesh& mesh, const Vector& values) {
    if (values.size() != static_cast<Eigen::Index>(mesh.num_vertices()))
        throw InvalidArgument("p1_norms: value count differs from vertex count");
    const int d = mesh.dim;
    const double mass_factor = 1.0 / ((d + 1.0) * (d + 2.0));
    double l2sq = 0.0;
    double semisq = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto geo = element_geometry(mesh, e);
        double sum = 0.0;
        double sumsq = 0.0;
        std::array<double, 3> grad{0.0, 0.0, 0.0};
        for (int m = 0; m <= d; ++m) {
            const double v = values[mesh.elements[e][static_cast<std::size_t>(m)]];
            sum += v;
            sumsq += v * v;
            for (int r = 0; r < d; ++r)
                grad[static_cast<std::size_t>(r)] += v * geo.grad[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)];
        }
        // exact integral of a squared affine function over a simplex
        l2sq += geo.volume * mass_factor * (sumsq + sum * sum);
        semisq += geo.volume * (grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
    }
    ErrorNorms out;
    out.l2 = std::sqrt(l2sq);
    out.h1_semi = std::sqrt(semisq);
    out.h1 = std::sqrt(l2sq + semisq);
    return out;
}

ErrorNorms error_norms(const FeFunction& u_ref, const FeFunction& u_coarse) {
    if (!u_ref.mesh || !u_coarse.mesh) throw InvalidArgument("error_norms: missing mesh");
    if (!is_nested(*u_coarse.mesh, *u_ref.mesh)) throw InvalidArgument("error_norms: meshes are not nested");
    const Vector diff = u_ref.values - prolongate(*u_coarse.mesh, u_coarse.values, *u_ref.mesh);
    return p1_norms(*u_ref.mesh, diff);
}

}  // namespace hysfem::fem
