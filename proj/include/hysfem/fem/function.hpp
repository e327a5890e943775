#pragma once

#include <functional>
#include <memory>

#include "hysfem/fem/assembly.hpp"

namespace hysfem::fem {

struct FeFunction {
    std::shared_ptr<const Mesh> mesh;
    Vector values;
};

using SpaceFn = std::function<double(const Point&)>;

Vector interpolate(const Mesh& mesh, const SpaceFn& fn);
double evaluate(const Mesh& mesh, const Vector& values, const Point& x);
std::array<double, 3> evaluate_gradient(const Mesh& mesh, const Vector& values, std::size_t element);

bool is_nested(const Mesh& coarse, const Mesh& fine);
// Nodal values on the fine mesh of the coarse P1 function (exact because the meshes are nested).
Vector prolongate(const Mesh& coarse, const Vector& values, const Mesh& fine);
// Injection of fine nodal values onto the coarse vertices.
Vector restrict_nodal(const Mesh& fine, const Vector& values, const Mesh& coarse);

struct ErrorNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
    double h1 = 0.0;  // full norm: sqrt(l2^2 + h1_semi^2)
};

// Norms of a P1 function, integrated exactly element by element.
ErrorNorms p1_norms(const Mesh& mesh, const Vector& values);
// Norms of u_ref - P u_coarse on the fine mesh.
ErrorNorms error_norms(const FeFunction& u_ref, const FeFunction& u_coarse);

}  // namespace hysfem::fem
