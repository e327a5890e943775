#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace hysfem::fem {

using Point = std::array<double, 3>;
using Simplex = std::array<int, 4>;

// Uniform simplicial mesh of the unit interval / square / cube. Vertices are
// numbered lexicographically, i + (n+1) j + (n+1)^2 k, so meshes with n and m*n
// intervals per side share the coarse vertex positions. Squares and cubes are
// split along the main diagonal (Kuhn/Freudenthal pattern): one simplex per
// ordering of the local coordinates, which keeps refinements nested.
struct Mesh {
    int dim = 1;
    int n = 1;
    std::vector<Point> vertices;
    std::vector<Simplex> elements;  // first dim+1 entries used
    std::vector<int> boundary_nodes;
    std::vector<char> on_boundary;

    std::size_t num_vertices() const noexcept { return vertices.size(); }
    std::size_t num_elements() const noexcept { return elements.size(); }
    int vertices_per_element() const noexcept { return dim + 1; }
    double h() const noexcept { return 1.0 / n; }
    int vertex_index(int i, int j = 0, int k = 0) const noexcept;
    bool is_boundary(int v) const { return on_boundary[static_cast<std::size_t>(v)] != 0; }
};

Mesh build_uniform_mesh(int dim, int n);

struct ElementGeometry {
    double volume = 0.0;
    // gradients of the barycentric coordinates, one row per local vertex
    std::array<std::array<double, 3>, 4> grad{};
};

ElementGeometry element_geometry(const Mesh& mesh, std::size_t element);

// Containing simplex of a point in the closed unit box: vertex ids and barycentric weights.
struct Location {
    Simplex vertices{};
    std::array<double, 4> weights{};
};

Location locate(const Mesh& mesh, const Point& x);

void write_mesh_text(std::ostream& out, const Mesh& mesh);
Mesh read_mesh_text(std::istream& in);

}  // namespace hysfem::fem
