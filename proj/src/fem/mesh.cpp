#include "hysfem/fem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "hysfem/common.hpp"

namespace hysfem::fem {

int Mesh::vertex_index(int i, int j, int k) const noexcept { return i + (n + 1) * (j + (n + 1) * k); }

Mesh build_uniform_mesh(int dim, int n) {
    if (dim < 1 || dim > 3) throw InvalidArgument("mesh: dim must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
    if (n < 1) throw InvalidArgument("mesh: n must be at least 1");

    Mesh mesh;
    mesh.dim = dim;
    mesh.n = n;
    const int np = n + 1;
    const int ny = dim >= 2 ? np : 1;
    const int nz = dim >= 3 ? np : 1;
    const double h = 1.0 / n;

    mesh.vertices.reserve(static_cast<std::size_t>(np) * ny * nz);
    mesh.on_boundary.reserve(mesh.vertices.capacity());
    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < np; ++i) {
                mesh.vertices.push_back({i * h, dim >= 2 ? j * h : 0.0, dim >= 3 ? k * h : 0.0});
                bool b = i == 0 || i == n;
                if (dim >= 2) b = b || j == 0 || j == n;
                if (dim >= 3) b = b || k == 0 || k == n;
                mesh.on_boundary.push_back(b ? 1 : 0);
                if (b) mesh.boundary_nodes.push_back(static_cast<int>(mesh.vertices.size() - 1));
            }
        }
    }

    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::array<int, 3>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.begin() + dim));

    const int cy = dim >= 2 ? n : 1;
    const int cz = dim >= 3 ? n : 1;
    mesh.elements.reserve(static_cast<std::size_t>(n) * cy * cz * perms.size());
    for (int k = 0; k < cz; ++k) {
        for (int j = 0; j < cy; ++j) {
            for (int i = 0; i < n; ++i) {
                for (const auto& p : perms) {
                    Simplex s{-1, -1, -1, -1};
                    std::array<int, 3> c{i, j, k};
                    s[0] = mesh.vertex_index(c[0], c[1], c[2]);
                    for (int m = 0; m < dim; ++m) {
                        ++c[static_cast<std::size_t>(p[static_cast<std::size_t>(m)])];
                        s[static_cast<std::size_t>(m + 1)] = mesh.vertex_index(c[0], c[1], c[2]);
                    }
                    mesh.elements.push_back(s);
                }
            }
        }
    }
    return mesh;
}

ElementGeometry element_geometry(const Mesh& mesh, std::size_t element) {
    const auto& s = mesh.elements[element];
    const int d = mesh.dim;
    Eigen::Matrix3d J = Eigen::Matrix3d::Identity();
    const auto& p0 = mesh.vertices[static_cast<std::size_t>(s[0])];
    for (int m = 0; m < d; ++m) {
        const auto& pm = mesh.vertices[static_cast<std::size_t>(s[static_cast<std::size_t>(m + 1)])];
        for (int r = 0; r < d; ++r) J(r, m) = pm[static_cast<std::size_t>(r)] - p0[static_cast<std::size_t>(r)];
    }
    static constexpr double kFactorial[] = {1.0, 1.0, 2.0, 6.0};
    ElementGeometry g;
    g.volume = std::abs(J.determinant()) / kFactorial[d];
    const Eigen::Matrix3d Jinv = J.inverse();
    // grad lambda_m (m >= 1) is row m-1 of J^{-1}
    for (int m = 0; m < d; ++m) {
        for (int r = 0; r < d; ++r) {
            const double v = Jinv(m, r);
            g.grad[static_cast<std::size_t>(m + 1)][static_cast<std::size_t>(r)] = v;
            g.grad[0][static_cast<std::size_t>(r)] -= v;
        }
    }
    return g;
}

Location locate(const Mesh& mesh, const Point& x) {
    const int d = mesh.dim;
    std::array<int, 3> cell{0, 0, 0};
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    for (int r = 0; r < d; ++r) {
        const double t = std::clamp(x[static_cast<std::size_t>(r)], 0.0, 1.0) * mesh.n;
        const int c = std::min(static_cast<int>(std::floor(t)), mesh.n - 1);
        cell[static_cast<std::size_t>(r)] = c;
        xi[static_cast<std::size_t>(r)] = t - c;
    }
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.begin() + d, [&](int a, int b) {
        return xi[static_cast<std::size_t>(a)] > xi[static_cast<std::size_t>(b)];
    });

    Location loc;
    loc.vertices.fill(-1);
    loc.weights.fill(0.0);
    loc.vertices[0] = mesh.vertex_index(cell[0], cell[1], cell[2]);
    loc.weights[0] = 1.0 - xi[static_cast<std::size_t>(order[0])];
    for (int m = 0; m < d; ++m) {
        ++cell[static_cast<std::size_t>(order[static_cast<std::size_t>(m)])];
        loc.vertices[static_cast<std::size_t>(m + 1)] = mesh.vertex_index(cell[0], cell[1], cell[2]);
        const double hi = xi[static_cast<std::size_t>(order[static_cast<std::size_t>(m)])];
        const double lo = m + 1 < d ? xi[static_cast<std::size_t>(order[static_cast<std::size_t>(m + 1)])] : 0.0;
        loc.weights[static_cast<std::size_t>(m + 1)] = hi - lo;
    }
    return loc;
}

void write_mesh_text(std::ostream& out, const Mesh& mesh) {
    out << "hysfem-mesh 1\n";
    out << "dim " << mesh.dim << " n " << mesh.n << "\n";
    out << "vertices " << mesh.num_vertices() << "\n";
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    out << "elements " << mesh.num_elements() << "\n";
    for (const auto& e : mesh.elements) {
        for (int m = 0; m <= mesh.dim; ++m) out << (m ? " " : "") << e[static_cast<std::size_t>(m)];
        out << '\n';
    }
    out << "boundary " << mesh.boundary_nodes.size() << "\n";
    for (std::size_t i = 0; i < mesh.boundary_nodes.size(); ++i) out << (i ? " " : "") << mesh.boundary_nodes[i];
    out << '\n';
}

namespace {

void expect_token(std::istream& in, const std::string& token) {
    std::string got;
    if (!(in >> got) || got != token) throw Error("mesh text: expected '" + token + "', got '" + got + "'");
}

}  // namespace

Mesh read_mesh_text(std::istream& in) {
    expect_token(in, "hysfem-mesh");
    int version = 0;
    if (!(in >> version) || version != 1) throw Error("mesh text: unsupported version");
    Mesh mesh;
    expect_token(in, "dim");
    in >> mesh.dim;
    expect_token(in, "n");
    in >> mesh.n;
    if (mesh.dim < 1 || mesh.dim > 3 || mesh.n < 1) throw Error("mesh text: invalid header");
    std::size_t count = 0;
    expect_token(in, "vertices");
    in >> count;
    mesh.vertices.resize(count);
    for (auto& v : mesh.vertices) in >> v[0] >> v[1] >> v[2];
    expect_token(in, "elements");
    in >> count;
    mesh.elements.assign(count, Simplex{-1, -1, -1, -1});
    for (auto& e : mesh.elements)
        for (int m = 0; m <= mesh.dim; ++m) in >> e[static_cast<std::size_t>(m)];
    expect_token(in, "boundary");
    in >> count;
    mesh.boundary_nodes.resize(count);
    for (auto& b : mesh.boundary_nodes) in >> b;
    if (!in) throw Error("mesh text: truncated input");
    mesh.on_boundary.assign(mesh.vertices.size(), 0);
    for (int b : mesh.boundary_nodes) {
        if (b < 0 || static_cast<std::size_t>(b) >= mesh.vertices.size()) throw Error("mesh text: bad boundary index");
        mesh.on_boundary[static_cast<std::size_t>(b)] = 1;
    }
    return mesh;
}

}  // namespace hysfem::fem
