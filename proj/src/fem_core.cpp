#include "wr/fem_core.hpp"

#include "wr/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace wr {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

int integral_cells(double extent, double dx, const char* what) {
    const double ratio = extent / dx;
    const double rounded = std::round(ratio);
    if (!(rounded >= 1.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
        throw ConfigError(std::string(what) + " " + std::to_string(extent) +
                          " is not an integer multiple of dx = " + std::to_string(dx));
    }
    return static_cast<int>(rounded);
}

void add_block(Triplets& out, const SparseMatrix& block, Index row_offset, Index col_offset) {
    for (Index k = 0; k < block.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(block, k); it; ++it) {
            out.emplace_back(it.row() + row_offset, it.col() + col_offset, it.value());
        }
    }
}

SparseMatrix from_triplets(Index rows, Index cols, const Triplets& t) {
    SparseMatrix m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

// Maps grid node (i, j) to its unknown index in [interior..., interface...],
// or -1 for eliminated Dirichlet nodes.
class DofMap {
public:
    explicit DofMap(const SubdomainMesh& mesh)
        : nx_(mesh.cells_x()), ny_(mesh.dim == 2 ? mesh.cells_y() : 0), side_(mesh.interface_side) {
        index_.assign(static_cast<std::size_t>((nx_ + 1) * (ny_ + 1)), -1);
        const int j_lo = mesh.dim == 2 ? 1 : 0;
        const int j_hi = mesh.dim == 2 ? ny_ - 1 : 0;
        Index next = 0;
        for (int j = j_lo; j <= j_hi; ++j) {
            for (int i = 1; i < nx_; ++i) {
                at(i, j) = next++;
                interior_.push_back({mesh.x_min + i * mesh.dx, j * mesh.dx});
            }
        }
        n_interior_ = next;
        if (side_ != InterfaceSide::none) {
            const int i_gamma = side_ == InterfaceSide::left ? 0 : nx_;
            for (int j = j_lo; j <= j_hi; ++j) {
                at(i_gamma, j) = next++;
                interface_.push_back({mesh.x_min + i_gamma * mesh.dx, j * mesh.dx});
            }
        }
        n_total_ = next;
    }

    Index operator()(int i, int j) const {
        return index_[static_cast<std::size_t>(j * (nx_ + 1) + i)];
    }
    Index n_interior() const { return n_interior_; }
    Index n_total() const { return n_total_; }
    std::vector<Point>& interior_nodes() { return interior_; }
    std::vector<Point>& interface_nodes() { return interface_; }

private:
    Index& at(int i, int j) { return index_[static_cast<std::size_t>(j * (nx_ + 1) + i)]; }

    int nx_;
    int ny_;
    InterfaceSide side_;
    std::vector<Index> index_;
    Index n_interior_ = 0;
    Index n_total_ = 0;
    std::vector<Point> interior_;
    std::vector<Point> interface_;
};

void assemble_1d(const SubdomainMesh& mesh, const Material& mat, const DofMap& dofs,
                 Triplets& mass, Triplets& stiff) {
    const double h = mesh.dx;
    const double me[2][2] = {{mat.alpha * h / 3.0, mat.alpha * h / 6.0},
                             {mat.alpha * h / 6.0, mat.alpha * h / 3.0}};
    const double ke[2][2] = {{mat.lambda / h, -mat.lambda / h}, {-mat.lambda / h, mat.lambda / h}};
    for (int e = 0; e < mesh.cells_x(); ++e) {
        const std::array<Index, 2> dof = {dofs(e, 0), dofs(e + 1, 0)};
        for (int a = 0; a < 2; ++a) {
            if (dof[a] < 0) continue;
            for (int b = 0; b < 2; ++b) {
                if (dof[b] < 0) continue;
                mass.emplace_back(dof[a], dof[b], me[a][b]);
                stiff.emplace_back(dof[a], dof[b], ke[a][b]);
            }
        }
    }
}

void assemble_triangle(const std::array<Point, 3>& p, const std::array<Index, 3>& dof,
                       const Material& mat, Triplets& mass, Triplets& stiff) {
    // gradients of the barycentric hat functions: (b_i, c_i) / (2 area)
    const double det = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
    const double area = 0.5 * std::abs(det);
    std::array<double, 3> b{}, c{};
    for (int i = 0; i < 3; ++i) {
        const Point& pj = p[(i + 1) % 3];
        const Point& pk = p[(i + 2) % 3];
        b[i] = (pj.y - pk.y) / det;
        c[i] = (pk.x - pj.x) / det;
    }
    for (int i = 0; i < 3; ++i) {
        if (dof[i] < 0) continue;
        for (int j = 0; j < 3; ++j) {
            if (dof[j] < 0) continue;
            const double m = mat.alpha * area / 12.0 * (i == j ? 2.0 : 1.0);
            const double k = mat.lambda * area * (b[i] * b[j] + c[i] * c[j]);
            mass.emplace_back(dof[i], dof[j], m);
            stiff.emplace_back(dof[i], dof[j], k);
        }
    }
}

void assemble_2d(const SubdomainMesh& mesh, const Material& mat, const DofMap& dofs,
                 Triplets& mass, Triplets& stiff) {
    const double h = mesh.dx;
    auto node = [&](int i, int j) { return Point{mesh.x_min + i * h, j * h}; };
    for (int j = 0; j < mesh.cells_y(); ++j) {
        for (int i = 0; i < mesh.cells_x(); ++i) {
            assemble_triangle({node(i, j), node(i + 1, j), node(i + 1, j + 1)},
                              {dofs(i, j), dofs(i + 1, j), dofs(i + 1, j + 1)}, mat, mass, stiff);
            assemble_triangle({node(i, j), node(i + 1, j + 1), node(i, j + 1)},
                              {dofs(i, j), dofs(i + 1, j + 1), dofs(i, j + 1)}, mat, mass, stiff);
        }
    }
}

}  // namespace

void Material::validate() const {
    if (!(std::isfinite(alpha) && alpha > 0.0 && std::isfinite(lambda) && lambda > 0.0)) {
        throw ConfigError("material coefficients must be finite and positive (alpha = " +
                          std::to_string(alpha) + ", lambda = " + std::to_string(lambda) + ")");
    }
}

SubdomainMesh SubdomainMesh::left_of_interface(int dim, double length, double dx) {
    return SubdomainMesh{dim, -length, 0.0, 1.0, dx, InterfaceSide::right};
}

SubdomainMesh SubdomainMesh::right_of_interface(int dim, double length, double dx) {
    return SubdomainMesh{dim, 0.0, length, 1.0, dx, InterfaceSide::left};
}

SubdomainMesh SubdomainMesh::uncut(int dim, double x_min, double x_max, double dx) {
    return SubdomainMesh{dim, x_min, x_max, 1.0, dx, InterfaceSide::none};
}

int SubdomainMesh::cells_x() const { return integral_cells(length_x(), dx, "subdomain length"); }

int SubdomainMesh::cells_y() const { return integral_cells(height, dx, "subdomain height"); }

Index SubdomainMesh::n_interior() const {
    const Index rows = dim == 2 ? cells_y() - 1 : 1;
    return rows * (cells_x() - 1);
}

Index SubdomainMesh::n_interface() const {
    if (interface_side == InterfaceSide::none) return 0;
    return dim == 2 ? cells_y() - 1 : 1;
}

double SubdomainMesh::measure() const { return dim == 2 ? length_x() * height : length_x(); }

void SubdomainMesh::validate() const {
    if (dim != 1 && dim != 2) throw ConfigError("dimension must be 1 or 2, got " + std::to_string(dim));
    if (!(std::isfinite(dx) && dx > 0.0)) throw ConfigError("dx must be positive");
    if (!(x_max > x_min)) throw ConfigError("subdomain extent must be positive");
    cells_x();
    if (dim == 2) {
        if (!(height > 0.0)) throw ConfigError("subdomain height must be positive");
        if (cells_y() < 2) throw ConfigError("2D mesh needs at least two cells in y");
    }
}

BlockSystem assemble_subdomain(const SubdomainMesh& mesh, const Material& material) {
    mesh.validate();
    material.validate();

    DofMap dofs(mesh);
    Triplets mass_t, stiff_t;
    if (mesh.dim == 1) {
        assemble_1d(mesh, material, dofs, mass_t, stiff_t);
    } else {
        assemble_2d(mesh, material, dofs, mass_t, stiff_t);
    }

    const Index n = dofs.n_total();
    const Index ni = dofs.n_interior();
    const Index ng = n - ni;

    BlockSystem sys;
    sys.mass = from_triplets(n, n, mass_t);
    sys.stiffness = from_triplets(n, n, stiff_t);
    sys.m_ii = sys.mass.block(0, 0, ni, ni);
    sys.m_ig = sys.mass.block(0, ni, ni, ng);
    sys.m_gi = sys.mass.block(ni, 0, ng, ni);
    sys.m_gg = sys.mass.block(ni, ni, ng, ng);
    sys.a_ii = sys.stiffness.block(0, 0, ni, ni);
    sys.a_ig = sys.stiffness.block(0, ni, ni, ng);
    sys.a_gi = sys.stiffness.block(ni, 0, ng, ni);
    sys.a_gg = sys.stiffness.block(ni, ni, ng, ng);
    sys.l2_mass = sys.mass / material.alpha;
    sys.l2_ii = sys.m_ii / material.alpha;
    sys.material = material;
    sys.mesh = mesh;
    sys.interior_nodes = std::move(dofs.interior_nodes());
    sys.interface_nodes = std::move(dofs.interface_nodes());
    return sys;
}

Vector MonolithicSystem::pack(const Vector& interior_1, const Vector& interior_2,
                              const Vector& interface) const {
    Vector out(size());
    out << interior_1, interior_2, interface;
    return out;
}

MonolithicSystem assemble_monolithic(const BlockSystem& sys1, const BlockSystem& sys2) {
    const Index s = sys1.n_interface();
    if (s != sys2.n_interface() || s == 0) {
        throw ConfigError("subdomains must share a non-empty interface (sizes " + std::to_string(s) +
                          " and " + std::to_string(sys2.n_interface()) + ")");
    }
    const Index n1 = sys1.n_interior();
    const Index n2 = sys2.n_interior();
    const Index g = n1 + n2;

    auto build = [&](const BlockSystem& a, const BlockSystem& b, bool mass) {
        const auto& ii1 = mass ? a.m_ii : a.a_ii;
        const auto& ig1 = mass ? a.m_ig : a.a_ig;
        const auto& gi1 = mass ? a.m_gi : a.a_gi;
        const auto& gg1 = mass ? a.m_gg : a.a_gg;
        const auto& ii2 = mass ? b.m_ii : b.a_ii;
        const auto& ig2 = mass ? b.m_ig : b.a_ig;
        const auto& gi2 = mass ? b.m_gi : b.a_gi;
        const auto& gg2 = mass ? b.m_gg : b.a_gg;
        Triplets t;
        add_block(t, ii1, 0, 0);
        add_block(t, ig1, 0, g);
        add_block(t, gi1, g, 0);
        add_block(t, ii2, n1, n1);
        add_block(t, ig2, n1, g);
        add_block(t, gi2, g, n1);
        add_block(t, gg1, g, g);
        add_block(t, gg2, g, g);
        return from_triplets(g + s, g + s, t);
    };

    MonolithicSystem mono;
    mono.mass = build(sys1, sys2, true);
    mono.stiffness = build(sys1, sys2, false);
    {
        Triplets t;
        add_block(t, SparseMatrix(sys1.m_ii / sys1.material.alpha), 0, 0);
        add_block(t, SparseMatrix(sys2.m_ii / sys2.material.alpha), n1, n1);
        add_block(t, SparseMatrix(sys1.m_ig / sys1.material.alpha), 0, g);
        add_block(t, SparseMatrix(sys2.m_ig / sys2.material.alpha), n1, g);
        add_block(t, SparseMatrix(sys1.m_gi / sys1.material.alpha), g, 0);
        add_block(t, SparseMatrix(sys2.m_gi / sys2.material.alpha), g, n1);
        add_block(t, SparseMatrix(sys1.m_gg / sys1.material.alpha), g, g);
        add_block(t, SparseMatrix(sys2.m_gg / sys2.material.alpha), g, g);
        mono.l2_mass = from_triplets(g + s, g + s, t);
    }
    mono.initial_state = Vector::Zero(g + s);
    mono.n_interior_1 = n1;
    mono.n_interior_2 = n2;
    mono.n_interface = s;
    mono.measure = sys1.mesh.measure() + sys2.mesh.measure();
    return mono;
}

MonolithicSystem assemble_monolithic(const BlockSystem& sys1, const BlockSystem& sys2,
                                     const Vector& u0_interior_1, const Vector& u0_interior_2,
                                     const Vector& u0_interface) {
    MonolithicSystem mono = assemble_monolithic(sys1, sys2);
    if (u0_interior_1.size() != mono.n_interior_1 || u0_interior_2.size() != mono.n_interior_2 ||
        u0_interface.size() != mono.n_interface) {
        throw ConfigError("initial state sizes do not match the monolithic system");
    }
    mono.initial_state = mono.pack(u0_interior_1, u0_interior_2, u0_interface);
    return mono;
}

double interface_norm(const Vector& v, double dx, int dim) {
    return v.norm() * std::pow(dx, 0.5 * (dim - 1));
}

double inner_norm(const Vector& v, const SparseMatrix& mass, double domain_measure) {
    if (v.size() != mass.rows()) throw ConfigError("inner_norm: vector and mass matrix sizes differ");
    const double q = v.dot(mass * v);
    return std::sqrt(std::max(q, 0.0) / domain_measure);
}

Vector sample_nodes(const std::vector<Point>& nodes, const std::function<double(Point)>& f) {
    Vector v(static_cast<Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) v[static_cast<Index>(i)] = f(nodes[i]);
    return v;
}

}  // namespace wr
