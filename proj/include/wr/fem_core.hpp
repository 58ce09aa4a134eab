#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <vector>

namespace wr {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

/// Heat-conduction coefficients of one subdomain.
struct Material {
    double alpha = 1.0;   ///< volumetric heat capacity rho*c_p, J/(K m^3)
    double lambda = 1.0;  ///< thermal conductivity, W/(m K)

    double diffusivity() const { return lambda / alpha; }
    /// Throws ConfigError unless both coefficients are finite and positive.
    void validate() const;

    friend bool operator==(const Material&, const Material&) = default;
};

enum class InterfaceSide { none, left, right };

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Equidistant grid on an axis-aligned rectangle (2D) or interval (1D).
///
/// The interface, when present, is the vertical edge x = x_min (side left)
/// or x = x_max (side right). All other boundary nodes carry homogeneous
/// Dirichlet data and are eliminated from the unknowns. In 2D the rectangle
/// spans [0, height] in y and every cell is split along its (i,j)-(i+1,j+1)
/// diagonal.
struct SubdomainMesh {
    int dim = 1;
    double x_min = -1.0;
    double x_max = 0.0;
    double height = 1.0;
    double dx = 0.01;
    InterfaceSide interface_side = InterfaceSide::right;

    /// Omega_1 = [-length, 0] (x [0, height] in 2D), interface at x = 0.
    static SubdomainMesh left_of_interface(int dim, double length, double dx);
    /// Omega_2 = [0, length], interface at x = 0.
    static SubdomainMesh right_of_interface(int dim, double length, double dx);
    /// Whole domain without an interface, used as a reference assembly.
    static SubdomainMesh uncut(int dim, double x_min, double x_max, double dx);

    double length_x() const { return x_max - x_min; }
    int cells_x() const;
    int cells_y() const;
    Index n_interior() const;
    Index n_interface() const;
    /// |Omega_m|: length in 1D, area in 2D.
    double measure() const;
    /// Throws ConfigError for non-integral cell counts or bad extents.
    void validate() const;
};

/// Linear finite-element matrices of one subdomain split into interior (I)
/// and interface (G) blocks. Interior unknowns are ordered row-major
/// (y outer, x inner), interface unknowns by increasing y.
struct BlockSystem {
    SparseMatrix m_ii, m_ig, m_gi, m_gg;
    SparseMatrix a_ii, a_ig, a_gi, a_gg;
    /// [[M_II, M_IG], [M_GI, M_GG]] with interface unknowns last.
    SparseMatrix mass;
    SparseMatrix stiffness;
    /// Plain FE mass without alpha, for L2 norms: full and interior block.
    SparseMatrix l2_mass, l2_ii;
    Material material;
    SubdomainMesh mesh;
    std::vector<Point> interior_nodes;
    std::vector<Point> interface_nodes;

    Index n_interior() const { return m_ii.rows(); }
    Index n_interface() const { return m_gg.rows(); }
};

BlockSystem assemble_subdomain(const SubdomainMesh& mesh, const Material& material);

/// Coupled semidiscrete system over (interior_1, interior_2, interface).
struct MonolithicSystem {
    SparseMatrix mass;
    SparseMatrix stiffness;
    SparseMatrix l2_mass;
    Vector initial_state;
    Index n_interior_1 = 0;
    Index n_interior_2 = 0;
    Index n_interface = 0;
    double measure = 0.0;

    Index size() const { return n_interior_1 + n_interior_2 + n_interface; }
    Vector pack(const Vector& interior_1, const Vector& interior_2, const Vector& interface) const;
    Vector interior_1(const Vector& state) const { return state.head(n_interior_1); }
    Vector interior_2(const Vector& state) const { return state.segment(n_interior_1, n_interior_2); }
    Vector interface(const Vector& state) const { return state.tail(n_interface); }
};

MonolithicSystem assemble_monolithic(const BlockSystem& sys1, const BlockSystem& sys2);
MonolithicSystem assemble_monolithic(const BlockSystem& sys1, const BlockSystem& sys2,
                                     const Vector& u0_interior_1, const Vector& u0_interior_2,
                                     const Vector& u0_interface);

/// Discrete L2 interface norm ||v||_2 * dx^((dim-1)/2).
double interface_norm(const Vector& v, double dx, int dim);

/// sqrt(v^T M v / |Omega|).
double inner_norm(const Vector& v, const SparseMatrix& mass, double domain_measure);

/// Evaluate f at each node.
Vector sample_nodes(const std::vector<Point>& nodes, const std::function<double(Point)>& f);

}  // namespace wr
