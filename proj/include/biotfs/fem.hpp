#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "biotfs/mesh.hpp"

namespace biotfs {

using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<std::array<double, 2>(double, double)>;

/// Symmetric quadrature rule on the reference triangle. Weights sum to 1;
/// the integral over a physical cell is area * sum_q w_q f(x_q).
struct QuadratureRule {
    int degree = 0;
    std::vector<std::array<double, 3>> points;  // barycentric coordinates
    std::vector<double> weights;

    /// Rules exact for polynomials of total degree 1, 2, 4 or 6.
    static const QuadratureRule& by_degree(int degree);
};

/// Per-cell geometry: vertex coordinates, area, and the (constant)
/// gradients of the barycentric coordinate functions.
struct CellGeometry {
    std::array<Vec2, 3> v;
    double area = 0.0;
    std::array<Vec2, 3> grad_bary;
};

CellGeometry cell_geometry(const Mesh& mesh, int cell);

Vec2 barycentric_to_physical(const CellGeometry& g, const std::array<double, 3>& bary);

/// Quadratic Lagrange basis on a triangle: local nodes 0..2 are the
/// vertices, node 3+i is the midpoint of the edge opposite vertex i.
void p2_values(const std::array<double, 3>& bary, std::array<double, 6>& n);
void p2_gradients(const std::array<double, 3>& bary, const std::array<Vec2, 3>& grad_bary,
                  std::array<Vec2, 6>& gn);

enum class SpaceKind { VectorP2, ScalarP1 };

/// Conforming scalar P1 or vector P2 space on a Mesh.
///
/// VectorP2 interleaves components: global dof = 2 * node + component, with
/// scalar nodes numbered vertices first, then edge midpoints in edge order.
/// dirichlet_dofs holds every displacement dof whose node lies on the
/// domain boundary (empty for ScalarP1).
class FunctionSpace {
public:
    FunctionSpace(const Mesh& mesh, SpaceKind kind);

    SpaceKind kind() const { return kind_; }
    const Mesh& mesh() const { return *mesh_; }
    int dof_count() const { return dof_count_; }
    int dofs_per_cell() const { return kind_ == SpaceKind::VectorP2 ? 12 : 3; }
    int node_count() const { return node_count_; }

    /// Global dofs of a cell. VectorP2 local order is node-major,
    /// component-minor: (n0,x),(n0,y),(n1,x),...,(n5,y).
    void cell_dofs(int cell, int* out) const;

    Vec2 node_coord(int node) const;
    const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }
    const std::vector<std::uint8_t>& dirichlet_mask() const { return dirichlet_mask_; }

private:
    const Mesh* mesh_;
    SpaceKind kind_;
    int dof_count_ = 0;
    int node_count_ = 0;
    std::vector<int> dirichlet_dofs_;
    std::vector<std::uint8_t> dirichlet_mask_;
};

/// Coefficient vector bound to a space.
struct FEFunction {
    const FunctionSpace* space = nullptr;
    std::vector<double> coeffs;

    FEFunction() = default;
    explicit FEFunction(const FunctionSpace& s)
        : space(&s), coeffs(static_cast<std::size_t>(s.dof_count()), 0.0) {}
};

/// Nodal interpolant. Displacement Dirichlet dofs take the field's values
/// at the boundary nodes (zero for all experiment fields).
FEFunction interpolate(const FunctionSpace& space, const ScalarField& field);
FEFunction interpolate(const FunctionSpace& space, const VectorField& field);

struct Norms {
    double l2 = 0.0;
    double h1_semi = 0.0;
};
Norms norms(const FEFunction& f);

struct StrainDivNorms {
    double strain_l2 = 0.0;  // ||eps(u)||_L2
    double div_l2 = 0.0;     // ||div u||_L2
};
StrainDivNorms strain_div_norms(const FEFunction& u);

/// div u at a barycentric point of a cell (piecewise linear for VectorP2).
double eval_div_at_quadrature(const FEFunction& u, int cell, const std::array<double, 3>& bary);

double eval_scalar(const FEFunction& f, int cell, const std::array<double, 3>& bary);
std::array<double, 2> eval_vector(const FEFunction& f, int cell, const std::array<double, 3>& bary);

/// Mean value over the domain: (1/|Omega|) * integral of f.
double mean_value(const FEFunction& f);

/// L2 distance between an FE function and an analytic field
/// (degree-6 quadrature).
double l2_error(const FEFunction& f, const ScalarField& exact);
double l2_error(const FEFunction& f, const VectorField& exact);

/// Plain-text dump: one "dof value" line per coefficient.
void write_dof_values(const FEFunction& f, std::ostream& os);

/// Legacy-VTK (version 3.0, ASCII) unstructured-grid writer with vertex
/// point data; P2 fields are sampled at the vertices.
void write_vtk(const FEFunction& f, const std::string& field_name, std::ostream& os);

}  // namespace biotfs
