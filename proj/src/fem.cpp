#include "biotfs/fem.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace biotfs {

namespace {

QuadratureRule make_rule(int degree) {
    QuadratureRule r;
    r.degree = degree;
    auto push3 = [&r](double a, double b, double w) {
        // all distinct permutations of (a, b, b)
        r.points.push_back({a, b, b});
        r.points.push_back({b, a, b});
        r.points.push_back({b, b, a});
        r.weights.insert(r.weights.end(), 3, w);
    };
    auto push6 = [&r](double a, double b, double c, double w) {
        r.points.push_back({a, b, c});
        r.points.push_back({a, c, b});
        r.points.push_back({b, a, c});
        r.points.push_back({b, c, a});
        r.points.push_back({c, a, b});
        r.points.push_back({c, b, a});
        r.weights.insert(r.weights.end(), 6, w);
    };
    switch (degree) {
        case 1:
            r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
            r.weights.push_back(1.0);
            break;
        case 2:
            push3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
            break;
        case 4:
            push3(0.108103018168070, 0.445948490915965, 0.223381589678011);
            push3(0.816847572980459, 0.091576213509771, 0.109951743655322);
            break;
        case 6:
            push3(0.501426509658179, 0.249286745170910, 0.116786275726379);
            push3(0.873821971016996, 0.063089014491502, 0.050844906370207);
            push6(0.053145049844816, 0.310352451033785, 0.636502499121399,
                  0.082851075618374);
            break;
        default:
            throw std::invalid_argument("QuadratureRule: unsupported degree");
    }
    return r;
}

}  // namespace

const QuadratureRule& QuadratureRule::by_degree(int degree) {
    static const QuadratureRule r1 = make_rule(1);
    static const QuadratureRule r2 = make_rule(2);
    static const QuadratureRule r4 = make_rule(4);
    static const QuadratureRule r6 = make_rule(6);
    switch (degree) {
        case 1: return r1;
        case 2: return r2;
        case 4: return r4;
        case 6: return r6;
        default: throw std::invalid_argument("QuadratureRule: unsupported degree");
    }
}

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
    CellGeometry g;
    const auto& c = mesh.cell(cell);
    for (int i = 0; i < 3; ++i) g.v[i] = mesh.vertex(c[i]);
    const double det = (g.v[1].x - g.v[0].x) * (g.v[2].y - g.v[0].y) -
                       (g.v[2].x - g.v[0].x) * (g.v[1].y - g.v[0].y);
    g.area = 0.5 * det;
    for (int i = 0; i < 3; ++i) {
        const Vec2& a = g.v[(i + 1) % 3];
        const Vec2& b = g.v[(i + 2) % 3];
        g.grad_bary[i] = {(a.y - b.y) / det, (b.x - a.x) / det};
    }
    return g;
}

Vec2 barycentric_to_physical(const CellGeometry& g, const std::array<double, 3>& bary) {
    return {bary[0] * g.v[0].x + bary[1] * g.v[1].x + bary[2] * g.v[2].x,
            bary[0] * g.v[0].y + bary[1] * g.v[1].y + bary[2] * g.v[2].y};
}

void p2_values(const std::array<double, 3>& l, std::array<double, 6>& n) {
    n[0] = l[0] * (2.0 * l[0] - 1.0);
    n[1] = l[1] * (2.0 * l[1] - 1.0);
    n[2] = l[2] * (2.0 * l[2] - 1.0);
    n[3] = 4.0 * l[1] * l[2];
    n[4] = 4.0 * l[2] * l[0];
    n[5] = 4.0 * l[0] * l[1];
}

void p2_gradients(const std::array<double, 3>& l, const std::array<Vec2, 3>& gb,
                  std::array<Vec2, 6>& gn) {
    for (int i = 0; i < 3; ++i) {
        const double f = 4.0 * l[i] - 1.0;
        gn[i] = {f * gb[i].x, f * gb[i].y};
    }
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        gn[3 + i] = {4.0 * (l[j] * gb[k].x + l[k] * gb[j].x),
                     4.0 * (l[j] * gb[k].y + l[k] * gb[j].y)};
    }
}

FunctionSpace::FunctionSpace(const Mesh& mesh, SpaceKind kind)
    : mesh_(&mesh), kind_(kind) {
    if (kind == SpaceKind::ScalarP1) {
        node_count_ = mesh.vertex_count();
        dof_count_ = node_count_;
        dirichlet_mask_.assign(dof_count_, 0);
    } else {
        node_count_ = mesh.vertex_count() + mesh.edge_count();
        dof_count_ = 2 * node_count_;
        dirichlet_mask_.assign(dof_count_, 0);
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (mesh.vertex_on_boundary(v)) {
                dirichlet_mask_[2 * v] = 1;
                dirichlet_mask_[2 * v + 1] = 1;
            }
        }
        for (int e = 0; e < mesh.edge_count(); ++e) {
            if (mesh.edge_on_boundary(e)) {
                const int node = mesh.vertex_count() + e;
                dirichlet_mask_[2 * node] = 1;
                dirichlet_mask_[2 * node + 1] = 1;
            }
        }
        for (int d = 0; d < dof_count_; ++d)
            if (dirichlet_mask_[d]) dirichlet_dofs_.push_back(d);
    }
}

void FunctionSpace::cell_dofs(int cell, int* out) const {
    const auto& v = mesh_->cell(cell);
    if (kind_ == SpaceKind::ScalarP1) {
        out[0] = v[0];
        out[1] = v[1];
        out[2] = v[2];
        return;
    }
    const auto& e = mesh_->cell_edges(cell);
    const int nv = mesh_->vertex_count();
    const int nodes[6] = {v[0], v[1], v[2], nv + e[0], nv + e[1], nv + e[2]};
    for (int i = 0; i < 6; ++i) {
        out[2 * i] = 2 * nodes[i];
        out[2 * i + 1] = 2 * nodes[i] + 1;
    }
}

Vec2 FunctionSpace::node_coord(int node) const {
    const int nv = mesh_->vertex_count();
    if (node < nv) return mesh_->vertex(node);
    const auto& e = mesh_->edge(node - nv);
    const Vec2& a = mesh_->vertex(e[0]);
    const Vec2& b = mesh_->vertex(e[1]);
    return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

FEFunction interpolate(const FunctionSpace& space, const ScalarField& field) {
    if (space.kind() != SpaceKind::ScalarP1)
        throw std::invalid_argument("interpolate: scalar field needs a ScalarP1 space");
    FEFunction f(space);
    for (int n = 0; n < space.node_count(); ++n) {
        const Vec2 p = space.node_coord(n);
        f.coeffs[n] = field(p.x, p.y);
    }
    return f;
}

FEFunction interpolate(const FunctionSpace& space, const VectorField& field) {
    if (space.kind() != SpaceKind::VectorP2)
        throw std::invalid_argument("interpolate: vector field needs a VectorP2 space");
    FEFunction f(space);
    for (int n = 0; n < space.node_count(); ++n) {
        const Vec2 p = space.node_coord(n);
        const auto v = field(p.x, p.y);
        f.coeffs[2 * n] = v[0];
        f.coeffs[2 * n + 1] = v[1];
    }
    return f;
}

namespace {

// Accumulates integrals of f^2 and |grad f|^2 over the mesh.
void accumulate_norms(const FEFunction& f, double& l2_sq, double& h1_sq) {
    const FunctionSpace& sp = *f.space;
    const Mesh& mesh = sp.mesh();
    const QuadratureRule& qr = QuadratureRule::by_degree(4);
    const bool vec = sp.kind() == SpaceKind::VectorP2;
    int dofs[12];
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        sp.cell_dofs(c, dofs);
        for (std::size_t q = 0; q < qr.points.size(); ++q) {
            const double w = g.area * qr.weights[q];
            if (vec) {
                std::array<double, 6> n;
                std::array<Vec2, 6> gn;
                p2_values(qr.points[q], n);
                p2_gradients(qr.points[q], g.grad_bary, gn);
                double ux = 0, uy = 0, uxx = 0, uxy = 0, uyx = 0, uyy = 0;
                for (int i = 0; i < 6; ++i) {
                    const double cx = f.coeffs[dofs[2 * i]];
                    const double cy = f.coeffs[dofs[2 * i + 1]];
                    ux += cx * n[i];
                    uy += cy * n[i];
                    uxx += cx * gn[i].x;
                    uxy += cx * gn[i].y;
                    uyx += cy * gn[i].x;
                    uyy += cy * gn[i].y;
                }
                l2_sq += w * (ux * ux + uy * uy);
                h1_sq += w * (uxx * uxx + uxy * uxy + uyx * uyx + uyy * uyy);
            } else {
                const auto& l = qr.points[q];
                double val = 0;
                Vec2 grad{0, 0};
                for (int i = 0; i < 3; ++i) {
                    val += f.coeffs[dofs[i]] * l[i];
                    grad.x += f.coeffs[dofs[i]] * g.grad_bary[i].x;
                    grad.y += f.coeffs[dofs[i]] * g.grad_bary[i].y;
                }
                l2_sq += w * val * val;
                h1_sq += w * (grad.x * grad.x + grad.y * grad.y);
            }
        }
    }
}

}  // namespace

Norms norms(const FEFunction& f) {
    double l2_sq = 0, h1_sq = 0;
    accumulate_norms(f, l2_sq, h1_sq);
    return {std::sqrt(l2_sq), std::sqrt(h1_sq)};
}

StrainDivNorms strain_div_norms(const FEFunction& u) {
    const FunctionSpace& sp = *u.space;
    if (sp.kind() != SpaceKind::VectorP2)
        throw std::invalid_argument("strain_div_norms: VectorP2 function required");
    const Mesh& mesh = sp.mesh();
    const QuadratureRule& qr = QuadratureRule::by_degree(4);
    double eps_sq = 0, div_sq = 0;
    int dofs[12];
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        sp.cell_dofs(c, dofs);
        for (std::size_t q = 0; q < qr.points.size(); ++q) {
            std::array<Vec2, 6> gn;
            p2_gradients(qr.points[q], g.grad_bary, gn);
            double uxx = 0, uxy = 0, uyx = 0, uyy = 0;
            for (int i = 0; i < 6; ++i) {
                const double cx = u.coeffs[dofs[2 * i]];
                const double cy = u.coeffs[dofs[2 * i + 1]];
                uxx += cx * gn[i].x;
                uxy += cx * gn[i].y;
                uyx += cy * gn[i].x;
                uyy += cy * gn[i].y;
            }
            const double exy = 0.5 * (uxy + uyx);
            const double div = uxx + uyy;
            const double w = g.area * qr.weights[q];
            eps_sq += w * (uxx * uxx + 2.0 * exy * exy + uyy * uyy);
            div_sq += w * div * div;
        }
    }
    return {std::sqrt(eps_sq), std::sqrt(div_sq)};
}

double eval_div_at_quadrature(const FEFunction& u, int cell, const std::array<double, 3>& bary) {
    const FunctionSpace& sp = *u.space;
    if (sp.kind() != SpaceKind::VectorP2)
        throw std::invalid_argument("eval_div_at_quadrature: VectorP2 function required");
    const CellGeometry g = cell_geometry(sp.mesh(), cell);
    std::array<Vec2, 6> gn;
    p2_gradients(bary, g.grad_bary, gn);
    int dofs[12];
    sp.cell_dofs(cell, dofs);
    double div = 0;
    for (int i = 0; i < 6; ++i)
        div += u.coeffs[dofs[2 * i]] * gn[i].x + u.coeffs[dofs[2 * i + 1]] * gn[i].y;
    return div;
}

double eval_scalar(const FEFunction& f, int cell, const std::array<double, 3>& bary) {
    const FunctionSpace& sp = *f.space;
    if (sp.kind() != SpaceKind::ScalarP1)
        throw std::invalid_argument("eval_scalar: ScalarP1 function required");
    int dofs[3];
    sp.cell_dofs(cell, dofs);
    return f.coeffs[dofs[0]] * bary[0] + f.coeffs[dofs[1]] * bary[1] +
           f.coeffs[dofs[2]] * bary[2];
}

std::array<double, 2> eval_vector(const FEFunction& f, int cell,
                                  const std::array<double, 3>& bary) {
    const FunctionSpace& sp = *f.space;
    if (sp.kind() != SpaceKind::VectorP2)
        throw std::invalid_argument("eval_vector: VectorP2 function required");
    std::array<double, 6> n;
    p2_values(bary, n);
    int dofs[12];
    sp.cell_dofs(cell, dofs);
    std::array<double, 2> v{0.0, 0.0};
    for (int i = 0; i < 6; ++i) {
        v[0] += f.coeffs[dofs[2 * i]] * n[i];
        v[1] += f.coeffs[dofs[2 * i + 1]] * n[i];
    }
    return v;
}

double mean_value(const FEFunction& f) {
    const FunctionSpace& sp = *f.space;
    if (sp.kind() != SpaceKind::ScalarP1)
        throw std::invalid_argument("mean_value: ScalarP1 function required");
    const Mesh& mesh = sp.mesh();
    const QuadratureRule& qr = QuadratureRule::by_degree(4);
    double integral = 0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        for (std::size_t q = 0; q < qr.points.size(); ++q)
            integral += g.area * qr.weights[q] * eval_scalar(f, c, qr.points[q]);
    }
    return integral / mesh.total_area();
}

double l2_error(const FEFunction& f, const ScalarField& exact) {
    const FunctionSpace& sp = *f.space;
    const Mesh& mesh = sp.mesh();
    const QuadratureRule& qr = QuadratureRule::by_degree(6);
    double err = 0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        for (std::size_t q = 0; q < qr.points.size(); ++q) {
            const Vec2 p = barycentric_to_physical(g, qr.points[q]);
            const double d = eval_scalar(f, c, qr.points[q]) - exact(p.x, p.y);
            err += g.area * qr.weights[q] * d * d;
        }
    }
    return std::sqrt(err);
}

double l2_error(const FEFunction& f, const VectorField& exact) {
    const FunctionSpace& sp = *f.space;
    const Mesh& mesh = sp.mesh();
    const QuadratureRule& qr = QuadratureRule::by_degree(6);
    double err = 0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        for (std::size_t q = 0; q < qr.points.size(); ++q) {
            const Vec2 p = barycentric_to_physical(g, qr.points[q]);
            const auto fv = eval_vector(f, c, qr.points[q]);
            const auto ev = exact(p.x, p.y);
            const double dx = fv[0] - ev[0], dy = fv[1] - ev[1];
            err += g.area * qr.weights[q] * (dx * dx + dy * dy);
        }
    }
    return std::sqrt(err);
}

void write_dof_values(const FEFunction& f, std::ostream& os) {
    char buf[64];
    for (std::size_t d = 0; d < f.coeffs.size(); ++d) {
        std::snprintf(buf, sizeof buf, "%zu %.17g\n", d, f.coeffs[d]);
        os << buf;
    }
}

void write_vtk(const FEFunction& f, const std::string& field_name, std::ostream& os) {
    const FunctionSpace& sp = *f.space;
    const Mesh& mesh = sp.mesh();
    const bool vec = sp.kind() == SpaceKind::VectorP2;
    os << "# vtk DataFile Version 3.0\n" << field_name << "\nASCII\n";
    os << "DATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.vertex_count() << " double\n";
    char buf[96];
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Vec2& p = mesh.vertex(v);
        std::snprintf(buf, sizeof buf, "%.12g %.12g 0\n", p.x, p.y);
        os << buf;
    }
    os << "CELLS " << mesh.cell_count() << ' ' << 4 * mesh.cell_count() << '\n';
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto& cc = mesh.cell(c);
        os << "3 " << cc[0] << ' ' << cc[1] << ' ' << cc[2] << '\n';
    }
    os << "CELL_TYPES " << mesh.cell_count() << '\n';
    for (int c = 0; c < mesh.cell_count(); ++c) os << "5\n";
    os << "POINT_DATA " << mesh.vertex_count() << '\n';
    if (vec) {
        os << "VECTORS " << field_name << " double\n";
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            std::snprintf(buf, sizeof buf, "%.12g %.12g 0\n", f.coeffs[2 * v],
                          f.coeffs[2 * v + 1]);
            os << buf;
        }
    } else {
        os << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            std::snprintf(buf, sizeof buf, "%.12g\n", f.coeffs[v]);
            os << buf;
        }
    }
}

}  // namespace biotfs
