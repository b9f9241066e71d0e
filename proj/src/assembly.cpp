#include "biotfs/assembly.hpp"

namespace biotfs {

namespace {

const QuadratureRule& form_rule() { return QuadratureRule::by_degree(4); }

double local_div(const FEFunction& u, const int* udofs, const std::array<Vec2, 6>& gn) {
    double div = 0.0;
    for (int i = 0; i < 6; ++i)
        div += u.coeffs[udofs[2 * i]] * gn[i].x + u.coeffs[udofs[2 * i + 1]] * gn[i].y;
    return div;
}

double local_p1(const FEFunction& p, const int* pdofs, const std::array<double, 3>& l) {
    return p.coeffs[pdofs[0]] * l[0] + p.coeffs[pdofs[1]] * l[1] + p.coeffs[pdofs[2]] * l[2];
}

}  // namespace

CsrMatrix assemble_elasticity(const FunctionSpace& u_space, double lambda) {
    const Mesh& mesh = u_space.mesh();
    const QuadratureRule& qr = form_rule();
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(mesh.cell_count()) * 144);
    int dofs[12];
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        u_space.cell_dofs(c, dofs);
        double local[12][12] = {};
        for (std::size_t q = 0; q < qr.points.size(); ++q) {
            std::array<Vec2, 6> gn;
            p2_gradients(qr.points[q], g.grad_bary, gn);
            const double w = g.area * qr.weights[q];
            for (int a = 0; a < 6; ++a) {
                const double ga[2] = {gn[a].x, gn[a].y};
                for (int b = 0; b < 6; ++b) {
                    const double gb[2] = {gn[b].x, gn[b].y};
                    const double dotg = ga[0] * gb[0] + ga[1] * gb[1];
                    for (int ci = 0; ci < 2; ++ci)
                        for (int di = 0; di < 2; ++di) {
                            double v = 0.5 * (ga[di] * gb[ci]);
                            if (ci == di) v += 0.5 * dotg;
                            v += lambda * ga[ci] * gb[di];
                            local[2 * a + ci][2 * b + di] += w * v;
                        }
                }
            }
        }
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                trip.push_back({dofs[i], dofs[j], local[i][j]});
    }
    return CsrMatrix::from_triplets(u_space.dof_count(), u_space.dof_count(),
                                    std::move(trip));
}

CsrMatrix assemble_coupling(const FunctionSpace& u_space, const FunctionSpace& p_space) {
    const Mesh& mesh = u_space.mesh();
    const QuadratureRule& qr = form_rule();
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(mesh.cell_count()) * 36);
    int udofs[12], pdofs[3];
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        u_space.cell_dofs(c, udofs);
        p_space.cell_dofs(c, pdofs);
        double local[12][3] = {};
        for (std::size_t q = 0; q < qr.points.size(); ++q) {
            std::array<Vec2, 6> gn;
            p2_gradients(qr.points[q], g.grad_bary, gn);
            const auto& l = qr.points[q];
            const double w = g.area * qr.weights[q];
            for (int a = 0; a < 6; ++a) {
                const double div_x = gn[a].x;  // div of (N_a, 0)
                const double div_y = gn[a].y;  // div of (0, N_a)
                for (int j = 0; j < 3; ++j) {
                    local[2 * a][j] += w * l[j] * div_x;
                    local[2 * a + 1][j] += w * l[j] * div_y;
                }
            }
        }
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 3; ++j)
                trip.push_back({udofs[i], pdofs[j], local[i][j]});
    }
    return CsrMatrix::from_triplets(u_space.dof_count(), p_space.dof_count(),
                                    std::move(trip));
}

CsrMatrix assemble_pressure(const FunctionSpace& p_space, const FEFunction* u_current,
                            const PermeabilityModel& model, double tau, double S,
                            double L) {
    const Mesh& mesh = p_space.mesh();
    const QuadratureRule& qr = form_rule();
    const FunctionSpace* u_space = u_current ? u_current->space : nullptr;
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(mesh.cell_count()) * 9);
    int pdofs[3], udofs[12];
    const double mass_coeff = S + L;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        p_space.cell_dofs(c, pdofs);
        if (u_space) u_space->cell_dofs(c, udofs);
        double local[3][3] = {};
        for (std::size_t q = 0; q < qr.points.size(); ++q) {
            const auto& l = qr.points[q];
            const double w = g.area * qr.weights[q];
            double div_u = 0.0;
            if (u_current) {
                std::array<Vec2, 6> gn;
                p2_gradients(l, g.grad_bary, gn);
                div_u = local_div(*u_current, udofs, gn);
            }
            const double k = eval_K(model, div_u);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double stiff = g.grad_bary[i].x * g.grad_bary[j].x +
                                         g.grad_bary[i].y * g.grad_bary[j].y;
                    local[i][j] += w * (tau * k * stiff + mass_coeff * l[i] * l[j]);
                }
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trip.push_back({pdofs[i], pdofs[j], local[i][j]});
    }
    return CsrMatrix::from_triplets(p_space.dof_count(), p_space.dof_count(),
                                    std::move(trip));
}

std::vector<double> assemble_rhs_flow(const FunctionSpace& p_space, const StepData& data,
                                      double S, const FEFunction* u_iter,
                                      const FEFunction* p_iter, double L) {
    const Mesh& mesh = p_space.mesh();
    const QuadratureRule& qr = form_rule();
    std::vector<double> rhs(p_space.dof_count(), 0.0);
    int pdofs[3], udofs[12];
    const FunctionSpace* u_space =
        u_iter ? u_iter->space : (data.prev_u ? data.prev_u->space : nullptr);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        p_space.cell_dofs(c, pdofs);
        if (u_space) u_space->cell_dofs(c, udofs);
        for (std::size_t q = 0; q < qr.points.size(); ++q) {
            const auto& l = qr.points[q];
            const double w = g.area * qr.weights[q];
            const Vec2 x = barycentric_to_physical(g, l);
            double val = data.g ? data.g(x.x, x.y) : 0.0;
            if (data.prev_u || u_iter) {
                std::array<Vec2, 6> gn;
                p2_gradients(l, g.grad_bary, gn);
                if (data.prev_u) val += local_div(*data.prev_u, udofs, gn);
                if (u_iter) val -= local_div(*u_iter, udofs, gn);
            }
            if (data.prev_p) val += S * local_p1(*data.prev_p, pdofs, l);
            if (p_iter) val += L * local_p1(*p_iter, pdofs, l);
            for (int j = 0; j < 3; ++j) rhs[pdofs[j]] += w * val * l[j];
        }
    }
    return rhs;
}

std::vector<double> assemble_rhs_mech(const FunctionSpace& u_space, const VectorField& f,
                                      const FEFunction* p_new) {
    const Mesh& mesh = u_space.mesh();
    const QuadratureRule& qr = form_rule();
    std::vector<double> rhs(u_space.dof_count(), 0.0);
    int udofs[12];
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(mesh, c);
        u_space.cell_dofs(c, udofs);
        for (std::size_t q = 0; q < qr.points.size(); ++q) {
            const auto& l = qr.points[q];
            const double w = g.area * qr.weights[q];
            const Vec2 x = barycentric_to_physical(g, l);
            const std::array<double, 2> fv = f ? f(x.x, x.y) : std::array<double, 2>{0, 0};
            const double p = p_new ? eval_scalar(*p_new, c, l) : 0.0;
            std::array<double, 6> n;
            std::array<Vec2, 6> gn;
            p2_values(l, n);
            p2_gradients(l, g.grad_bary, gn);
            for (int a = 0; a < 6; ++a) {
                rhs[udofs[2 * a]] += w * (fv[0] * n[a] + p * gn[a].x);
                rhs[udofs[2 * a + 1]] += w * (fv[1] * n[a] + p * gn[a].y);
            }
        }
    }
    return rhs;
}

}  // namespace biotfs
