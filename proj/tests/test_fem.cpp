#include <doctest.h>

#include <cmath>
#include <sstream>

#include "biotfs/fem.hpp"
#include "biotfs/manufactured.hpp"
#include "oracles.hpp"

using namespace biotfs;

TEST_CASE("quadrature rules integrate reference-triangle monomials exactly") {
    for (int degree : {1, 2, 4, 6}) {
        const QuadratureRule& qr = QuadratureRule::by_degree(degree);
        double wsum = 0.0;
        for (double w : qr.weights) wsum += w;
        CHECK(std::abs(wsum - 1.0) < 1e-14);
        for (int a = 0; a <= degree; ++a) {
            for (int b = 0; a + b <= degree; ++b) {
                double integral = 0.0;
                for (std::size_t q = 0; q < qr.points.size(); ++q)
                    integral += qr.weights[q] * std::pow(qr.points[q][1], a) *
                                std::pow(qr.points[q][2], b);
                // normalized monomial integral: 2 a! b! / (a+b+2)!
                double exact = 2.0;
                for (int k = 1; k <= a; ++k) exact *= k;
                for (int k = 1; k <= b; ++k) exact *= k;
                for (int k = 1; k <= a + b + 2; ++k) exact /= k;
                CHECK(std::abs(integral - exact) < 1e-14);
            }
        }
    }
}

TEST_CASE("space dimensions follow the mesh counts") {
    const Mesh m = Mesh::build_lshape(0);
    const FunctionSpace us(m, SpaceKind::VectorP2);
    const FunctionSpace ps(m, SpaceKind::ScalarP1);
    CHECK(ps.dof_count() == m.vertex_count());
    CHECK(us.dof_count() == 2 * (m.vertex_count() + m.edge_count()));
    // boundary dofs: two components per boundary vertex and per boundary edge
    CHECK(static_cast<int>(us.dirichlet_dofs().size()) == 4 * m.boundary_edge_count());
}

TEST_CASE("P1/P2 bases form a partition of unity at quadrature points") {
    const Mesh m = Mesh::build_lshape(0);
    const QuadratureRule& qr = QuadratureRule::by_degree(4);
    for (std::size_t q = 0; q < qr.points.size(); ++q) {
        const auto& l = qr.points[q];
        CHECK(std::abs(l[0] + l[1] + l[2] - 1.0) < 1e-15);
        std::array<double, 6> n;
        p2_values(l, n);
        double s = 0.0;
        for (double v : n) s += v;
        CHECK(std::abs(s - 1.0) < 1e-14);
    }
    // gradients of a partition of unity sum to zero
    const CellGeometry g = cell_geometry(m, 7);
    std::array<Vec2, 6> gn;
    p2_gradients(qr.points[0], g.grad_bary, gn);
    double sx = 0, sy = 0;
    for (const auto& v : gn) {
        sx += v.x;
        sy += v.y;
    }
    CHECK(std::abs(sx) < 1e-12);
    CHECK(std::abs(sy) < 1e-12);
}

TEST_CASE("interpolation reproduces polynomials of the space degree") {
    const Mesh m = Mesh::build_lshape(0);
    const FunctionSpace ps(m, SpaceKind::ScalarP1);
    const FunctionSpace us(m, SpaceKind::VectorP2);

    const FEFunction ones = interpolate(ps, [](double, double) { return 1.0; });
    for (double c : ones.coeffs) CHECK(c == 1.0);

    // linear scalar reproduced exactly at arbitrary interior points
    const FEFunction lin =
        interpolate(ps, [](double x, double y) { return 2.0 * x - 3.0 * y + 0.25; });
    const std::array<double, 3> pt{0.3, 0.5, 0.2};
    for (int c : {0, 5, 100}) {
        const CellGeometry g = cell_geometry(m, c);
        const Vec2 x = barycentric_to_physical(g, pt);
        CHECK(eval_scalar(lin, c, pt) ==
              doctest::Approx(2.0 * x.x - 3.0 * x.y + 0.25).epsilon(1e-13));
    }

    // quadratic vector field reproduced exactly by VectorP2
    const FEFunction quad = interpolate(us, [](double x, double y) {
        return std::array<double, 2>{x * x, x * y};
    });
    for (int c : {3, 42, 200}) {
        const CellGeometry g = cell_geometry(m, c);
        const Vec2 x = barycentric_to_physical(g, pt);
        const auto v = eval_vector(quad, c, pt);
        CHECK(v[0] == doctest::Approx(x.x * x.x).epsilon(1e-12));
        CHECK(v[1] == doctest::Approx(x.x * x.y).epsilon(1e-12));
    }
}

TEST_CASE("interpolated manufactured displacement vanishes on the boundary") {
    const Mesh m = Mesh::build_lshape(1);
    const FunctionSpace us(m, SpaceKind::VectorP2);
    const FEFunction u = interpolate(us, [](double x, double y) {
        return manufactured::displacement(x, y);
    });
    for (int d : us.dirichlet_dofs()) CHECK(std::abs(u.coeffs[d]) < 1e-14);
}

TEST_CASE("mean of the interpolated phi approaches 1/4") {
    // oracle: integral of phi over the L-shape is 3/16 (|Omega| = 3/4)
    const double integral = oracles::integrate_lshape(
        [](double x, double y) { return manufactured::phi(x, y); });
    CHECK(std::abs(integral - 3.0 / 16.0) < 1e-12);

    const Mesh m = Mesh::build_lshape(2);
    const FunctionSpace ps(m, SpaceKind::ScalarP1);
    const FEFunction phi_h =
        interpolate(ps, [](double x, double y) { return manufactured::phi(x, y); });
    CHECK(mean_value(phi_h) == doctest::Approx(0.25).epsilon(5e-3));
}

TEST_CASE("divergence of VectorP2 interpolants") {
    const Mesh m = Mesh::build_lshape(0);
    const FunctionSpace us(m, SpaceKind::VectorP2);
    const std::array<double, 3> pt{1.0 / 3, 1.0 / 3, 1.0 / 3};

    const FEFunction affine = interpolate(us, [](double x, double y) {
        return std::array<double, 2>{x, y};
    });
    const FEFunction rotation = interpolate(us, [](double x, double y) {
        return std::array<double, 2>{-y, x};
    });
    for (int c : {0, 17, 300}) {
        CHECK(eval_div_at_quadrature(affine, c, pt) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::abs(eval_div_at_quadrature(rotation, c, pt)) < 1e-12);
    }
}

TEST_CASE("divergence of the interpolated manufactured field matches the derivative") {
    const Mesh m = Mesh::build_lshape(1);  // h = 1/32
    const FunctionSpace us(m, SpaceKind::VectorP2);
    const FEFunction u = interpolate(us, [](double x, double y) {
        return manufactured::displacement(x, y);
    });
    const std::array<double, 3> centroid{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double worst = 0.0;
    for (int c = 0; c < m.cell_count(); ++c) {
        const CellGeometry g = cell_geometry(m, c);
        const Vec2 x = barycentric_to_physical(g, centroid);
        const double analytic = manufactured::displacement_divergence(x.x, x.y);
        worst = std::max(worst, std::abs(eval_div_at_quadrature(u, c, centroid) - analytic));
    }
    CHECK(worst < 10.0 * m.h());  // O(h) for the P1 divergence of the interpolant
}

TEST_CASE("norms of simple fields") {
    const Mesh m = Mesh::build_lshape(0);
    const FunctionSpace ps(m, SpaceKind::ScalarP1);

    const FEFunction one = interpolate(ps, [](double, double) { return 1.0; });
    const Norms n1 = norms(one);
    CHECK(n1.l2 == doctest::Approx(std::sqrt(0.75)).epsilon(1e-13));
    CHECK(n1.h1_semi < 1e-13);

    const FEFunction zero(ps);
    const Norms n0 = norms(zero);
    CHECK(n0.l2 == 0.0);
    CHECK(n0.h1_semi == 0.0);
}

TEST_CASE("L2 norm of the interpolated phi approaches the analytic value") {
    // oracle: integral of phi^2 over the L-shape = 27/256
    const double integral = oracles::integrate_lshape(
        [](double x, double y) { return std::pow(manufactured::phi(x, y), 2); });
    CHECK(std::abs(integral - 27.0 / 256.0) < 1e-12);

    const Mesh m = Mesh::build_lshape(2);  // h = 1/64
    const FunctionSpace ps(m, SpaceKind::ScalarP1);
    const FEFunction phi_h =
        interpolate(ps, [](double x, double y) { return manufactured::phi(x, y); });
    CHECK(norms(phi_h).l2 == doctest::Approx(std::sqrt(27.0 / 256.0)).epsilon(2e-2));
}

TEST_CASE("dof dump and VTK writer emit well-formed output") {
    const Mesh m = Mesh::build_lshape(0);
    const FunctionSpace ps(m, SpaceKind::ScalarP1);
    const FEFunction f =
        interpolate(ps, [](double x, double y) { return x + 2.0 * y; });

    std::ostringstream dump;
    write_dof_values(f, dump);
    int lines = 0;
    for (char c : dump.str()) lines += c == '\n';
    CHECK(lines == ps.dof_count());

    std::ostringstream vtk;
    write_vtk(f, "pressure", vtk);
    CHECK(vtk.str().rfind("# vtk DataFile Version 3.0", 0) == 0);
    CHECK(vtk.str().find("SCALARS pressure double 1") != std::string::npos);
}
