#pragma once

#include <array>

namespace biotfs::manufactured {

/// Test fields on the L-shaped domain, built from
/// phi = (sin(2 pi x) sin(2 pi y))^2:
///   pressure     p = phi - 1/4            (zero mean over the L-shape)
///   displacement u = 0.01 (phi_y, phi_x)  (vanishes on the whole boundary)
/// The loads make (u, p) solve the scaled single-step system with constant
/// conductivity K0.

double phi(double x, double y);
double pressure(double x, double y);
std::array<double, 2> pressure_gradient(double x, double y);
double pressure_laplacian(double x, double y);

std::array<double, 2> displacement(double x, double y);
double displacement_divergence(double x, double y);

/// f = -div(eps(u) + lambda div(u) I) + grad p
std::array<double, 2> body_force(double x, double y, double lambda);

/// g = div u - tau K0 lap p + S p. The flow source printed with the
/// opposite sign does not satisfy the step equations; the residual check in
/// the tests pins this orientation.
double flow_source(double x, double y, double tau, double K0, double S);

/// sup |grad p| over the L-shape by dense grid sampling.
double pressure_gradient_sup(int grid = 2048);

}  // namespace biotfs::manufactured
