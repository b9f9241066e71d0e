#pragma once

#include "biotfs/fem.hpp"
#include "biotfs/mesh.hpp"
#include "biotfs/physics.hpp"

namespace biotfs {

/// Constants entering the contraction estimate of the splitting iteration.
/// c_K = 1/sqrt(d); c = c_inf * k_lip; c0 = L/2;
/// c1 = L/2 + 1/(2 (beta_s^-2 + lambda)).
struct TheoryConstants {
    int d = 2;
    double c_K = 0.0;
    double lambda = 0.0;
    double beta_s = 0.0;
    double c_inf = 0.0;
    double k_lip = 0.0;
    double k_min = 0.0;
    double L = 0.0;
    double c = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
};

/// Validates 0 < c0 < c1 and the positivity of every constant.
TheoryConstants make_theory_constants(double lambda, double L, double beta_s,
                                      double c_inf, const AssumptionConstants& ac,
                                      int d = 2);

/// Reference stabilization parameter L* = 1/(1/d + lambda).
double l_star(double lambda, int d = 2);

/// Per-iteration bound on ||e_p^{i+1}|| / ||e_p^i||:
/// sqrt((c0 + tau/(4 k_min) * c^2/(c_K^2+lambda)^2) / c1).
double contraction_bound(const TheoryConstants& tc, double tau);

/// Direct ratio c0/c1 for the given L.
double quotient_c0_c1(double lambda, double beta_s, double L, int d = 2);

/// Closed form 1/(1 + (1+2 lambda)/(2 beta_s^-2 + 2 lambda)), the value of
/// c0/c1 at L = L* in two dimensions.
double quotient_c0_c1_closed_form(double lambda, double beta_s);

/// Discrete stand-in for the Stokes inf-sup constant of the P2/P1 pair:
/// smallest nonzero generalized singular value of the divergence coupling
/// in the strain seminorm, via a dense eigenproblem in pressure space.
/// Refuses meshes whose pressure space exceeds 5000 dofs.
double estimate_inf_sup(const Mesh& mesh, const FunctionSpace& u_space,
                        const FunctionSpace& p_space);

}  // namespace biotfs
