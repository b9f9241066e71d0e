#pragma once

#include "biotfs/fem.hpp"
#include "biotfs/physics.hpp"
#include "biotfs/sparse.hpp"

namespace biotfs {

/// Data of one implicit-Euler time step. `g` is the analytic part of the
/// step source (already including the tau factor); the previous-step state
/// enters through the optional FE pointers as (div u_prev, q) + S (p_prev, q).
struct StepData {
    VectorField f;  // body force; empty = zero
    ScalarField g;  // analytic step source; empty = zero
    const FEFunction* prev_u = nullptr;
    const FEFunction* prev_p = nullptr;
};

/// (eps(u), eps(w)) + lambda (div u, div w) on the VectorP2 space,
/// without boundary conditions applied.
CsrMatrix assemble_elasticity(const FunctionSpace& u_space, double lambda);

/// Coupling block B with B[i][j] = (q_j, div w_i); rows are displacement
/// dofs, columns pressure dofs. Its transpose realizes (div u, q).
CsrMatrix assemble_coupling(const FunctionSpace& u_space, const FunctionSpace& p_space);

/// tau (K(div u_current) grad p, grad q) + (S + L) (p, q). The conductivity
/// is evaluated pointwise at the quadrature points; u_current == nullptr
/// means zero displacement. Propagates ConductivityError.
CsrMatrix assemble_pressure(const FunctionSpace& p_space, const FEFunction* u_current,
                            const PermeabilityModel& model, double tau, double S,
                            double L);

/// Flow load vector (g, q) + L (p_iter, q) - (div u_iter, q), where (g, q)
/// combines the analytic source and the previous-step terms of `data`.
/// Null iterate pointers are treated as zero functions.
std::vector<double> assemble_rhs_flow(const FunctionSpace& p_space, const StepData& data,
                                      double S, const FEFunction* u_iter,
                                      const FEFunction* p_iter, double L);

/// Mechanics load vector (f, w) + (p_new, div w); Dirichlet rows are not
/// touched here (apply_dirichlet overwrites them).
std::vector<double> assemble_rhs_mech(const FunctionSpace& u_space, const VectorField& f,
                                      const FEFunction* p_new);

}  // namespace biotfs
