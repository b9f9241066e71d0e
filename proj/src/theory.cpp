#include "biotfs/theory.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <stdexcept>

#include "biotfs/assembly.hpp"

namespace biotfs {

TheoryConstants make_theory_constants(double lambda, double L, double beta_s,
                                      double c_inf, const AssumptionConstants& ac,
                                      int d) {
    if (d != 2 && d != 3) throw std::invalid_argument("theory: d must be 2 or 3");
    if (lambda < 0.0 || L <= 0.0 || beta_s <= 0.0 || c_inf < 0.0)
        throw std::invalid_argument("theory: invalid constants");
    if (!(ac.k_min > 0.0)) throw std::invalid_argument("theory: k_min must be > 0");
    TheoryConstants tc;
    tc.d = d;
    tc.c_K = 1.0 / std::sqrt(static_cast<double>(d));
    tc.lambda = lambda;
    tc.beta_s = beta_s;
    tc.c_inf = c_inf;
    tc.k_lip = ac.k_lip;
    tc.k_min = ac.k_min;
    tc.L = L;
    tc.c = c_inf * ac.k_lip;
    tc.c0 = 0.5 * L;
    tc.c1 = 0.5 * L + 0.5 / (1.0 / (beta_s * beta_s) + lambda);
    if (!(tc.c0 > 0.0 && tc.c0 < tc.c1))
        throw std::invalid_argument("theory: expected 0 < c0 < c1");
    return tc;
}

double l_star(double lambda, int d) {
    if (lambda < 0.0 || (d != 2 && d != 3))
        throw std::invalid_argument("l_star: lambda >= 0 and d in {2,3} required");
    return 1.0 / (1.0 / d + lambda);
}

double contraction_bound(const TheoryConstants& tc, double tau) {
    if (tau <= 0.0) throw std::invalid_argument("contraction_bound: tau must be > 0");
    const double ck2_lam = tc.c_K * tc.c_K + tc.lambda;
    const double num =
        tc.c0 + tau / (4.0 * tc.k_min) * tc.c * tc.c / (ck2_lam * ck2_lam);
    return std::sqrt(num / tc.c1);
}

double quotient_c0_c1(double lambda, double beta_s, double L, int d) {
    const double c0 = 0.5 * L;
    const double c1 = 0.5 * L + 0.5 / (1.0 / (beta_s * beta_s) + lambda);
    (void)d;
    return c0 / c1;
}

double quotient_c0_c1_closed_form(double lambda, double beta_s) {
    const double inv_b2 = 1.0 / (beta_s * beta_s);
    return 1.0 / (1.0 + (1.0 + 2.0 * lambda) / (2.0 * inv_b2 + 2.0 * lambda));
}

double estimate_inf_sup(const Mesh& mesh, const FunctionSpace& u_space,
                        const FunctionSpace& p_space) {
    if (&u_space.mesh() != &mesh || &p_space.mesh() != &mesh)
        throw std::invalid_argument("estimate_inf_sup: spaces must live on the given mesh");
    const int np = p_space.dof_count();
    if (np > 5000)
        throw std::invalid_argument(
            "estimate_inf_sup: mesh too large for dense eigenproblem (> 5000 dofs)");

    const CsrMatrix a = assemble_elasticity(u_space, 0.0);  // strain Gram matrix
    const CsrMatrix b = assemble_coupling(u_space, p_space);
    const auto& mask = u_space.dirichlet_mask();

    // interior displacement dofs
    std::vector<int> interior;
    interior.reserve(u_space.dof_count());
    std::vector<int> position(u_space.dof_count(), -1);
    for (int i = 0; i < u_space.dof_count(); ++i) {
        if (!mask[i]) {
            position[i] = static_cast<int>(interior.size());
            interior.push_back(i);
        }
    }
    const int ni = static_cast<int>(interior.size());

    std::vector<Eigen::Triplet<double>> at;
    at.reserve(a.nnz());
    for (int r = 0; r < a.rows(); ++r) {
        if (mask[r]) continue;
        for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
            const int c = a.col_idx()[k];
            if (!mask[c]) at.emplace_back(position[r], position[c], a.values()[k]);
        }
    }
    Eigen::SparseMatrix<double> a_int(ni, ni);
    a_int.setFromTriplets(at.begin(), at.end());
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(a_int);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("estimate_inf_sup: strain Gram matrix not SPD");

    Eigen::MatrixXd b_int = Eigen::MatrixXd::Zero(ni, np);
    for (int r = 0; r < b.rows(); ++r) {
        if (mask[r]) continue;
        for (int k = b.row_ptr()[r]; k < b.row_ptr()[r + 1]; ++k)
            b_int(position[r], b.col_idx()[k]) = b.values()[k];
    }

    const Eigen::MatrixXd x = llt.solve(b_int);     // A^-1 B
    const Eigen::MatrixXd gram = b_int.transpose() * x;  // B^T A^-1 B

    const CsrMatrix m = assemble_pressure(p_space, nullptr,
                                          PermeabilityModel{Permeability::Constant, 1.0, 0.0},
                                          0.0, 1.0, 0.0);  // pressure mass matrix
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(np, np);
    for (int r = 0; r < np; ++r)
        for (int k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
            mass(r, m.col_idx()[k]) = m.values()[k];

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, mass);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("estimate_inf_sup: eigensolver failed");
    const auto& ev = es.eigenvalues();
    const double cutoff = 1e-10 * std::max(1.0, ev(np - 1));
    for (int i = 0; i < np; ++i)
        if (ev(i) > cutoff) return std::sqrt(ev(i));
    throw std::runtime_error("estimate_inf_sup: no nonzero singular value found");
}

}  // namespace biotfs
