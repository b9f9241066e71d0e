#include "biotfs/fixedstress.hpp"

#include <cmath>
#include <stdexcept>

#include "biotfs/solver.hpp"

namespace biotfs {

namespace {

double stacked_increment(const StepState& a, const StepState& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.u.coeffs.size(); ++i) {
        const double d = a.u.coeffs[i] - b.u.coeffs[i];
        s += d * d;
    }
    for (std::size_t i = 0; i < a.p.coeffs.size(); ++i) {
        const double d = a.p.coeffs[i] - b.p.coeffs[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Residual of the coupled step equations with prebuilt mechanics blocks.
// The mechanics matrix is the constrained one; constrained rows reduce to
// u_i - 0, so coupling contributions are masked out there.
double residual_with(const CsrMatrix& a_c, const CsrMatrix& b,
                     const std::vector<double>& f_c, const StepState& state,
                     const ModelParameters& params, const PermeabilityModel& model,
                     const StepData& data, const FunctionSpace& p_space) {
    const int nu = a_c.rows();
    const int np = b.cols();
    const FunctionSpace& u_space = *state.u.space;
    std::vector<double> ru(nu), tmp(nu);
    a_c.multiply(state.u.coeffs, ru);
    b.multiply(state.p.coeffs, tmp);
    for (int d : u_space.dirichlet_dofs()) tmp[d] = 0.0;
    for (int i = 0; i < nu; ++i) ru[i] -= tmp[i] + f_c[i];

    const CsrMatrix pm =
        assemble_pressure(p_space, &state.u, model, params.tau, params.S, 0.0);
    std::vector<double> rp(np), btu(np);
    pm.multiply(state.p.coeffs, rp);
    b.multiply_transpose(state.u.coeffs, btu);
    const std::vector<double> g =
        assemble_rhs_flow(p_space, data, params.S, nullptr, nullptr, 0.0);
    double s = 0.0;
    for (int j = 0; j < np; ++j) {
        const double r = rp[j] + btu[j] - g[j];
        s += r * r;
    }
    for (int i = 0; i < nu; ++i) s += ru[i] * ru[i];
    return std::sqrt(s);
}

void zero_dirichlet_rows(std::vector<double>& rhs, const std::vector<int>& dofs) {
    for (int d : dofs) rhs[d] = 0.0;
}

}  // namespace

StepState zero_state(const FunctionSpace& u_space, const FunctionSpace& p_space) {
    StepState s;
    s.u = FEFunction(u_space);
    s.p = FEFunction(p_space);
    return s;
}

StepResult fixed_stress_step(const StepState& prev, const ModelParameters& params,
                             const PermeabilityModel& model, const StepData& data,
                             const StoppingRule& stop, const StepState* initial_guess,
                             const StepState* reference) {
    params.validate();
    const FunctionSpace& u_space = *prev.u.space;
    const FunctionSpace& p_space = *prev.p.space;

    CsrMatrix a = assemble_elasticity(u_space, params.lambda);
    const CsrMatrix b = assemble_coupling(u_space, p_space);
    const CsrMatrix a_c = eliminate_dirichlet(a, u_space.dirichlet_mask());
    const SparseCholesky mech(a_c);

    // body-force part of the mechanics rhs is iteration-independent
    std::vector<double> f_vec = assemble_rhs_mech(u_space, data.f, nullptr);
    zero_dirichlet_rows(f_vec, u_space.dirichlet_dofs());

    StepState cur = initial_guess ? *initial_guess : prev;
    cur.time_index = prev.time_index + 1;

    StepResult out;
    try {
        out.trace.r0 = residual_with(a_c, b, f_vec, cur, params, model, data, p_space);
    } catch (const ConductivityError& e) {
        out.trace.status = StepStatus::ConductivityBreakdown;
        out.trace.diagnostic = e.what();
        out.state = cur;
        return out;
    }

    auto record_errors = [&](IterationRecord& rec, const StepState& st) {
        if (!reference) return;
        FEFunction ep = st.p;
        for (std::size_t i = 0; i < ep.coeffs.size(); ++i)
            ep.coeffs[i] -= reference->p.coeffs[i];
        rec.ep_l2 = norms(ep).l2;
        FEFunction eu = st.u;
        for (std::size_t i = 0; i < eu.coeffs.size(); ++i)
            eu.coeffs[i] -= reference->u.coeffs[i];
        const auto sd = strain_div_norms(eu);
        rec.eu_energy = std::sqrt(sd.strain_l2 * sd.strain_l2 +
                                  params.lambda * sd.div_l2 * sd.div_l2);
    };

    for (int k = 1; k <= stop.max_iter; ++k) {
        StepState next = cur;
        IterationRecord rec;
        try {
            // (a) flow solve with K frozen at the current displacement
            SparseSystem flow;
            flow.matrix =
                assemble_pressure(p_space, &cur.u, model, params.tau, params.S, params.L);
            flow.rhs = assemble_rhs_flow(p_space, data, params.S, &cur.u, &cur.p, params.L);
            next.p.coeffs = solve_spd(flow.matrix, flow.rhs);

            // (b) mechanics solve with the new pressure
            std::vector<double> rhs_u = assemble_rhs_mech(u_space, data.f, &next.p);
            zero_dirichlet_rows(rhs_u, u_space.dirichlet_dofs());
            next.u.coeffs = mech.solve(rhs_u);

            rec.increment_norm = stacked_increment(next, cur);
            const double rk =
                residual_with(a_c, b, f_vec, next, params, model, data, p_space);
            rec.residual_ratio = out.trace.r0 > 0.0 ? rk / out.trace.r0 : 0.0;
        } catch (const ConductivityError& e) {
            out.trace.status = StepStatus::ConductivityBreakdown;
            out.trace.diagnostic = e.what();
            out.state = cur;
            return out;
        }
        record_errors(rec, next);
        out.trace.records.push_back(rec);
        out.trace.iterations = k;
        cur = next;

        const bool done = stop.kind == StoppingRule::Kind::Increment
                              ? rec.increment_norm < stop.tol
                              : rec.residual_ratio < stop.tol;
        if (done) {
            out.trace.converged = true;
            out.trace.status = StepStatus::Converged;
            break;
        }
    }
    out.state = cur;
    return out;
}

MonolithicResult monolithic_solve(const StepState& prev, const ModelParameters& params,
                                  const PermeabilityModel& model, const StepData& data,
                                  double picard_tol, int max_iter) {
    params.validate();
    const FunctionSpace& u_space = *prev.u.space;
    const FunctionSpace& p_space = *prev.p.space;
    const int nu = u_space.dof_count();
    const int np = p_space.dof_count();
    const auto& mask = u_space.dirichlet_mask();

    const CsrMatrix a = assemble_elasticity(u_space, params.lambda);
    const CsrMatrix b = assemble_coupling(u_space, p_space);

    std::vector<double> f_vec = assemble_rhs_mech(u_space, data.f, nullptr);
    for (int d : u_space.dirichlet_dofs()) f_vec[d] = 0.0;
    const std::vector<double> g_vec =
        assemble_rhs_flow(p_space, data, params.S, nullptr, nullptr, 0.0);

    std::vector<double> rhs(nu + np);
    for (int i = 0; i < nu; ++i) rhs[i] = f_vec[i];
    for (int j = 0; j < np; ++j) rhs[nu + j] = g_vec[j];

    MonolithicResult out;
    out.state = prev;
    out.state.time_index = prev.time_index + 1;

    for (int m = 1; m <= max_iter; ++m) {
        const CsrMatrix pm =
            assemble_pressure(p_space, &out.state.u, model, params.tau, params.S, 0.0);

        std::vector<Triplet> trip;
        trip.reserve(a.nnz() + 2 * b.nnz() + pm.nnz());
        for (int r = 0; r < nu; ++r) {
            if (mask[r]) {
                trip.push_back({r, r, 1.0});
                continue;
            }
            for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k)
                if (!mask[a.col_idx()[k]])
                    trip.push_back({r, a.col_idx()[k], a.values()[k]});
            for (int k = b.row_ptr()[r]; k < b.row_ptr()[r + 1]; ++k) {
                trip.push_back({r, nu + b.col_idx()[k], -b.values()[k]});
                trip.push_back({nu + b.col_idx()[k], r, b.values()[k]});
            }
        }
        for (int r = 0; r < np; ++r)
            for (int k = pm.row_ptr()[r]; k < pm.row_ptr()[r + 1]; ++k)
                trip.push_back({nu + r, nu + pm.col_idx()[k], pm.values()[k]});

        const CsrMatrix block = CsrMatrix::from_triplets(nu + np, nu + np, std::move(trip));
        const std::vector<double> x = solve_sparse_lu(block, rhs);

        StepState next = out.state;
        next.u.coeffs.assign(x.begin(), x.begin() + nu);
        next.p.coeffs.assign(x.begin() + nu, x.end());
        const double prev_increment = out.final_increment;
        out.final_increment = stacked_increment(next, out.state);
        out.state = next;
        out.picard_iterations = m;
        if (out.final_increment < picard_tol) return out;
        // the contraction stalls at the roundoff floor of the block solve;
        // accept the iterate once increments are tiny relative to the state
        // and have stopped shrinking
        const double state_norm =
            std::hypot(norm2(out.state.u.coeffs), norm2(out.state.p.coeffs));
        if (m >= 3 && out.final_increment <= 1e-7 * std::max(1.0, state_norm) &&
            out.final_increment >= 0.25 * prev_increment)
            return out;
    }
    throw std::runtime_error("monolithic_solve: Picard iteration did not converge");
}

double coupled_residual(const StepState& state, const ModelParameters& params,
                        const PermeabilityModel& model, const StepData& data) {
    const FunctionSpace& u_space = *state.u.space;
    const FunctionSpace& p_space = *state.p.space;
    CsrMatrix a = assemble_elasticity(u_space, params.lambda);
    const CsrMatrix a_c = eliminate_dirichlet(a, u_space.dirichlet_mask());
    const CsrMatrix b = assemble_coupling(u_space, p_space);
    std::vector<double> f_vec = assemble_rhs_mech(u_space, data.f, nullptr);
    for (int d : u_space.dirichlet_dofs()) f_vec[d] = 0.0;
    return residual_with(a_c, b, f_vec, state, params, model, data, p_space);
}

std::vector<StepResult> run_time_series(const StepState& initial, int n_steps,
                                        const ModelParameters& params,
                                        const PermeabilityModel& model,
                                        const VectorField& f, const ScalarField& g_tilde,
                                        const StoppingRule& stop) {
    if (n_steps < 1) throw std::invalid_argument("run_time_series: n_steps must be >= 1");
    std::vector<StepResult> out;
    out.reserve(n_steps);
    const StepState* prev = &initial;
    for (int n = 0; n < n_steps; ++n) {
        StepData data;
        data.f = f;
        if (g_tilde) {
            const double tau = params.tau;
            data.g = [tau, &g_tilde](double x, double y) { return tau * g_tilde(x, y); };
        }
        data.prev_u = &prev->u;
        data.prev_p = &prev->p;
        StepResult r = fixed_stress_step(*prev, params, model, data, stop);
        if (r.trace.status == StepStatus::ConductivityBreakdown)
            throw std::runtime_error("run_time_series: conductivity breakdown at step " +
                                     std::to_string(n + 1) + ": " + r.trace.diagnostic);
        out.push_back(std::move(r));
        prev = &out.back().state;
    }
    return out;
}

}  // namespace biotfs
