#include <doctest.h>

#include <cmath>

#include "biotfs/fixedstress.hpp"
#include "biotfs/manufactured.hpp"
#include "biotfs/theory.hpp"

using namespace biotfs;

namespace {

struct Setup {
    Mesh mesh;
    FunctionSpace us;
    FunctionSpace ps;
    ModelParameters params;
    StepData data;

    explicit Setup(int level, double lambda = 1e2, double tau = 1e-2, double S = 1e-4,
                   double K0 = 1e-6)
        : mesh(Mesh::build_lshape(level)),
          us(mesh, SpaceKind::VectorP2),
          ps(mesh, SpaceKind::ScalarP1) {
        params.lambda = lambda;
        params.S = S;
        params.tau = tau;
        params.L = l_star(lambda, 2);
        data.f = [lambda](double x, double y) {
            return manufactured::body_force(x, y, lambda);
        };
        data.g = [tau, K0, S](double x, double y) {
            return manufactured::flow_source(x, y, tau, K0, S);
        };
    }
};

double rel_l2(const FEFunction& a, const FEFunction& b) {
    FEFunction d = a;
    for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] -= b.coeffs[i];
    return norms(d).l2 / norms(b).l2;
}

}  // namespace

TEST_CASE("zero data converges to the zero solution in one iteration") {
    Setup s(0);
    s.data.f = nullptr;
    s.data.g = nullptr;
    const StepState prev = zero_state(s.us, s.ps);
    const PermeabilityModel model{Permeability::Constant, 1e-6, 0.0};

    StoppingRule stop;
    const StepResult r = fixed_stress_step(prev, s.params, model, s.data, stop);
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations == 1);
    CHECK(norm2(r.state.u.coeffs) == 0.0);
    CHECK(norm2(r.state.p.coeffs) == 0.0);
}

TEST_CASE("monolithic oracle: linear model needs no conductivity refreeze") {
    Setup s(0);
    const PermeabilityModel model{Permeability::Constant, 1e-6, 0.0};
    const StepState prev = zero_state(s.us, s.ps);
    const MonolithicResult r = monolithic_solve(prev, s.params, model, s.data);
    CHECK(r.picard_iterations <= 2);
    CHECK(r.final_increment == 0.0);

    // residual of the coupled equations vanishes at the oracle's solution
    const double res = coupled_residual(r.state, s.params, model, s.data);
    const std::vector<double> g =
        assemble_rhs_flow(s.ps, s.data, s.params.S, nullptr, nullptr, 0.0);
    std::vector<double> f = assemble_rhs_mech(s.us, s.data.f, nullptr);
    const double data_norm = std::hypot(norm2(f), norm2(g));
    CHECK(res <= 1e-10 * data_norm);
}

TEST_CASE("coupled residual at the zero state equals the load norm") {
    Setup s(0);
    const PermeabilityModel model{Permeability::Constant, 1e-6, 0.0};
    const StepState zero = zero_state(s.us, s.ps);
    const double res = coupled_residual(zero, s.params, model, s.data);

    const std::vector<double> g =
        assemble_rhs_flow(s.ps, s.data, s.params.S, nullptr, nullptr, 0.0);
    std::vector<double> f = assemble_rhs_mech(s.us, s.data.f, nullptr);
    for (int d : s.us.dirichlet_dofs()) f[d] = 0.0;
    CHECK(res == doctest::Approx(std::hypot(norm2(f), norm2(g))).epsilon(1e-12));
}

TEST_CASE("split iteration limit matches the monolithic solution (linear, h=1/32)") {
    Setup s(1);
    const PermeabilityModel model{Permeability::Constant, 1e-6, 0.0};
    const StepState prev = zero_state(s.us, s.ps);
    const StepState ref = monolithic_solve(prev, s.params, model, s.data).state;

    StoppingRule stop;
    stop.tol = 1e-10;
    stop.max_iter = 300;
    const StepResult r = fixed_stress_step(prev, s.params, model, s.data, stop);
    CHECK(r.trace.converged);
    CHECK(rel_l2(r.state.p, ref.p) < 1e-8);
    CHECK(rel_l2(r.state.u, ref.u) < 1e-8);
}

TEST_CASE("split limits agree with the oracle on every conductivity law") {
    Setup s(0);
    const StepState prev = zero_state(s.us, s.ps);
    for (Permeability v : {Permeability::Constant, Permeability::QuadraticDiv,
                           Permeability::SquaredAffine, Permeability::Exponential}) {
        const PermeabilityModel model{v, 1e-6, 1e-1};
        const StepState ref = monolithic_solve(prev, s.params, model, s.data).state;
        StoppingRule stop;
        stop.tol = 1e-11;
        stop.max_iter = 300;
        const StepResult r = fixed_stress_step(prev, s.params, model, s.data, stop);
        CHECK(r.trace.converged);
        CHECK(rel_l2(r.state.p, ref.p) < 1e-7);
        CHECK(rel_l2(r.state.u, ref.u) < 1e-7);
    }
}

TEST_CASE("residual stopping needs no more iterations than the increment rule") {
    Setup s(1);
    const PermeabilityModel model{Permeability::QuadraticDiv, 1e-6, 1e-1};
    const StepState prev = zero_state(s.us, s.ps);

    StoppingRule inc;
    const StepResult ri = fixed_stress_step(prev, s.params, model, s.data, inc);
    StoppingRule res;
    res.kind = StoppingRule::Kind::ResidualRatio;
    const StepResult rr = fixed_stress_step(prev, s.params, model, s.data, res);

    CHECK(ri.trace.converged);
    CHECK(rr.trace.converged);
    CHECK(rr.trace.iterations <= ri.trace.iterations);
}

TEST_CASE("residual decreases across iterations for the nonlinear model") {
    Setup s(0);
    const PermeabilityModel model{Permeability::QuadraticDiv, 1e-6, 1e-1};
    const StepState prev = zero_state(s.us, s.ps);
    StoppingRule stop;
    const StepResult r = fixed_stress_step(prev, s.params, model, s.data, stop);
    REQUIRE(r.trace.converged);
    for (std::size_t k = 1; k < r.trace.records.size(); ++k)
        CHECK(r.trace.records[k].residual_ratio < r.trace.records[k - 1].residual_ratio);
}

TEST_CASE("pressure-error contraction and displacement slaving on all laws") {
    // tau <= 1e-3 and L = L*: every ratio ||e_p^{i+1}||/||e_p^i|| below 1,
    // and the displacement error is slaved to the pressure error.
    Setup s(0, 1e2, 1e-3);
    const StepState prev = zero_state(s.us, s.ps);
    const double slave = std::sqrt(1.0 / (0.5 + s.params.lambda));
    for (Permeability v : {Permeability::Constant, Permeability::QuadraticDiv,
                           Permeability::SquaredAffine, Permeability::Exponential}) {
        const PermeabilityModel model{v, 1e-6, 1e-1};
        const StepState ref = monolithic_solve(prev, s.params, model, s.data).state;
        StoppingRule stop;
        stop.tol = 1e-8;
        stop.max_iter = 200;
        const StepResult r =
            fixed_stress_step(prev, s.params, model, s.data, stop, nullptr, &ref);
        REQUIRE(r.trace.converged);
        const auto& recs = r.trace.records;
        for (std::size_t k = 1; k < recs.size(); ++k) {
            // errors below the reference accuracy are measurement noise
            if (recs[k - 1].ep_l2 <= 1e-9) continue;
            CHECK(recs[k].ep_l2 / recs[k - 1].ep_l2 < 1.0);
        }
        for (const auto& rec : recs)
            CHECK(rec.eu_energy <= slave * rec.ep_l2 + 1e-9);
    }
}

TEST_CASE("coupled linear solutions converge at second order under refinement") {
    std::vector<double> ep, eu;
    for (int level : {0, 1}) {
        Setup s(level);
        const PermeabilityModel model{Permeability::Constant, 1e-6, 0.0};
        const StepState sol =
            monolithic_solve(zero_state(s.us, s.ps), s.params, model, s.data).state;
        const double p_mean = mean_value(sol.p);
        FEFunction p_shift = sol.p;
        for (auto& c : p_shift.coeffs) c -= p_mean;
        ep.push_back(l2_error(p_shift, [](double x, double y) {
            return manufactured::pressure(x, y);
        }));
        eu.push_back(l2_error(sol.u, [](double x, double y) {
            return manufactured::displacement(x, y);
        }));
    }
    CHECK(std::log2(ep[0] / ep[1]) > 1.8);
    CHECK(std::log2(eu[0] / eu[1]) > 1.8);
}

TEST_CASE("identical configurations produce bitwise-identical traces") {
    Setup s(0);
    const PermeabilityModel model{Permeability::QuadraticDiv, 1e-6, 1e-1};
    const StepState prev = zero_state(s.us, s.ps);
    StoppingRule stop;
    const StepResult a = fixed_stress_step(prev, s.params, model, s.data, stop);
    const StepResult b = fixed_stress_step(prev, s.params, model, s.data, stop);
    REQUIRE(a.trace.records.size() == b.trace.records.size());
    for (std::size_t k = 0; k < a.trace.records.size(); ++k) {
        CHECK(a.trace.records[k].increment_norm == b.trace.records[k].increment_norm);
        CHECK(a.trace.records[k].residual_ratio == b.trace.records[k].residual_ratio);
    }
    for (std::size_t i = 0; i < a.state.u.coeffs.size(); ++i)
        CHECK(a.state.u.coeffs[i] == b.state.u.coeffs[i]);
    for (std::size_t i = 0; i < a.state.p.coeffs.size(); ++i)
        CHECK(a.state.p.coeffs[i] == b.state.p.coeffs[i]);
}

TEST_CASE("a single time-series step reduces to fixed_stress_step") {
    Setup s(0);
    const PermeabilityModel model{Permeability::Constant, 1e-6, 0.0};
    const StepState initial = zero_state(s.us, s.ps);
    StoppingRule stop;

    const auto series = run_time_series(initial, 1, s.params, model, s.data.f,
                                        nullptr, stop);
    REQUIRE(series.size() == 1);

    StepData data;
    data.f = s.data.f;
    data.prev_u = &initial.u;
    data.prev_p = &initial.p;
    const StepResult single = fixed_stress_step(initial, s.params, model, data, stop);
    CHECK(series[0].trace.iterations == single.trace.iterations);
    for (std::size_t i = 0; i < single.state.p.coeffs.size(); ++i)
        CHECK(series[0].state.p.coeffs[i] == single.state.p.coeffs[i]);
}

TEST_CASE("stationary data drives the time series toward a steady state") {
    Setup s(0);
    const PermeabilityModel model{Permeability::Constant, 1e-6, 0.0};
    const StepState initial = zero_state(s.us, s.ps);
    StoppingRule stop;
    stop.tol = 1e-10;
    stop.max_iter = 300;

    ModelParameters params = s.params;
    const double lambda = params.lambda;
    const VectorField f = [lambda](double x, double y) {
        return manufactured::body_force(x, y, lambda);
    };
    const ScalarField g_tilde = [](double x, double y) {
        return -1e-6 * manufactured::pressure_laplacian(x, y);
    };
    const auto series = run_time_series(initial, 4, params, model, f, g_tilde, stop);
    REQUIRE(series.size() == 4);
    std::vector<double> step_change;
    const StepState* prev = &initial;
    for (const auto& r : series) {
        FEFunction d = r.state.p;
        for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] -= prev->p.coeffs[i];
        step_change.push_back(norms(d).l2);
        prev = &r.state;
    }
    for (std::size_t n = 2; n < step_change.size(); ++n)
        CHECK(step_change[n] < step_change[n - 1]);
}

TEST_CASE("large storage damps an unforced initial pressure monotonically") {
    Setup s(0);
    ModelParameters params = s.params;
    params.S = 1e3;
    params.tau = 0.1;
    const PermeabilityModel model{Permeability::Constant, 1.0, 0.0};

    StepState initial = zero_state(s.us, s.ps);
    initial.p = interpolate(s.ps, [](double x, double y) {
        return manufactured::phi(x, y);
    });
    StoppingRule stop;
    stop.tol = 1e-10;
    stop.max_iter = 300;
    const auto series =
        run_time_series(initial, 3, params, model, nullptr, nullptr, stop);
    std::vector<double> change;
    const StepState* prev = &initial;
    for (const auto& r : series) {
        FEFunction d = r.state.p;
        for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] -= prev->p.coeffs[i];
        change.push_back(norms(d).l2);
        prev = &r.state;
    }
    for (std::size_t n = 1; n < change.size(); ++n) CHECK(change[n] < change[n - 1]);
}

TEST_CASE("conductivity breakdown is reported with diagnostics") {
    Setup s(0);
    // initial guess with div u = 1 everywhere; the exponential law with a
    // large negative exponent underflows past the positivity guard
    const PermeabilityModel model{Permeability::Exponential, 1e-6, -800.0};
    StepState guess = zero_state(s.us, s.ps);
    guess.u = interpolate(s.us, [](double x, double) {
        return std::array<double, 2>{x, 0.0};
    });
    const StepState prev = zero_state(s.us, s.ps);
    StoppingRule stop;
    const StepResult r = fixed_stress_step(prev, s.params, model, s.data, stop, &guess);
    CHECK(r.trace.status == StepStatus::ConductivityBreakdown);
    CHECK_FALSE(r.trace.converged);
    CHECK_FALSE(r.trace.diagnostic.empty());
}
