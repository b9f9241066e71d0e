#pragma once

#include <string>
#include <vector>

#include "biotfs/assembly.hpp"
#include "biotfs/fem.hpp"
#include "biotfs/physics.hpp"

namespace biotfs {

struct StoppingRule {
    enum class Kind { Increment, ResidualRatio };
    Kind kind = Kind::Increment;
    double tol = 1e-6;
    int max_iter = 100;
};

enum class StepStatus { Converged, MaxIterReached, ConductivityBreakdown };

struct IterationRecord {
    double increment_norm = 0.0;  // ||x_{k} - x_{k-1}|| over stacked coefficients
    double residual_ratio = 0.0;  // ||r_k|| / ||r_0||
    double ep_l2 = 0.0;           // ||p^k - p_ref||_L2 (reference runs only)
    double eu_energy = 0.0;       // (||eps(e_u)||^2 + lambda ||div e_u||^2)^1/2
};

struct IterationTrace {
    std::vector<IterationRecord> records;
    int iterations = 0;
    bool converged = false;
    StepStatus status = StepStatus::MaxIterReached;
    std::string diagnostic;
    double r0 = 0.0;  // residual at the initial guess
};

struct StepState {
    FEFunction u;
    FEFunction p;
    int time_index = 0;
};

StepState zero_state(const FunctionSpace& u_space, const FunctionSpace& p_space);

struct StepResult {
    StepState state;
    IterationTrace trace;
};

/// One time step of the splitting iteration: alternately solve the
/// stabilized flow equation with conductivity frozen at the current
/// displacement iterate, then the mechanics equation, until the stopping
/// rule fires or max_iter is reached. Non-convergence is reported in the
/// trace, not thrown. `initial_guess` defaults to the previous state;
/// `reference` enables the per-iteration error records.
StepResult fixed_stress_step(const StepState& prev, const ModelParameters& params,
                             const PermeabilityModel& model, const StepData& data,
                             const StoppingRule& stop,
                             const StepState* initial_guess = nullptr,
                             const StepState* reference = nullptr);

struct MonolithicResult {
    StepState state;
    int picard_iterations = 0;
    double final_increment = 0.0;
};

/// Reference oracle: solves the fully coupled time-step system by Picard
/// iteration, freezing the conductivity at the previous iterate's dilation
/// and factoring the 2x2 block system each pass.
MonolithicResult monolithic_solve(const StepState& prev, const ModelParameters& params,
                                  const PermeabilityModel& model, const StepData& data,
                                  double picard_tol = 1e-12, int max_iter = 50);

/// Euclidean norm of the stacked algebraic residual of the coupled step
/// equations at `state`, with K evaluated at the state's own dilation.
double coupled_residual(const StepState& state, const ModelParameters& params,
                        const PermeabilityModel& model, const StepData& data);

/// Sequential implicit-Euler steps; the source of step n is
/// tau * g_tilde + div u_{n-1} + S p_{n-1}. Breakdown errors are rethrown
/// with the failing time index; non-convergence is recorded per step.
std::vector<StepResult> run_time_series(const StepState& initial, int n_steps,
                                        const ModelParameters& params,
                                        const PermeabilityModel& model,
                                        const VectorField& f, const ScalarField& g_tilde,
                                        const StoppingRule& stop);

}  // namespace biotfs
