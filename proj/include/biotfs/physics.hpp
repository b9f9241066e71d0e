#pragma once

#include <stdexcept>
#include <string>

namespace biotfs {

/// Conductivity dropped to (or below) the positivity guard while assembling
/// or evaluating a law; carries the offending dilation and value.
class ConductivityError : public std::runtime_error {
public:
    ConductivityError(double z, double value);
    double dilation() const { return z_; }
    double value() const { return value_; }

private:
    double z_;
    double value_;
};

/// Coefficients of the scaled single-time-step system. All experiments use
/// the scaled form directly (alpha = 1, 2*mu = 1).
struct ModelParameters {
    double lambda = 1.0;  // Lame lambda (scaled)
    double mu = 0.5;      // Lame mu
    double alpha = 1.0;   // Biot-Willis coefficient
    double S = 0.0;       // constrained storage coefficient
    double tau = 1e-2;    // time-step length
    double L = 1.0;       // stabilization parameter

    void validate() const;
};

enum class Permeability { Constant, QuadraticDiv, SquaredAffine, Exponential };

/// Hydraulic conductivity law K(z), z = div u:
///   Constant      K0
///   QuadraticDiv  K0 + K1 z^2
///   SquaredAffine (K0 + K1 z)^2
///   Exponential   K0 exp(K1 z)
struct PermeabilityModel {
    Permeability variant = Permeability::Constant;
    double K0 = 1e-6;
    double K1 = 0.0;
};

const char* permeability_name(Permeability p);
Permeability permeability_from_name(const std::string& name);

/// Effective lower/upper/Lipschitz bounds of a law on a dilation interval.
struct AssumptionConstants {
    double k_min = 0.0;
    double k_max = 0.0;
    double k_lip = 0.0;
    double z_lo = 0.0;
    double z_hi = 0.0;
};

/// Throws ConductivityError when the value falls below 1e-16 * K0
/// (SquaredAffine can reach zero).
double eval_K(const PermeabilityModel& model, double z);

double derivative_K(const PermeabilityModel& model, double z);

/// Closed-form extrema of K and of |K'| on [z_lo, z_hi]. Throws
/// ConductivityError if the lower bound is not strictly positive.
AssumptionConstants assumption_constants(const PermeabilityModel& model, double z_lo,
                                         double z_hi);

struct ScaledParameters {
    double lambda = 0.0;  // lambda / (2 mu)
    double S = 0.0;       // 2 mu S / alpha^2
    PermeabilityModel model;  // K scaled so that K~(z) = (2 mu / alpha^2) K(z)
};

ScaledParameters scale_parameters(double lambda, double mu, double alpha, double S,
                                  const PermeabilityModel& model);

}  // namespace biotfs
