#include "biotfs/physics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace biotfs {

namespace {
std::string breakdown_message(double z, double value) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "conductivity positivity violated: K(%.6g) = %.6g", z, value);
    return buf;
}
}  // namespace

ConductivityError::ConductivityError(double z, double value)
    : std::runtime_error(breakdown_message(z, value)), z_(z), value_(value) {}

void ModelParameters::validate() const {
    if (lambda < 0.0) throw std::invalid_argument("ModelParameters: lambda must be >= 0");
    if (mu <= 0.0) throw std::invalid_argument("ModelParameters: mu must be > 0");
    if (alpha <= 0.0) throw std::invalid_argument("ModelParameters: alpha must be > 0");
    if (S < 0.0) throw std::invalid_argument("ModelParameters: S must be >= 0");
    if (tau <= 0.0) throw std::invalid_argument("ModelParameters: tau must be > 0");
    if (L <= 0.0) throw std::invalid_argument("ModelParameters: L must be > 0");
}

const char* permeability_name(Permeability p) {
    switch (p) {
        case Permeability::Constant: return "constant";
        case Permeability::QuadraticDiv: return "quadratic_div";
        case Permeability::SquaredAffine: return "squared_affine";
        case Permeability::Exponential: return "exponential";
    }
    return "?";
}

Permeability permeability_from_name(const std::string& name) {
    if (name == "constant") return Permeability::Constant;
    if (name == "quadratic_div") return Permeability::QuadraticDiv;
    if (name == "squared_affine") return Permeability::SquaredAffine;
    if (name == "exponential") return Permeability::Exponential;
    throw std::invalid_argument("unknown permeability model: " + name);
}

double eval_K(const PermeabilityModel& m, double z) {
    double k = 0.0;
    switch (m.variant) {
        case Permeability::Constant: k = m.K0; break;
        case Permeability::QuadraticDiv: k = m.K0 + m.K1 * z * z; break;
        case Permeability::SquaredAffine: {
            const double a = m.K0 + m.K1 * z;
            k = a * a;
            break;
        }
        case Permeability::Exponential: k = m.K0 * std::exp(m.K1 * z); break;
    }
    if (!(k > 1e-16 * m.K0)) throw ConductivityError(z, k);
    return k;
}

double derivative_K(const PermeabilityModel& m, double z) {
    switch (m.variant) {
        case Permeability::Constant: return 0.0;
        case Permeability::QuadraticDiv: return 2.0 * m.K1 * z;
        case Permeability::SquaredAffine: return 2.0 * m.K1 * (m.K0 + m.K1 * z);
        case Permeability::Exponential: return m.K0 * m.K1 * std::exp(m.K1 * z);
    }
    return 0.0;
}

AssumptionConstants assumption_constants(const PermeabilityModel& m, double z_lo,
                                         double z_hi) {
    if (!(z_lo < z_hi))
        throw std::invalid_argument("assumption_constants: need z_lo < z_hi");

    auto value = [&m](double z) {
        switch (m.variant) {
            case Permeability::Constant: return m.K0;
            case Permeability::QuadraticDiv: return m.K0 + m.K1 * z * z;
            case Permeability::SquaredAffine: {
                const double a = m.K0 + m.K1 * z;
                return a * a;
            }
            case Permeability::Exponential: return m.K0 * std::exp(m.K1 * z);
        }
        return 0.0;
    };

    AssumptionConstants ac;
    ac.z_lo = z_lo;
    ac.z_hi = z_hi;

    double lo = value(z_lo), hi = value(z_hi);
    ac.k_min = std::min(lo, hi);
    ac.k_max = std::max(lo, hi);
    // interior critical points
    switch (m.variant) {
        case Permeability::Constant:
            ac.k_lip = 0.0;
            break;
        case Permeability::QuadraticDiv:
            if (z_lo < 0.0 && 0.0 < z_hi) {
                ac.k_min = std::min(ac.k_min, value(0.0));
                ac.k_max = std::max(ac.k_max, value(0.0));
            }
            ac.k_lip = 2.0 * std::abs(m.K1) * std::max(std::abs(z_lo), std::abs(z_hi));
            break;
        case Permeability::SquaredAffine: {
            if (m.K1 != 0.0) {
                const double root = -m.K0 / m.K1;
                if (z_lo < root && root < z_hi) ac.k_min = 0.0;
            }
            ac.k_lip = std::max(std::abs(derivative_K(m, z_lo)),
                                std::abs(derivative_K(m, z_hi)));
            break;
        }
        case Permeability::Exponential:
            // monotone; |K'| = |K1| K attains its maximum where K does
            ac.k_lip = std::abs(m.K1) * ac.k_max;
            break;
    }
    if (!(ac.k_min > 0.0)) throw ConductivityError(z_lo, ac.k_min);
    return ac;
}

ScaledParameters scale_parameters(double lambda, double mu, double alpha, double S,
                                  const PermeabilityModel& model) {
    if (mu <= 0.0 || alpha <= 0.0)
        throw std::invalid_argument("scale_parameters: mu and alpha must be > 0");
    const double s = 2.0 * mu / (alpha * alpha);
    ScaledParameters out;
    out.lambda = lambda / (2.0 * mu);
    out.S = s * S;
    out.model = model;
    switch (model.variant) {
        case Permeability::Constant:
            out.model.K0 = s * model.K0;
            break;
        case Permeability::QuadraticDiv:
            out.model.K0 = s * model.K0;
            out.model.K1 = s * model.K1;
            break;
        case Permeability::SquaredAffine: {
            const double r = std::sqrt(2.0 * mu) / alpha;
            out.model.K0 = r * model.K0;
            out.model.K1 = r * model.K1;
            break;
        }
        case Permeability::Exponential:
            out.model.K0 = s * model.K0;  // K1 unchanged
            break;
    }
    return out;
}

}  // namespace biotfs
