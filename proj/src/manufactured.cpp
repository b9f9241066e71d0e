#include "biotfs/manufactured.hpp"

#include <algorithm>
#include <cmath>

#ifndef M_PI
#define M_PI 3.14159265358979323846
#endif

namespace biotfs::manufactured {

namespace {
constexpr double kA = 2.0 * M_PI;
constexpr double kScale = 0.01;  // displacement amplitude
}

double phi(double x, double y) {
    const double sx = std::sin(kA * x), sy = std::sin(kA * y);
    return sx * sx * sy * sy;
}

double pressure(double x, double y) { return phi(x, y) - 0.25; }

std::array<double, 2> pressure_gradient(double x, double y) {
    const double sx = std::sin(kA * x), sy = std::sin(kA * y);
    const double s2x = std::sin(2.0 * kA * x), s2y = std::sin(2.0 * kA * y);
    return {kA * s2x * sy * sy, kA * sx * sx * s2y};
}

double pressure_laplacian(double x, double y) {
    const double sx = std::sin(kA * x), sy = std::sin(kA * y);
    const double c2x = std::cos(2.0 * kA * x), c2y = std::cos(2.0 * kA * y);
    return 2.0 * kA * kA * (c2x * sy * sy + sx * sx * c2y);
}

std::array<double, 2> displacement(double x, double y) {
    const double sx = std::sin(kA * x), sy = std::sin(kA * y);
    const double s2x = std::sin(2.0 * kA * x), s2y = std::sin(2.0 * kA * y);
    return {kScale * kA * sx * sx * s2y, kScale * kA * s2x * sy * sy};
}

double displacement_divergence(double x, double y) {
    const double s2x = std::sin(2.0 * kA * x), s2y = std::sin(2.0 * kA * y);
    return 2.0 * kScale * kA * kA * s2x * s2y;
}

std::array<double, 2> body_force(double x, double y, double lambda) {
    const double sx = std::sin(kA * x), sy = std::sin(kA * y);
    const double s2x = std::sin(2.0 * kA * x), s2y = std::sin(2.0 * kA * y);
    const double c2x = std::cos(2.0 * kA * x), c2y = std::cos(2.0 * kA * y);
    const double a3 = kA * kA * kA;
    // lap u = 2 k a^3 (s2y (1 - 4 sx^2), s2x (1 - 4 sy^2))
    const double lap1 = 2.0 * kScale * a3 * s2y * (1.0 - 4.0 * sx * sx);
    const double lap2 = 2.0 * kScale * a3 * s2x * (1.0 - 4.0 * sy * sy);
    // grad(div u) = 4 k a^3 (c2x s2y, s2x c2y)
    const double gd1 = 4.0 * kScale * a3 * c2x * s2y;
    const double gd2 = 4.0 * kScale * a3 * s2x * c2y;
    const auto gp = pressure_gradient(x, y);
    return {-0.5 * lap1 - (0.5 + lambda) * gd1 + gp[0],
            -0.5 * lap2 - (0.5 + lambda) * gd2 + gp[1]};
}

double flow_source(double x, double y, double tau, double K0, double S) {
    return displacement_divergence(x, y) - tau * K0 * pressure_laplacian(x, y) +
           S * pressure(x, y);
}

double pressure_gradient_sup(int grid) {
    double sup = 0.0;
    for (int j = 0; j <= grid; ++j) {
        const double y = static_cast<double>(j) / grid;
        for (int i = 0; i <= grid; ++i) {
            const double x = static_cast<double>(i) / grid;
            if (x > 0.5 && y > 0.5) continue;  // removed quadrant
            const auto g = pressure_gradient(x, y);
            sup = std::max(sup, std::hypot(g[0], g[1]));
        }
    }
    return sup;
}

}  // namespace biotfs::manufactured
