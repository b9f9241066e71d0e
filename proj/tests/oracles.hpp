// Test-only oracles, independent of the library quadrature/assembly paths:
// tensor Gauss-Legendre integration over the L-shape and finite-difference
// derivative checks.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#ifndef M_PI
#define M_PI 3.14159265358979323846
#endif

namespace oracles {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

// Integral of f over the L-shape (0,1)^2 \ [0.5,1)x[0.5,1), computed as the
// sum over its three half-unit squares with an n x n Gauss rule each.
inline double integrate_lshape(const std::function<double(double, double)>& f, int n = 48) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    const double squares[3][2] = {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}};
    double total = 0.0;
    for (const auto& s : squares) {
        double part = 0.0;
        for (int i = 0; i < n; ++i) {
            const double xi = s[0] + 0.25 * (x[i] + 1.0);
            for (int j = 0; j < n; ++j) {
                const double yj = s[1] + 0.25 * (x[j] + 1.0);
                part += w[i] * w[j] * f(xi, yj);
            }
        }
        total += part * 0.25 * 0.25;  // jacobian of [-1,1]^2 -> half square
    }
    return total;
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double step = 1e-6) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

}  // namespace oracles
