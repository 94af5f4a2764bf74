#include "virsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace virsim {

double Rng::normal() {
    double u1 = next_double_open();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang squeeze method. alpha < 1 handled by the boost
// Gamma(alpha) = Gamma(alpha + 1) * U^(1/alpha).
double Rng::gamma(double alpha) {
    if (alpha < 1.0) {
        double u = next_double_open();
        return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = next_double_open();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::beta(double alpha, double beta_param) {
    double x = gamma(alpha);
    double y = gamma(beta_param);
    return x / (x + y);
}

}  // namespace virsim
