// Closed-form layers of the cosine potential.
#pragma once

#include <cmath>
#include <numbers>

namespace pnlayer::analytic {

/// Width delta = 2G / (1 - nu) of the whole-line layer.
inline double layer_width(double nu, double G) { return 2.0 * G / (1.0 - nu); }

/// (2/pi) arctan(x / delta): the layer on the whole line.
inline double arctan_layer(double x, double nu, double G) {
    return 2.0 / std::numbers::pi * std::atan(x / layer_width(nu, G));
}

inline double arctan_layer_prime(double x, double nu, double G) {
    const double d = layer_width(nu, G);
    return 2.0 / std::numbers::pi * d / (x * x + d * d);
}

/// Layer of the periodic array with period 2X (one layer per box):
/// (2/pi) arctan(coth(a) tan(pi x / 2X)), sinh(2a) = pi delta / X.
/// It solves the equation on the box exactly and tends to arctan_layer as X grows.
inline double periodic_layer_parameter(double nu, double G, double X) {
    return 0.5 * std::asinh(std::numbers::pi * layer_width(nu, G) / X);
}

inline double periodic_layer(double x, double nu, double G, double X) {
    if (x <= -X) return -1.0;
    if (x >= X) return 1.0;
    const double a = periodic_layer_parameter(nu, G, X);
    return 2.0 / std::numbers::pi * std::atan(std::tan(std::numbers::pi * x / (2.0 * X)) / std::tanh(a));
}

/// Derivative: a periodic sum of Lorentzians, (1/X) sinh(2a) / (cosh(2a) - cos(pi x / X)).
inline double periodic_layer_prime(double x, double nu, double G, double X) {
    const double a = periodic_layer_parameter(nu, G, X);
    return std::sinh(2.0 * a) / (X * (std::cosh(2.0 * a) - std::cos(std::numbers::pi * x / X)));
}

/// Solitary wave 8G^2 / (x^2 + 4G^2) of 2G (-d_xx)^{1/2} u + u - u^2 = 0.
inline double solitary_wave(double x, double G) { return 8.0 * G * G / (x * x + 4.0 * G * G); }

}  // namespace pnlayer::analytic
