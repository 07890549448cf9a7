// Principal-value quadrature used as an independent oracle for the spectral
// half-Laplacian.
#pragma once

#include <functional>

namespace pnlayer {

/// (1/pi) PV int_a^b f(s) / (x - s) ds.
double hilbert_line(const std::function<double(double)>& f, double a, double b, double x);

/// Periodic Hilbert transform on [-X, X): (1/(2X)) PV int f(s) cot(pi (x - s) / (2X)) ds.
/// Valid for |x| < X; accuracy degrades as |x| approaches X.
double hilbert_periodic(const std::function<double(double)>& f, double X, double x);

}  // namespace pnlayer
