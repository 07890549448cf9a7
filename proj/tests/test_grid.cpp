#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace pnlayer;

TEST_CASE("build_grid spacing and frequencies") {
    const auto g = build_grid(1, 64.0, 256);
    CHECK(g.hx() == doctest::Approx(0.5));
    CHECK(g.xi(1) == doctest::Approx(std::numbers::pi / 64.0));
    CHECK(g.size() == 256);

    const auto g2 = build_grid(2, 64.0, 256, {32});
    CHECK(g2.size() == 256 * 32);
    CHECK(g2.k(0, 16) == doctest::Approx(-16 * 2.0 * std::numbers::pi));
    CHECK(g2.k(0, 15) == doctest::Approx(15 * 2.0 * std::numbers::pi));
    CHECK(g2.hy(0) == doctest::Approx(1.0 / 32));
}

TEST_CASE("build_grid rejects bad input") {
    CHECK_THROWS_AS(build_grid(1, 2.0, 256), InvalidArgument);
    CHECK_THROWS_AS(build_grid(1, 64.0, 255), InvalidArgument);
    CHECK_THROWS_AS(build_grid(1, 64.0, 2), InvalidArgument);
    CHECK_THROWS_AS(build_grid(4, 64.0, 256, {8, 8, 8}), InvalidArgument);
    CHECK_THROWS_AS(build_grid(2, 64.0, 256, {31}), InvalidArgument);
    CHECK_THROWS_AS(build_grid(2, 64.0, 256), InvalidArgument);
}

TEST_CASE("constant field transforms to a single coefficient") {
    const auto g = build_grid(2, 8.0, 32, {8});
    const RealField c = sample(g, [](double, double, double) { return 1.5; });
    const auto F = forward_transform(c);
    const double volume = 2.0 * 8.0;
    for (std::size_t n = 0; n < F.size(); ++n) {
        const double expect = n == 0 ? 1.5 * volume : 0.0;
        CHECK(std::abs(F.coefficients()[n] - Complex(expect, 0.0)) < 1e-12 * volume);
    }
}

TEST_CASE("cos(pi x / X) splits mass evenly between +-pi/X") {
    const auto g = build_grid(1, 10.0, 64);
    const RealField f = sample(g, [](double x, double, double) { return std::cos(std::numbers::pi * x / 10.0); });
    const auto F = forward_transform(f);
    const std::size_t plus = 1;
    const std::size_t minus = 63;
    CHECK(std::abs(F.coefficients()[plus] - Complex(10.0, 0.0)) < 1e-12);
    CHECK(std::abs(F.coefficients()[minus] - Complex(10.0, 0.0)) < 1e-12);
    double rest = 0.0;
    for (std::size_t n = 0; n < F.size(); ++n) {
        if (n != plus && n != minus) rest = std::max(rest, std::abs(F.coefficients()[n]));
    }
    CHECK(rest < 1e-12);
}

TEST_CASE("round trip is the identity") {
    for (const auto& g : {build_grid(1, 16.0, 128), build_grid(2, 4.0, 64, {16}), build_grid(3, 4.0, 16, {8, 4})}) {
        const RealField f = testing::random_field(g, 11);
        const RealField back = inverse_transform(forward_transform(f));
        CHECK(testing::max_abs_diff(f, back) <= 1e-12 * f.max_abs());
    }
}

TEST_CASE("Parseval against a direct two-sided sum") {
    const auto g = build_grid(2, 5.0, 24, {6});
    const RealField f = testing::random_field(g, 3);
    const auto F = forward_transform(f);
    // Direct DFT with the stated convention: sum f(w) exp(-i nu.w) cv.
    double spectral = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) {
        const auto mi = g.unflatten(m);
        const double xi = g.xi(mi[0]);
        const double k = g.k(0, mi[1]);
        Complex direct = 0.0;
        for (std::size_t n = 0; n < g.size(); ++n) {
            const auto ni = g.unflatten(n);
            direct += f[n] * std::exp(Complex(0.0, -(xi * g.x(ni[0]) + k * g.y(0, ni[1]))));
        }
        direct *= g.cell_volume();
        CHECK(std::abs(direct - F.coefficients()[m]) < 1e-11);
        spectral += std::norm(direct);
    }
    spectral /= g.volume() * 1.0;
    double physical = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) physical += f[n] * f[n] * g.cell_volume();
    CHECK(std::abs(spectral - physical) <= 1e-10 * physical);
}

TEST_CASE("zero spectrum gives zero field") {
    const auto g = build_grid(1, 8.0, 32);
    const RealField f = inverse_transform(SpectralField(g));
    CHECK(f.max_abs() == 0.0);
}

TEST_CASE("single mode inverts to the analytic cos/sin combination") {
    const auto g = build_grid(1, 6.0, 48);
    SpectralField F(g);
    const Complex c(0.7, -0.4);
    F.coefficients()[1] = c;
    F.coefficients()[47] = std::conj(c);
    const RealField f = inverse_transform(F);
    const double xi = std::numbers::pi / 6.0;
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.x(i);
        const double expect = 2.0 * (c.real() * std::cos(xi * x) - c.imag() * std::sin(xi * x)) / g.volume();
        CHECK(f[static_cast<std::size_t>(i)] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("Hermitian violation is rejected") {
    const auto g = build_grid(1, 8.0, 32);
    SpectralField F(g);
    F.coefficients()[3] = Complex(1.0, 0.0);
    CHECK_THROWS_AS(inverse_transform(F), InvalidArgument);
}

TEST_CASE("real fields map to Hermitian spectra") {
    const auto g = build_grid(2, 4.0, 32, {8});
    const auto F = forward_transform(testing::random_field(g, 5));
    CHECK(F.hermitian_defect() < 1e-13);
    InverseDiagnostics diag;
    inverse_transform(F, &diag);
    CHECK(diag.imaginary_residue < 1e-12);
}

TEST_CASE("spectral derivative and shift of a smooth periodic field") {
    const auto g = build_grid(1, 8.0, 128);
    const double w = std::numbers::pi / 8.0;
    const RealField f = sample(g, [w](double x, double, double) { return std::sin(3 * w * x) + std::cos(w * x); });
    const RealField df = derivative_x(f);
    const RealField sh = shift_x(f, 0.37);
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.x(i);
        CHECK(df[static_cast<std::size_t>(i)] ==
              doctest::Approx(3 * w * std::cos(3 * w * x) - w * std::sin(w * x)).epsilon(1e-11));
        CHECK(sh[static_cast<std::size_t>(i)] ==
              doctest::Approx(std::sin(3 * w * (x + 0.37)) + std::cos(w * (x + 0.37))).epsilon(1e-11));
    }
    CHECK(interpolate_x(f, 1.234) == doctest::Approx(std::sin(3 * w * 1.234) + std::cos(w * 1.234)).epsilon(1e-11));
}
