#include "support.hpp"

#include "pnlayer/analytic.hpp"
#include "pnlayer/energy.hpp"

#include <doctest.h>

#include <numbers>

using namespace pnlayer;

namespace {

EnergyContext ctx1(double X = 16.0, int n = 256, double nu = 0.0, double G = 1.0) {
    const auto g = build_grid(1, X, n);
    return make_energy_context(g, SymbolSpec::pn_reduced(1, nu), Potential::cosine(), G);
}

RealField periodic_layer_field(const GridSpec& g, double nu, double G, double shift = 0.0) {
    return sample(g, [&](double x, double, double) {
        return analytic::periodic_layer(x - shift, nu, G, g.half_length());
    });
}

}  // namespace

TEST_CASE("potential examples") {
    const auto c = Potential::cosine();
    for (double w : {-1.0, 1.0}) {
        const auto e = c.eval(w);
        CHECK(std::abs(e.value) < 1e-16);
        CHECK(std::abs(e.first) < 1e-15);
        CHECK(e.second == doctest::Approx(1.0));
    }
    const auto z = c.eval(0.0);
    CHECK(z.value == doctest::Approx(2.0 / (std::numbers::pi * std::numbers::pi)));
    CHECK(z.first == 0.0);
    CHECK(z.second == doctest::Approx(-1.0));
    const auto bo = Potential::benjamin_ono().eval(0.0);
    CHECK(bo.value == 0.0);
    CHECK(bo.first == 0.0);
    CHECK(bo.second == 1.0);
    CHECK(Potential::quartic().second(1.0) == doctest::Approx(8.0));
    CHECK(Potential::quartic().second(-1.0) == doctest::Approx(8.0));
    CHECK(c.well_curvature() == doctest::Approx(1.0));
}

TEST_CASE("potential derivatives match central differences") {
    const Potential ps[] = {Potential::cosine(), Potential::quartic(), Potential::benjamin_ono(),
                            Potential::polynomial({1.0, 0.0, -2.0, 0.0, 1.0})};
    const double h = 1e-5;
    for (const auto& p : ps) {
        for (int i = 0; i <= 60; ++i) {
            const double u = -1.5 + 3.0 * i / 60.0;
            CHECK(std::abs((p.value(u + h) - p.value(u - h)) / (2 * h) - p.first(u)) <= 1e-7 * std::max(1.0, std::abs(p.first(u))));
            CHECK(std::abs((p.first(u + h) - p.first(u - h)) / (2 * h) - p.second(u)) <= 1e-7 * std::max(1.0, std::abs(p.second(u))));
        }
    }
}

TEST_CASE("double-well conditions") {
    for (const auto& p : {Potential::cosine(), Potential::quartic()}) {
        for (int i = 1; i < 100; ++i) CHECK(p.value(-1.0 + 2.0 * i / 100.0) > 0.0);
    }
    CHECK_THROWS_AS(Potential::polynomial({1.0, 0.0, -1.0}), InvalidArgument);
    CHECK_THROWS_AS(Potential::polynomial({-1.0, 0.0, 2.0, 0.0, -1.0}), InvalidArgument);
    CHECK_THROWS_AS(Potential::from_name("sine"), InvalidArgument);
}

TEST_CASE("reference profile") {
    CHECK(ReferenceProfile::eta(1.0) == 1.0);
    CHECK(ReferenceProfile::eta(-1.0) == -1.0);
    CHECK(ReferenceProfile::eta(3.0) == 1.0);
    CHECK(ReferenceProfile::eta_prime(1.2) == 0.0);
    CHECK(ReferenceProfile::eta_prime(-1.0) == 0.0);
    for (int i = 0; i <= 100; ++i) {
        const double x = -1.0 + 2.0 * i / 100.0;
        CHECK(ReferenceProfile::eta_prime(x) >= 0.0);
        CHECK(ReferenceProfile::eta(-x) == doctest::Approx(-ReferenceProfile::eta(x)));
    }
}

TEST_CASE("line Hilbert transform of eta' against the log closed form") {
    // p(s) = (15/8)(1 - s^2)^2;  PV int p/(x - s) = p(x) log|(x+1)/(x-1)| + int (p(s) - p(x))/(x - s) ds.
    // The remainder is -(cubic in s), so Simpson's rule integrates it exactly.
    auto p = [](double s) { return 15.0 / 8.0 * (1 - s * s) * (1 - s * s); };
    for (double x : {-3.0, -0.7, -0.2, 0.0, 0.35, 0.9, 1.5, 5.0}) {
        // (p(s) - p(x))/(x - s) = -(15/8)(s + x)(s^2 + x^2 - 2) expanded from the difference of squares.
        auto q = [&](double s) { return -15.0 / 8.0 * (s + x) * (s * s + x * x - 2.0); };
        const double rem = 2.0 / 6.0 * (q(-1.0) + 4.0 * q(0.0) + q(1.0));
        const double expect = (p(x) * std::log(std::abs((x + 1) / (x - 1))) + rem) / std::numbers::pi;
        CHECK(ReferenceProfile::line_half_laplacian(x) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("energy examples") {
    const auto ctx = ctx1(32.0, 512);
    const auto parts = energy_parts(ctx.eta, ctx);
    CHECK(parts.quadratic == 0.0);
    CHECK(parts.cross == 0.0);
    double pot = 0.0;
    for (int i = 0; i < ctx.grid.nx(); ++i) pot += ctx.potential.value(ReferenceProfile::eta(ctx.grid.x(i)));
    pot *= ctx.grid.cell_volume() / (2.0 * ctx.G);
    CHECK(parts.potential == doctest::Approx(pot).epsilon(1e-13));
    CHECK(parts.potential > 0.0);

    const RealField layer = clip(sample(ctx.grid, [](double x, double, double) { return analytic::arctan_layer(x, 0.0, 1.0); }));
    CHECK(eval_energy(layer, ctx) < eval_energy(ctx.eta, ctx));
}

TEST_CASE("spectral energy matches the double sum") {
    const auto ctx = ctx1(8.0, 64, 0.2);
    RealField u = ctx.eta + 0.3 * testing::random_field(ctx.grid, 1);
    const auto a = energy_parts(u, ctx);
    const auto b = energy_parts_bruteforce(u, ctx);
    CHECK(std::abs(a.total() - b.total()) <= 1e-6 * std::abs(a.total()));
    CHECK(std::abs(a.quadratic - b.quadratic) <= 1e-6 * std::abs(a.quadratic));

    const auto z = energy_parts_bruteforce(ctx.eta, ctx);
    CHECK(std::abs(z.quadratic) < 1e-14);
    CHECK(std::abs(z.cross) < 1e-14);

    const auto g2 = build_grid(2, 4.0, 32, {8});
    const auto c2 = make_energy_context(g2, SymbolSpec::pn_reduced(2, 0.3), Potential::quartic(), 0.7);
    RealField u2 = c2.eta + 0.2 * testing::random_field(g2, 2);
    CHECK(eval_energy_bruteforce(u2, c2) == doctest::Approx(eval_energy(u2, c2)).epsilon(1e-6));
}

TEST_CASE("quadratic term of a single mode") {
    const auto ctx = ctx1(8.0, 64, 0.25);
    const double xi = 5 * std::numbers::pi / 8.0;
    const double a = 0.01;
    const RealField v = sample(ctx.grid, [&](double x, double, double) { return a * std::cos(xi * x); });
    const auto parts = energy_parts(ctx.eta + v, ctx);
    // 1/2 sigma a^2 int cos^2 = 1/2 sigma a^2 X
    CHECK(parts.quadratic == doctest::Approx(0.5 * sigma_pn(0.25, xi, 0.0) * a * a * 8.0).epsilon(1e-12));
    CHECK(energy_parts_bruteforce(ctx.eta + v, ctx).quadratic == doctest::Approx(parts.quadratic).epsilon(1e-9));
}

TEST_CASE("gradient matches central differences along random directions") {
    for (int d : {1, 2}) {
        const auto g = d == 1 ? build_grid(1, 16.0, 256) : build_grid(2, 8.0, 64, {16});
        const auto ctx = make_energy_context(g, SymbolSpec::pn_reduced(d, 0.2), Potential::cosine(), 1.0);
        const RealField u = ctx.eta + 0.2 * testing::smooth_random_field(g, 7);
        const RealField grad = eval_gradient(u, ctx);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const RealField phi = testing::random_field(g, 1000 + seed);
            const double eps = 1e-5;
            const double fd = (eval_energy(u + eps * phi, ctx) - eval_energy(u - eps * phi, ctx)) / (2 * eps);
            const double an = inner(grad, phi);
            CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
        }
    }
}

TEST_CASE("analytic layer nearly solves the equation") {
    const auto ctx = ctx1(200.0, 8192);
    const double X = 200.0;
    for (double shift : {0.0, 3.7}) {
        const RealField layer = sample(ctx.grid, [&](double x, double, double) { return analytic::arctan_layer(x - shift, 0.0, 1.0); });
        const RealField grad = eval_gradient(layer, ctx);
        double sup = 0.0;
        for (int i = 0; i < ctx.grid.nx(); ++i) {
            if (std::abs(ctx.grid.x(i)) <= X / 2) sup = std::max(sup, std::abs(grad[static_cast<std::size_t>(i)]));
        }
        CHECK(sup <= 2e-3);
    }
    // The periodic array of layers is an exact critical point of the box energy.
    const RealField periodic = periodic_layer_field(ctx.grid, 0.0, 1.0);
    CHECK(eval_gradient(periodic, ctx).max_abs() < 1e-5);
}

TEST_CASE("clipping never increases the energy") {
    const auto ctx = ctx1(16.0, 256);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const RealField u = ctx.eta + 1.2 * testing::smooth_random_field(ctx.grid, seed);
        CHECK(eval_energy(clip(u), ctx) <= eval_energy(u, ctx));
    }
    const RealField c = clip(sample(ctx.grid, [](double x, double, double) { return x; }), -0.5, 0.25);
    CHECK(c.max_abs() == 0.5);
}

TEST_CASE("rearrangement scalar identity") {
    CHECK(rearrangement_lhs(1.0, 0.0, 0.0, 1.0) == 1.0);
    CHECK(rearrangement_rhs(1.0, 0.0, 0.0, 1.0) == 1.0);
    CHECK(rearrangement_lhs(2.0, -1.0, 3.0, 0.5) == 0.0);
}

TEST_CASE("rearrangement of fields") {
    const auto ctx = ctx1(16.0, 256);
    const RealField u = ctx.eta + 0.3 * testing::smooth_random_field(ctx.grid, 1);
    const auto same = rearrange_pair(u, u, ctx);
    CHECK(same.slack == 0.0);
    CHECK(same.ordered);
    CHECK(testing::max_abs_diff(same.m, u) == 0.0);

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const RealField a = testing::random_field(ctx.grid, 2 * seed);
        const RealField b = testing::random_field(ctx.grid, 2 * seed + 1);
        const auto r = rearrange_pair(a, b, ctx);
        CHECK(r.slack >= -1e-10);
        for (std::size_t n = 0; n < a.size(); ++n) {
            CHECK(r.m[n] == std::min(a[n], b[n]));
            CHECK(r.M[n] == std::max(a[n], b[n]));
        }
    }
    // Ordered pairs give equality.
    const RealField w = u + 0.1 * testing::random_field(ctx.grid, 3, 0.0, 1.0);
    const auto ord = rearrange_pair(u, w, ctx);
    CHECK(ord.ordered);
    CHECK(std::abs(ord.slack) < 1e-10);
}

TEST_CASE("translation invariance") {
    const auto ctx = ctx1(64.0, 1024, 0.1);
    const RealField layer = periodic_layer_field(ctx.grid, 0.1, 1.0);
    CHECK(testing::max_abs_diff(translate(layer, 0.0), layer) < 1e-14);
    const double F = eval_energy(layer, ctx);
    for (double c : {ctx.grid.hx(), 3.7, -5.0 * ctx.grid.hx(), 11.3}) {
        CHECK(std::abs(eval_energy(translate(layer, c), ctx) - F) <= 1e-12 * std::abs(F));
    }
    // Non-equilibrium field, grid shifts: the box energy is shift invariant.
    const RealField u = ctx.eta + 0.2 * testing::smooth_random_field(ctx.grid, 4);
    const double Fu = eval_energy(u, ctx);
    CHECK(std::abs(eval_energy(translate(u, 7 * ctx.grid.hx()), ctx) - Fu) <= 1e-8 * std::abs(Fu));
    CHECK_THROWS_AS(translate(layer, 17.0), InvalidArgument);
}

TEST_CASE("translated layer keeps a small residual") {
    const auto ctx = ctx1(200.0, 8192);
    const RealField layer = periodic_layer_field(ctx.grid, 0.0, 1.0);
    CHECK(eval_gradient(translate(layer, 3.7), ctx).max_abs() <= 2e-3);
}

TEST_CASE("context validation") {
    const auto g = build_grid(1, 16.0, 64);
    CHECK_THROWS_AS(make_energy_context(g, SymbolSpec::half_laplacian(1), Potential::cosine(), 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_energy_context(g, SymbolSpec::half_laplacian(2), Potential::cosine(), 1.0), InvalidArgument);
    CHECK(make_energy_context(g, SymbolSpec::pn_reduced(1, 0.25), Potential::cosine(), 1.0).c_L == doctest::Approx(4.0 / 3.0));
}
