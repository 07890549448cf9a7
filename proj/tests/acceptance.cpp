// Runs the nine acceptance criteria and prints one PASS/FAIL line for each.
#include "pnlayer/analytic.hpp"
#include "pnlayer/elasticity.hpp"
#include "pnlayer/kernel.hpp"
#include "pnlayer/minimize.hpp"
#include "pnlayer/rational.hpp"
#include "pnlayer/spectrum.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace pnlayer;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

RealField random_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    RealField f(g);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = d(rng);
    return f;
}

EnergyContext line(double nu, double X = 200.0, int n = 8192) {
    return make_energy_context(build_grid(1, X, n), SymbolSpec::pn_reduced(1, nu), Potential::cosine(), 1.0);
}

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!ok) detail << " [failed: " << what << "]";
    }
};

Verdict analytic_layer() {
    Verdict v;
    for (double nu : {0.0, 0.25}) {
        const auto t0 = Clock::now();
        const auto ctx = line(nu);
        const auto res = minimize_energy(ctx, MinimizeConfig{}, ctx.eta);
        const auto al = align_translation(res.u);
        // The full box is the criterion; the core window and the periodic array are diagnostics.
        double full = 0.0;
        double core = 0.0;
        double array = 0.0;
        for (int i = 0; i < ctx.grid.nx(); ++i) {
            const double x = ctx.grid.x(i);
            const double u = al.u[static_cast<std::size_t>(i)];
            const double e = std::abs(u - analytic::arctan_layer(x, nu, 1.0));
            full = std::max(full, e);
            if (std::abs(x) <= 200.0 / 8) core = std::max(core, e);
            array = std::max(array, std::abs(u - analytic::periodic_layer(x, nu, 1.0, 200.0)));
        }
        const double secs = seconds_since(t0);
        v.detail << " nu=" << nu << ": sup " << full << " (|x|<=X/8 " << core << ", vs periodic array " << array
                 << "), residual " << res.report.residual << ", " << secs << " s;";
        v.require(res.report.converged && res.report.residual <= 1e-8, "residual");
        v.require(full <= 1e-3, "sup distance");
        v.require(secs <= 60.0, "runtime");
    }
    return v;
}

Verdict de_giorgi() {
    Verdict v;
    const auto t0 = Clock::now();
    const auto g = build_grid(2, 200.0, 2048, {32});
    const auto ctx = make_energy_context(g, SymbolSpec::pn_reduced(2, 0.0), Potential::cosine(), 1.0);
    const RealField u0 = clip(sample(g, [](double x, double y, double) {
        return ReferenceProfile::eta(x) + 0.3 * std::sin(2.0 * std::numbers::pi * y) * std::exp(-x * x);
    }));
    const auto res = minimize_energy(ctx, MinimizeConfig{}, u0);
    const double secs = seconds_since(t0);
    v.detail << " transverse range " << res.report.transverse_range << ", margin " << res.report.monotonicity_margin << ", " << secs << " s";
    v.require(res.report.converged, "converged");
    v.require(res.report.transverse_range <= 1e-6, "transverse range");
    v.require(res.report.monotonicity_margin > 0.0, "monotonicity");
    v.require(secs <= 300.0, "runtime");
    return v;
}

Verdict uniqueness() {
    Verdict v;
    const auto ctx = line(0.0);
    MinimizeConfig cfg;
    cfg.clip_each_step = false;
    const auto a = minimize_energy(ctx, cfg, perturbed_initial(ctx.grid, 11, 0.3));
    const auto b = minimize_energy(ctx, cfg, perturbed_initial(ctx.grid, 29, 0.3));
    const auto c = minimize_energy(ctx, MinimizeConfig{}, ctx.eta);
    double diff = 0.0;
    const auto ua = align_translation(a.u).u;
    for (const auto* other : {&b, &c}) {
        const auto uo = align_translation(other->u).u;
        for (std::size_t n = 0; n < ua.size(); ++n) diff = std::max(diff, std::abs(ua[n] - uo[n]));
    }
    v.detail << " offsets " << a.report.translation_offset << ", " << b.report.translation_offset << "; aligned sup difference " << diff;
    v.require(a.report.converged && b.report.converged && c.report.converged, "converged");
    v.require(diff <= 1e-5, "aligned difference");
    return v;
}

Verdict spectral_rigidity() {
    Verdict v;
    const auto ctx = line(0.0);
    const auto res = minimize_energy(ctx, MinimizeConfig{}, ctx.eta);
    const auto rep = lowest_eigenpairs(LinearizedOperator(ctx, res.u, res.report.converged));
    double lowest = rep.eigenvalues.front();
    v.detail << " lambda = {";
    for (double l : rep.eigenvalues) {
        v.detail << " " << l;
        lowest = std::min(lowest, l);
    }
    v.detail << " }, overlap " << rep.overlap;
    v.require(std::abs(rep.eigenvalues[0]) <= 1e-6, "lambda_0");
    v.require(rep.overlap >= 0.999, "overlap");
    v.require(lowest >= -1e-6, "negative eigenvalue");
    v.require(rep.eigenvalues[1] >= 0.125, "lambda_1");

    const auto small = line(0.0, 32.0, 512);
    MinimizeConfig tight;
    tight.tol_r = 1e-10;
    const auto sres = minimize_energy(small, tight, small.eta);
    const LinearizedOperator L(small, sres.u, sres.report.converged);
    const auto it = lowest_eigenpairs(L);
    const auto dense = lowest_eigenpairs_dense(L, 3);
    double agree = 0.0;
    for (std::size_t i = 0; i < 3; ++i) agree = std::max(agree, std::abs(it.eigenvalues[i] - dense.eigenvalues[i]));
    v.detail << ", dense vs iterative (512 points) " << agree;
    v.require(agree <= 1e-8, "dense agreement");
    return v;
}

Verdict kernel_certification() {
    Verdict v;
    const auto g2 = build_grid(2, 4.0, 2048, {256});
    const auto rows = positivity_scan({-0.4, 0.0, 0.3, 0.34, 0.45}, g2);
    const KernelVerdict expect[] = {KernelVerdict::Positive, KernelVerdict::Positive, KernelVerdict::Positive,
                                    KernelVerdict::Mixed, KernelVerdict::Mixed};
    v.detail << " verdicts";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        v.detail << " " << rows[i].nu << ":" << to_string(rows[i].verdict);
        v.require(rows[i].verdict == expect[i], "verdict");
    }
    const auto g1 = build_grid(1, 64.0, 4096);
    const double e1 = homogeneity_exponent(extract_certification_kernel(SymbolSpec::half_laplacian(1), g1));
    const double e2 = homogeneity_exponent(extract_certification_kernel(SymbolSpec::pn_reduced(2, 0.0), g2));
    const auto raw = extract_kernel(SymbolSpec::pn_reduced(2, 0.3), g2);
    v.detail << "; exponents d=1 " << e1 << ", d=2 " << e2 << "; evenness " << raw.evenness_defect();
    v.require(std::abs(e1 + 2.0) <= 0.1, "d=1 exponent");
    v.require(std::abs(e2 + 3.0) <= 0.1, "d=2 exponent");
    v.require(raw.evenness_defect() <= 1e-14, "evenness");
    return v;
}

Verdict oracle_equivalence() {
    Verdict v;
    const auto g = build_grid(2, 8.0, 256, {32});  // 8192 points
    const auto sym = SymbolSpec::pn_reduced(2, 0.2);
    const RealField f = random_field(g, 5);
    const RealField a = apply_operator(f, sym);
    const RealField b = brute_force_apply(f, extract_kernel(sym, g));
    double op = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) op = std::max(op, std::abs(a[n] - b[n]));
    op /= a.max_abs();

    const auto ctx = make_energy_context(g, sym, Potential::cosine(), 1.0);
    RealField u = ctx.eta + 0.3 * random_field(g, 6);
    const double es = eval_energy(u, ctx);
    const double eb = eval_energy_bruteforce(u, ctx);
    const double en = std::abs(es - eb) / std::abs(es);

    const RealField grad = eval_gradient(u, ctx);
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const RealField phi = random_field(g, 100 + s);
        const double eps = 1e-5;
        const double fd = (eval_energy(u + eps * phi, ctx) - eval_energy(u - eps * phi, ctx)) / (2 * eps);
        const double an = inner(grad, phi);
        worst = std::max(worst, std::abs(fd - an) / std::abs(an));
    }
    v.detail << " operator " << op << ", energy " << en << ", gradient " << worst << " (relative, 8192 points)";
    v.require(op <= 1e-9, "operator");
    v.require(en <= 1e-6, "energy");
    v.require(worst <= 1e-5, "gradient");
    return v;
}

Verdict rearrangement() {
    Verdict v;
    // Every sign pattern of (a1 - a2, b1 - b2) appears among these rationals.
    std::vector<Rational> vals;
    for (int p = -3; p <= 3; ++p) {
        for (int q : {1, 2, 5}) vals.emplace_back(p, q);
    }
    long long count = 0;
    long long bad = 0;
    for (auto a1 : vals) {
        for (auto a2 : vals) {
            for (auto b1 : vals) {
                for (auto b2 : vals) {
                    ++count;
                    const Rational l = rearrangement_lhs(a1, a2, b1, b2);
                    const Rational r = rearrangement_rhs(a1, a2, b1, b2);
                    const bool opposed = (a1 - a2) * (b1 - b2) < Rational(0);
                    if (!(l == r) || l < Rational(0) || (l > Rational(0)) != opposed) ++bad;
                }
            }
        }
    }
    const auto ctx = line(0.0, 16.0, 256);
    double slack = std::numeric_limits<double>::infinity();
    for (std::uint64_t s = 0; s < 1000; ++s) {
        slack = std::min(slack, rearrange_pair(random_field(ctx.grid, 2 * s), random_field(ctx.grid, 2 * s + 1), ctx).slack);
    }
    const auto big = line(0.0);
    const auto res = minimize_energy(big, MinimizeConfig{}, big.eta);
    const double F = eval_energy(res.u, big);
    double shift = 0.0;
    for (double c : {big.grid.hx(), 3.7}) shift = std::max(shift, std::abs(eval_energy(translate(res.u, c), big) - F) / std::abs(F));
    v.detail << " identity " << count - bad << "/" << count << " exact, worst slack " << slack
             << " over 1000 pairs, translation " << shift;
    v.require(bad == 0, "scalar identity");
    v.require(slack >= -1e-10, "slack");
    v.require(shift <= 1e-8, "translation");
    return v;
}

Verdict elastic_reconstruction() {
    Verdict v;
    const double X = 200.0;
    const auto g = build_grid(1, X, 8192);
    const ElasticParams p{1.0, 0.0};
    const RealField layer = sample(g, [X](double x, double, double) { return analytic::periodic_layer(x, 0.0, 1.0, X); });
    const auto slab = extend_displacement(layer, p, {0.5, -0.5, 1.0, -1.0});
    double div = 0.0;
    for (const auto& d : divergence_residual(slab)) div = std::max(div, d.relative);
    const auto tr = slip_plane_traces(slab);
    const double s22 = tr.s22.max_abs() / tr.s12.max_abs();
    const RealField s12 = slip_stress_sigma12(layer, p);
    auto up = [X](double s) { return analytic::periodic_layer_prime(s, 0.0, 1.0, X); };
    double quad = 0.0;
    for (int i = g.nx() / 4; i <= 3 * g.nx() / 4; i += 128) {
        quad = std::max(quad, std::abs(slip_stress_sigma12_quadrature(up, p, X, g.x(i)) - s12[static_cast<std::size_t>(i)]));
    }
    const auto ctx = line(0.0);
    const auto res = minimize_energy(ctx, MinimizeConfig{}, ctx.eta);
    const double bnd = boundary_residual(res.u, p, ctx.potential).max_abs();
    v.detail << " divergence " << div << ", sigma22/sigma12 " << s22 << ", PV quadrature " << quad
             << ", boundary identity at minimizer " << bnd;
    v.require(div <= 1e-8, "divergence");
    v.require(s22 <= 1e-6, "sigma22");
    v.require(quad <= 1e-4, "quadrature");
    v.require(bnd <= 1e-6, "boundary identity");
    return v;
}

Verdict solitary_wave() {
    Verdict v;
    const auto g = build_grid(1, 4000.0, 1 << 17);
    const auto ctx = make_energy_context(g, SymbolSpec::pn_reduced(1, 0.0), Potential::benjamin_ono(), 0.5);
    const auto res = solve_solitary(ctx, MinimizeConfig{});
    double err = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.x(i);
        err = std::max(err, std::abs(res.u[static_cast<std::size_t>(i)] - 2.0 / (1.0 + x * x)));
    }
    v.detail << " sup |u - 2/(1+x^2)| " << err << ", residual " << res.report.residual;
    v.require(res.report.converged && res.report.residual <= 1e-8, "residual");
    v.require(err <= 1e-6, "profile");
    return v;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"analytic layer reproduction", analytic_layer},
        {"transverse symmetry witness", de_giorgi},
        {"uniqueness up to translation", uniqueness},
        {"spectral rigidity", spectral_rigidity},
        {"kernel certification", kernel_certification},
        {"oracle equivalence", oracle_equivalence},
        {"rearrangement suite", rearrangement},
        {"elastic reconstruction", elastic_reconstruction},
        {"solitary wave", solitary_wave},
    };
    int failed = 0;
    int index = 1;
    for (const auto& [name, fn] : criteria) {
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " exception: " << e.what();
        }
        if (!v.pass) ++failed;
        std::printf("criterion %d (%s): %s |%s\n", index++, name, v.pass ? "PASS" : "FAIL", v.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/9 criteria passed\n", 9 - failed);
    return failed == 0 ? 0 : 1;
}
