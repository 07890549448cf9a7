#include "pnlayer/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace pnlayer {

void MinimizeConfig::validate() const {
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
    if (!(tol_r > 0.0)) throw InvalidArgument("tol_r must be positive");
    if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
    if (interval && !(interval->first < -1.0 && interval->second > 1.0)) {
        throw InvalidArgument("interval (a, b) must satisfy a < -1 < 1 < b");
    }
}

namespace {

struct State {
    RealField u;
    RealField grad;
    double energy = 0.0;
    double energy_scale = 0.0;  ///< sum of |parts|, for round-off allowances
};

State evaluate(const RealField& u, const EnergyContext& ctx) {
    const RealField v = u - ctx.eta;
    RealField Lv = apply_symbol_table(v, ctx.sigma);
    const double quad = 0.5 * inner(v, Lv);
    const double cross = inner(v, ctx.forcing);
    const double s = 1.0 / (2.0 * ctx.G);
    double pot = 0.0;
    RealField g = std::move(Lv);
    g += ctx.forcing;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto p = ctx.potential.eval(u[i]);
        pot += p.value;
        g[i] += s * p.first;
    }
    pot *= ctx.grid.cell_volume() * s;
    const double e = quad + cross + pot;
    if (!std::isfinite(e) || !g.all_finite()) throw NumericalError("minimize_energy: non-finite energy or gradient");
    return {u, std::move(g), e, std::abs(quad) + std::abs(cross) + std::abs(pot)};
}

std::vector<char> interval_mask(const GridSpec& grid, const MinimizeConfig& cfg) {
    std::vector<char> free(grid.size(), 1);
    if (!cfg.interval) return free;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double x = grid.x(grid.unflatten(n)[0]);
        free[n] = (x > cfg.interval->first && x < cfg.interval->second) ? 1 : 0;
    }
    return free;
}

void apply_mask(RealField& f, const std::vector<char>& free) {
    for (std::size_t n = 0; n < f.size(); ++n) {
        if (!free[n]) f[n] = 0.0;
    }
}

double truncation_error(const RealField& u) {
    const auto& g = u.grid();
    double e = 0.0;
    const auto nx = static_cast<std::size_t>(g.nx());
    for (std::size_t line = 0; line < g.transverse_size(); ++line) {
        e = std::max(e, std::abs(u[line * nx] + 1.0));
        e = std::max(e, std::abs(u[line * nx + nx - 1] - 1.0));
    }
    return e;
}

void fill_diagnostics(const RealField& u, SolveReport& r) {
    r.monotonicity_margin = monotonicity_check(u);
    r.transverse_range = u.grid().dim() >= 2 ? symmetry_check(u) : 0.0;
    try {
        r.translation_offset = -locate_zero(u);
    } catch (const InvalidArgument&) {
        r.translation_offset = 0.0;
    }
    r.truncation_error = truncation_error(u);
}

}  // namespace

SolveResult minimize_energy(const EnergyContext& ctx, const MinimizeConfig& cfg, const RealField& u0) {
    cfg.validate();
    if (!(u0.grid() == ctx.grid)) throw InvalidArgument("initial field grid does not match the context");
    if (!u0.all_finite()) throw InvalidArgument("initial field has non-finite values");
    const auto free = interval_mask(ctx.grid, cfg);
    for (std::size_t n = 0; n < u0.size(); ++n) {
        if (!free[n] && u0[n] != ctx.eta[n]) throw InvalidArgument("interval mode needs u0 = eta outside (a, b)");
    }

    std::vector<double> precond(ctx.sigma.size());
    for (std::size_t n = 0; n < precond.size(); ++n) precond[n] = 1.0 / (ctx.sigma[n] + cfg.mu);

    auto project = [&](RealField u) {
        if (cfg.clip_each_step) u = clip(u);
        for (std::size_t n = 0; n < u.size(); ++n) {
            if (!free[n]) u[n] = ctx.eta[n];
        }
        return u;
    };

    State s = evaluate(project(u0), ctx);
    SolveResult out;
    out.report.initial_energy = eval_energy(u0, ctx);
    RealField g = s.grad;
    apply_mask(g, free);
    double residual = l2_norm(g);
    double alpha = 1.0;
    int it = 0;
    std::string message = "max_iterations reached";
    bool converged = false;
    constexpr double kArmijo = 1e-4;

    for (; it < cfg.max_iterations; ++it) {
        if (residual <= cfg.tol_r) {
            converged = true;
            message = "converged";
            break;
        }
        RealField d = apply_symbol_table(g, precond);
        d *= -1.0;
        apply_mask(d, free);

        const double allowance = 64.0 * std::numeric_limits<double>::epsilon() * s.energy_scale;
        alpha = std::min(1.0, 2.0 * alpha);
        bool accepted = false;
        State trial;
        while (alpha > 1e-12) {
            RealField cand = s.u;
            for (std::size_t n = 0; n < cand.size(); ++n) cand[n] += alpha * d[n];
            cand = project(std::move(cand));
            trial = evaluate(cand, ctx);
            const double decrease = inner(s.grad, cand - s.u);
            if (trial.energy <= s.energy + kArmijo * std::min(decrease, 0.0) + allowance) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            message = "line search stalled";
            break;
        }
        s = std::move(trial);
        g = s.grad;
        apply_mask(g, free);
        residual = l2_norm(g);
    }
    if (!converged && residual <= cfg.tol_r) {
        converged = true;
        message = "converged";
    }

    out.u = s.u;
    out.report.converged = converged;
    out.report.iterations = it;
    out.report.residual = residual;
    out.report.energy = s.energy;
    out.report.message = message;
    fill_diagnostics(out.u, out.report);
    return out;
}

RealField perturbed_initial(const GridSpec& grid, std::uint64_t seed, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double shift = 2.0 * coef(rng);
    std::array<double, 4> a{};
    for (double& c : a) c = coef(rng);
    const double ph0 = phase(rng);
    const double ph1 = phase(rng);
    const double ty = grid.dim() > 1 ? coef(rng) : 0.0;
    RealField u = sample(grid, [&](double x, double y0, double y1) {
        const double z = x / 3.0;
        const double bump = std::exp(-z * z) * (a[0] + a[1] * z + a[2] * z * z + a[3] * z * z * z);
        const double transverse = 1.0 + ty * std::cos(2.0 * std::numbers::pi * y0 + ph0) * std::cos(2.0 * std::numbers::pi * y1 + ph1);
        return ReferenceProfile::eta(x + shift) + amplitude * bump * transverse;
    });
    // Keep v = u - eta compactly supported relative to the box.
    return clip(u);
}

double locate_zero(const RealField& u) {
    const RealField line = u.grid().dim() == 1 ? u : transverse_average(u);
    const auto& g = line.grid();
    const int n = g.nx();
    int best = -1;
    for (int i = 0; i + 1 < n; ++i) {
        const double a = line[static_cast<std::size_t>(i)];
        const double b = line[static_cast<std::size_t>(i + 1)];
        if ((a <= 0.0 && b > 0.0) || (a >= 0.0 && b < 0.0)) {
            if (best < 0 || std::abs(g.x(i)) < std::abs(g.x(best))) best = i;
        }
    }
    if (best < 0) throw InvalidArgument("not a transition profile");
    if (line[static_cast<std::size_t>(best)] == 0.0) return g.x(best);

    // Interpolate the periodic part u - x/X; u itself jumps by 2 across the box edge.
    const double X = g.half_length();
    std::vector<Complex> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = line[static_cast<std::size_t>(i)] - g.x(i) / X;
    detail::fft_inplace(g, c, -1);
    auto eval = [&](double x) {
        const double t = x + g.half_length();
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto& ci = c[static_cast<std::size_t>(i)];
            const double ph = g.xi(i) * t;
            s += i == n / 2 ? ci.real() * std::cos(ph) : (ci * std::polar(1.0, ph)).real();
        }
        return s / n + x / X;
    };
    double lo = g.x(best);
    double hi = g.x(best + 1);
    double flo = eval(lo);
    for (int k = 0; k < 80 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Alignment align_translation(const RealField& u) {
    const double x0 = locate_zero(u);
    return {translate(u, x0), -x0};
}

double monotonicity_check(const RealField& u) {
    const auto& g = u.grid();
    const RealField d = derivative_x(u - ReferenceProfile::sample(g));
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < u.size(); ++n) {
        m = std::min(m, d[n] + ReferenceProfile::eta_prime(g.x(g.unflatten(n)[0])));
    }
    return m;
}

double symmetry_check(const RealField& u) {
    const auto& g = u.grid();
    if (g.dim() < 2) throw InvalidArgument("symmetry_check needs d >= 2");
    const auto nx = static_cast<std::size_t>(g.nx());
    std::vector<double> lo(nx, std::numeric_limits<double>::infinity());
    std::vector<double> hi(nx, -std::numeric_limits<double>::infinity());
    for (std::size_t n = 0; n < u.size(); ++n) {
        lo[n % nx] = std::min(lo[n % nx], u[n]);
        hi[n % nx] = std::max(hi[n % nx], u[n]);
    }
    double r = 0.0;
    for (std::size_t i = 0; i < nx; ++i) r = std::max(r, hi[i] - lo[i]);
    return r;
}

SolveResult solve_solitary(const EnergyContext& ctx, const MinimizeConfig& cfg) {
    cfg.validate();
    if (ctx.grid.dim() != 1) throw InvalidArgument("solitary waves are computed on d = 1 grids");
    if (ctx.potential.kind() != PotentialKind::BenjaminOnoCubic) {
        throw InvalidArgument("solitary waves need the benjamin-ono potential");
    }
    if (std::abs(ctx.c_L - 1.0) > 1e-12) throw InvalidArgument("solitary waves need a symbol reducing to |xi| (nu = 0)");

    const auto& g = ctx.grid;
    const double twoG = 2.0 * ctx.G;
    std::vector<double> inv_m(ctx.sigma.size());
    for (std::size_t n = 0; n < inv_m.size(); ++n) inv_m[n] = 1.0 / (1.0 + twoG * ctx.sigma[n]);

    RealField u = sample(g, [&](double x, double, double) { return 2.0 * std::exp(-x * x / (2.0 * twoG * twoG)); });
    auto residual_of = [&](const RealField& w) {
        RealField r = apply_symbol_table(w, ctx.sigma);
        for (std::size_t n = 0; n < r.size(); ++n) r[n] += ctx.potential.first(w[n]) / twoG;
        return r;
    };

    SolveResult out;
    double residual = l2_norm(residual_of(u));
    int it = 0;
    bool converged = false;
    for (; it < cfg.max_iterations; ++it) {
        if (residual <= cfg.tol_r) {
            converged = true;
            break;
        }
        RealField u2 = u;
        for (std::size_t n = 0; n < u2.size(); ++n) u2[n] = u[n] * u[n];
        RealField Mu = apply_symbol_table(u, ctx.sigma);
        Mu *= twoG;
        Mu += u;
        const double num = inner(u, Mu);
        const double den = inner(u, u2);
        if (!(std::abs(den) > 0.0) || u.max_abs() < 1e-8) {
            throw NumericalError("trivial fixed point; adjust initial amplitude");
        }
        const double S = num / den;
        RealField next = apply_symbol_table(u2, inv_m);
        next *= S * S;
        if (!next.all_finite()) throw NumericalError("solve_solitary: non-finite iterate");
        u = std::move(next);
        if (u.max_abs() < 1e-8) throw NumericalError("trivial fixed point; adjust initial amplitude");
        residual = l2_norm(residual_of(u));
    }
    if (!converged && residual <= cfg.tol_r) converged = true;

    const RealField Lu = apply_symbol_table(u, ctx.sigma);
    double pot = 0.0;
    for (double x : u.values()) pot += ctx.potential.value(x);
    out.report.converged = converged;
    out.report.iterations = it;
    out.report.residual = residual;
    out.report.energy = 0.5 * inner(u, Lu) + pot * g.cell_volume() / twoG;
    out.report.initial_energy = out.report.energy;
    out.report.truncation_error = std::max(std::abs(u[0]), std::abs(u[u.size() - 1]));
    out.report.message = converged ? "converged" : "max_iterations reached";
    out.u = std::move(u);
    return out;
}

}  // namespace pnlayer
