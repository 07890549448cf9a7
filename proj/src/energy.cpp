#include "pnlayer/energy.hpp"

#include "pnlayer/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pnlayer {

Potential Potential::cosine() { return Potential{}; }

Potential Potential::quartic() {
    Potential p;
    p.kind_ = PotentialKind::Quartic;
    return p;
}

Potential Potential::benjamin_ono() {
    Potential p;
    p.kind_ = PotentialKind::BenjaminOnoCubic;
    return p;
}

Potential Potential::polynomial(std::vector<double> coefficients) {
    if (coefficients.size() < 3) throw InvalidArgument("polynomial potential needs degree >= 2");
    Potential p;
    p.kind_ = PotentialKind::Polynomial;
    p.coefficients_ = std::move(coefficients);
    for (double w : {-1.0, 1.0}) {
        const auto e = p.eval(w);
        if (std::abs(e.value) > 1e-12 || std::abs(e.first) > 1e-12 || !(e.second > 0.0)) {
            throw InvalidArgument("polynomial potential is not a double well at +-1");
        }
    }
    for (int i = 1; i < 1000; ++i) {
        if (!(p.value(-1.0 + 2.0 * i / 1000.0) > 0.0)) {
            throw InvalidArgument("polynomial potential must be positive on (-1, 1)");
        }
    }
    return p;
}

Potential Potential::from_name(const std::string& name) {
    if (name == "cosine") return cosine();
    if (name == "quartic") return quartic();
    if (name == "benjamin-ono") return benjamin_ono();
    throw InvalidArgument("unknown potential '" + name + "'");
}

std::string Potential::name() const {
    switch (kind_) {
        case PotentialKind::Cosine: return "cosine";
        case PotentialKind::Quartic: return "quartic";
        case PotentialKind::BenjaminOnoCubic: return "benjamin-ono";
        case PotentialKind::Polynomial: return "polynomial";
    }
    return "unknown";
}

PotentialValues Potential::eval(double u) const {
    switch (kind_) {
        case PotentialKind::Cosine: {
            const double pi = std::numbers::pi;
            return {(std::cos(pi * u) + 1.0) / (pi * pi), -std::sin(pi * u) / pi, -std::cos(pi * u)};
        }
        case PotentialKind::Quartic: {
            const double w = 1.0 - u * u;
            return {w * w, -4.0 * u * w, 12.0 * u * u - 4.0};
        }
        case PotentialKind::BenjaminOnoCubic:
            return {u * u / 2.0 - u * u * u / 3.0, u - u * u, 1.0 - 2.0 * u};
        case PotentialKind::Polynomial: {
            PotentialValues r;
            for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
                r.second = r.second * u + 2.0 * r.first;
                r.first = r.first * u + r.value;
                r.value = r.value * u + *it;
            }
            return r;
        }
    }
    return {};
}

double Potential::well_curvature() const { return std::min(second(1.0), second(-1.0)); }

PotentialValues eval_potential(const Potential& p, double u) { return p.eval(u); }

double ReferenceProfile::eta(double x) {
    if (x <= -1.0) return -1.0;
    if (x >= 1.0) return 1.0;
    const double x2 = x * x;
    return x * (15.0 - 10.0 * x2 + 3.0 * x2 * x2) / 8.0;
}

double ReferenceProfile::eta_prime(double x) {
    if (x <= -1.0 || x >= 1.0) return 0.0;
    const double w = 1.0 - x * x;
    return 15.0 / 8.0 * w * w;
}

double ReferenceProfile::line_half_laplacian(double x) { return hilbert_line(&eta_prime, -1.0, 1.0, x); }

RealField ReferenceProfile::sample(const GridSpec& grid, double shift) {
    return pnlayer::sample(grid, [shift](double x, double, double) { return eta(x + shift); });
}

RealField ReferenceProfile::sample_prime(const GridSpec& grid) {
    return pnlayer::sample(grid, [](double x, double, double) { return eta_prime(x); });
}

RealField ReferenceProfile::periodic_part(const GridSpec& grid) {
    const double X = grid.half_length();
    return pnlayer::sample(grid, [X](double x, double, double) { return eta(x) - x / X; });
}

EnergyContext make_energy_context(const GridSpec& grid, const SymbolSpec& symbol, const Potential& potential,
                                  double G) {
    if (!(G > 0.0) || !std::isfinite(G)) throw InvalidArgument("shear modulus G must be positive");
    if (symbol.dim() != grid.dim()) throw InvalidArgument("symbol and grid dimensions differ");
    symbol_bounds(symbol, grid);
    EnergyContext ctx;
    ctx.grid = grid;
    ctx.symbol = symbol;
    ctx.potential = potential;
    ctx.G = G;
    ctx.c_L = reduced_1d_constant(symbol);
    ctx.sigma = symbol.table(grid);
    ctx.eta = ReferenceProfile::sample(grid);
    ctx.q = ReferenceProfile::periodic_part(grid);
    ctx.forcing = apply_symbol_table(ctx.q, ctx.sigma);
    return ctx;
}

namespace {

void require_context_grid(const RealField& u, const EnergyContext& ctx) {
    if (!(u.grid() == ctx.grid)) throw InvalidArgument("field grid does not match the energy context");
    if (!u.all_finite()) throw InvalidArgument("non-finite profile values");
}

double potential_sum(const RealField& u, const EnergyContext& ctx) {
    double s = 0.0;
    for (double x : u.values()) s += ctx.potential.value(x);
    return s * ctx.grid.cell_volume() / (2.0 * ctx.G);
}

}  // namespace

EnergyParts energy_parts(const RealField& u, const EnergyContext& ctx) {
    require_context_grid(u, ctx);
    const RealField v = u - ctx.eta;
    const RealField Lv = apply_symbol_table(v, ctx.sigma);
    EnergyParts e;
    e.quadratic = 0.5 * inner(v, Lv);
    e.cross = inner(v, ctx.forcing);
    e.potential = potential_sum(u, ctx);
    return e;
}

double eval_energy(const RealField& u, const EnergyContext& ctx) { return energy_parts(u, ctx).total(); }

EnergyParts energy_parts_bruteforce(const RealField& u, const EnergyContext& ctx) {
    require_context_grid(u, ctx);
    const auto& g = ctx.grid;
    if (g.size() > kBruteForceLimit) throw InvalidArgument("brute-force energy refuses grids above 8192 points");
    const auto kernel = extract_kernel(ctx.symbol, g);
    const RealField v = u - ctx.eta;
    const auto n = g.size();
    std::vector<std::array<int, 3>> idx(n);
    for (std::size_t w = 0; w < n; ++w) idx[w] = g.unflatten(w);
    const std::array<int, 3> dims{g.nx(), g.dim() > 1 ? g.ny()[0] : 1, g.dim() > 2 ? g.ny()[1] : 1};
    double quad = 0.0;
    double cross = 0.0;
    for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t wp = 0; wp < n; ++wp) {
            if (wp == w) continue;
            std::array<int, 3> d{};
            for (std::size_t a = 0; a < 3; ++a) d[a] = ((idx[w][a] - idx[wp][a]) % dims[a] + dims[a]) % dims[a];
            const double K = -kernel.values[g.flatten(d[0], d[1], d[2])];
            const double dv = v[w] - v[wp];
            quad += dv * dv * K;
            cross += dv * (ctx.q[w] - ctx.q[wp]) * K;
        }
    }
    const double cv2 = g.cell_volume() * g.cell_volume();
    EnergyParts e;
    e.quadratic = 0.25 * quad * cv2;
    e.cross = 0.5 * cross * cv2;
    e.potential = potential_sum(u, ctx);
    return e;
}

double eval_energy_bruteforce(const RealField& u, const EnergyContext& ctx) {
    return energy_parts_bruteforce(u, ctx).total();
}

RealField eval_gradient(const RealField& u, const EnergyContext& ctx) {
    require_context_grid(u, ctx);
    RealField g = apply_symbol_table(u - ctx.eta, ctx.sigma);
    g += ctx.forcing;
    const double s = 1.0 / (2.0 * ctx.G);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += s * ctx.potential.first(u[i]);
    return g;
}

RealField clip(const RealField& u, double lo, double hi) {
    RealField out = u;
    for (double& x : out.values()) x = std::clamp(x, lo, hi);
    return out;
}

RearrangeResult rearrange_pair(const RealField& u, const RealField& v, const EnergyContext& ctx, double tolerance) {
    if (!(u.grid() == v.grid())) throw InvalidArgument("rearrange_pair: fields live on different grids");
    RearrangeResult r{u, u, 0.0, true};
    bool above = false;
    bool below = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        r.m[i] = std::min(u[i], v[i]);
        r.M[i] = std::max(u[i], v[i]);
        above = above || u[i] - v[i] > tolerance;
        below = below || v[i] - u[i] > tolerance;
    }
    r.ordered = !(above && below);
    r.slack = (eval_energy(u, ctx) + eval_energy(v, ctx)) - (eval_energy(r.m, ctx) + eval_energy(r.M, ctx));
    return r;
}

RealField translate(const RealField& u, double c) {
    const auto& g = u.grid();
    if (!(std::abs(c) <= g.half_length() / 4.0)) throw InvalidArgument("translation exceeds X/4");
    // u - x/X is smooth at solutions; u - eta would carry the C^2 joins of eta.
    const double X = g.half_length();
    RealField out = shift_x(u - pnlayer::sample(g, [X](double x, double, double) { return x / X; }), c);
    out += pnlayer::sample(g, [X, c](double x, double, double) { return (x + c) / X; });
    return out;
}

}  // namespace pnlayer
