#include "pnlayer/elasticity.hpp"

#include "pnlayer/quadrature.hpp"

#include <cmath>

namespace pnlayer {

void ElasticParams::validate() const {
    if (!(G > 0.0) || !std::isfinite(G)) throw InvalidArgument("shear modulus G must be positive");
    require_poisson_ratio(nu);
}

std::vector<std::string> ElasticParams::warnings() const {
    if (nu > -0.5 && nu < 1.0 / 3.0) return {};
    return {"Poisson ratio outside (-1/2, 1/3): the reduced kernel is not positive"};
}

namespace {

void require_line(const RealField& u) {
    if (u.grid().dim() != 1) throw InvalidArgument("slip-plane traces live on d = 1 grids");
    if (!u.all_finite()) throw InvalidArgument("slip-plane trace has non-finite values");
}

RealField periodic_remainder(const RealField& u) {
    const double X = u.grid().half_length();
    RealField p = u;
    for (int i = 0; i < u.grid().nx(); ++i) p[static_cast<std::size_t>(i)] -= u.grid().x(i) / X;
    return p;
}

RealField inverse_real(const GridSpec& g, std::vector<Complex> spec) {
    detail::fft_inplace(g, spec, +1);
    RealField out(g);
    const double inv = 1.0 / static_cast<double>(g.size());
    for (std::size_t n = 0; n < spec.size(); ++n) out[n] = spec[n].real() * inv;
    return out;
}

double lame_lambda(const ElasticParams& p) { return 2.0 * p.nu * p.G / (1.0 - 2.0 * p.nu); }

double sgn(double y) { return y > 0.0 ? 1.0 : -1.0; }

}  // namespace

DisplacementSlab::DisplacementSlab(const RealField& u1_plus, const ElasticParams& params, std::vector<double> y_levels)
    : grid_(u1_plus.grid()), params_(params), levels_(std::move(y_levels)) {
    params_.validate();
    require_line(u1_plus);
    const RealField p = periodic_remainder(u1_plus);
    p_hat_.assign(p.values().begin(), p.values().end());
    detail::fft_inplace(grid_, p_hat_, -1);
}

DisplacementSlab::Multipliers DisplacementSlab::multipliers(std::size_t n, double t) const {
    const int ix = static_cast<int>(n);
    const double xi = grid_.xi(ix);
    Multipliers m{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    if (xi == 0.0) return m;
    const double nu = params_.nu;
    const double a = 1.0 / (2.0 - 2.0 * nu);
    const double b = 1.0 - 2.0 * nu;
    const double s = std::abs(xi);
    const double st = s * t;
    const double e = std::exp(-st);
    m.f = (1.0 - a * st) * e;
    m.f1 = s * (-a - 1.0 + a * st) * e;
    m.f2 = s * s * (2.0 * a + 1.0 - a * st) * e;
    // Odd symbols have no real-valued Nyquist counterpart.
    if (ix == grid_.nx() / 2) return m;
    const Complex i(0.0, 1.0);
    m.h = i * (b * (xi > 0.0 ? 1.0 : -1.0) + xi * t) * e;
    m.h1 = i * xi * (2.0 * nu - st) * e;
    m.h2 = -i * xi * s * (1.0 + 2.0 * nu - st) * e;
    return m;
}

std::vector<Complex> DisplacementSlab::u1_spectrum(std::size_t level) const {
    const double y = levels_.at(level);
    std::vector<Complex> out(p_hat_.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = sgn(y) * p_hat_[n] * multipliers(n, std::abs(y)).f;
    return out;
}

std::vector<Complex> DisplacementSlab::u2_spectrum(std::size_t level) const {
    const double y = levels_.at(level);
    const double a = 1.0 / (2.0 - 2.0 * params_.nu);
    std::vector<Complex> out(p_hat_.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = -a * p_hat_[n] * multipliers(n, std::abs(y)).h;
    return out;
}

RealField DisplacementSlab::u1(std::size_t level) const {
    RealField u = inverse_real(grid_, u1_spectrum(level));
    const double sy = sgn(levels_.at(level));
    for (int i = 0; i < grid_.nx(); ++i) u[static_cast<std::size_t>(i)] += sy * grid_.x(i) / grid_.half_length();
    return u;
}

RealField DisplacementSlab::u2(std::size_t level) const { return inverse_real(grid_, u2_spectrum(level)); }

DisplacementSlab extend_displacement(const RealField& u1_plus, const ElasticParams& params,
                                     const std::vector<double>& y_levels) {
    for (double y : y_levels) {
        if (!std::isfinite(y) || y == 0.0) throw InvalidArgument("slab levels must be finite and nonzero");
    }
    return DisplacementSlab(u1_plus, params, y_levels);
}

namespace {

struct LevelSpectra {
    std::vector<Complex> e11, e22, e12;  ///< strains
    std::vector<Complex> div1, div2;
};

LevelSpectra level_spectra(const DisplacementSlab& slab, double y) {
    const auto& g = slab.grid();
    const auto& p = slab.trace_spectrum();
    const double G = slab.params().G;
    const double lam = lame_lambda(slab.params());
    const double a = 1.0 / (2.0 - 2.0 * slab.params().nu);
    const double sy = y >= 0.0 ? 1.0 : -1.0;
    const double t = std::abs(y);
    const Complex i(0.0, 1.0);
    LevelSpectra s;
    const auto n = p.size();
    s.e11.resize(n);
    s.e22.resize(n);
    s.e12.resize(n);
    s.div1.resize(n);
    s.div2.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const int ix = static_cast<int>(k);
        const double xi = ix == g.nx() / 2 ? 0.0 : g.xi(ix);
        const auto m = slab.multipliers(k, t);
        const Complex U1 = p[k] * m.f, U1p = p[k] * m.f1, U1pp = p[k] * m.f2;
        const Complex U2 = -a * p[k] * m.h, U2p = -a * p[k] * m.h1, U2pp = -a * p[k] * m.h2;
        const Complex ixi = i * xi;
        s.e11[k] = sy * ixi * U1;
        s.e22[k] = sy * U2p;
        s.e12[k] = 0.5 * (U1p + ixi * U2);
        s.div1[k] = sy * (ixi * ((2.0 * G + lam) * ixi * U1 + lam * U2p) + G * (U1pp + ixi * U2p));
        s.div2[k] = ixi * G * (U1p + ixi * U2) + lam * ixi * U1p + (2.0 * G + lam) * U2pp;
    }
    return s;
}

StressLevel stresses_at(const DisplacementSlab& slab, double y) {
    const auto& g = slab.grid();
    const double G = slab.params().G;
    const double lam = lame_lambda(slab.params());
    const auto s = level_spectra(slab, y);
    const RealField e11 = inverse_real(g, s.e11);
    const RealField e22 = inverse_real(g, s.e22);
    const RealField e12 = inverse_real(g, s.e12);
    StressLevel out{y, RealField(g), RealField(g), RealField(g)};
    for (std::size_t n = 0; n < e11.size(); ++n) {
        const double tr = e11[n] + e22[n];
        out.s11[n] = 2.0 * G * e11[n] + lam * tr;
        out.s22[n] = 2.0 * G * e22[n] + lam * tr;
        out.s12[n] = 2.0 * G * e12[n];
    }
    return out;
}

}  // namespace

std::vector<StressLevel> stress_tensor(const DisplacementSlab& slab) {
    std::vector<StressLevel> out;
    for (double y : slab.levels()) out.push_back(stresses_at(slab, y));
    return out;
}

SlipTraces slip_plane_traces(const DisplacementSlab& slab) {
    auto s = stresses_at(slab, 0.0);
    return {std::move(s.s12), std::move(s.s22)};
}

RealField slip_stress_sigma12(const RealField& u1_plus, const ElasticParams& params) {
    params.validate();
    require_line(u1_plus);
    const auto& g = u1_plus.grid();
    const auto table = SymbolSpec::half_laplacian(1).table(g);
    RealField s = apply_symbol_table(periodic_remainder(u1_plus), table);
    s *= -params.G / (1.0 - params.nu);
    return s;
}

double slip_stress_sigma12_quadrature(const std::function<double(double)>& u1_prime, const ElasticParams& params,
                                      double X, double x) {
    params.validate();
    return -params.G / (1.0 - params.nu) * hilbert_periodic(u1_prime, X, x);
}

std::vector<DivergenceResidual> divergence_residual(const DisplacementSlab& slab) {
    const auto& g = slab.grid();
    std::vector<DivergenceResidual> out;
    for (double y : slab.levels()) {
        const auto s = level_spectra(slab, y);
        const RealField d1 = inverse_real(g, s.div1);
        const RealField d2 = inverse_real(g, s.div2);
        const auto st = stresses_at(slab, y);
        DivergenceResidual r;
        r.y = y;
        r.absolute = std::sqrt(inner(d1, d1) + inner(d2, d2));
        const double norm = std::sqrt(inner(st.s11, st.s11) + 2.0 * inner(st.s12, st.s12) + inner(st.s22, st.s22));
        r.relative = norm > 0.0 ? r.absolute / norm : r.absolute;
        out.push_back(r);
    }
    return out;
}

RealField boundary_residual(const RealField& u1_plus, const ElasticParams& params, const Potential& potential) {
    RealField r = slip_stress_sigma12(u1_plus, params);
    for (std::size_t n = 0; n < r.size(); ++n) r[n] = 2.0 * r[n] - potential.first(u1_plus[n]);
    return r;
}

ElasticEnergy elastic_energy(const RealField& u1_plus, const ElasticParams& params) {
    params.validate();
    require_line(u1_plus);
    const auto& g = u1_plus.grid();
    const auto table = SymbolSpec::pn_reduced(1, params.nu).table(g);
    const RealField q = ReferenceProfile::periodic_part(g);
    const RealField v = u1_plus - ReferenceProfile::sample(g);
    const RealField Lq = apply_symbol_table(q, table);
    ElasticEnergy e;
    e.quadratic = inner(v, apply_symbol_table(v, table));
    e.cross = 2.0 * inner(v, Lq);
    e.self = inner(q, Lq);
    return e;
}

}  // namespace pnlayer
