// Potentials, the reference transition, and the perturbed energy.
//
// A profile u is stored on the grid as a full field; the periodic unknown is
// v = u - eta.  The energy is
//
//     F(u) = 1/2 <v, L v> + <v, L q> + (1/(2G)) sum gamma(u) cv,   q = eta - x/X,
//
// where q is the periodic part of eta on the box.  F differs from
// 1/2 <p, L p> + sum gamma(u) cv, p = u - x/X, by a constant, so F is exactly
// invariant under translations of the layer along x.
#pragma once

#include "pnlayer/grid.hpp"
#include "pnlayer/kernel.hpp"
#include "pnlayer/symbols.hpp"

#include <string>
#include <vector>

namespace pnlayer {

enum class PotentialKind { Cosine, Quartic, BenjaminOnoCubic, Polynomial };

struct PotentialValues {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

class Potential {
public:
    /// (cos(pi u) + 1) / pi^2
    static Potential cosine();
    /// (1 - u^2)^2
    static Potential quartic();
    /// u^2/2 - u^3/3
    static Potential benjamin_ono();
    /// Ascending coefficients; must be a double well with wells at +-1.
    static Potential polynomial(std::vector<double> coefficients);
    /// "cosine", "quartic" or "benjamin-ono".
    static Potential from_name(const std::string& name);

    PotentialKind kind() const { return kind_; }
    std::string name() const;
    bool is_double_well() const { return kind_ != PotentialKind::BenjaminOnoCubic; }

    PotentialValues eval(double u) const;
    double value(double u) const { return eval(u).value; }
    double first(double u) const { return eval(u).first; }
    double second(double u) const { return eval(u).second; }

    /// min(gamma''(1), gamma''(-1)).
    double well_curvature() const;

private:
    PotentialKind kind_ = PotentialKind::Cosine;
    std::vector<double> coefficients_;
};

PotentialValues eval_potential(const Potential& p, double u);

/// Quintic smoothstep on [-1, 1], +-1 outside.
struct ReferenceProfile {
    static double eta(double x);
    static double eta_prime(double x);
    /// Whole-line half-Laplacian of eta: (1/pi) PV int eta'(s) / (x - s) ds.
    static double line_half_laplacian(double x);

    /// eta(x + shift) at the grid points.
    static RealField sample(const GridSpec& grid, double shift = 0.0);
    /// eta'(x) at the grid points.
    static RealField sample_prime(const GridSpec& grid);
    /// q = eta - x/X: periodic on the box and C^2.
    static RealField periodic_part(const GridSpec& grid);
};

struct EnergyContext {
    GridSpec grid;
    SymbolSpec symbol;
    Potential potential;
    double G = 1.0;
    double c_L = 1.0;
    std::vector<double> sigma;  ///< symbol table on the grid
    RealField eta;              ///< eta at the grid points
    RealField q;                ///< eta - x/X
    RealField forcing;          ///< L q
};

/// Validates G > 0 and Assumption (A) for the symbol on the grid.
EnergyContext make_energy_context(const GridSpec& grid, const SymbolSpec& symbol, const Potential& potential,
                                  double G = 1.0);

struct EnergyParts {
    double quadratic = 0.0;  ///< 1/2 <v, L v>
    double cross = 0.0;      ///< <v, L q>
    double potential = 0.0;  ///< (1/(2G)) sum gamma(u) cv
    double total() const { return quadratic + cross + potential; }
};

EnergyParts energy_parts(const RealField& u, const EnergyContext& ctx);
double eval_energy(const RealField& u, const EnergyContext& ctx);

/// Double-sum oracle with the extracted kernel; grids up to 8192 points.
EnergyParts energy_parts_bruteforce(const RealField& u, const EnergyContext& ctx);
double eval_energy_bruteforce(const RealField& u, const EnergyContext& ctx);

/// L v + L q + gamma'(u) / (2G).
RealField eval_gradient(const RealField& u, const EnergyContext& ctx);

/// Pointwise clip into [lo, hi].
RealField clip(const RealField& u, double lo = -1.0, double hi = 1.0);

struct RearrangeResult {
    RealField m;
    RealField M;
    /// [F(u) + F(v)] - [F(m) + F(M)]
    double slack = 0.0;
    /// True when u - v has one sign on the grid (up to `tolerance`).
    bool ordered = false;
};

RearrangeResult rearrange_pair(const RealField& u, const RealField& v, const EnergyContext& ctx,
                               double tolerance = 1e-12);

/// ab + AB - a1 b1 - a2 b2 with a = min(a1, a2), A = max(a1, a2), likewise b.
template <class T>
T rearrangement_lhs(T a1, T a2, T b1, T b2) {
    const T a = a1 < a2 ? a1 : a2;
    const T A = a1 < a2 ? a2 : a1;
    const T b = b1 < b2 ? b1 : b2;
    const T B = b1 < b2 ? b2 : b1;
    return a * b + A * B - a1 * b1 - a2 * b2;
}

/// (a1 - a2)_+ (b1 - b2)_- + (a1 - a2)_- (b1 - b2)_+ with x_- = max(-x, 0).
template <class T>
T rearrangement_rhs(T a1, T a2, T b1, T b2) {
    const T zero{};
    const T da = a1 - a2;
    const T db = b1 - b2;
    const T da_p = da > zero ? da : zero;
    const T da_m = da < zero ? -da : zero;
    const T db_p = db > zero ? db : zero;
    const T db_m = db < zero ? -db : zero;
    return da_p * db_m + da_m * db_p;
}

/// u(. + c e_x): spectral shift of the periodic part u - x/X plus exact shift
/// of x/X.  |c| <= X/4.
RealField translate(const RealField& u, double c);

}  // namespace pnlayer
