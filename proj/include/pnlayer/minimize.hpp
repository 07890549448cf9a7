// Energy minimization and diagnostics of layer profiles.
#pragma once

#include "pnlayer/energy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace pnlayer {

struct MinimizeConfig {
    int max_iterations = 20000;
    double tol_r = 1e-8;  ///< discrete L2 norm of the gradient
    double mu = 1.0;      ///< preconditioner (sigma + mu)^{-1}
    bool clip_each_step = true;
    /// Dirichlet interval (a, b) with a < -1 < 1 < b: u = eta outside.
    std::optional<std::pair<double, double>> interval;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    double initial_energy = 0.0;
    double energy = 0.0;
    double monotonicity_margin = 0.0;
    double transverse_range = 0.0;
    /// Offset align_translation would apply (0 when u has no sign change).
    double translation_offset = 0.0;
    /// max |u(-X) + 1|, |u(X - h) - 1| over transverse lines.
    double truncation_error = 0.0;
    std::string message;
};

struct SolveResult {
    RealField u;
    SolveReport report;
};

/// Projected, Sobolev-preconditioned descent with Armijo backtracking.
/// Non-convergence is reported, not thrown; non-finite iterates throw.
SolveResult minimize_energy(const EnergyContext& ctx, const MinimizeConfig& cfg, const RealField& u0);

/// eta plus a smooth seeded perturbation localized near the core, clipped to [-1, 1].
RealField perturbed_initial(const GridSpec& grid, std::uint64_t seed, double amplitude);

struct Alignment {
    RealField u;
    double offset = 0.0;
};

/// Translate u so that its transverse average vanishes at x = 0.
/// The reported offset is minus the located zero: a layer centred at 3.7 gives -3.7.
Alignment align_translation(const RealField& u);

/// Location of the zero crossing closest to x = 0 of the transverse average.
double locate_zero(const RealField& u);

/// min over the grid of d/dx u, evaluated as D(u - eta) + eta'.
double monotonicity_check(const RealField& u);

/// max over x of (max_y u - min_y u); requires d >= 2.
double symmetry_check(const RealField& u);

/// Solitary wave of 2G L u + u - u^2 = 0 by Petviashvili iteration.  Requires
/// d = 1, the Benjamin-Ono potential and a symbol that reduces to |xi|.
SolveResult solve_solitary(const EnergyContext& ctx, const MinimizeConfig& cfg);

}  // namespace pnlayer
