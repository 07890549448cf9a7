// Linearization of the layer equation and its lowest eigenpairs.
#pragma once

#include "pnlayer/energy.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace pnlayer {

/// phi -> L phi + gamma''(u*) phi / (2G).
class LinearizedOperator {
public:
    LinearizedOperator(const EnergyContext& ctx, const RealField& u_star, bool base_converged = true);

    /// The nonlocal operator alone (multiplier removed, edge estimate 0).
    static LinearizedOperator bare(const EnergyContext& ctx);

    RealField apply(const RealField& phi) const;

    const EnergyContext& context() const { return ctx_; }
    const GridSpec& grid() const { return ctx_.grid; }
    const RealField& base() const { return base_; }
    const RealField& multiplier() const { return multiplier_; }
    bool base_converged() const { return base_converged_; }

    /// min(gamma''(1), gamma''(-1)) / (2G); a numerical stand-in for the
    /// bottom of the essential spectrum.
    double edge_estimate() const { return edge_; }
    /// min over the grid of the multiplier, clipped at 0 from above.
    double lower_bound_estimate() const;

private:
    LinearizedOperator() = default;
    EnergyContext ctx_;
    RealField base_;
    RealField multiplier_;
    double edge_ = 0.0;
    bool base_converged_ = true;
};

struct SpectrumConfig {
    int k = 3;
    /// Shift-invert target; NaN selects -0.1 * edge estimate.
    double shift = std::numeric_limits<double>::quiet_NaN();
    double residual_tol = 1e-9;  ///< ||L x - theta x|| / ||x||
    int max_basis = 120;
    int max_restarts = 60;
    int cg_max_iterations = 4000;
    double cg_tol = 1e-12;
    std::uint64_t seed = 1;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;  ///< ascending
    std::vector<RealField> eigenvectors;
    std::vector<double> residuals;
    double overlap = 0.0;  ///< |<g0, d_x u*>| / (||g0|| ||d_x u*||)
    double edge_estimate = 0.0;
    double gap = 0.0;  ///< lambda_1 - lambda_0
    double lower_bound_estimate = 0.0;
    double shift = 0.0;
    std::string method;
    bool base_converged = true;
    int restarts = 0;
    int solves = 0;
};

/// Block shift-invert Krylov iteration with Rayleigh-Ritz on L.  Throws
/// NumericalError if the inner conjugate-gradient solve breaks down.
SpectrumReport lowest_eigenpairs(const LinearizedOperator& L, const SpectrumConfig& cfg = {});

/// Dense symmetric eigen-solve of the assembled operator (grids up to 4096 points).
SpectrumReport lowest_eigenpairs_dense(const LinearizedOperator& L, int k);

inline constexpr std::size_t kDenseLimit = 4096;

struct SimplicityResult {
    bool simple = false;
    int zero_count = 0;
    double next = 0.0;  ///< first eigenvalue outside (-tol_zero, tol_zero)
    double tol_zero = 0.0;
};

/// Exactly one eigenvalue in (-tol, tol), the next >= 10 tol, and the edge
/// estimate >= 10 tol (zero must sit below a gap).
SimplicityResult kernel_simplicity_check(const SpectrumReport& report, double tol_zero);

struct MaximalPrincipleVerdict {
    double at_max = 0.0;
    double at_min = 0.0;
    double scale = 0.0;
    bool pass = false;
};

/// L f at the first global max (expected >= 0) and min (expected <= 0).
MaximalPrincipleVerdict maximal_principle_probe(const RealField& f, const SymbolSpec& symbol);

}  // namespace pnlayer
