// Elastic state of the two half-spaces generated by a slip-plane profile.
//
// The trace u1+ = x/X + p is split into the uniform part x/X carried by the
// periodic box and the periodic remainder p.  Only p is extended into the
// bulk; the uniform strain of x/X is left out of strains and stresses.  u1 is
// odd and u2 even across y = 0.
#pragma once

#include "pnlayer/energy.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pnlayer {

struct ElasticParams {
    double G = 1.0;
    double nu = 0.0;

    /// Throws for G <= 0 or nu outside (-1, 1/2).
    void validate() const;
    /// Non-empty when nu lies outside (-1/2, 1/3), where the reduced kernel
    /// loses positivity.
    std::vector<std::string> warnings() const;
};

class DisplacementSlab {
public:
    DisplacementSlab(const RealField& u1_plus, const ElasticParams& params, std::vector<double> y_levels);

    const GridSpec& grid() const { return grid_; }
    const ElasticParams& params() const { return params_; }
    const std::vector<double>& levels() const { return levels_; }
    /// The out-of-plane component vanishes identically (rigidity).
    bool u3_zero() const { return true; }

    /// Spectra (unnormalized DFT order) of the periodic parts at level i.
    std::vector<Complex> u1_spectrum(std::size_t level) const;
    std::vector<Complex> u2_spectrum(std::size_t level) const;

    /// Full displacements, including sgn(y) x/X in u1.
    RealField u1(std::size_t level) const;
    RealField u2(std::size_t level) const;

    /// Spectrum of p = u1+ - x/X.
    const std::vector<Complex>& trace_spectrum() const { return p_hat_; }

    struct Multipliers {
        Complex f, f1, f2;  ///< u1 factor and its first two |y| derivatives
        Complex h, h1, h2;  ///< u2 factor (times -1/(2-2nu)) and derivatives
    };
    /// Multipliers of FFT slot n at height t = |y| >= 0.
    Multipliers multipliers(std::size_t n, double t) const;

private:
    GridSpec grid_;
    ElasticParams params_;
    std::vector<double> levels_;
    std::vector<Complex> p_hat_;
};

/// Validates the levels (nonzero, finite) and builds the slab.
DisplacementSlab extend_displacement(const RealField& u1_plus, const ElasticParams& params,
                                     const std::vector<double>& y_levels);

struct StressLevel {
    double y = 0.0;
    RealField s11;
    RealField s12;
    RealField s22;
};

std::vector<StressLevel> stress_tensor(const DisplacementSlab& slab);

/// sigma_12 and sigma_22 on the slip plane (limit y -> 0+).
struct SlipTraces {
    RealField s12;
    RealField s22;
};
SlipTraces slip_plane_traces(const DisplacementSlab& slab);

/// sigma_12 = -(G / (1 - nu)) Lambda u1+, computed spectrally.
RealField slip_stress_sigma12(const RealField& u1_plus, const ElasticParams& params);

/// Principal-value quadrature of the same stress from the derivative of the
/// trace: -(G / (1 - nu)) times the periodic Hilbert transform of u1+'.
double slip_stress_sigma12_quadrature(const std::function<double(double)>& u1_prime, const ElasticParams& params,
                                      double X, double x);

struct DivergenceResidual {
    double y = 0.0;
    double absolute = 0.0;     ///< ||div sigma||_L2
    double relative = 0.0;     ///< absolute / ||sigma||_L2
};

/// Divergence of the stress with analytic y-derivatives at every level.
std::vector<DivergenceResidual> divergence_residual(const DisplacementSlab& slab);

/// 2 sigma_12 - gamma'(u1+): vanishes at a solution of the reduced equation.
RealField boundary_residual(const RealField& u1_plus, const ElasticParams& params, const Potential& potential);

/// <L p, p> with p = u1+ - x/X = v + q, split as <v,Lv> + 2<v,Lq> + <q,Lq>.
struct ElasticEnergy {
    double quadratic = 0.0;
    double cross = 0.0;
    double self = 0.0;
    double total() const { return quadratic + cross + self; }
};
ElasticEnergy elastic_energy(const RealField& u1_plus, const ElasticParams& params);

}  // namespace pnlayer
