// Real-space convolution kernel of a symbol and its structural checks.
#pragma once

#include "pnlayer/grid.hpp"
#include "pnlayer/symbols.hpp"

#include <string>
#include <vector>

namespace pnlayer {

/// k_disc = inverse transform of sigma, so that (L f)(w) = sum_w' k(w - w') f(w') cv.
/// The interaction kernel K is -k_disc off the origin.
struct DiscreteKernel {
    RealField values;
    bool mollified = false;

    const GridSpec& grid() const { return values.grid(); }
    /// max |k(w) - k(-w)| relative to max |k|.
    double evenness_defect() const;
    /// |sum k cv| relative to max |k| cv.
    double mean_defect() const;
};

/// Raw band-limited kernel; exact partner of apply_operator.
DiscreteKernel extract_kernel(const SymbolSpec& symbol, const GridSpec& grid);

/// Kernel of sigma * exp(-|eps nu|^2 / 2) with eps = 2h per axis.  The sharp
/// Nyquist cutoff of the raw kernel oscillates at grid scale; the mollified
/// kernel is what the positivity and homogeneity checks read.
DiscreteKernel extract_certification_kernel(const SymbolSpec& symbol, const GridSpec& grid);

struct PositivityWindow {
    double max_abs_x = 0.0;  ///< |x| bound of the interior window
    double min_radius = 0.0; ///< excluded ball around the origin
};

/// |x| <= X/2 and |w| >= 8 max(h_x, h_y).
PositivityWindow default_positivity_window(const GridSpec& grid);

enum class KernelVerdict { Positive, Mixed, Indeterminate };
std::string to_string(KernelVerdict v);

struct PositivitySummary {
    double min_value = 0.0;  ///< most negative -k in the window, relative to max -k there
    double max_value = 0.0;  ///< absolute max of -k in the window
    std::size_t negative_count = 0;
};

PositivitySummary summarize_positivity(const DiscreteKernel& kernel, const PositivityWindow& window);

struct ScanRow {
    double nu = 0.0;
    KernelVerdict verdict = KernelVerdict::Indeterminate;
    double min_relative = 0.0;
    double exponent = 0.0;  ///< NaN when the fit window holds a nonpositive value
};

/// Classify each Poisson ratio by the sign of -k on the interior window.
/// Ratios within 0.005 of -1/2 or 1/3 are reported as indeterminate.
/// Rows are computed on up to `threads` workers; results do not depend on it.
std::vector<ScanRow> positivity_scan(const std::vector<double>& nus, const GridSpec& grid, int threads = 1);

struct HomogeneityWindow {
    double r_min = 0.0;
    double r_max = 0.0;
};

/// d = 1: [8h, X/4].  d >= 2 (slice along the x axis): [16h, 1/4], below the
/// crossover to line decay caused by the unit torus period.
HomogeneityWindow default_homogeneity_window(const GridSpec& grid);

/// Least-squares slope of log(-k) against log|x| along the x axis.
double homogeneity_exponent(const DiscreteKernel& kernel, const HomogeneityWindow& window);
double homogeneity_exponent(const DiscreteKernel& kernel);

/// O(N^2) oracle: (L f)(w) = sum_{w' != w} (f(w) - f(w')) K(w - w') cv.
RealField brute_force_apply(const RealField& f, const DiscreteKernel& kernel);

inline constexpr std::size_t kBruteForceLimit = 8192;

}  // namespace pnlayer
