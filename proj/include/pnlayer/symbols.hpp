// Fourier multipliers of order one and their spectral application.
#pragma once

#include "pnlayer/grid.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace pnlayer {

/// |k|^3 / ((1-nu) k1^2 + |k_perp|^2), 0 at k = 0.  `k_perp` is the norm of
/// the transverse frequency (0 on the line).
double sigma_pn(double nu, double k1, double k_perp);

/// Euclidean norm |k|.
double sigma_half(std::span<const double> k);

/// Symmetric 2x2 symbol of the coupled (u1, u3) system.
struct Matrix2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;
};
Matrix2 matrix_symbol(double nu, double k1, double k2);

/// Multiplier m with u3^ = m u1^: -nu k1 k2 / ((1-nu) k1^2 + k2^2).
double u3_multiplier(double nu, double k1, double k2);

/// Throws unless nu lies in (-1, 1/2).
void require_poisson_ratio(double nu);

enum class SymbolKind { HalfLaplacian, PNReduced, Tabulated };

class SymbolSpec {
public:
    static SymbolSpec half_laplacian(int d);
    static SymbolSpec pn_reduced(int d, double nu);
    /// Values on the full lattice of `grid` in FFT order.  Rejects tables that
    /// are not even, not finite, or nonzero at the origin.
    static SymbolSpec tabulated(const GridSpec& grid, std::vector<double> values);

    SymbolKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double poisson_ratio() const { return nu_; }
    std::string name() const;

    /// Symbol at a frequency vector of length dim.  Tabulated symbols have no
    /// off-lattice values and throw here.
    double operator()(std::span<const double> nu) const;

    /// Symbol at every slot of `grid` in FFT order.
    std::vector<double> table(const GridSpec& grid) const;

    const GridSpec& table_grid() const { return table_grid_; }

private:
    SymbolKind kind_ = SymbolKind::HalfLaplacian;
    int dim_ = 1;
    double nu_ = 0.0;
    GridSpec table_grid_;
    std::vector<double> table_;
};

/// CSV with a header row and columns (i_x[, i_y0[, i_y1]], value), signed
/// indices; every lattice point must appear exactly once.
SymbolSpec load_tabulated_symbol(const std::filesystem::path& path, const GridSpec& grid);

/// c such that sigma(xi, 0) = c |xi|; throws if the ratio is not constant.
double reduced_1d_constant(const SymbolSpec& symbol);

/// ifft(sigma * fft(f)).
RealField apply_operator(const RealField& f, const SymbolSpec& symbol);

/// Same with a precomputed table from SymbolSpec::table.
RealField apply_symbol_table(const RealField& f, std::span<const double> table);

struct SymbolBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Infimum and supremum of sigma/|nu| over the nonzero lattice of `grid`.
SymbolBounds symbol_bounds(const SymbolSpec& symbol, const GridSpec& grid);

}  // namespace pnlayer
