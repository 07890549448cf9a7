// Truncated-cylinder discretization of R x T^{d-1} and its spectral transforms.
//
// The x axis is truncated to the periodic box [-X, X); every torus axis has
// unit period.  Values are stored lexicographically with x fastest.  Spectral
// coefficients use the convention
//
//     f^(nu) = sum_w f(w) exp(-i <nu, w>) * cell_volume,
//
// with nu = (xi, k), xi in (pi/X){-n_x/2 .. n_x/2-1}, k in 2 pi {-n_y/2 .. n_y/2-1},
// stored in FFT order (non-negative indices first).
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pnlayer {

using Complex = std::complex<double>;

/// Thrown when a grid, field or parameter violates a precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an iteration produces non-finite values or breaks down.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridSpec {
public:
    GridSpec() = default;

    int dim() const { return dim_; }
    double half_length() const { return half_length_; }
    int nx() const { return nx_; }
    /// Points per torus axis (length dim-1).
    const std::vector<int>& ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy(int axis) const { return 1.0 / ny_.at(static_cast<std::size_t>(axis)); }

    std::size_t size() const;
    /// Product of n_y over the torus axes (1 when d = 1).
    std::size_t transverse_size() const;
    double cell_volume() const;
    /// Volume of the box: 2X * 1^{d-1}.
    double volume() const { return 2.0 * half_length_; }

    double x(int i) const { return -half_length_ + i * hx_; }
    double y(int axis, int j) const { return j * hy(axis); }

    /// Signed lattice index of FFT slot i for an axis with n points.
    static int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }

    double xi(int i) const;
    double k(int axis, int j) const;

    /// Decompose a flat index into (i_x, i_y0, i_y1) with unused slots 0.
    std::array<int, 3> unflatten(std::size_t flat) const;
    std::size_t flatten(int ix, int iy0 = 0, int iy1 = 0) const;

    /// Frequency vector of flat slot `flat` (length dim).
    void frequency(std::size_t flat, std::span<double> out) const;
    /// Euclidean norm of the frequency vector at flat slot `flat`.
    double frequency_norm(std::size_t flat) const;
    /// Flat slot of -nu for the slot of nu.
    std::size_t conjugate_slot(std::size_t flat) const;

    /// Signed offset coordinates of flat slot `flat` interpreted as a lattice
    /// displacement (wrapped to the symmetric range).
    void offset(std::size_t flat, std::span<double> out) const;

    bool operator==(const GridSpec& other) const;

private:
    friend GridSpec build_grid(int, double, int, std::vector<int>);

    int dim_ = 1;
    double half_length_ = 0.0;
    int nx_ = 0;
    std::vector<int> ny_;
    double hx_ = 0.0;
};

/// Validated grid construction; throws InvalidArgument on odd counts, counts
/// below 4, X < 4 or d outside {1, 2, 3}.
GridSpec build_grid(int d, double half_length, int nx, std::vector<int> ny = {});

class RealField {
public:
    RealField() = default;
    explicit RealField(GridSpec grid);
    RealField(GridSpec grid, std::vector<double> values);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    RealField& operator+=(const RealField& other);
    RealField& operator-=(const RealField& other);
    RealField& operator*=(double s);

    double max_abs() const;
    bool all_finite() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);

/// Discrete inner product sum f g * cell_volume.
double inner(const RealField& f, const RealField& g);
double l2_norm(const RealField& f);

class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(GridSpec grid);
    SpectralField(GridSpec grid, std::vector<Complex> coefficients);

    const GridSpec& grid() const { return grid_; }
    std::span<const Complex> coefficients() const { return coefficients_; }
    std::span<Complex> coefficients() { return coefficients_; }
    std::size_t size() const { return coefficients_.size(); }

    /// max |F(nu) - conj F(-nu)| relative to max |F|; 0 for the zero spectrum.
    double hermitian_defect() const;

private:
    GridSpec grid_;
    std::vector<Complex> coefficients_;
};

/// Build a field by sampling f(x, y0, y1) at the grid points.
template <class F>
RealField sample(const GridSpec& grid, F&& f) {
    RealField out(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const auto idx = grid.unflatten(n);
        const double y0 = grid.dim() > 1 ? grid.y(0, idx[1]) : 0.0;
        const double y1 = grid.dim() > 2 ? grid.y(1, idx[2]) : 0.0;
        out[n] = f(grid.x(idx[0]), y0, y1);
    }
    return out;
}

SpectralField forward_transform(const RealField& f);

struct InverseDiagnostics {
    /// Largest discarded imaginary part relative to the largest real value.
    double imaginary_residue = 0.0;
};

/// Inverse of forward_transform.  Throws InvalidArgument when the spectrum
/// violates Hermitian symmetry by more than 1e-10 (relative).
RealField inverse_transform(const SpectralField& F, InverseDiagnostics* diag = nullptr);

namespace detail {

/// In-place unnormalized DFT over the grid shape; sign -1 is forward.
void fft_inplace(const GridSpec& grid, std::span<Complex> data, int sign);

/// Apply a real multiplier table (FFT order, one entry per slot) to a real
/// field: inverse(m * forward(f)).  No symmetry checks.
RealField apply_real_multiplier(const RealField& f, std::span<const double> multiplier);

/// Apply a complex multiplier table; the caller guarantees m(-nu) = conj m(nu).
RealField apply_complex_multiplier(const RealField& f, std::span<const Complex> multiplier);

}  // namespace detail

/// Spectral x-derivative (Nyquist mode dropped).
RealField derivative_x(const RealField& f);

/// Spectral phase shift: returns g with g(w) = f(w + c e_x) for periodic f.
RealField shift_x(const RealField& f, double c);

/// Evaluate the trigonometric interpolant of periodic f on the x line for a
/// field with no transverse dependence (uses the transverse average otherwise).
double interpolate_x(const RealField& f, double x);

/// Average over the torus directions; returns a d = 1 field on the same x grid.
RealField transverse_average(const RealField& f);

}  // namespace pnlayer
