#include "pnlayer/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace pnlayer {

namespace {

void require_even(int n, const char* what) {
    if (n < 4 || n % 2 != 0) {
        throw InvalidArgument(std::string(what) + " must be even and >= 4, got " + std::to_string(n));
    }
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw InvalidArgument("fields live on different grids");
}

}  // namespace

GridSpec build_grid(int d, double half_length, int nx, std::vector<int> ny) {
    if (d < 1 || d > 3) {
        throw InvalidArgument("dimension must be 1, 2 or 3, got " + std::to_string(d));
    }
    if (!std::isfinite(half_length) || half_length < 4.0) {
        throw InvalidArgument("half length X must be >= 4");
    }
    require_even(nx, "n_x");
    if (ny.size() != static_cast<std::size_t>(d - 1)) {
        throw InvalidArgument("n_y must list d-1 = " + std::to_string(d - 1) + " torus counts");
    }
    for (int n : ny) require_even(n, "n_y");

    GridSpec g;
    g.dim_ = d;
    g.half_length_ = half_length;
    g.nx_ = nx;
    g.ny_ = std::move(ny);
    g.hx_ = 2.0 * half_length / nx;
    return g;
}

std::size_t GridSpec::transverse_size() const {
    std::size_t n = 1;
    for (int m : ny_) n *= static_cast<std::size_t>(m);
    return n;
}

std::size_t GridSpec::size() const { return static_cast<std::size_t>(nx_) * transverse_size(); }

double GridSpec::cell_volume() const {
    double v = hx_;
    for (int m : ny_) v /= m;
    return v;
}

double GridSpec::xi(int i) const { return std::numbers::pi / half_length_ * signed_index(i, nx_); }

double GridSpec::k(int axis, int j) const {
    return 2.0 * std::numbers::pi * signed_index(j, ny_.at(static_cast<std::size_t>(axis)));
}

std::array<int, 3> GridSpec::unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    idx[0] = static_cast<int>(flat % static_cast<std::size_t>(nx_));
    std::size_t rest = flat / static_cast<std::size_t>(nx_);
    for (std::size_t a = 0; a < ny_.size(); ++a) {
        idx[a + 1] = static_cast<int>(rest % static_cast<std::size_t>(ny_[a]));
        rest /= static_cast<std::size_t>(ny_[a]);
    }
    return idx;
}

std::size_t GridSpec::flatten(int ix, int iy0, int iy1) const {
    std::size_t flat = static_cast<std::size_t>(ix);
    std::size_t stride = static_cast<std::size_t>(nx_);
    if (dim_ > 1) {
        flat += stride * static_cast<std::size_t>(iy0);
        stride *= static_cast<std::size_t>(ny_[0]);
    }
    if (dim_ > 2) flat += stride * static_cast<std::size_t>(iy1);
    return flat;
}

void GridSpec::frequency(std::size_t flat, std::span<double> out) const {
    const auto idx = unflatten(flat);
    out[0] = xi(idx[0]);
    for (int a = 0; a + 1 < dim_; ++a) {
        out[static_cast<std::size_t>(a + 1)] = k(a, idx[static_cast<std::size_t>(a + 1)]);
    }
}

double GridSpec::frequency_norm(std::size_t flat) const {
    std::array<double, 3> nu{};
    frequency(flat, std::span<double>(nu.data(), static_cast<std::size_t>(dim_)));
    return std::sqrt(nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2]);
}

std::size_t GridSpec::conjugate_slot(std::size_t flat) const {
    const auto idx = unflatten(flat);
    auto neg = [](int i, int n) { return (n - i) % n; };
    return flatten(neg(idx[0], nx_), dim_ > 1 ? neg(idx[1], ny_[0]) : 0, dim_ > 2 ? neg(idx[2], ny_[1]) : 0);
}

void GridSpec::offset(std::size_t flat, std::span<double> out) const {
    const auto idx = unflatten(flat);
    out[0] = signed_index(idx[0], nx_) * hx_;
    for (int a = 0; a + 1 < dim_; ++a) {
        const auto sa = static_cast<std::size_t>(a + 1);
        out[sa] = signed_index(idx[sa], ny_[static_cast<std::size_t>(a)]) * hy(a);
    }
}

bool GridSpec::operator==(const GridSpec& other) const {
    return dim_ == other.dim_ && half_length_ == other.half_length_ && nx_ == other.nx_ && ny_ == other.ny_;
}

RealField::RealField(GridSpec grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

RealField::RealField(GridSpec grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw InvalidArgument("field value count does not match grid size");
}

RealField& RealField::operator+=(const RealField& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

RealField& RealField::operator-=(const RealField& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

RealField& RealField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

double RealField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool RealField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }

double inner(const RealField& f, const RealField& g) {
    require_same_grid(f.grid(), g.grid());
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return s * f.grid().cell_volume();
}

double l2_norm(const RealField& f) { return std::sqrt(inner(f, f)); }

SpectralField::SpectralField(GridSpec grid) : grid_(std::move(grid)), coefficients_(grid_.size()) {}

SpectralField::SpectralField(GridSpec grid, std::vector<Complex> coefficients)
    : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != grid_.size()) {
        throw InvalidArgument("spectral coefficient count does not match grid size");
    }
}

double SpectralField::hermitian_defect() const {
    double scale = 0.0;
    for (const auto& c : coefficients_) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double defect = 0.0;
    for (std::size_t n = 0; n < coefficients_.size(); ++n) {
        const auto m = grid_.conjugate_slot(n);
        defect = std::max(defect, std::abs(coefficients_[n] - std::conj(coefficients_[m])));
    }
    return defect / scale;
}

namespace detail {

namespace {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (data == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

// One plan per (shape, direction).  Planning is not thread-safe in FFTW, so
// it happens under the lock; execution goes through the new-array interface.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(const std::vector<int>& dims, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(dims, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const std::size_t n = std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                                              [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
        FftwBuffer buf(n);
        fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf.data, buf.data, sign, FFTW_ESTIMATE);
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

RealField apply_multiplier_table(const RealField& f, auto&& mult) {
    const auto& grid = f.grid();
    std::vector<Complex> work(f.values().begin(), f.values().end());
    fft_inplace(grid, work, -1);
    const double inv_n = 1.0 / static_cast<double>(grid.size());
    for (std::size_t n = 0; n < work.size(); ++n) work[n] *= mult(n) * inv_n;
    fft_inplace(grid, work, +1);
    RealField out(grid);
    for (std::size_t n = 0; n < work.size(); ++n) out[n] = work[n].real();
    return out;
}

}  // namespace

void fft_inplace(const GridSpec& grid, std::span<Complex> data, int sign) {
    // FFTW is row-major with the last index fastest; x is our fastest axis.
    std::vector<int> dims(grid.ny().rbegin(), grid.ny().rend());
    dims.push_back(grid.nx());
    fftw_plan plan = PlanCache::instance().get(dims, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);

    FftwBuffer buf(data.size());
    std::copy(data.begin(), data.end(), reinterpret_cast<Complex*>(buf.data));
    fftw_execute_dft(plan, buf.data, buf.data);
    std::copy_n(reinterpret_cast<Complex*>(buf.data), data.size(), data.begin());
}

RealField apply_real_multiplier(const RealField& f, std::span<const double> multiplier) {
    if (multiplier.size() != f.size()) throw InvalidArgument("multiplier table size mismatch");
    return apply_multiplier_table(f, [&](std::size_t n) { return multiplier[n]; });
}

RealField apply_complex_multiplier(const RealField& f, std::span<const Complex> multiplier) {
    if (multiplier.size() != f.size()) throw InvalidArgument("multiplier table size mismatch");
    return apply_multiplier_table(f, [&](std::size_t n) { return multiplier[n]; });
}

}  // namespace detail

namespace {
// The grid starts at x = -X, so exp(-i xi x_j) = (-1)^m exp(-2 pi i m j / n_x).
double x_phase(const GridSpec& grid, std::size_t flat) {
    return GridSpec::signed_index(grid.unflatten(flat)[0], grid.nx()) % 2 == 0 ? 1.0 : -1.0;
}
}  // namespace

SpectralField forward_transform(const RealField& f) {
    const auto& grid = f.grid();
    if (!f.all_finite()) throw InvalidArgument("forward_transform: non-finite field values");
    std::vector<Complex> work(f.values().begin(), f.values().end());
    detail::fft_inplace(grid, work, -1);
    const double cv = grid.cell_volume();
    for (std::size_t n = 0; n < work.size(); ++n) work[n] *= cv * x_phase(grid, n);
    return SpectralField(grid, std::move(work));
}

RealField inverse_transform(const SpectralField& F, InverseDiagnostics* diag) {
    const auto& grid = F.grid();
    if (F.hermitian_defect() > 1e-10) throw InvalidArgument("inverse_transform: spectrum is not Hermitian");
    std::vector<Complex> work(F.coefficients().begin(), F.coefficients().end());
    const double inv_v = 1.0 / grid.volume();
    for (std::size_t n = 0; n < work.size(); ++n) work[n] *= inv_v * x_phase(grid, n);
    detail::fft_inplace(grid, work, +1);
    RealField out(grid);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < work.size(); ++n) {
        out[n] = work[n].real();
        re = std::max(re, std::abs(work[n].real()));
        im = std::max(im, std::abs(work[n].imag()));
    }
    if (diag != nullptr) diag->imaginary_residue = re > 0.0 ? im / re : im;
    return out;
}

RealField derivative_x(const RealField& f) {
    const auto& grid = f.grid();
    std::vector<Complex> m(grid.size());
    for (std::size_t n = 0; n < m.size(); ++n) {
        const int ix = grid.unflatten(n)[0];
        m[n] = ix == grid.nx() / 2 ? Complex{} : Complex(0.0, grid.xi(ix));
    }
    return detail::apply_complex_multiplier(f, m);
}

RealField shift_x(const RealField& f, double c) {
    const auto& grid = f.grid();
    std::vector<Complex> m(grid.size());
    for (std::size_t n = 0; n < m.size(); ++n) {
        const int ix = grid.unflatten(n)[0];
        const double phase = grid.xi(ix) * c;
        // The Nyquist mode is its own conjugate; keep it real.
        m[n] = ix == grid.nx() / 2 ? Complex(std::cos(phase), 0.0) : std::polar(1.0, phase);
    }
    return detail::apply_complex_multiplier(f, m);
}

RealField transverse_average(const RealField& f) {
    const auto& grid = f.grid();
    RealField out(build_grid(1, grid.half_length(), grid.nx()));
    const auto nx = static_cast<std::size_t>(grid.nx());
    const double w = 1.0 / static_cast<double>(grid.transverse_size());
    for (std::size_t n = 0; n < f.size(); ++n) out[n % nx] += f[n] * w;
    return out;
}

double interpolate_x(const RealField& f, double x) {
    const RealField line = f.grid().dim() == 1 ? f : transverse_average(f);
    const auto& grid = line.grid();
    std::vector<Complex> c(line.values().begin(), line.values().end());
    detail::fft_inplace(grid, c, -1);
    const int n = grid.nx();
    const double t = x + grid.half_length();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto& ci = c[static_cast<std::size_t>(i)];
        const double phase = grid.xi(i) * t;
        s += i == n / 2 ? ci.real() * std::cos(phase) : (ci * std::polar(1.0, phase)).real();
    }
    return s / n;
}

}  // namespace pnlayer
