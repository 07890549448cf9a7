#include "pnlayer/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace pnlayer {

namespace {

DiscreteKernel kernel_from_table(const GridSpec& grid, const std::vector<double>& table, bool mollified) {
    std::vector<Complex> work(table.begin(), table.end());
    detail::fft_inplace(grid, work, +1);
    RealField k(grid);
    const double inv_v = 1.0 / grid.volume();
    for (std::size_t n = 0; n < work.size(); ++n) k[n] = work[n].real() * inv_v;
    return {std::move(k), mollified};
}

double radius(const GridSpec& grid, std::size_t flat, double* abs_x = nullptr) {
    std::array<double, 3> w{};
    grid.offset(flat, std::span<double>(w.data(), static_cast<std::size_t>(grid.dim())));
    if (abs_x != nullptr) *abs_x = std::abs(w[0]);
    return std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
}

double max_spacing(const GridSpec& grid) {
    double h = grid.hx();
    for (int a = 0; a + 1 < grid.dim(); ++a) h = std::max(h, grid.hy(a));
    return h;
}

}  // namespace

double DiscreteKernel::evenness_defect() const {
    const auto& g = grid();
    const double scale = values.max_abs();
    double d = 0.0;
    for (std::size_t n = 0; n < values.size(); ++n) d = std::max(d, std::abs(values[n] - values[g.conjugate_slot(n)]));
    return scale > 0.0 ? d / scale : d;
}

double DiscreteKernel::mean_defect() const {
    double s = 0.0;
    for (double v : values.values()) s += v;
    const double scale = values.max_abs();
    return scale > 0.0 ? std::abs(s) / scale : std::abs(s);
}

DiscreteKernel extract_kernel(const SymbolSpec& symbol, const GridSpec& grid) {
    return kernel_from_table(grid, symbol.table(grid), false);
}

DiscreteKernel extract_certification_kernel(const SymbolSpec& symbol, const GridSpec& grid) {
    auto table = symbol.table(grid);
    std::array<double, 3> nu{};
    std::array<double, 3> eps{2.0 * grid.hx(), 0.0, 0.0};
    for (int a = 0; a + 1 < grid.dim(); ++a) eps[static_cast<std::size_t>(a + 1)] = 2.0 * grid.hy(a);
    for (std::size_t n = 0; n < table.size(); ++n) {
        grid.frequency(n, std::span<double>(nu.data(), static_cast<std::size_t>(grid.dim())));
        double e = 0.0;
        for (std::size_t a = 0; a < 3; ++a) e += (eps[a] * nu[a]) * (eps[a] * nu[a]);
        table[n] *= std::exp(-0.5 * e);
    }
    return kernel_from_table(grid, table, true);
}

PositivityWindow default_positivity_window(const GridSpec& grid) {
    return {grid.half_length() / 2.0, 8.0 * max_spacing(grid)};
}

std::string to_string(KernelVerdict v) {
    switch (v) {
        case KernelVerdict::Positive: return "positive";
        case KernelVerdict::Mixed: return "mixed";
        case KernelVerdict::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

PositivitySummary summarize_positivity(const DiscreteKernel& kernel, const PositivityWindow& window) {
    const auto& g = kernel.grid();
    PositivitySummary s;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < kernel.values.size(); ++n) {
        double ax = 0.0;
        const double r = radius(g, n, &ax);
        if (ax > window.max_abs_x || r < window.min_radius) continue;
        const double K = -kernel.values[n];
        lo = std::min(lo, K);
        s.max_value = std::max(s.max_value, K);
        if (K < 0.0) ++s.negative_count;
    }
    s.min_value = s.max_value > 0.0 ? lo / s.max_value : lo;
    return s;
}

std::vector<ScanRow> positivity_scan(const std::vector<double>& nus, const GridSpec& grid, int threads) {
    for (double nu : nus) require_poisson_ratio(nu);
    std::vector<ScanRow> rows(nus.size());
    const auto window = default_positivity_window(grid);
    const auto hwin = default_homogeneity_window(grid);
    auto work = [&](std::size_t i) {
        const double nu = nus[i];
        const auto kernel = extract_certification_kernel(SymbolSpec::pn_reduced(grid.dim(), nu), grid);
        const auto s = summarize_positivity(kernel, window);
        ScanRow row;
        row.nu = nu;
        row.min_relative = s.min_value;
        // Round-off in the inverse FFT sits near 1e-13 of the kernel peak.
        row.verdict = s.min_value < -1e-9 ? KernelVerdict::Mixed : KernelVerdict::Positive;
        if (std::abs(nu + 0.5) < 0.005 || std::abs(nu - 1.0 / 3.0) < 0.005) row.verdict = KernelVerdict::Indeterminate;
        try {
            row.exponent = homogeneity_exponent(kernel, hwin);
        } catch (const InvalidArgument&) {
            row.exponent = std::numeric_limits<double>::quiet_NaN();
        }
        rows[i] = row;
    };
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, nus.size() ? nus.size() : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < nus.size(); ++i) work(i);
        return rows;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < nus.size(); i += workers) work(i);
        });
    }
    for (auto& th : pool) th.join();
    return rows;
}

HomogeneityWindow default_homogeneity_window(const GridSpec& grid) {
    if (grid.dim() == 1) return {8.0 * grid.hx(), grid.half_length() / 4.0};
    return {16.0 * grid.hx(), 0.25};
}

double homogeneity_exponent(const DiscreteKernel& kernel, const HomogeneityWindow& window) {
    const auto& g = kernel.grid();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (int i = 1; i < g.nx() / 2; ++i) {
        const double r = i * g.hx();
        if (r < window.r_min || r > window.r_max) continue;
        const double K = -kernel.values[g.flatten(i)];
        if (!(K > 0.0)) throw InvalidArgument("kernel is not positive on the homogeneity window");
        const double lx = std::log(r);
        const double ly = std::log(K);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count < 3) throw InvalidArgument("homogeneity window holds fewer than three samples");
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double homogeneity_exponent(const DiscreteKernel& kernel) {
    return homogeneity_exponent(kernel, default_homogeneity_window(kernel.grid()));
}

RealField brute_force_apply(const RealField& f, const DiscreteKernel& kernel) {
    const auto& g = f.grid();
    if (!(g == kernel.grid())) throw InvalidArgument("field and kernel grids differ");
    if (g.size() > kBruteForceLimit) throw InvalidArgument("brute-force oracle refuses grids above 8192 points");
    const auto n = g.size();
    const double cv = g.cell_volume();
    RealField out(g);
    std::vector<int> dims{g.nx()};
    for (int m : g.ny()) dims.push_back(m);
    for (std::size_t w = 0; w < n; ++w) {
        const auto iw = g.unflatten(w);
        double s = 0.0;
        for (std::size_t wp = 0; wp < n; ++wp) {
            if (wp == w) continue;
            const auto ip = g.unflatten(wp);
            std::array<int, 3> diff{0, 0, 0};
            for (std::size_t a = 0; a < dims.size(); ++a) diff[a] = ((iw[a] - ip[a]) % dims[a] + dims[a]) % dims[a];
            const double K = -kernel.values[g.flatten(diff[0], diff[1], diff[2])];
            s += (f[w] - f[wp]) * K;
        }
        out[w] = s * cv;
    }
    return out;
}

}  // namespace pnlayer
