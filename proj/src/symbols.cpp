#include "pnlayer/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace pnlayer {

void require_poisson_ratio(double nu) {
    if (!(nu > -1.0 && nu < 0.5)) {
        throw InvalidArgument("Poisson ratio must lie in (-1, 1/2), got " + std::to_string(nu));
    }
}

double sigma_pn(double nu, double k1, double k_perp) {
    require_poisson_ratio(nu);
    const double k2 = k1 * k1 + k_perp * k_perp;
    if (k2 == 0.0) return 0.0;
    return k2 * std::sqrt(k2) / ((1.0 - nu) * k1 * k1 + k_perp * k_perp);
}

double sigma_half(std::span<const double> k) {
    double s = 0.0;
    for (double c : k) s += c * c;
    return std::sqrt(s);
}

Matrix2 matrix_symbol(double nu, double k1, double k2) {
    require_poisson_ratio(nu);
    const double norm = std::hypot(k1, k2);
    if (norm == 0.0) return {};
    const double c = 1.0 / ((1.0 - nu) * norm);
    return {k2 * k2 / norm + k1 * k1 * c, nu * k1 * k2 * c, k1 * k1 / norm + k2 * k2 * c};
}

double u3_multiplier(double nu, double k1, double k2) {
    require_poisson_ratio(nu);
    const double den = (1.0 - nu) * k1 * k1 + k2 * k2;
    return den == 0.0 ? 0.0 : -nu * k1 * k2 / den;
}

SymbolSpec SymbolSpec::half_laplacian(int d) {
    if (d < 1 || d > 3) throw InvalidArgument("symbol dimension must be 1, 2 or 3");
    SymbolSpec s;
    s.kind_ = SymbolKind::HalfLaplacian;
    s.dim_ = d;
    return s;
}

SymbolSpec SymbolSpec::pn_reduced(int d, double nu) {
    if (d < 1 || d > 3) throw InvalidArgument("symbol dimension must be 1, 2 or 3");
    require_poisson_ratio(nu);
    SymbolSpec s;
    s.kind_ = SymbolKind::PNReduced;
    s.dim_ = d;
    s.nu_ = nu;
    return s;
}

SymbolSpec SymbolSpec::tabulated(const GridSpec& grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw InvalidArgument("tabulated symbol size does not match grid");
    double scale = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument("tabulated symbol has non-finite entries");
        scale = std::max(scale, std::abs(v));
    }
    if (values[0] != 0.0) throw InvalidArgument("tabulated symbol must vanish at the origin");
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (std::abs(values[n] - values[grid.conjugate_slot(n)]) > 1e-12 * scale) {
            throw InvalidArgument("tabulated symbol is not even");
        }
    }
    // Store the exact symmetrization so evenness holds bitwise.
    std::vector<double> even(values.size());
    for (std::size_t n = 0; n < values.size(); ++n) even[n] = 0.5 * (values[n] + values[grid.conjugate_slot(n)]);
    SymbolSpec s;
    s.kind_ = SymbolKind::Tabulated;
    s.dim_ = grid.dim();
    s.table_grid_ = grid;
    s.table_ = std::move(even);
    return s;
}

std::string SymbolSpec::name() const {
    switch (kind_) {
        case SymbolKind::HalfLaplacian: return "half-laplacian";
        case SymbolKind::PNReduced: return "pn";
        case SymbolKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

double SymbolSpec::operator()(std::span<const double> nu) const {
    if (nu.size() != static_cast<std::size_t>(dim_)) throw InvalidArgument("frequency vector has wrong dimension");
    switch (kind_) {
        case SymbolKind::HalfLaplacian: return sigma_half(nu);
        case SymbolKind::PNReduced: {
            double perp = 0.0;
            for (std::size_t a = 1; a < nu.size(); ++a) perp += nu[a] * nu[a];
            return sigma_pn(nu_, nu[0], std::sqrt(perp));
        }
        case SymbolKind::Tabulated: break;
    }
    throw InvalidArgument("tabulated symbols are only defined on their lattice");
}

std::vector<double> SymbolSpec::table(const GridSpec& grid) const {
    if (grid.dim() != dim_) throw InvalidArgument("symbol and grid dimensions differ");
    if (kind_ == SymbolKind::Tabulated) {
        if (!(grid == table_grid_)) throw InvalidArgument("tabulated symbol lives on a different grid");
        return table_;
    }
    std::vector<double> out(grid.size());
    std::array<double, 3> nu{};
    const std::span<double> view(nu.data(), static_cast<std::size_t>(dim_));
    for (std::size_t n = 0; n < out.size(); ++n) {
        grid.frequency(n, view);
        out[n] = (*this)(view);
    }
    return out;
}

SymbolSpec load_tabulated_symbol(const std::filesystem::path& path, const GridSpec& grid) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open symbol table " + path.string());
    std::string line;
    std::getline(in, line);  // header
    const auto d = static_cast<std::size_t>(grid.dim());
    std::vector<double> values(grid.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<char> seen(grid.size(), 0);
    auto wrap = [](int i, int n) {
        if (i < -n / 2 || i >= n / 2) throw InvalidArgument("symbol table index out of range");
        return i < 0 ? i + n : i;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != d + 1) throw InvalidArgument("symbol table row has wrong column count: " + line);
        std::array<int, 3> idx{0, 0, 0};
        for (std::size_t a = 0; a < d; ++a) {
            const int n = a == 0 ? grid.nx() : grid.ny()[a - 1];
            idx[a] = wrap(std::stoi(cells[a]), n);
        }
        const auto slot = grid.flatten(idx[0], idx[1], idx[2]);
        if (seen[slot]) throw InvalidArgument("symbol table lists a frequency twice");
        seen[slot] = 1;
        values[slot] = std::stod(cells[d]);
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw InvalidArgument("symbol table does not cover the full lattice");
    }
    return SymbolSpec::tabulated(grid, std::move(values));
}

double reduced_1d_constant(const SymbolSpec& symbol) {
    std::vector<double> ratios;
    if (symbol.kind() == SymbolKind::Tabulated) {
        const auto& g = symbol.table_grid();
        const auto table = symbol.table(g);
        for (int i = 1; i < g.nx() / 2; ++i) ratios.push_back(table[g.flatten(i)] / g.xi(i));
    } else {
        std::array<double, 3> nu{};
        const std::span<double> view(nu.data(), static_cast<std::size_t>(symbol.dim()));
        for (int j = 1; j <= 64; ++j) {
            const double xi = 0.173 * j * j;
            nu[0] = (j % 2 == 0) ? xi : -xi;
            ratios.push_back(symbol(view) / xi);
        }
    }
    if (ratios.empty()) throw InvalidArgument("no frequencies to probe the 1D reduction");
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    if (!(*lo > 0.0) || (*hi - *lo) > 1e-12 * *hi) {
        throw InvalidArgument("symbol does not reduce to half-Laplacian on 1D profiles");
    }
    return ratios.front();
}

RealField apply_symbol_table(const RealField& f, std::span<const double> table) {
    return detail::apply_real_multiplier(f, table);
}

RealField apply_operator(const RealField& f, const SymbolSpec& symbol) {
    return apply_symbol_table(f, symbol.table(f.grid()));
}

SymbolBounds symbol_bounds(const SymbolSpec& symbol, const GridSpec& grid) {
    const auto table = symbol.table(grid);
    SymbolBounds b{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t n = 1; n < table.size(); ++n) {
        const double r = table[n] / grid.frequency_norm(n);
        b.lower = std::min(b.lower, r);
        b.upper = std::max(b.upper, r);
    }
    if (!(b.lower > 0.0)) throw InvalidArgument("symbol violates the order-one lower bound");
    return b;
}

}  // namespace pnlayer
