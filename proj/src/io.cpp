#include "pnlayer/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace pnlayer::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw InvalidArgument("csv header and column counts differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw InvalidArgument("csv columns have different lengths");
    }
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
    out += '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) out += ',';
            out += format_double(columns[j][i]);
        }
        out += '\n';
    }
    return out;
}

std::string profile_csv(const RealField& u) {
    const auto& g = u.grid();
    const auto nx = static_cast<std::size_t>(g.nx());
    std::vector<std::string> header{"x"};
    std::vector<std::vector<double>> cols(1);
    for (int i = 0; i < g.nx(); ++i) cols[0].push_back(g.x(i));
    for (std::size_t line = 0; line < g.transverse_size(); ++line) {
        header.push_back("u_" + std::to_string(line));
        cols.emplace_back(u.values().begin() + static_cast<std::ptrdiff_t>(line * nx),
                          u.values().begin() + static_cast<std::ptrdiff_t>((line + 1) * nx));
    }
    return csv_table(header, cols);
}

std::string slab_level_csv(const DisplacementSlab& slab, std::size_t level, const StressLevel& stress) {
    const auto& g = slab.grid();
    std::vector<double> x;
    for (int i = 0; i < g.nx(); ++i) x.push_back(g.x(i));
    auto vec = [](const RealField& f) { return std::vector<double>(f.values().begin(), f.values().end()); };
    return csv_table({"x", "u1", "u2", "s11", "s12", "s22"},
                     {x, vec(slab.u1(level)), vec(slab.u2(level)), vec(stress.s11), vec(stress.s12), vec(stress.s22)});
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
    std::string out = "nu,verdict,min_interior,exponent\n";
    for (const auto& r : rows) {
        out += format_double(r.nu) + "," + to_string(r.verdict) + "," + format_double(r.min_relative) + "," +
               (std::isnan(r.exponent) ? std::string("nan") : format_double(r.exponent)) + "\n";
    }
    return out;
}

nlohmann::json to_json(const GridSpec& grid) {
    return {{"d", grid.dim()}, {"X", grid.half_length()}, {"n_x", grid.nx()}, {"n_y", grid.ny()},
            {"h_x", grid.hx()}, {"points", grid.size()}};
}

nlohmann::json to_json(const SolveReport& r) {
    return {{"converged", r.converged},
            {"iterations", r.iterations},
            {"residual", r.residual},
            {"initial_energy", r.initial_energy},
            {"energy", r.energy},
            {"monotonicity_margin", r.monotonicity_margin},
            {"transverse_range", r.transverse_range},
            {"translation_offset", r.translation_offset},
            {"truncation_error", r.truncation_error},
            {"message", r.message}};
}

nlohmann::json to_json(const SpectrumReport& r) {
    return {{"eigenvalues", r.eigenvalues},
            {"residuals", r.residuals},
            {"overlap", r.overlap},
            {"edge_estimate", r.edge_estimate},
            {"edge_estimate_note", "min gamma''(+-1)/(2G); numerical stand-in, not a computed spectral edge"},
            {"gap", r.gap},
            {"lower_bound_estimate", r.lower_bound_estimate},
            {"shift", r.shift},
            {"method", r.method},
            {"base_converged", r.base_converged},
            {"restarts", r.restarts},
            {"solves", r.solves}};
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace pnlayer::io
