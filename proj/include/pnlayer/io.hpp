// CSV and JSON emission for profiles and reports.
#pragma once

#include "pnlayer/elasticity.hpp"
#include "pnlayer/kernel.hpp"
#include "pnlayer/minimize.hpp"
#include "pnlayer/spectrum.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace pnlayer::io {

/// 17 significant digits, '.' decimal point.
std::string format_double(double v);

/// Header row plus one row per index; all columns must have equal length.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns);

/// Columns x, then one per transverse line (u_j for flat transverse index j).
std::string profile_csv(const RealField& u);

/// Columns x, u1, u2, s11, s12, s22 at one slab level.
std::string slab_level_csv(const DisplacementSlab& slab, std::size_t level, const StressLevel& stress);

/// nu, verdict, min_interior, exponent.
std::string scan_csv(const std::vector<ScanRow>& rows);

nlohmann::json to_json(const GridSpec& grid);
nlohmann::json to_json(const SolveReport& report);
/// Eigenvalues and diagnostics; eigenvectors are omitted.
nlohmann::json to_json(const SpectrumReport& report);

/// Write `content` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace pnlayer::io
