#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "twave/continuation.hpp"
#include "twave/diagnostics.hpp"
#include "twave/iterate.hpp"

namespace twave {

using Json = nlohmann::ordered_json;

/// %.17g; "nan", "inf" and "-inf" for non-finite values.
std::string format_float(double value);

/// Serializes JSON with every floating-point number printed to 17 significant
/// digits. Non-finite numbers become null.
std::string dump_json(const Json& value, int indent = 2);

void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const Json& value);

/// iter,residual,factor_discrepancy,norm
std::string trace_csv(const IterationTrace& trace);
/// x,re,im on 1D grids; x,z,re,im (x-major) on 2D grids.
std::string profile_csv(const Field& field);
/// Cross sections through the modulus peak of a 2D field: along X at the peak z
/// and along Z at the peak x. Columns: coordinate,re,im.
std::pair<std::string, std::string> cross_sections_csv(const Field& field);

/// Reads a profile written by profile_csv back onto the given grid.
Field read_profile_csv(const std::filesystem::path& path, const Grid& grid, ScalarKind kind);

Json complex_json(cplx z);
Json to_json(const SpectrumReport& report);
Json to_json(const HypothesisReport& report);
Json to_json(const ShiftCheck& check);
Json to_json(const OrbitFit& fit);
Json to_json(const IterationConfig& config);

}  // namespace twave
