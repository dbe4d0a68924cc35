#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gelfand/constants.hpp"
#include "gelfand/continuation.hpp"
#include "json.hpp"

namespace gelfand {

inline constexpr const char* kSchemaVersion = "gelfand-atlas/1";

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double x);

/// RFC-4180 field quoting (only when the field contains , " CR or LF).
std::string csv_escape(const std::string& field);

/// Branch table, one row per point:
///   s, lambda, u0, w0, delta_u_at_1, pohozaev_residual, mu1
/// w0 is empty for second-order problems; pohozaev_residual is empty unless
/// the problem is the clamped power problem; mu1 is empty unless sampled
/// (`mu1` indexed like b.points).
std::string branch_csv(const Branch& b, const std::vector<std::optional<double>>& mu1 = {});

/// Parses a table written by branch_csv. Tangents and the fold index are
/// recomputed from (lambda, centre values).
Branch read_branch_csv(const std::string& text, const ProblemSpec& tmpl);

/// Bifurcation diagram u(0) against λ: polyline, axis ticks, fold marker.
std::string branch_svg(const Branch& b, std::optional<double> lambda_star = std::nullopt,
                       const std::string& title = "");

nlohmann::json constants_json(const ReferenceConstants& c);
nlohmann::json problem_json(const ProblemSpec& p);

/// Writes through a temporary file in the same directory and renames it
/// into place. Throws IoError.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace gelfand
