#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mcm/matfac.hpp"

namespace mcm::cli {

using Json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kAssertionFailed = 1, kUsageError = 2 };

/// Entry point of mcmtool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------- matrix files

struct LoadedMatrix {
  GradedMatrix matrix;
  const Hypersurface* setting = nullptr;
  /// Set when the input came from the catalog.
  std::optional<MatrixFactorization> factorization;

  /// The stored factorization, or (matrix, partner) over `setting`.
  MatrixFactorization as_factorization() const;
};

/// Name of a built-in ring ("nodal", "parametric") or "custom".
std::string ring_name(const QRingPtr& ring);
const Hypersurface& setting_named(std::string_view name);

/// Header lines `ring:`, `rows:`, `cols:` (all optional) followed by the entries.
/// Rows are separated by ';' or, when no ';' occurs, by line breaks.
LoadedMatrix parse_matrix_text(std::string_view text);
LoadedMatrix parse_matrix_json(const Json& j);
/// Either format, chosen by the first non-blank character.
LoadedMatrix parse_matrix_input(std::string_view text);
std::string format_matrix_text(const GradedMatrix& m);
Json matrix_json(const GradedMatrix& m);

/// A file path, or `catalog:FAMILY[:PARAM]` with PARAM a point or a degree.
LoadedMatrix load_input(const std::string& spec);

// ---------------------------------------------------------------- reports

/// Indented `key: value` rendering; matrices in the matrix text format.
std::string render_text(const Json& report);
/// Inverse of render_text up to scalar types (every scalar comes back as a string).
Json parse_text(std::string_view text);

// ---------------------------------------------------------------- sessions

struct SessionResult {
  Json report;
  int assertions = 0;
  int failures = 0;
  /// Set for malformed scripts; the script stops at the offending line.
  std::optional<std::string> error;
};

/// Runs one script in a fresh environment; relative `load` paths resolve against `base_dir`.
SessionResult run_session(std::string_view script, const std::filesystem::path& base_dir,
                          const std::string& name = "<script>");

}  // namespace mcm::cli
