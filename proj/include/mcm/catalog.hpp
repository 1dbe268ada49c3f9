#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcm/matfac.hpp"

namespace mcm {

enum class FamilyParameter { None, Point, Degree };

struct FamilyInfo {
  std::string name;
  FamilyParameter parameter;
  int rank;
  std::size_t size;
  std::string summary;
};

const std::vector<FamilyInfo>& families();
/// Throws Error for an unknown name.
const FamilyInfo& family_info(std::string_view name);

struct FamilyParams {
  std::optional<CurvePoint> point;
  std::optional<int> m;

  std::string to_string() const;
};

/// True when the family is defined at these parameters.
bool admissible(const FamilyInfo& family, const FamilyParams& params);

/// The displayed matrix with its partner; throws Error on inadmissible parameters.
MatrixFactorization instantiate(std::string_view name, const FamilyParams& params);

struct CatalogCheck {
  std::string family;
  FamilyParams params;
  bool ok = true;
  int rank = 0;
  std::string local;
  std::vector<std::string> failures;
};

struct CatalogOptions {
  std::vector<CurvePoint> points{CurvePoint::xi(), CurvePoint::infinity(), CurvePoint::singular()};
  int m_max = 3;
  /// Expected-value table; defaults to the one shipped in data/.
  std::string expected_path;
  /// Restrict to these families when non-empty.
  std::vector<std::string> only;
};

struct CatalogReport {
  std::vector<CatalogCheck> checks;
  bool all_ok() const;
};

CatalogReport verify_catalog(const CatalogOptions& options = {});

std::string default_expected_path();

}  // namespace mcm
