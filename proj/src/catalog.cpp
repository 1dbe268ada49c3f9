#include "mcm/catalog.hpp"

#include <fstream>
#include <map>

#include "json.hpp"
#include "mcm/extsolver.hpp"

namespace mcm {

namespace {

using Kind = CurvePoint::Kind;

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size())
    text.replace(pos, from.size(), to);
  return text;
}

std::string coordinate(const CurvePoint& p, int which) {
  if (p.kind() == Kind::Parametric) return which == 1 ? "a" : "b";
  return "(" + rational_to_string(which == 1 ? p.l1() : p.l2()) + ")";
}

std::string at_point(std::string text, const CurvePoint& p) {
  return replace_all(replace_all(text, "L1", coordinate(p, 1)), "L2", coordinate(p, 2));
}

std::string at_degree(std::string text, int m) {
  text = replace_all(text, "{m-1}", std::to_string(m - 1));
  text = replace_all(text, "{m+1}", std::to_string(m + 1));
  text = replace_all(text, "{m+2}", std::to_string(m + 2));
  return replace_all(text, "{m}", std::to_string(m));
}

GradedMatrix graded(const Hypersurface& h, const std::string& text, std::vector<int> rows, std::vector<int> cols) {
  return GradedMatrix(h.ring, PolyMatrix::parse(h.ring->ring(), text), std::move(rows), std::move(cols));
}

const char* kPhi = "y1-L1*y3, y2*y3+L2*y3^2; y2-L2*y3, y1^2+(L1+1)*y1*y3+(L1^2+L1)*y3^2";
const char* kPsi = "y1^2+(L1+1)*y1*y3+(L1^2+L1)*y3^2, -(y2*y3+L2*y3^2); -(y2-L2*y3), y1-L1*y3";
const char* kAlpha = "0, y1-L1*y3, y2-L2*y3; y1, y2+L2*y3, (L1^2+L1)*y3; y3, 0, -y1-(L1+1)*y3";
const char* kPhiInf = "y1+y3, y2^2; y3, y1^2";
const char* kPsiInf = "y1^2, -y2^2; -y3, y1+y3";

MatrixFactorization phi(const CurvePoint& p) {
  const auto& h = p.setting();
  const std::string text = p.kind() == Kind::Infinity ? kPhiInf : at_point(kPhi, p);
  return make_factorization(graded(h, text, {1, 1}, {2, 3}), h);
}

MatrixFactorization psi(const CurvePoint& p) {
  const auto& h = p.setting();
  const std::string text = p.kind() == Kind::Infinity ? kPsiInf : at_point(kPsi, p);
  return make_factorization(graded(h, text, {0, 1}, {2, 2}), h);
}

MatrixFactorization alpha(const CurvePoint& p) {
  if (p.kind() == Kind::Infinity) throw Error("alpha_lambda needs an affine point");
  const auto& h = p.setting();
  return make_factorization(graded(h, at_point(kAlpha, p), {1, 1, 1}, {2, 2, 2}), h);
}

MatrixFactorization beta(const CurvePoint& p) {
  const auto a = alpha(p);
  MatrixFactorization out = a;
  out.A = a.B;
  out.B = a.A.shifted(-3);
  out.rank = int(a.size()) - a.rank;
  return out;
}

MatrixFactorization extension(const MatrixFactorization& top, const MatrixFactorization& bottom, int twist,
                              const std::string& d) {
  return build_extension({top, bottom, twist}, PolyMatrix::parse(top.A.ring(), d));
}

// s-families living in the ring of `p` (numeric or parametric).
MatrixFactorization phi_s_over(const CurvePoint& p) {
  const auto& h = p.setting();
  return make_factorization(graded(h, at_point(kPhi, CurvePoint::singular()), {1, 1}, {2, 3}), h);
}

MatrixFactorization alpha_s_over(const CurvePoint& p) {
  const auto& h = p.setting();
  return make_factorization(graded(h, at_point(kAlpha, CurvePoint::singular()), {1, 1, 1}, {2, 2, 2}), h);
}

bool regular_with_nonzero_first(const CurvePoint& p) {
  return p.kind() == Kind::Infinity || p.kind() == Kind::Parametric || (p.kind() == Kind::Affine && p.l1() != 0);
}

MatrixFactorization alpha_psi_lambda(const CurvePoint& p) {
  if (!regular_with_nonzero_first(p)) throw Error("alpha_psi_lambda needs a regular point with nonzero first coordinate");
  if (p.kind() == Kind::Infinity) return extension(alpha_s_over(p), psi(p), 0, "0, 0; y2, -y2; 0, y2");
  return extension(alpha_s_over(p), psi(p), 0,
                   at_point("L2*y3, -L1*y3; -(L1+L1^2)*y3, L2*y3; L1*y3, 0", p));
}

MatrixFactorization phi_psi_lambda(const CurvePoint& p) {
  if (!regular_with_nonzero_first(p)) throw Error("phi_psi_lambda needs a regular point with nonzero first coordinate");
  if (p.kind() == Kind::Infinity) return extension(phi_s_over(p), psi(p), 0, "0, y2; y1, 0");
  return extension(phi_s_over(p), psi(p), 0, at_point("-L2*y3, L1*y3; L1*y1+(L1^2+L1)*y3, -L2*y3", p));
}

MatrixFactorization m_family(std::string_view name, int m) {
  if (m < 1) throw Error("the degree parameter must be at least 1");
  const CurvePoint s = CurvePoint::singular();
  const auto as = alpha(s), ps = phi(s), qs = psi(s);
  const int k = 1 - m;
  static const std::map<std::string, std::string, std::less<>> d_text{
      {"delta_m", "0, y3^{m}, -y3^{m}; 0, y3^{m}, -y3^{m}; 0, 0, y3^{m}"},
      {"alpha_psi1_m", "y3^{m}, -y3^{m}; -y3^{m}, y3^{m}; y3^{m}, 0"},
      {"alpha_psi2_m", "y3^{m}, y3^{m}; y3^{m}, y3^{m}; -y3^{m}, 0"},
      {"alpha_phi1_m", "y3^{m}, y3^{m+1}; -y3^{m}, -y3^{m+1}; 0, y3^{m+1}"},
      {"alpha_phi2_m", "y3^{m}, -y3^{m+1}; y3^{m}, -y3^{m+1}; 0, y3^{m+1}"},
      {"phi_psi1_m", "y3^{m}, y3^{m}; y1*y3^{m-1}+y3^{m}, y3^{m}"},
      {"phi_psi2_m", "-y3^{m}, y3^{m}; y1*y3^{m-1}+y3^{m}, -y3^{m}"},
      {"psi_phi1_m", "y3^{m+1}, y1*y3^{m+1}+y3^{m+2}; y3^{m}, y3^{m+1}"},
      {"psi_phi2_m", "y3^{m+1}, -y1*y3^{m+1}-y3^{m+2}; -y3^{m}, y3^{m+1}"},
      {"phi_phi1_m", "y3^{m}, -y3^{m+1}; y3^{m}, -y1*y3^{m}-y3^{m+1}"},
      {"phi_phi2_m", "-y3^{m}, -y3^{m+1}; y3^{m}, y1*y3^{m}+y3^{m+1}"},
  };
  if (name == "delta_m_t") return mf_normalize(mf_dual(m_family("delta_m", m)), 2);
  auto it = d_text.find(name);
  if (it == d_text.end()) throw Error("unknown family '" + std::string(name) + "'");
  const std::string d = at_degree(it->second, m);
  const std::string_view n = name;
  if (n == "delta_m") return extension(as, as, k, d);
  if (n.starts_with("alpha_psi")) return extension(as, qs, k, d);
  if (n.starts_with("alpha_phi")) return extension(as, ps, k, d);
  if (n.starts_with("phi_psi")) return extension(ps, qs, k, d);
  if (n.starts_with("psi_phi")) return extension(qs, ps, k, d);
  return extension(ps, ps, k, d);
}

MatrixFactorization m_two() {
  const auto& h = nodal();
  return make_factorization(
      graded(h, "y1^2+y1*y3, -y2, -y3, 0; -y2*y3, y1, 0, -y3; 0, 0, y1, y2; 0, 0, y2*y3, y1^2+y1*y3", {1, 1, 1, 0},
             {3, 2, 2, 2}),
      h);
}

MatrixFactorization omega_one() {
  const auto& h = nodal();
  return make_factorization(
      graded(h, "y1, y2, y3, 0; y2*y3, y1^2+y1*y3, 0, y3; 0, 0, y1^2+y1*y3, -y2; 0, 0, -y2*y3, y1",
             {3, 2, 2, 2}, {4, 4, 4, 3}),
      h);
}

// ---------------------------------------------------------------- expected values

using nlohmann::json;

int eval_twist(const std::string& expr, int m) {
  if (expr.empty()) throw Error("empty twist expression");
  if (expr[0] != 'm') return std::stoi(expr);
  if (expr.size() == 1) return m;
  return m + std::stoi(expr.substr(1));
}

std::vector<int> eval_twists(const json& list, int m) {
  std::vector<int> out;
  for (const auto& e : list) out.push_back(e.is_number() ? e.get<int>() : eval_twist(e.get<std::string>(), m));
  return out;
}

bool point_matches(const std::string& selector, const CurvePoint& p) {
  if (selector == "affine-regular") return p.kind() == Kind::Affine;
  if (selector == "inf") return p.kind() == Kind::Infinity;
  if (selector == "s") return p.kind() == Kind::Singular;
  if (selector == "param") return p.kind() == Kind::Parametric;
  return selector == "any";
}

std::string expected_local(const std::string& rule, const FamilyParams& params) {
  if (rule != "regular-point") return rule;
  if (!params.point) return "locallyFree";
  switch (params.point->kind()) {
    case Kind::Singular: return "notLocallyFree";
    case Kind::Parametric: return "conditional";
    default: return "locallyFree";
  }
}

void check_instance(CatalogCheck& check, const FamilyInfo& info, const json& entry, const json& fitting) {
  auto fail = [&](std::string msg) {
    check.ok = false;
    check.failures.push_back(std::move(msg));
  };
  MatrixFactorization mf;
  try {
    mf = instantiate(info.name, check.params);
  } catch (const Error& e) {
    fail(std::string("instantiation failed: ") + e.what());
    return;
  }
  const VerifyReport rep = mf.verify();
  if (!rep.ok)
    for (const auto& f : rep.failures) fail(f);
  check.rank = rep.rank.value_or(-1);
  if (check.rank != entry.at("rank").get<int>()) fail("rank " + std::to_string(check.rank));
  if (mf.size() != entry.at("size").get<std::size_t>()) fail("size " + std::to_string(mf.size()));
  if (mf.size() > 3 * std::size_t(info.rank)) fail("size exceeds three times the rank");
  const int m = check.params.m.value_or(1);
  if (entry.contains("rows") && eval_twists(entry["rows"], m) != mf.A.row_deg()) fail("row twists differ");
  if (entry.contains("cols") && eval_twists(entry["cols"], m) != mf.A.col_deg()) fail("column twists differ");

  const LocalFreeness lf = locally_free_test(mf.A, check.rank);
  check.local = to_string(lf.verdict);
  const std::string want = expected_local(entry.at("local").get<std::string>(), check.params);
  if (check.local != want) fail("local freeness " + check.local + ", expected " + want);

  for (const auto& fx : fitting) {
    if (fx.at("family").get<std::string>() != info.name) continue;
    if (check.params.point && !point_matches(fx.at("points").get<std::string>(), *check.params.point)) continue;
    std::vector<Polynomial> gens;
    for (const auto& g : fx.at("ideal"))
      gens.push_back(check.params.point ? mf.A.qring()->parse(at_point(g.get<std::string>(), *check.params.point))
                                        : mf.A.qring()->parse(g.get<std::string>()));
    const int k = fx.at("k").get<int>();
    if (!ideal_equal(fitting_ideal(mf.A, k), Ideal(mf.A.qring(), gens)))
      fail("Fitt_" + std::to_string(k) + " differs from the expected ideal");
  }
}

}  // namespace

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> list{
      {"phi_lambda", FamilyParameter::Point, 1, 2, "two-generated, source twists (2,3)"},
      {"psi_lambda", FamilyParameter::Point, 1, 2, "two-generated, partner of phi_lambda"},
      {"alpha_lambda", FamilyParameter::Point, 1, 3, "three-generated rank one"},
      {"beta_lambda", FamilyParameter::Point, 2, 3, "adjoint of alpha_lambda"},
      {"delta_m", FamilyParameter::Degree, 2, 6, "self-extension of Coker alpha_s"},
      {"delta_m_t", FamilyParameter::Degree, 2, 6, "transpose of delta_m"},
      {"alpha_psi1_m", FamilyParameter::Degree, 2, 5, "extension of Coker psi_s by Coker alpha_s"},
      {"alpha_psi2_m", FamilyParameter::Degree, 2, 5, "extension of Coker psi_s by Coker alpha_s"},
      {"alpha_phi1_m", FamilyParameter::Degree, 2, 5, "extension of Coker phi_s by Coker alpha_s"},
      {"alpha_phi2_m", FamilyParameter::Degree, 2, 5, "extension of Coker phi_s by Coker alpha_s"},
      {"alpha_psi_lambda", FamilyParameter::Point, 2, 5, "extension of Coker psi_lambda by Coker alpha_s"},
      {"phi_psi_lambda", FamilyParameter::Point, 2, 4, "extension of Coker psi_lambda by Coker phi_s"},
      {"phi_psi1_m", FamilyParameter::Degree, 2, 4, "extension of Coker psi_s by Coker phi_s"},
      {"phi_psi2_m", FamilyParameter::Degree, 2, 4, "extension of Coker psi_s by Coker phi_s"},
      {"psi_phi1_m", FamilyParameter::Degree, 2, 4, "extension of Coker phi_s by Coker psi_s"},
      {"psi_phi2_m", FamilyParameter::Degree, 2, 4, "extension of Coker phi_s by Coker psi_s"},
      {"phi_phi1_m", FamilyParameter::Degree, 2, 4, "self-extension of Coker phi_s"},
      {"phi_phi2_m", FamilyParameter::Degree, 2, 4, "self-extension of Coker phi_s"},
      {"M2", FamilyParameter::None, 2, 4, "second syzygy of the maximal ideal, twisted by 3"},
      {"omega1_M2", FamilyParameter::None, 2, 4, "first syzygy of M2"},
  };
  return list;
}

const FamilyInfo& family_info(std::string_view name) {
  for (const auto& f : families())
    if (f.name == name) return f;
  throw Error("unknown family '" + std::string(name) + "'");
}

std::string FamilyParams::to_string() const {
  std::string out;
  if (point) out += "point=" + point->to_string();
  if (m) out += std::string(out.empty() ? "" : " ") + "m=" + std::to_string(*m);
  return out;
}

bool admissible(const FamilyInfo& family, const FamilyParams& params) {
  switch (family.parameter) {
    case FamilyParameter::None: return true;
    case FamilyParameter::Degree: return params.m && *params.m >= 1;
    case FamilyParameter::Point: break;
  }
  if (!params.point) return false;
  const auto& p = *params.point;
  if (family.name == "alpha_lambda" || family.name == "beta_lambda") return p.kind() != Kind::Infinity;
  if (family.name == "alpha_psi_lambda" || family.name == "phi_psi_lambda") return regular_with_nonzero_first(p);
  return true;
}

MatrixFactorization instantiate(std::string_view name, const FamilyParams& params) {
  const FamilyInfo& info = family_info(name);
  if (info.parameter == FamilyParameter::Point && !params.point)
    throw Error(info.name + " needs a curve point");
  if (info.parameter == FamilyParameter::Degree && !params.m) throw Error(info.name + " needs m");
  if (!admissible(info, params))
    throw Error(info.name + " is not defined at " + params.to_string());
  if (name == "phi_lambda") return phi(*params.point);
  if (name == "psi_lambda") return psi(*params.point);
  if (name == "alpha_lambda") return alpha(*params.point);
  if (name == "beta_lambda") return beta(*params.point);
  if (name == "alpha_psi_lambda") return alpha_psi_lambda(*params.point);
  if (name == "phi_psi_lambda") return phi_psi_lambda(*params.point);
  if (name == "M2") return m_two();
  if (name == "omega1_M2") return omega_one();
  return m_family(name, *params.m);
}

bool CatalogReport::all_ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return !checks.empty();
}

std::string default_expected_path() { return std::string(MCM_DATA_DIR) + "/catalog_expected.json"; }

CatalogReport verify_catalog(const CatalogOptions& options) {
  const std::string path = options.expected_path.empty() ? default_expected_path() : options.expected_path;
  std::ifstream in(path);
  if (!in) throw Error("cannot open expected-value table " + path);
  json table;
  try {
    table = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed expected-value table: ") + e.what());
  }
  const json& entries = table.at("families");
  const json fitting = table.value("fitting", json::array());

  CatalogReport report;
  for (const auto& info : families()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), info.name) == options.only.end())
      continue;
    if (!entries.contains(info.name)) {
      report.checks.push_back({info.name, {}, false, 0, "", {"no expected values"}});
      continue;
    }
    std::vector<FamilyParams> params;
    switch (info.parameter) {
      case FamilyParameter::None: params.push_back({}); break;
      case FamilyParameter::Degree:
        for (int m = 1; m <= options.m_max; ++m) params.push_back({std::nullopt, m});
        break;
      case FamilyParameter::Point:
        for (const auto& p : options.points)
          if (admissible(info, {p, std::nullopt})) params.push_back({p, std::nullopt});
        break;
    }
    for (const auto& p : params) {
      CatalogCheck check;
      check.family = info.name;
      check.params = p;
      json entry = entries.at(info.name);
      if (p.point && p.point->kind() == Kind::Infinity && entry.contains("at_inf"))
        entry.update(entry["at_inf"]);
      check_instance(check, info, entry, fitting);
      report.checks.push_back(std::move(check));
    }
  }
  return report;
}

}  // namespace mcm
