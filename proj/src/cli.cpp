#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mcm/catalog.hpp"
#include "mcm/cli.hpp"
#include "mcm/extsolver.hpp"
#include "mcm/homalg.hpp"

namespace mcm::cli {

namespace {

// Input that does not describe a valid request; exit code 2.
struct UsageError : Error {
  using Error::Error;
};

struct RingOptions {
  std::string ring = "poly";
  std::string vars;
  std::string blocks;
  std::string weights;
  std::string relations;

  void add_to(CLI::App* app) {
    app->add_option("--ring", ring, "poly (Q[y1,y2,y3]), nodal or parametric")->capture_default_str();
    app->add_option("--vars", vars, "comma-separated variable names; overrides --ring");
    app->add_option("--blocks", blocks, "block sizes of the order, e.g. 3,2");
    app->add_option("--weights", weights, "grading weights, padded with 0");
    app->add_option("--relations", relations, "comma-separated relations of the quotient");
  }

  QRingPtr build() const {
    std::vector<std::string> names;
    std::vector<std::size_t> block_sizes;
    std::vector<int> w;
    auto split = [](const std::string& s) {
      std::vector<std::string> out;
      std::stringstream ss(s);
      for (std::string t; std::getline(ss, t, ',');)
        if (!t.empty()) out.push_back(t);
      return out;
    };
    if (vars.empty()) {
      if (ring == "nodal") return relations.empty() ? nodal().ring : extend(nodal().ring->ring(), nodal().ring);
      if (ring == "parametric")
        return relations.empty() ? parametric().ring : extend(parametric().ring->ring(), parametric().ring);
      if (ring != "poly") throw UsageError("unknown ring '" + ring + "'");
      names = {"y1", "y2", "y3"};
    } else {
      names = split(vars);
    }
    for (const auto& b : split(blocks)) block_sizes.push_back(std::stoul(b));
    for (const auto& x : split(weights)) w.push_back(std::stoi(x));
    if (w.size() > names.size()) throw UsageError("more weights than variables");
    if (w.empty()) w.assign(names.size(), 1);
    else w.resize(names.size(), 0);
    const RingPtr r = PolyRing::make(names, block_sizes, w);
    return extend(r, nullptr);
  }

 private:
  QRingPtr extend(const RingPtr& r, const QRingPtr& base) const {
    std::vector<Polynomial> rels = base ? base->relations() : std::vector<Polynomial>{};
    if (!relations.empty()) {
      const auto row = PolyMatrix::parse(r, relations);
      for (std::size_t i = 0; i < row.rows(); ++i)
        for (std::size_t j = 0; j < row.cols(); ++j) rels.push_back(row(i, j));
    }
    return QuotientRing::make(r, rels);
  }
};

std::vector<Polynomial> parse_list(const QRingPtr& q, const std::vector<std::string>& texts) {
  std::vector<Polynomial> out;
  for (const auto& t : texts) {
    const auto row = PolyMatrix::parse(q->ring(), t);
    for (std::size_t i = 0; i < row.rows(); ++i)
      for (std::size_t j = 0; j < row.cols(); ++j)
        if (!row(i, j).is_zero()) out.push_back(row(i, j));
  }
  return out;
}

Json strings(const std::vector<Polynomial>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

Json ideal_json(const Ideal& ideal) {
  return Json{{"zero", ideal.is_zero()},
              {"unit", ideal.is_unit()},
              {"generators", strings(interreduce(ideal.generators(), ideal.ring().get()))}};
}

FamilyParams family_params(const FamilyInfo& info, const std::string& point, std::optional<int> m) {
  FamilyParams p;
  if (info.parameter == FamilyParameter::Point) {
    if (point.empty()) throw UsageError(info.name + " needs --point");
    p.point = CurvePoint::parse(point);
  } else if (info.parameter == FamilyParameter::Degree) {
    if (!m) throw UsageError(info.name + " needs --m");
    p.m = *m;
  }
  return p;
}

void write_matrix(const std::string& path, const GradedMatrix& m) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << format_matrix_text(m);
}

Json verify_json(const VerifyReport& r) {
  Json j{{"ok", r.ok}};
  if (r.rank) j["rank"] = *r.rank;
  j["failures"] = r.failures;
  return j;
}

std::vector<CurvePoint> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::vector<CurvePoint> out;
  for (std::string line; std::getline(in, line);) {
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(CurvePoint::parse(line));
  }
  return out;
}

CatalogReport verify_parallel(CatalogOptions options, int jobs) {
  std::vector<std::string> names = options.only;
  if (names.empty())
    for (const auto& f : families()) names.push_back(f.name);
  if (jobs <= 1 || names.size() <= 1) return verify_catalog(options);
  std::vector<std::future<CatalogReport>> parts;
  const std::size_t n = std::min<std::size_t>(std::size_t(jobs), names.size());
  for (std::size_t t = 0; t < n; ++t) {
    CatalogOptions part = options;
    part.only.clear();
    for (std::size_t i = t; i < names.size(); i += n) part.only.push_back(names[i]);
    parts.push_back(std::async(std::launch::async, [part] { return verify_catalog(part); }));
  }
  std::map<std::string, std::vector<CatalogCheck>> by_family;
  for (auto& p : parts)
    for (auto& c : p.get().checks) by_family[c.family].push_back(std::move(c));
  CatalogReport report;
  for (const auto& name : names)
    for (auto& c : by_family[name]) report.checks.push_back(std::move(c));
  return report;
}

Json check_json(const CatalogCheck& c) {
  return Json{{"family", c.family}, {"params", c.params.to_string()}, {"ok", c.ok},
              {"rank", c.rank},     {"local", c.local},                {"failures", c.failures}};
}

std::string parameter_name(FamilyParameter p) {
  switch (p) {
    case FamilyParameter::None: return "none";
    case FamilyParameter::Point: return "point";
    case FamilyParameter::Degree: return "degree";
  }
  return "none";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graded matrix factorizations over the nodal cubic hypersurface", "mcmtool"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  RingOptions ring_opts;
  std::vector<std::string> gens, gens2;
  std::string poly, input, input2, output, family, point;
  std::optional<int> m;
  int k = -1, twist = 0, jobs = 1, build_index = -1, m_max = 3;
  std::string range, points_file, expected;
  std::vector<std::string> only, scripts;
  bool raw = false, resolution = false;

  auto* gb = app.add_subcommand("gb", "reduced Groebner basis of an ideal");
  ring_opts.add_to(gb);
  gb->add_option("generators", gens, "generators (each argument may hold a comma-separated list)")->required();

  auto* nf = app.add_subcommand("nf", "normal form modulo an ideal");
  ring_opts.add_to(nf);
  nf->add_option("polynomial", poly)->required();
  nf->add_option("--ideal", gens, "ideal generators")->required();

  auto* ideq = app.add_subcommand("ideal-eq", "decide equality of two ideals (exit 1 when different)");
  ring_opts.add_to(ideq);
  ideq->add_option("first", input, "comma-separated generators")->required();
  ideq->add_option("second", input2, "comma-separated generators")->required();

  auto* verify = app.add_subcommand("verify", "check A*B = B*A = f*Id and det A = c*f^r");
  verify->add_option("input", input, "matrix file or catalog:FAMILY[:PARAM]");
  verify->add_option("--family", family);
  verify->add_option("--point", point);
  verify->add_option("--m", m);

  auto* adjoint = app.add_subcommand("adjoint", "partner matrix B with A*B = f*Id");
  adjoint->add_option("input", input)->required();
  adjoint->add_option("-o,--output", output, "write B to a matrix file");

  auto* fitting = app.add_subcommand("fitting", "Fitting ideal Fitt_k (ideal of (rows-k)-minors)");
  fitting->add_option("input", input)->required();
  fitting->add_option("-k", k, "index")->required();

  auto* local = app.add_subcommand("locally-free", "local freeness along the singular line");
  local->add_option("input", input)->required();
  local->add_option("-k", k, "Fitting index; defaults to the factorization rank");

  auto* ext = app.add_subcommand("ext", "extension space between two factorizations");
  ext->add_option("left", input)->required();
  ext->add_option("right", input2)->required();
  ext->add_option("--twist", twist);
  ext->add_option("--range", range, "scan twists LO:HI");
  ext->add_option("--build", build_index, "build the extension from representative N");
  ext->add_option("-o,--output", output, "write the built matrix to a file");

  auto* stab = app.add_subcommand("stability", "dimension of self-extensions modulo trivial ones");
  stab->add_option("input", input)->required();

  auto* tensor = app.add_subcommand("tensor", "MCM approximation of a tensor product");
  tensor->add_option("first", input)->required();
  tensor->add_option("second", input2)->required();
  tensor->add_flag("--raw", raw, "print the tensor presentation without taking the hull");
  tensor->add_option("-o,--output", output);

  auto* hull = app.add_subcommand("reflexive-hull", "presentation of the double dual");
  hull->add_option("input", input)->required();
  hull->add_option("-o,--output", output);

  auto* m2 = app.add_subcommand("m2", "second syzygy of the maximal ideal as a factorization");
  m2->add_flag("--resolution", resolution, "also print the resolution of the maximal ideal");
  m2->add_option("-o,--output", output);

  auto* catalog = app.add_subcommand("catalog", "rank-one and rank-two families");
  catalog->require_subcommand(1);
  auto* cat_list = catalog->add_subcommand("list", "list the families");
  auto* cat_show = catalog->add_subcommand("show", "instantiate a family");
  cat_show->add_option("family", family)->required();
  cat_show->add_option("--point", point);
  cat_show->add_option("--m", m);
  cat_show->add_option("-o,--output", output);
  auto* cat_verify = catalog->add_subcommand("verify", "check every family against the expected table");
  cat_verify->add_option("--m-max", m_max)->capture_default_str();
  cat_verify->add_option("--points", points_file, "file with one curve point per line");
  cat_verify->add_option("--only", only, "restrict to these families");
  cat_verify->add_option("--expected", expected, "expected-value table");
  cat_verify->add_option("-j,--jobs", jobs, "families checked concurrently")->capture_default_str();

  auto* session = app.add_subcommand("session", "session scripts");
  session->require_subcommand(1);
  auto* session_run = session->add_subcommand("run", "replay scripts and check their assertions");
  session_run->add_option("scripts", scripts)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  Json report;
  int code = kOk;
  auto emit = [&] { out << (json ? report.dump(2) + "\n" : render_text(report)); };

  try {
    if (gb->parsed()) {
      const QRingPtr q = ring_opts.build();
      const Ideal ideal(q, parse_list(q, gens));
      report = Json{{"command", "gb"}, {"order", q->ring()->describe_order()}, {"basis", strings(ideal.basis())}};
    } else if (nf->parsed()) {
      const QRingPtr q = ring_opts.build();
      const Ideal ideal(q, parse_list(q, gens));
      report = Json{{"command", "nf"}, {"normalForm", normal_form(q->parse(poly), ideal.basis()).to_string()}};
    } else if (ideq->parsed()) {
      const QRingPtr q = ring_opts.build();
      const bool eq = ideal_equal(Ideal(q, parse_list(q, {input})), Ideal(q, parse_list(q, {input2})));
      report = Json{{"command", "ideal-eq"}, {"equal", eq}};
      if (!eq) code = kAssertionFailed;
    } else if (verify->parsed()) {
      std::optional<LoadedMatrix> loaded;
      if (!family.empty()) {
        if (!input.empty()) throw UsageError("give either an input or --family");
        const FamilyInfo& info = family_info(family);
        loaded = LoadedMatrix{};
        loaded->factorization = instantiate(family, family_params(info, point, m));
        loaded->matrix = loaded->factorization->A;
      } else if (!input.empty()) {
        loaded = load_input(input);
      } else {
        throw UsageError("verify needs an input or --family");
      }
      report = Json{{"command", "verify"}};
      try {
        const auto r = loaded->as_factorization().verify();
        report.update(verify_json(r));
      } catch (const UsageError&) {
        throw;
      } catch (const Error& e) {
        report.update(Json{{"ok", false}, {"failures", Json::array({e.what()})}});
      }
      if (!report["ok"].get<bool>()) code = kAssertionFailed;
    } else if (adjoint->parsed()) {
      const auto mf = load_input(input).as_factorization();
      report = Json{{"command", "adjoint"}, {"rank", mf.rank}, {"matrix", matrix_json(mf.B)}};
      write_matrix(output, mf.B);
    } else if (fitting->parsed()) {
      const auto loaded = load_input(input);
      report = Json{{"command", "fitting"}, {"k", k}};
      report.update(ideal_json(fitting_ideal(loaded.matrix, k)));
    } else if (local->parsed()) {
      const auto loaded = load_input(input);
      if (k < 0) k = loaded.as_factorization().rank;
      const auto r = locally_free_test(loaded.matrix, k);
      report = Json{{"command", "locally-free"}, {"k", k}, {"verdict", to_string(r.verdict)},
                    {"condition", strings(r.condition.generators())}};
    } else if (ext->parsed()) {
      const auto left = load_input(input).as_factorization();
      const auto right = load_input(input2).as_factorization();
      report = Json{{"command", "ext"}};
      if (!range.empty()) {
        const auto colon = range.find(':');
        if (colon == std::string::npos) throw UsageError("--range expects LO:HI");
        const int lo = std::stoi(range.substr(0, colon)), hi = std::stoi(range.substr(colon + 1));
        Json scan = Json::array();
        for (const auto& s : scan_twists(left, right, lo, hi))
          scan.push_back(Json{{"twist", s.twist}, {"dimension", s.dimension}, {"split", s.split}});
        report["scan"] = scan;
      } else {
        const ExtProblem problem{left, right, twist};
        const auto space = solve_extensions(problem);
        Json tmpl = Json::array();
        for (const auto& row : space.degrees) {
          std::string line;
          for (std::size_t j = 0; j < row.size(); ++j) line += (j ? " " : "") + std::to_string(row[j]);
          tmpl.push_back(line);
        }
        Json basis = Json::array();
        for (const auto& d : space.representatives) basis.push_back(d.to_string());
        report.update(Json{{"twist", twist},
                           {"template", tmpl},
                           {"unknowns", space.unknowns.size()},
                           {"conditionRank", space.condition_rank},
                           {"dimension", space.quotient_dimension},
                           {"basis", basis}});
        if (build_index >= 0) {
          if (std::size_t(build_index) >= space.representatives.size())
            throw UsageError("no representative " + std::to_string(build_index));
          const auto e = build_extension(problem, space.representatives[build_index]);
          report["extension"] = matrix_json(e.A);
          report["extensionPartner"] = matrix_json(e.B);
          write_matrix(output, e.A);
        }
      }
    } else if (stab->parsed()) {
      report = Json{{"command", "stability"},
                    {"dimension", stability_dimension(load_input(input).as_factorization())}};
    } else if (tensor->parsed()) {
      const auto a = load_input(input).matrix, b = load_input(input2).matrix;
      const GradedMatrix t = raw ? tensor_presentation(a, b) : tensor_cm(a, b);
      report = Json{{"command", "tensor"}, {"rows", t.rows()}, {"free", t.is_zero_mod()}, {"matrix", matrix_json(t)}};
      write_matrix(output, t);
    } else if (hull->parsed()) {
      const GradedMatrix h = reflexive_hull(load_input(input).matrix);
      report = Json{{"command", "reflexive-hull"}, {"rows", h.rows()}, {"free", h.is_zero_mod()}, {"matrix", matrix_json(h)}};
      write_matrix(output, h);
    } else if (m2->parsed()) {
      const auto mf = build_M2();
      report = Json{{"command", "m2"}, {"verify", verify_json(mf.verify())}, {"rank", mf.rank},
                    {"unitEntries", mf.A.has_unit_entry()}, {"A", matrix_json(mf.A)}, {"B", matrix_json(mf.B)}};
      if (resolution) {
        Json res = Json::array();
        for (const auto& r : maximal_ideal_resolution())
          res.push_back(Json{{"shape", std::to_string(r.rows()) + "x" + std::to_string(r.cols())},
                             {"matrix", matrix_json(r)}});
        report["resolution"] = res;
      }
      write_matrix(output, mf.A);
    } else if (cat_list->parsed()) {
      Json list = Json::array();
      for (const auto& f : families())
        list.push_back(Json{{"name", f.name}, {"parameter", parameter_name(f.parameter)}, {"rank", f.rank},
                            {"size", f.size}, {"summary", f.summary}});
      report = Json{{"command", "catalog list"}, {"families", list}};
    } else if (cat_show->parsed()) {
      const FamilyInfo& info = family_info(family);
      const FamilyParams params = family_params(info, point, m);
      const auto mf = instantiate(family, params);
      report = Json{{"command", "catalog show"}, {"family", info.name}, {"params", params.to_string()},
                    {"rank", mf.rank}, {"A", matrix_json(mf.A)}, {"B", matrix_json(mf.B)}};
      write_matrix(output, mf.A);
    } else if (cat_verify->parsed()) {
      CatalogOptions options;
      options.m_max = m_max;
      options.only = only;
      options.expected_path = expected;
      if (!points_file.empty()) options.points = read_points(points_file);
      for (const auto& name : only) family_info(name);
      const auto r = verify_parallel(options, jobs);
      Json checks = Json::array();
      int failed = 0;
      for (const auto& c : r.checks) {
        checks.push_back(check_json(c));
        if (!c.ok) ++failed;
      }
      report = Json{{"command", "catalog verify"}, {"checks", checks}, {"total", r.checks.size()},
                    {"failed", failed}, {"ok", r.all_ok()}};
      if (!r.all_ok()) code = kAssertionFailed;
    } else if (session_run->parsed()) {
      Json runs = Json::array();
      int assertions = 0, failures = 0;
      bool error = false;
      for (const auto& path : scripts) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        const auto result = run_session(buf.str(), std::filesystem::path(path).parent_path(), path);
        assertions += result.assertions;
        failures += result.failures;
        error = error || result.error.has_value();
        runs.push_back(result.report);
      }
      report = Json{{"command", "session run"}, {"sessions", runs}, {"assertions", assertions},
                    {"failures", failures}, {"status", error ? "error" : (failures ? "fail" : "pass")}};
      if (failures) code = kAssertionFailed;
      if (error) code = kUsageError;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  emit();
  return code;
}

}  // namespace mcm::cli
