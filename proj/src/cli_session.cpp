#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "mcm/catalog.hpp"
#include "mcm/cli.hpp"
#include "mcm/extsolver.hpp"
#include "mcm/homalg.hpp"

namespace mcm::cli {

namespace {

// A malformed script line; reported as a usage error.
struct ScriptError : Error {
  using Error::Error;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_words(std::string_view s) {
  std::istringstream is{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

// Splits on commas outside parentheses.
std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::vector<std::string> expand_names(std::string_view list) {
  static const std::regex range(R"(([A-Za-z_]+)(\d+)\.\.([A-Za-z_]*)(\d+))");
  std::vector<std::string> out;
  for (const auto& item : split_list(list)) {
    std::smatch m;
    if (std::regex_match(item, m, range) && (m[3].str().empty() || m[3] == m[1])) {
      const int lo = std::stoi(m[2]), hi = std::stoi(m[4]);
      if (hi < lo) throw ScriptError("empty variable range '" + item + "'");
      for (int i = lo; i <= hi; ++i) out.push_back(m[1].str() + std::to_string(i));
    } else {
      out.push_back(item);
    }
  }
  return out;
}

std::vector<int> ints_of(std::string_view list) {
  std::vector<int> out;
  for (const auto& item : split_list(list)) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ScriptError("expected an integer, got '" + item + "'");
    }
  }
  return out;
}

int int_of(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw ScriptError("expected an integer, got '" + s + "'");
  return v;
}

struct RingEntry {
  QRingPtr q;
  std::optional<Hypersurface> setting;
};

struct Value {
  QRingPtr ring;
  std::optional<PolyMatrix> entries;
  std::optional<GradedMatrix> graded;
  std::optional<MatrixFactorization> mf;
  std::optional<std::vector<Polynomial>> gens;
};

struct Command {
  std::size_t line;
  std::string text;
  std::vector<std::string> words;
  std::optional<std::string> payload;
  std::map<std::string, std::string> options;
  std::vector<std::string> args;
};

Command tokenize(std::size_t line, const std::string& text) {
  Command c{line, text, {}, std::nullopt, {}, {}};
  std::string head = text;
  if (const auto p = text.find(":="); p != std::string::npos) {
    head = text.substr(0, p);
    c.payload = trim(text.substr(p + 2));
  }
  c.words = split_words(head);
  for (std::size_t i = 1; i < c.words.size(); ++i) {
    const auto& w = c.words[i];
    const auto eq = w.find('=');
    if (eq != std::string::npos && eq > 0) c.options[w.substr(0, eq)] = w.substr(eq + 1);
    else c.args.push_back(w);
  }
  return c;
}

class Interpreter {
 public:
  explicit Interpreter(std::filesystem::path base) : base_(std::move(base)) {
    rings_["nodal"] = {nodal().ring, nodal()};
    rings_["parametric"] = {parametric().ring, parametric()};
    current_ = "nodal";
  }

  // Returns a short description of the outcome; throwing ScriptError marks a
  // malformed line, returning with `failed` set marks a failed assertion.
  std::string execute(const Command& c, bool& is_assertion, bool& failed) {
    const std::string& op = c.words.at(0);
    is_assertion = op.rfind("expect-", 0) == 0;
    failed = false;
    if (op == "ring") return define_ring(c);
    if (op == "use") {
      need(c, 1);
      ring_entry(c.args[0]);
      current_ = c.args[0];
      return "ring " + current_;
    }
    if (op == "matrix") return define_matrix(c);
    if (op == "load") return load(c);
    if (op == "family") return family(c);
    if (op == "ideal") {
      need(c, 1);
      Value v{q(), std::nullopt, std::nullopt, std::nullopt, parse_gens(payload(c))};
      return store(c.args[0], std::move(v));
    }
    if (op == "condext") return run_condext(c);
    if (op == "subst") return run_subst(c);
    if (op == "simple") {
      need(c, 2);
      const Value& src = ideal_value(c.args[1]);
      std::vector<std::string> vars{"y2", "y3"};
      if (c.options.count("vars")) vars = expand_names(c.options.at("vars"));
      return store_gens(c.args[0], src.ring, simplify_generators(*src.gens, vars));
    }
    if (op == "interred") {
      need(c, 2);
      const Value& src = ideal_value(c.args[1]);
      return store_gens(c.args[0], src.ring, interreduce(*src.gens, src.ring.get()));
    }
    if (op == "tensor" || op == "presentation") {
      need(c, 3);
      const auto a = graded(c.args[1]), b = graded(c.args[2]);
      return store_matrix(c.args[0], op == "tensor" ? tensor_cm(a, b) : tensor_presentation(a, b));
    }
    if (op == "hull") {
      need(c, 2);
      return store_matrix(c.args[0], reflexive_hull(graded(c.args[1])));
    }
    if (op == "transpose") {
      need(c, 2);
      return store_matrix(c.args[0], graded(c.args[1]).transpose());
    }
    if (op == "dual") {
      need(c, 2);
      return store_mf(c.args[0], mf_dual(factorization(c.args[1])));
    }
    if (op == "partner") {
      need(c, 2);
      return store_matrix(c.args[0], factorization(c.args[1]).B);
    }
    if (op == "m2") {
      need(c, 1);
      return store_mf(c.args[0], build_M2());
    }
    if (op == "resolution") {
      need(c, 1);
      const auto res = maximal_ideal_resolution();
      std::string out;
      for (std::size_t i = 0; i < res.size(); ++i) {
        store_matrix(c.args[0] + std::to_string(i + 1), res[i]);
        out += (i ? ", " : "") + c.args[0] + std::to_string(i + 1);
      }
      return out;
    }
    if (op == "fitting") {
      need(c, 3);
      const auto m = graded(c.args[1]);
      const Ideal fit = fitting_ideal(m, int_of(c.args[2]));
      return store_gens(c.args[0], m.qring(), fit.generators());
    }
    if (op == "ext-build") return ext_build(c);
    if (op == "print") {
      need(c, 1);
      return describe(c.args[0], true);
    }
    if (is_assertion) {
      std::string detail = assertion(c, failed);
      return detail;
    }
    throw ScriptError("unknown command '" + op + "'");
  }

 private:
  static void need(const Command& c, std::size_t n) {
    if (c.args.size() != n)
      throw ScriptError(c.words[0] + " expects " + std::to_string(n) + " argument(s), got " +
                        std::to_string(c.args.size()));
  }
  static const std::string& payload(const Command& c) {
    if (!c.payload) throw ScriptError(c.words[0] + " needs ':=' followed by a value");
    return *c.payload;
  }

  const RingEntry& ring_entry(const std::string& name) const {
    auto it = rings_.find(name);
    if (it == rings_.end()) throw ScriptError("unknown ring '" + name + "'");
    return it->second;
  }
  const QRingPtr& q() const { return ring_entry(current_).q; }

  const Value& value(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw ScriptError("unknown name '" + name + "'");
    return it->second;
  }
  const Value& ideal_value(const std::string& name) const {
    const Value& v = value(name);
    if (!v.gens) throw ScriptError("'" + name + "' is not an ideal");
    return v;
  }
  PolyMatrix entries(const std::string& name) const {
    const Value& v = value(name);
    if (!v.entries) throw ScriptError("'" + name + "' is not a matrix");
    return *v.entries;
  }
  GradedMatrix graded(const std::string& name) const {
    const Value& v = value(name);
    if (v.graded) return *v.graded;
    if (!v.entries) throw ScriptError("'" + name + "' is not a matrix");
    return GradedMatrix::infer(v.ring, *v.entries);
  }
  const Hypersurface& setting_of(const QRingPtr& ring) const {
    for (const auto& [n, e] : rings_)
      if (e.q == ring && e.setting) return *e.setting;
    throw ScriptError("ring has no hypersurface structure");
  }
  MatrixFactorization factorization(const std::string& name) const {
    const Value& v = value(name);
    if (v.mf) return *v.mf;
    return make_factorization(graded(name), setting_of(v.ring));
  }

  std::vector<Polynomial> parse_gens(const std::string& text) const {
    std::vector<Polynomial> out;
    for (const auto& g : split_list(text))
      if (!g.empty()) out.push_back(q()->parse(g));
    return out;
  }

  std::string store(const std::string& name, Value v) {
    values_.insert_or_assign(name, std::move(v));
    return describe(name, false);
  }
  std::string store_gens(const std::string& name, const QRingPtr& ring, std::vector<Polynomial> gens) {
    return store(name, Value{ring, std::nullopt, std::nullopt, std::nullopt, std::move(gens)});
  }
  std::string store_matrix(const std::string& name, const GradedMatrix& m) {
    return store(name, Value{m.qring(), m.entries(), m, std::nullopt, std::nullopt});
  }
  std::string store_mf(const std::string& name, const MatrixFactorization& mf) {
    return store(name, Value{mf.A.qring(), mf.A.entries(), mf.A, mf, std::nullopt});
  }

  std::string describe(const std::string& name, bool full) const {
    const Value& v = value(name);
    std::ostringstream os;
    os << name << " = ";
    if (v.gens) {
      os << v.gens->size() << " generator(s)";
      if (full) {
        os << " [";
        for (std::size_t i = 0; i < v.gens->size(); ++i) os << (i ? ", " : "") << (*v.gens)[i].to_string();
        os << "]";
      }
    } else {
      os << v.entries->rows() << "x" << v.entries->cols() << " matrix";
      if (full) os << " [" << v.entries->to_string() << "]";
    }
    return os.str();
  }

  std::string define_ring(const Command& c) {
    if (c.args.empty()) throw ScriptError("ring needs a name");
    const std::string& name = c.args[0];
    if (c.args.size() == 2) {
      const Hypersurface& h = setting_named(c.args[1]);
      rings_[name] = {h.ring, h};
    } else {
      if (c.args.size() != 1 || !c.options.count("vars")) throw ScriptError("ring needs vars=... or nodal/parametric");
      const auto names = expand_names(c.options.at("vars"));
      std::vector<std::size_t> blocks;
      if (c.options.count("blocks"))
        for (int b : ints_of(c.options.at("blocks"))) blocks.push_back(std::size_t(b));
      std::vector<int> weights;
      if (c.options.count("weights")) weights = ints_of(c.options.at("weights"));
      if (weights.size() > names.size()) throw ScriptError("more weights than variables");
      weights.resize(names.size(), 0);
      auto ring = PolyRing::make(names, blocks, weights);
      std::vector<Polynomial> rels;
      if (c.payload)
        for (const auto& r : split_list(*c.payload))
          if (!r.empty()) rels.push_back(parse_polynomial(r, ring));
      RingEntry e{QuotientRing::make(ring, rels), std::nullopt};
      if (ring->index_of("y1") && ring->index_of("y2") && ring->index_of("y3")) {
        const Polynomial f = nodal_cubic(ring);
        std::vector<Polynomial> extra;
        for (const auto& r : rels)
          if (r != f && r != -f) extra.push_back(r);
        // A ring whose relations include the cubic also carries factorizations.
        if (extra.size() < rels.size()) {
          Hypersurface h = make_hypersurface(ring, extra);
          e.setting = h;
          e.q = h.ring;
        }
      }
      rings_[name] = e;
    }
    current_ = name;
    return "ring " + name + " " + ring_entry(name).q->ring()->describe_order();
  }

  std::string define_matrix(const Command& c) {
    need(c, 1);
    const PolyMatrix m = PolyMatrix::parse(q()->ring(), payload(c));
    Value v{q(), m, std::nullopt, std::nullopt, std::nullopt};
    if (c.options.count("rows") && c.options.count("cols")) {
      v.graded = GradedMatrix(q(), m, ints_of(c.options.at("rows")), ints_of(c.options.at("cols")));
    } else if (c.options.count("rows")) {
      v.graded = GradedMatrix::infer_columns(q(), m, ints_of(c.options.at("rows")));
    } else if (c.options.count("cols")) {
      throw ScriptError("cols= needs rows=");
    }
    return store(c.args[0], std::move(v));
  }

  std::string load(const Command& c) {
    need(c, 2);
    std::filesystem::path p(c.args[1]);
    if (p.is_relative()) p = base_ / p;
    std::ifstream in(p);
    if (!in) throw ScriptError("cannot read '" + p.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto loaded = parse_matrix_input(buf.str());
    return store_matrix(c.args[0], loaded.matrix);
  }

  std::string family(const Command& c) {
    if (c.args.size() < 2 || c.args.size() > 3) throw ScriptError("family NAME FAMILY [PARAM]");
    const FamilyInfo& info = family_info(c.args[1]);
    FamilyParams params;
    if (c.args.size() == 3) {
      if (info.parameter == FamilyParameter::Degree) params.m = int_of(c.args[2]);
      else if (info.parameter == FamilyParameter::Point) params.point = CurvePoint::parse(c.args[2]);
      else throw ScriptError(info.name + " takes no parameter");
    }
    return store_mf(c.args[0], instantiate(info.name, params));
  }

  std::string run_condext(const Command& c) {
    need(c, 4);
    const RingPtr r = q()->ring();
    CondextOptions opts;
    if (c.options.count("split")) opts.split_variable = c.options.at("split");
    if (c.options.count("strip")) opts.strip_variables = expand_names(c.options.at("strip"));
    auto gens = condext(entries(c.args[1]).map_to(r), entries(c.args[2]).map_to(r), entries(c.args[3]).map_to(r),
                        *q(), opts);
    return store_gens(c.args[0], q(), std::move(gens));
  }

  std::string run_subst(const Command& c) {
    need(c, 2);
    const Value& src = ideal_value(c.args[1]);
    std::map<std::string, Polynomial> values;
    for (const auto& item : split_list(payload(c))) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ScriptError("substitution '" + item + "' needs '='");
      values.emplace(trim(item.substr(0, eq)), src.ring->parse(trim(item.substr(eq + 1))));
    }
    std::vector<Polynomial> out;
    for (const auto& g : *src.gens) out.push_back(src.ring->reduce(substitute(g, values)));
    return store_gens(c.args[0], src.ring, std::move(out));
  }

  std::string ext_build(const Command& c) {
    need(c, 5);
    const ExtProblem problem{factorization(c.args[1]), factorization(c.args[2]), int_of(c.args[3])};
    const PolyMatrix d = entries(c.args[4]).map_to(problem.left.A.ring());
    return store_mf(c.args[0], build_extension(problem, d));
  }

  std::string assertion(const Command& c, bool& failed) {
    const std::string& op = c.words[0];
    auto verdict = [&](bool ok, std::string detail) {
      failed = !ok;
      return detail;
    };
    if (op == "expect-ideal") {
      if (c.args.size() == 1) {
        const Value& v = ideal_value(c.args[0]);
        std::vector<Polynomial> expected;
        for (const auto& g : split_list(payload(c)))
          if (!g.empty()) expected.push_back(v.ring->parse(g));
        const bool eq = ideal_equal(Ideal(v.ring, *v.gens), Ideal(v.ring, expected));
        return verdict(eq, c.args[0] + (eq ? " equals" : " differs from") + " the expected ideal");
      }
      need(c, 2);
      const Value& a = ideal_value(c.args[0]);
      const Value& b = ideal_value(c.args[1]);
      if (a.ring != b.ring) throw ScriptError("ideals live in different rings");
      const bool eq = ideal_equal(Ideal(a.ring, *a.gens), Ideal(b.ring, *b.gens));
      return verdict(eq, c.args[0] + (eq ? " equals " : " differs from ") + c.args[1]);
    }
    if (op == "expect-zero") {
      need(c, 1);
      const Value& v = value(c.args[0]);
      const bool zero = v.gens ? Ideal(v.ring, *v.gens).is_zero() : graded(c.args[0]).is_zero_mod();
      return verdict(zero, c.args[0] + (zero ? " is zero" : " is not zero"));
    }
    if (op == "expect-unit") {
      need(c, 1);
      const Value& v = ideal_value(c.args[0]);
      const bool unit = Ideal(v.ring, *v.gens).is_unit();
      return verdict(unit, c.args[0] + (unit ? " is the unit ideal" : " is a proper ideal"));
    }
    if (op == "expect-rows" || op == "expect-cols") {
      need(c, 2);
      const PolyMatrix m = entries(c.args[0]);
      const std::size_t got = op == "expect-rows" ? m.rows() : m.cols();
      const int want = int_of(c.args[1]);
      return verdict(int(got) == want, c.args[0] + " has " + std::to_string(got) + (op == "expect-rows" ? " rows" : " cols"));
    }
    if (op == "expect-matrix") {
      need(c, 1);
      const Value& v = value(c.args[0]);
      if (!v.entries) throw ScriptError("'" + c.args[0] + "' is not a matrix");
      const PolyMatrix want = PolyMatrix::parse(v.ring->ring(), payload(c));
      bool ok = want.rows() == v.entries->rows() && want.cols() == v.entries->cols() &&
                (want - *v.entries).reduced(*v.ring).is_zero();
      if (ok && c.options.count("rows")) ok = graded(c.args[0]).row_deg() == ints_of(c.options.at("rows"));
      if (ok && c.options.count("cols")) ok = graded(c.args[0]).col_deg() == ints_of(c.options.at("cols"));
      return verdict(ok, c.args[0] + (ok ? " matches" : " does not match"));
    }
    if (op == "expect-verify") {
      need(c, 1);
      std::string detail;
      bool ok = false;
      try {
        const auto mf = factorization(c.args[0]);
        const auto report = mf.verify();
        ok = report.ok;
        detail = c.args[0] + (ok ? " is a factorization" : " fails: " + (report.failures.empty() ? "" : report.failures[0]));
        if (ok && report.rank) detail += " of rank " + std::to_string(*report.rank);
        if (ok && c.options.count("rank")) ok = report.rank == int_of(c.options.at("rank"));
      } catch (const ScriptError&) {
        throw;
      } catch (const Error& e) {
        detail = c.args[0] + " is not a factorization: " + e.what();
      }
      return verdict(ok, detail);
    }
    if (op == "expect-ext-dim") {
      need(c, 4);
      const ExtProblem problem{factorization(c.args[0]), factorization(c.args[1]), int_of(c.args[2])};
      const int dim = solve_extensions(problem).quotient_dimension;
      return verdict(dim == int_of(c.args[3]), "dim Ext = " + std::to_string(dim));
    }
    if (op == "expect-condition") {
      need(c, 4);
      const ExtProblem problem{factorization(c.args[0]), factorization(c.args[1]), int_of(c.args[2])};
      const bool ok = satisfies_condition(problem, entries(c.args[3]).map_to(problem.left.A.ring()));
      return verdict(ok, c.args[3] + (ok ? " satisfies" : " violates") + " the extension condition");
    }
    if (op == "expect-stability") {
      need(c, 2);
      const int dim = stability_dimension(factorization(c.args[0]));
      return verdict(dim == int_of(c.args[1]), "stability dimension " + std::to_string(dim));
    }
    if (op == "expect-local") {
      need(c, 3);
      const auto r = locally_free_test(graded(c.args[0]), int_of(c.args[1]));
      const std::string got = to_string(r.verdict);
      return verdict(got == c.args[2], c.args[0] + " is " + got);
    }
    if (op == "expect-equivalent" || op == "expect-distinct") {
      need(c, 2);
      const auto r = equivalence_invariants(graded(c.args[0]), graded(c.args[1]));
      const bool distinct = r.verdict == Equivalence::Distinct;
      return verdict(distinct == (op == "expect-distinct"),
                     distinct ? "distinct: " + r.reason : "invariants agree");
    }
    throw ScriptError("unknown assertion '" + op + "'");
  }

  std::filesystem::path base_;
  std::map<std::string, RingEntry> rings_;
  std::map<std::string, Value> values_;
  std::string current_;
};

}  // namespace

SessionResult run_session(std::string_view script, const std::filesystem::path& base_dir, const std::string& name) {
  SessionResult result;
  Json steps = Json::array();
  Interpreter interp(base_dir);
  std::istringstream is{std::string(script)};
  std::size_t lineno = 0;
  std::string pending;
  std::size_t start = 0;
  for (std::string raw; std::getline(is, raw);) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (pending.empty()) start = lineno;
    if (!line.empty() && line.back() == '\\') {
      line.pop_back();
      pending += line + " ";
      continue;
    }
    line = trim(pending + line);
    pending.clear();
    if (line.empty()) continue;
    const Command c = tokenize(start, line);
    Json step{{"line", start}, {"command", line}};
    bool is_assertion = false, failed = false;
    try {
      step["result"] = interp.execute(c, is_assertion, failed);
    } catch (const Error& e) {
      step["status"] = "error";
      step["result"] = e.what();
      steps.push_back(step);
      result.error = "line " + std::to_string(start) + ": " + e.what();
      break;
    }
    if (is_assertion) {
      ++result.assertions;
      if (failed) ++result.failures;
      step["status"] = failed ? "fail" : "pass";
    } else {
      step["status"] = "ok";
    }
    steps.push_back(step);
  }
  if (!result.error && !pending.empty()) result.error = "line continuation at end of script";
  result.report = Json{{"script", name},
                       {"steps", steps},
                       {"assertions", result.assertions},
                       {"failures", result.failures},
                       {"status", result.error ? "error" : (result.failures ? "fail" : "pass")}};
  if (result.error) result.report["error"] = *result.error;
  return result;
}

}  // namespace mcm::cli
