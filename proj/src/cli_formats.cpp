#include <algorithm>
#include <fstream>
#include <sstream>

#include "mcm/catalog.hpp"
#include "mcm/cli.hpp"

namespace mcm::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<int> parse_ints(std::string_view text) {
  std::string t(text);
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<int> out;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Error("bad twist value '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

LoadedMatrix assemble(const std::string& ring, const PolyMatrix& entries, std::optional<std::vector<int>> rows,
                      std::optional<std::vector<int>> cols) {
  const Hypersurface& h = setting_named(ring);
  LoadedMatrix out;
  out.setting = &h;
  if (rows && cols) {
    out.matrix = GradedMatrix(h.ring, entries, *rows, *cols);
  } else if (rows) {
    out.matrix = GradedMatrix::infer_columns(h.ring, entries, *rows);
  } else if (cols) {
    throw Error("column twists given without row twists");
  } else {
    out.matrix = GradedMatrix::infer(h.ring, entries);
  }
  return out;
}

bool is_matrix_object(const Json& j) {
  return j.is_object() && j.contains("entries") && j.contains("rowTwists") && j.contains("colTwists");
}

void render(const Json& j, int indent, std::ostream& os);

void render_value(const std::string& key, const Json& v, int indent, std::ostream& os) {
  const std::string pad(indent, ' ');
  if (is_matrix_object(v)) {
    os << pad << key << ":\n";
    std::istringstream lines(format_matrix_text(parse_matrix_json(v).matrix));
    for (std::string line; std::getline(lines, line);) os << pad << "  " << line << "\n";
  } else if (v.is_object()) {
    if (v.empty()) {
      os << pad << key << ": {}\n";
      return;
    }
    os << pad << key << ":\n";
    render(v, indent + 2, os);
  } else if (v.is_array()) {
    if (v.empty()) {
      os << pad << key << ": []\n";
      return;
    }
    os << pad << key << ":\n";
    for (const auto& item : v) {
      if (item.is_object()) {
        os << pad << "  -\n";
        render(item, indent + 4, os);
      } else if (item.is_array()) {
        throw Error("nested list in report");
      } else {
        os << pad << "  - " << (item.is_string() ? item.get<std::string>() : item.dump()) << "\n";
      }
    }
  } else {
    os << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

void render(const Json& j, int indent, std::ostream& os) {
  for (const auto& [key, v] : j.items()) render_value(key, v, indent, os);
}

struct Line {
  int indent;
  std::string text;
};

class TextParser {
 public:
  explicit TextParser(std::string_view text) {
    std::istringstream is{std::string(text)};
    for (std::string l; std::getline(is, l);) {
      if (trim(l).empty()) continue;
      int ind = 0;
      while (ind < int(l.size()) && l[ind] == ' ') ++ind;
      lines_.push_back({ind, l.substr(ind)});
    }
  }

  Json parse_all() {
    Json j = parse_object(0);
    if (pos_ != lines_.size()) throw Error("unexpected indentation in report");
    return j;
  }

 private:
  Json parse_object(int indent) {
    Json j = Json::object();
    while (pos_ < lines_.size() && lines_[pos_].indent == indent && lines_[pos_].text != "-" &&
           lines_[pos_].text.rfind("- ", 0) != 0) {
      const std::string& t = lines_[pos_].text;
      const auto colon = t.find(':');
      if (colon == std::string::npos) throw Error("missing ':' in report line");
      const std::string key = t.substr(0, colon);
      const std::string rest = trim(t.substr(colon + 1));
      ++pos_;
      if (!rest.empty()) {
        if (rest == "[]") j[key] = Json::array();
        else if (rest == "{}") j[key] = Json::object();
        else j[key] = rest;
      } else if (pos_ < lines_.size() && lines_[pos_].indent > indent) {
        j[key] = parse_nested(lines_[pos_].indent);
      } else {
        j[key] = "";
      }
    }
    return j;
  }

  Json parse_nested(int indent) {
    const std::string& first = lines_[pos_].text;
    if (first == "-" || first.rfind("- ", 0) == 0) {
      Json arr = Json::array();
      while (pos_ < lines_.size() && lines_[pos_].indent == indent) {
        const std::string& t = lines_[pos_].text;
        if (t == "-") {
          ++pos_;
          arr.push_back(pos_ < lines_.size() && lines_[pos_].indent > indent
                            ? parse_object(lines_[pos_].indent)
                            : Json::object());
        } else if (t.rfind("- ", 0) == 0) {
          arr.push_back(t.substr(2));
          ++pos_;
        } else {
          break;
        }
      }
      return arr;
    }
    if (first.rfind("ring:", 0) == 0) {
      std::string block;
      while (pos_ < lines_.size() && lines_[pos_].indent >= indent) block += lines_[pos_++].text + "\n";
      Json m = matrix_json(parse_matrix_text(block).matrix);
      return normalize(m);
    }
    return parse_object(indent);
  }

  static Json normalize(const Json& j) {
    if (j.is_object()) {
      Json o = Json::object();
      for (const auto& [k, v] : j.items()) o[k] = normalize(v);
      return o;
    }
    if (j.is_array()) {
      Json a = Json::array();
      for (const auto& v : j) a.push_back(normalize(v));
      return a;
    }
    return j.is_string() ? j : Json(j.dump());
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

MatrixFactorization LoadedMatrix::as_factorization() const {
  if (factorization) return *factorization;
  return make_factorization(matrix, *setting);
}

std::string ring_name(const QRingPtr& ring) {
  if (ring == nodal().ring) return "nodal";
  if (ring == parametric().ring) return "parametric";
  return "custom";
}

const Hypersurface& setting_named(std::string_view name) {
  if (name == "nodal") return nodal();
  if (name == "parametric") return parametric();
  throw Error("unknown ring '" + std::string(name) + "' (expected nodal or parametric)");
}

LoadedMatrix parse_matrix_text(std::string_view text) {
  std::string ring = "nodal";
  std::optional<std::vector<int>> rows, cols;
  std::vector<std::string> body;
  std::istringstream is{std::string(text)};
  for (std::string raw; std::getline(is, raw);) {
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto header = [&](std::string_view key) {
      return line.size() > key.size() && line.compare(0, key.size(), key) == 0 && line[key.size()] == ':';
    };
    if (header("ring")) ring = trim(line.substr(5));
    else if (header("rows")) rows = parse_ints(line.substr(5));
    else if (header("cols")) cols = parse_ints(line.substr(5));
    else body.push_back(line);
  }
  if (body.empty()) throw Error("matrix has no entries");
  std::string joined;
  const bool has_semicolon = std::any_of(body.begin(), body.end(), [](const std::string& l) {
    return l.find(';') != std::string::npos;
  });
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) joined += has_semicolon ? " " : "; ";
    joined += body[i];
  }
  while (!joined.empty() && (joined.back() == ';' || std::isspace(static_cast<unsigned char>(joined.back()))))
    joined.pop_back();
  const PolyMatrix entries = PolyMatrix::parse(setting_named(ring).ring->ring(), joined);
  return assemble(ring, entries, rows, cols);
}

LoadedMatrix parse_matrix_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries")) throw Error("matrix JSON needs an 'entries' field");
  const std::string ring = j.value("ring", std::string("nodal"));
  const RingPtr r = setting_named(ring).ring->ring();
  std::vector<std::vector<Polynomial>> rows;
  for (const auto& row : j.at("entries")) {
    if (!row.is_array()) throw Error("matrix JSON rows must be arrays");
    std::vector<Polynomial> out;
    for (const auto& e : row) out.push_back(parse_polynomial(e.is_string() ? e.get<std::string>() : e.dump(), r));
    rows.push_back(std::move(out));
  }
  if (rows.empty()) throw Error("matrix has no entries");
  for (const auto& row : rows)
    if (row.size() != rows[0].size()) throw Error("matrix JSON rows differ in length");
  auto ints = [&](const char* key) -> std::optional<std::vector<int>> {
    if (!j.contains(key)) return std::nullopt;
    std::vector<int> v;
    for (const auto& x : j.at(key)) v.push_back(x.is_string() ? std::stoi(x.get<std::string>()) : x.get<int>());
    return v;
  };
  return assemble(ring, PolyMatrix::from_rows(r, rows), ints("rowTwists"), ints("colTwists"));
}

LoadedMatrix parse_matrix_input(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw Error(std::string("malformed matrix JSON: ") + e.what());
    }
    return parse_matrix_json(j);
  }
  return parse_matrix_text(text);
}

std::string format_matrix_text(const GradedMatrix& m) {
  std::ostringstream os;
  os << "ring: " << ring_name(m.qring()) << "\n";
  os << "rows: " << join_ints(m.row_deg()) << "\n";
  os << "cols: " << join_ints(m.col_deg()) << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).to_string();
    os << (i + 1 < m.rows() ? ";\n" : "\n");
  }
  return os.str();
}

Json matrix_json(const GradedMatrix& m) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    entries.push_back(row);
  }
  return Json{{"ring", ring_name(m.qring())}, {"entries", entries}, {"rowTwists", m.row_deg()},
              {"colTwists", m.col_deg()}};
}

LoadedMatrix load_input(const std::string& spec) {
  if (spec.rfind("catalog:", 0) == 0) {
    const std::string rest = spec.substr(8);
    const auto colon = rest.find(':');
    const std::string name = rest.substr(0, colon);
    const FamilyInfo& info = family_info(name);
    FamilyParams params;
    if (colon != std::string::npos) {
      const std::string p = rest.substr(colon + 1);
      if (info.parameter == FamilyParameter::Degree) params.m = parse_ints(p).at(0);
      else if (info.parameter == FamilyParameter::Point) params.point = CurvePoint::parse(p);
      else throw Error("family " + name + " takes no parameter");
    }
    LoadedMatrix out;
    out.factorization = instantiate(name, params);
    out.matrix = out.factorization->A;
    out.setting = &setting_named(ring_name(out.matrix.qring()));
    return out;
  }
  std::ifstream in(spec);
  if (!in) throw Error("cannot read '" + spec + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_matrix_input(buf.str());
}

std::string render_text(const Json& report) {
  std::ostringstream os;
  render(report, 0, os);
  return os.str();
}

Json parse_text(std::string_view text) { return TextParser(text).parse_all(); }

}  // namespace mcm::cli
