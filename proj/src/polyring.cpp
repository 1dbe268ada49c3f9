#include "mcm/polyring.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace mcm {

// ---------------------------------------------------------------- Monomial

void Monomial::set(std::size_t i, unsigned e) {
  if (i >= kMaxVars) throw Error("variable index out of range");
  if (e > 0xFFFF) throw Error("exponent overflow");
  degree_ += static_cast<int>(e) - static_cast<int>(exps_[i]);
  exps_[i] = static_cast<std::uint16_t>(e);
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned e = unsigned(exps_[i]) + other.exps_[i];
    if (e > 0xFFFF) throw Error("exponent overflow");
    r.exps_[i] = static_cast<std::uint16_t>(e);
  }
  r.degree_ = degree_ + other.degree_;
  return r;
}

Monomial Monomial::operator/(const Monomial& other) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.exps_[i] = exps_[i] - other.exps_[i];
  r.degree_ = degree_ - other.degree_;
  return r;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (exps_[i] > other.exps_[i]) return false;
  return true;
}

bool Monomial::coprime(const Monomial& other) const {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (exps_[i] && other.exps_[i]) return false;
  return true;
}

Monomial Monomial::lcm(const Monomial& other) const {
  Monomial r;
  int d = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.exps_[i] = std::max(exps_[i], other.exps_[i]);
    d += r.exps_[i];
  }
  r.degree_ = d;
  return r;
}

Monomial Monomial::gcd(const Monomial& other) const {
  Monomial r;
  int d = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.exps_[i] = std::min(exps_[i], other.exps_[i]);
    d += r.exps_[i];
  }
  r.degree_ = d;
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (auto e : exps_) h = (h ^ e) * 1099511628211ull;
  return h;
}

// ---------------------------------------------------------------- PolyRing

std::shared_ptr<const PolyRing> PolyRing::make(std::vector<std::string> names,
                                               std::vector<std::size_t> block_sizes,
                                               std::vector<int> weights) {
  if (names.empty()) throw Error("a ring needs at least one variable");
  if (names.size() > kMaxVars) throw Error("too many variables (max " + std::to_string(kMaxVars) + ")");
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) throw Error("duplicate variable name '" + names[i] + "'");
  if (block_sizes.empty()) block_sizes = {names.size()};
  if (std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0}) != names.size())
    throw Error("order blocks must partition the variables");
  if (weights.empty()) weights.assign(names.size(), 1);
  if (weights.size() != names.size()) throw Error("one grading weight per variable required");
  for (int w : weights)
    if (w != 0 && w != 1) throw Error("grading weights must be 0 or 1");

  auto ring = std::shared_ptr<PolyRing>(new PolyRing());
  ring->names_ = std::move(names);
  ring->block_sizes_ = std::move(block_sizes);
  std::size_t b = 0;
  for (auto s : ring->block_sizes_) {
    if (s == 0) throw Error("empty order block");
    ring->block_begin_.push_back(b);
    b += s;
  }
  ring->weights_ = std::move(weights);
  return ring;
}

std::optional<std::size_t> PolyRing::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t PolyRing::require_index(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw Error("unknown variable '" + std::string(name) + "'");
  return *i;
}

bool PolyRing::positively_graded() const {
  return std::all_of(weights_.begin(), weights_.end(), [](int w) { return w > 0; });
}

int PolyRing::compare(const Monomial& a, const Monomial& b) const {
  for (std::size_t k = 0; k < block_sizes_.size(); ++k) {
    const std::size_t begin = block_begin_[k];
    const std::size_t end = begin + block_sizes_[k];
    int da = 0, db = 0;
    for (std::size_t i = begin; i < end; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = end; i-- > begin;) {
      if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
  }
  return 0;
}

int PolyRing::weighted_degree(const Monomial& m) const {
  int d = 0;
  for (std::size_t i = 0; i < names_.size(); ++i) d += weights_[i] * int(m[i]);
  return d;
}

std::string PolyRing::describe_order() const {
  std::string s = "(c";
  for (auto b : block_sizes_) s += ",dp(" + std::to_string(b) + ")";
  return s + ")";
}

// ---------------------------------------------------------------- helpers

std::string rational_to_string(const Rational& q) {
  Rational r = q;
  r.canonicalize();
  return r.get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  Rational q;
  if (q.set_str(s, 10) != 0) throw Error("invalid rational '" + s + "'");
  q.canonicalize();
  if (q.get_den() == 0) throw Error("zero denominator in '" + s + "'");
  return q;
}

namespace {

void check_same_ring(const Polynomial& a, const Polynomial& b) {
  if (a.ring() != b.ring() && a.ring() && b.ring()) throw RingMismatch();
}

const RingPtr& pick_ring(const Polynomial& a, const Polynomial& b) {
  return a.ring() ? a.ring() : b.ring();
}

}  // namespace

// Internal constructor access for already-sorted term lists.
class PolyBuilder {
 public:
  static Polynomial make(RingPtr ring, std::vector<Term> sorted_terms) {
    Polynomial p(std::move(ring));
    p.terms_ = std::move(sorted_terms);
    return p;
  }
};

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(RingPtr ring, const Rational& c) {
  Polynomial p(std::move(ring));
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  return p;
}

Polynomial Polynomial::variable(RingPtr ring, std::size_t index) {
  if (index >= ring->nvars()) throw Error("variable index out of range");
  Monomial m;
  m.set(index, 1);
  return monomial(std::move(ring), m, 1);
}

Polynomial Polynomial::monomial(RingPtr ring, const Monomial& m, const Rational& c) {
  Polynomial p(std::move(ring));
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

Polynomial Polynomial::from_terms(RingPtr ring, std::vector<Term> terms) {
  const PolyRing& R = *ring;
  std::sort(terms.begin(), terms.end(),
            [&](const Term& a, const Term& b) { return R.compare(a.mono, b.mono) > 0; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  return PolyBuilder::make(std::move(ring), std::move(out));
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0);
}

bool Polynomial::is_unit() const { return terms_.size() == 1 && terms_[0].mono.degree() == 0; }

Rational Polynomial::constant_value() const {
  if (!is_constant()) throw Error("polynomial is not constant");
  return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

std::optional<int> Polynomial::homogeneous_degree() const {
  if (terms_.empty()) return std::nullopt;
  const int d = ring_->weighted_degree(terms_[0].mono);
  for (const auto& t : terms_)
    if (ring_->weighted_degree(t.mono) != d) return std::nullopt;
  return d;
}

unsigned Polynomial::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono[var]);
  return d;
}

bool Polynomial::involves(std::size_t var) const { return degree_in(var) > 0; }

Polynomial Polynomial::operator+(const Polynomial& other) const {
  check_same_ring(*this, other);
  if (terms_.empty()) return other;
  if (other.terms_.empty()) return *this;
  const PolyRing& R = *ring_;
  std::vector<Term> out;
  out.reserve(terms_.size() + other.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < other.terms_.size()) {
    int c = R.compare(terms_[i].mono, other.terms_[j].mono);
    if (c > 0) {
      out.push_back(terms_[i++]);
    } else if (c < 0) {
      out.push_back(other.terms_[j++]);
    } else {
      Rational s = terms_[i].coeff + other.terms_[j].coeff;
      if (s != 0) out.push_back({terms_[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  for (; i < terms_.size(); ++i) out.push_back(terms_[i]);
  for (; j < other.terms_.size(); ++j) out.push_back(other.terms_[j]);
  return PolyBuilder::make(ring_, std::move(out));
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + (-other); }

Polynomial Polynomial::operator*(const Polynomial& other) const {
  check_same_ring(*this, other);
  const RingPtr& ring = pick_ring(*this, other);
  if (terms_.empty() || other.terms_.empty()) return Polynomial(ring);
  if (other.terms_.size() == 1) return times_monomial(other.terms_[0].mono, other.terms_[0].coeff);
  if (terms_.size() == 1) return other.times_monomial(terms_[0].mono, terms_[0].coeff);
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
  std::vector<Term> acc;
  acc.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      Monomial m = a.mono * b.mono;
      auto& slot = buckets[m.hash()];
      bool merged = false;
      for (auto idx : slot) {
        if (acc[idx].mono == m) {
          acc[idx].coeff += a.coeff * b.coeff;
          merged = true;
          break;
        }
      }
      if (!merged) {
        slot.push_back(acc.size());
        acc.push_back({m, a.coeff * b.coeff});
      }
    }
  }
  acc.erase(std::remove_if(acc.begin(), acc.end(), [](const Term& t) { return t.coeff == 0; }),
            acc.end());
  const PolyRing& R = *ring;
  std::sort(acc.begin(), acc.end(),
            [&](const Term& x, const Term& y) { return R.compare(x.mono, y.mono) > 0; });
  return PolyBuilder::make(ring, std::move(acc));
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return Polynomial(ring_);
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

Polynomial Polynomial::times_monomial(const Monomial& m, const Rational& c) const {
  if (c == 0) return Polynomial(ring_);
  Polynomial r(ring_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(ring_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::monic() const {
  if (terms_.empty()) return *this;
  return scaled(1 / Rational(lead_coeff()));
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  if (!terms_.empty() && ring_ != other.ring_) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].mono != other.terms_[i].mono || terms_[i].coeff != other.terms_[i].coeff)
      return false;
  return true;
}

Polynomial Polynomial::substitute(std::size_t var, const Polynomial& value) const {
  check_same_ring(*this, value);
  Polynomial result(ring_);
  std::vector<Polynomial> powers{constant(ring_, 1)};
  for (const auto& t : terms_) {
    const unsigned e = t.mono[var];
    while (powers.size() <= e) powers.push_back(powers.back() * value);
    Monomial rest = t.mono;
    rest.set(var, 0);
    result += powers[e].times_monomial(rest, t.coeff);
  }
  return result;
}

Polynomial Polynomial::map_to(const RingPtr& target) const {
  if (target == ring_) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size());
  std::vector<std::size_t> index(ring_ ? ring_->nvars() : 0);
  std::vector<bool> resolved(index.size(), false);
  for (const auto& t : terms_) {
    Monomial m;
    for (std::size_t i = 0; i < ring_->nvars(); ++i) {
      if (!t.mono[i]) continue;
      if (!resolved[i]) {
        index[i] = target->require_index(ring_->name(i));
        resolved[i] = true;
      }
      m.set(index[i], t.mono[i]);
    }
    out.push_back({m, t.coeff});
  }
  return from_terms(target, std::move(out));
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (negative)
      s += "-";
    else if (!first)
      s += "+";
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < ring_->nvars(); ++i) {
      const unsigned e = t.mono[i];
      if (!e) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_->name(i);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      s += rational_to_string(c);
    } else if (c == 1) {
      s += mono;
    } else {
      s += rational_to_string(c) + "*" + mono;
    }
  }
  return s;
}

Polynomial operator*(const Rational& c, const Polynomial& p) { return p.scaled(c); }

std::pair<Polynomial, Polynomial> divide(const Polynomial& p, const Polynomial& divisor) {
  check_same_ring(p, divisor);
  if (divisor.is_zero()) throw Error("division by zero polynomial");
  const RingPtr& ring = pick_ring(p, divisor);
  std::vector<Term> quotient;
  Polynomial rem(ring);
  Polynomial work = p;
  const Monomial& lm = divisor.lead_monomial();
  const Rational& lc = divisor.lead_coeff();
  while (!work.is_zero()) {
    const Term& t = work.lead();
    if (lm.divides(t.mono)) {
      Monomial q = t.mono / lm;
      Rational c = t.coeff / lc;
      quotient.push_back({q, c});
      work -= divisor.times_monomial(q, c);
    } else {
      rem += Polynomial::monomial(ring, t.mono, t.coeff);
      work -= Polynomial::monomial(ring, t.mono, t.coeff);
    }
  }
  return {Polynomial::from_terms(ring, std::move(quotient)), rem};
}

Polynomial divide_exact(const Polynomial& p, const Polynomial& divisor) {
  auto [q, r] = divide(p, divisor);
  if (!r.is_zero()) throw Error("inexact division: " + p.to_string() + " by " + divisor.to_string());
  return q;
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const RingPtr& ring) : text_(text), ring_(ring) {}

  Polynomial parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc(ring_);
    bool first = true;
    for (;;) {
      bool negate = false;
      if (accept('+')) {
      } else if (accept('-')) {
        negate = true;
      } else if (!first) {
        break;
      }
      Polynomial t = term();
      acc = negate ? acc - t : acc + t;
      first = false;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = power();
    for (;;) {
      if (accept('*')) {
        acc = acc * power();
      } else if (peek('/')) {
        const std::size_t at = pos_;
        ++pos_;
        Polynomial d = power();
        if (!d.is_unit()) throw ParseError("division only by nonzero constants", at);
        acc = acc.scaled(1 / d.constant_value());
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial power() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      std::size_t end = pos_;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      if (end == pos_) throw ParseError("expected exponent", at);
      const unsigned long e = std::stoul(std::string(text_.substr(pos_, end - pos_)));
      pos_ = end;
      if (e > 10000) throw ParseError("exponent too large", at);
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      Rational q = parse_rational(text_.substr(pos_, end - pos_));
      pos_ = end;
      return Polynomial::constant(ring_, q);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      std::string name(text_.substr(start, end - start));
      pos_ = end;
      // Indexed form y(1) is accepted as an alias of y1.
      if (pos_ < text_.size() && text_[pos_] == '(') {
        std::size_t k = pos_ + 1;
        std::size_t digits = k;
        while (digits < text_.size() && std::isdigit(static_cast<unsigned char>(text_[digits]))) ++digits;
        if (digits > k && digits < text_.size() && text_[digits] == ')') {
          std::string indexed = name + std::string(text_.substr(k, digits - k));
          if (ring_->index_of(indexed)) {
            pos_ = digits + 1;
            name = indexed;
          }
        }
      }
      auto idx = ring_->index_of(name);
      if (!idx) throw ParseError("unknown variable '" + name + "'", start);
      return Polynomial::variable(ring_, *idx);
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  std::string_view text_;
  const RingPtr& ring_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const RingPtr& ring) {
  return Parser(text, ring).parse();
}

// ---------------------------------------------------------------- coefficient helpers

std::vector<std::pair<unsigned, Polynomial>> coeff_split(const Polynomial& p, std::size_t var) {
  std::vector<std::pair<unsigned, std::vector<Term>>> groups;
  for (const auto& t : p.terms()) {
    const unsigned e = t.mono[var];
    Monomial rest = t.mono;
    rest.set(var, 0);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == e; });
    if (it == groups.end()) {
      groups.push_back({e, {}});
      it = std::prev(groups.end());
    }
    it->second.push_back({rest, t.coeff});
  }
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::pair<unsigned, Polynomial>> out;
  for (auto& [e, terms] : groups) out.emplace_back(e, Polynomial::from_terms(p.ring(), std::move(terms)));
  return out;
}

Polynomial strip_monomial_factors(const Polynomial& p, std::span<const std::size_t> vars) {
  if (p.is_zero()) throw Error("cannot strip monomial factors of zero");
  Monomial content;
  for (auto v : vars) {
    unsigned e = p.terms().front().mono[v];
    for (const auto& t : p.terms()) e = std::min(e, t.mono[v]);
    content.set(v, e);
  }
  if (content.degree() == 0) return p;
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) out.push_back({t.mono / content, t.coeff});
  return PolyBuilder::make(p.ring(), std::move(out));
}

std::vector<Monomial> monomials_of_degree(const PolyRing& ring, std::span<const std::size_t> vars,
                                          int degree) {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  std::vector<std::size_t> weighted;
  for (auto v : vars)
    if (ring.weight(v) > 0) weighted.push_back(v);
  Monomial cur;
  auto rec = [&](auto&& self, std::size_t k, int remaining) -> void {
    if (k + 1 == weighted.size() || weighted.empty()) {
      if (!weighted.empty()) cur.set(weighted[k], static_cast<unsigned>(remaining));
      if (weighted.empty() && remaining != 0) return;
      out.push_back(cur);
      if (!weighted.empty()) cur.set(weighted[k], 0);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur.set(weighted[k], static_cast<unsigned>(e));
      self(self, k + 1, remaining - e);
    }
    cur.set(weighted[k], 0);
  };
  rec(rec, 0, degree);
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return ring.compare(a, b) > 0; });
  return out;
}

}  // namespace mcm
