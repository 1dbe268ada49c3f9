#include "mcm/groebner.hpp"

#include <algorithm>
#include <sstream>

namespace mcm {

// ---------------------------------------------------------------- ModuleOrder

ModuleOrder::ModuleOrder(RingPtr ring, std::vector<int> shifts, std::size_t top_count, bool position_first)
    : ring_(std::move(ring)), shifts_(std::move(shifts)), top_count_(top_count), position_first_(position_first) {
  if (shifts_.empty()) throw Error("module order needs at least one component");
  if (top_count_ >= shifts_.size()) top_count_ = 0;
}

int ModuleOrder::compare(const Monomial& ma, std::uint32_t ca, const Monomial& mb, std::uint32_t cb) const {
  if (top_count_ > 0) {
    const bool ta = ca < top_count_, tb = cb < top_count_;
    if (ta != tb) return ta ? 1 : -1;
  }
  if (position_first_ && ca != cb) return ca < cb ? 1 : -1;
  const int c = ring_->compare(ma, mb);
  if (c != 0) return c;
  if (ca != cb) return ca < cb ? 1 : -1;
  return 0;
}

ModVector sort_vector(std::vector<ModTerm> terms, const ModuleOrder& order) {
  std::sort(terms.begin(), terms.end(), [&](const ModTerm& a, const ModTerm& b) { return order.compare(a, b) > 0; });
  ModVector out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().comp == t.comp && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  return out;
}

ModVector add_scaled(const ModVector& a, const ModVector& b, const Monomial& m, const Rational& c,
                     const ModuleOrder& order) {
  ModVector out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  const bool trivial_mono = m.degree() == 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      out.push_back(a[i++]);
      continue;
    }
    Monomial bm = trivial_mono ? b[j].mono : b[j].mono * m;
    if (i == a.size()) {
      out.push_back({bm, b[j].comp, b[j].coeff * c});
      ++j;
      continue;
    }
    const int cmp = order.compare(a[i].mono, a[i].comp, bm, b[j].comp);
    if (cmp > 0) {
      out.push_back(a[i++]);
    } else if (cmp < 0) {
      out.push_back({bm, b[j].comp, b[j].coeff * c});
      ++j;
    } else {
      Rational s = a[i].coeff + b[j].coeff * c;
      if (s != 0) out.push_back({a[i].mono, a[i].comp, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

ModVector make_monic(ModVector v) {
  if (v.empty() || v.front().coeff == 1) return v;
  const Rational inv = 1 / v.front().coeff;
  for (auto& t : v) t.coeff *= inv;
  return v;
}

namespace {

ModVector reduce_against(const ModVector& v, const std::vector<const ModVector*>& divisors,
                         const ModuleOrder& order, bool full) {
  ModVector result;
  ModVector cur = v;
  std::size_t pos = 0;
  while (pos < cur.size()) {
    const ModTerm& t = cur[pos];
    const ModVector* g = nullptr;
    for (const ModVector* d : divisors) {
      const ModTerm& lead = d->front();
      if (lead.comp == t.comp && lead.mono.divides(t.mono)) {
        g = d;
        break;
      }
    }
    if (!g) {
      if (!full) {
        result.insert(result.end(), cur.begin() + static_cast<std::ptrdiff_t>(pos), cur.end());
        return result;
      }
      result.push_back(t);
      ++pos;
      continue;
    }
    const Monomial q = t.mono / g->front().mono;
    const Rational c = -t.coeff / g->front().coeff;
    ModVector rest(cur.begin() + static_cast<std::ptrdiff_t>(pos), cur.end());
    cur = add_scaled(rest, *g, q, c, order);
    pos = 0;
  }
  return result;
}

}  // namespace

// ---------------------------------------------------------------- ModuleGB

ModuleGB::ModuleGB(ModuleOrder order, bool skip_lower_pairs)
    : order_(std::move(order)), skip_lower_pairs_(skip_lower_pairs), single_component_(order_.rank() == 1) {}

void ModuleGB::add(ModVector v) {
  if (v.empty()) return;
  const ModTerm& lead = v.front();
  Pair p{order_.degree(lead.mono, lead.comp), lead.mono.degree(), pending_.size(), npos, lead.mono, lead.comp,
         serial_++};
  pending_.push_back(std::move(v));
  pairs_.push_back(std::move(p));
}

const ModVector* ModuleGB::find_divisor(const Monomial& m, std::uint32_t comp) const {
  for (const auto& g : basis_)
    if (g.front().comp == comp && g.front().mono.divides(m)) return &g;
  return nullptr;
}

ModVector ModuleGB::reduce(const ModVector& v, bool full) const {
  std::vector<const ModVector*> divisors;
  divisors.reserve(basis_.size());
  for (const auto& g : basis_) divisors.push_back(&g);
  return reduce_against(v, divisors, order_, full);
}

void ModuleGB::insert(ModVector h) {
  h = make_monic(std::move(h));
  const std::size_t t = basis_.size();
  const Monomial hm = h.front().mono;
  const std::uint32_t hc = h.front().comp;
  const bool h_top = order_.in_top(hc);

  // Chain criterion on existing pairs.
  std::erase_if(pairs_, [&](const Pair& p) {
    if (p.second == npos || p.comp != hc || !hm.divides(p.lcm)) return false;
    const Monomial l1 = basis_[p.first].front().mono.lcm(hm);
    const Monomial l2 = basis_[p.second].front().mono.lcm(hm);
    return l1 != p.lcm && l2 != p.lcm;
  });

  struct Candidate {
    std::size_t index;
    Monomial lcm;
    bool coprime;
    bool keep = true;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < t; ++i) {
    const ModTerm& g = basis_[i].front();
    if (g.comp != hc) continue;
    if (skip_lower_pairs_ && !h_top) continue;
    cands.push_back({i, g.mono.lcm(hm), single_component_ && g.mono.coprime(hm)});
  }
  // Drop pairs whose lcm is a proper multiple of another new pair's lcm.
  for (auto& a : cands) {
    for (const auto& b : cands) {
      if (&a == &b) continue;
      if (b.lcm.divides(a.lcm) && b.lcm != a.lcm) {
        a.keep = false;
        break;
      }
    }
  }
  // Among equal lcms keep one; drop the whole class if any member is coprime.
  for (std::size_t x = 0; x < cands.size(); ++x) {
    if (!cands[x].keep) continue;
    bool any_coprime = cands[x].coprime;
    for (std::size_t y = x + 1; y < cands.size(); ++y) {
      if (cands[y].keep && cands[y].lcm == cands[x].lcm) {
        any_coprime = any_coprime || cands[y].coprime;
        cands[y].keep = false;
      }
    }
    if (any_coprime) cands[x].keep = false;
  }
  basis_.push_back(std::move(h));
  for (const auto& c : cands) {
    if (!c.keep) continue;
    pairs_.push_back({order_.degree(c.lcm, hc), c.lcm.degree(), c.index, t, c.lcm, hc, serial_++});
  }
}

void ModuleGB::complete(std::optional<int> max_degree) {
  while (!pairs_.empty()) {
    auto best = pairs_.begin();
    for (auto it = pairs_.begin(); it != pairs_.end(); ++it) {
      if (it->degree != best->degree) {
        if (it->degree < best->degree) best = it;
        continue;
      }
      if (it->total_degree != best->total_degree) {
        if (it->total_degree < best->total_degree) best = it;
        continue;
      }
      if (it->serial < best->serial) best = it;
    }
    if (max_degree && best->degree > *max_degree) return;
    Pair p = *best;
    pairs_.erase(best);
    ModVector s;
    if (p.second == npos) {
      s = std::move(pending_[p.first]);
    } else {
      const ModVector& gi = basis_[p.first];
      const ModVector& gj = basis_[p.second];
      const Monomial mi = p.lcm / gi.front().mono;
      const Monomial mj = p.lcm / gj.front().mono;
      s = add_scaled(add_scaled({}, gi, mi, 1, order_), gj, mj, -1, order_);
    }
    s = reduce(s, true);
    if (!s.empty()) insert(std::move(s));
  }
}

std::vector<ModVector> ModuleGB::reduced_basis() const {
  std::vector<const ModVector*> minimal;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const ModTerm& li = basis_[i].front();
    bool redundant = false;
    for (std::size_t j = 0; j < basis_.size() && !redundant; ++j) {
      if (i == j) continue;
      const ModTerm& lj = basis_[j].front();
      if (lj.comp != li.comp || !lj.mono.divides(li.mono)) continue;
      if (lj.mono != li.mono || j < i) redundant = true;
    }
    if (!redundant) minimal.push_back(&basis_[i]);
  }
  std::vector<ModVector> out;
  out.reserve(minimal.size());
  for (const ModVector* g : minimal) {
    std::vector<const ModVector*> others;
    for (const ModVector* h : minimal)
      if (h != g) others.push_back(h);
    ModVector tail(g->begin() + 1, g->end());
    ModVector r = reduce_against(tail, others, order_, true);
    r.insert(r.begin(), g->front());
    out.push_back(make_monic(std::move(r)));
  }
  std::sort(out.begin(), out.end(),
            [&](const ModVector& a, const ModVector& b) { return order_.compare(a.front(), b.front()) < 0; });
  return out;
}

ModVector to_vector(const Polynomial& p, std::uint32_t comp, const ModuleOrder&) {
  ModVector v;
  v.reserve(p.size());
  for (const auto& t : p.terms()) v.push_back({t.mono, comp, t.coeff});
  return v;
}

Polynomial component_of(const ModVector& v, std::uint32_t comp, const RingPtr& ring) {
  std::vector<Term> terms;
  for (const auto& t : v)
    if (t.comp == comp) terms.push_back({t.mono, t.coeff});
  return Polynomial::from_terms(ring, std::move(terms));
}

// ---------------------------------------------------------------- ideals

namespace {

Polynomial from_vector(const ModVector& v, const RingPtr& ring) {
  std::vector<Term> terms;
  terms.reserve(v.size());
  for (const auto& t : v) terms.push_back({t.mono, t.coeff});
  return Polynomial::from_terms(ring, std::move(terms));
}

Polynomial reduce_poly(const Polynomial& p, const std::vector<Polynomial>& divisors) {
  if (p.is_zero() || divisors.empty()) return p;
  ModuleOrder order(p.ring(), {0});
  std::vector<ModVector> vs;
  vs.reserve(divisors.size());
  for (const auto& d : divisors)
    if (!d.is_zero()) vs.push_back(to_vector(d, 0, order));
  std::vector<const ModVector*> ptrs;
  for (const auto& v : vs) ptrs.push_back(&v);
  return from_vector(reduce_against(to_vector(p, 0, order), ptrs, order, true), p.ring());
}

}  // namespace

std::vector<Polynomial> groebner_basis(const std::vector<Polynomial>& gens, const RingPtr& ring) {
  ModuleOrder order(ring, {0});
  ModuleGB gb(order);
  for (const auto& g : gens) {
    if (g.ring() && g.ring() != ring) throw RingMismatch();
    gb.add(to_vector(g, 0, order));
  }
  gb.complete();
  std::vector<Polynomial> out;
  for (const auto& v : gb.reduced_basis()) out.push_back(from_vector(v, ring));
  return out;
}

Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& basis) { return reduce_poly(p, basis); }

Polynomial s_polynomial(const Polynomial& p, const Polynomial& q) {
  const Monomial l = p.lead_monomial().lcm(q.lead_monomial());
  return p.times_monomial(l / p.lead_monomial(), 1 / Rational(p.lead_coeff())) -
         q.times_monomial(l / q.lead_monomial(), 1 / Rational(q.lead_coeff()));
}

bool satisfies_buchberger_criterion(const std::vector<Polynomial>& basis) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!normal_form(s_polynomial(basis[i], basis[j]), basis).is_zero()) return false;
  return true;
}

std::shared_ptr<const QuotientRing> QuotientRing::make(RingPtr ring, std::vector<Polynomial> relations) {
  auto q = std::shared_ptr<QuotientRing>(new QuotientRing());
  for (auto& r : relations) r = r.map_to(ring);
  q->basis_ = groebner_basis(relations, ring);
  q->ring_ = std::move(ring);
  q->relations_ = std::move(relations);
  return q;
}

Polynomial QuotientRing::reduce(const Polynomial& p) const {
  if (p.ring() && p.ring() != ring_) throw RingMismatch();
  return normal_form(p, basis_);
}

Ideal::Ideal(QRingPtr ring, std::vector<Polynomial> gens) : ring_(std::move(ring)), gens_(std::move(gens)) {
  std::vector<Polynomial> all;
  for (const auto& g : gens_) {
    if (g.ring() && g.ring() != ring_->ring()) throw RingMismatch();
    Polynomial r = ring_->reduce(g);
    if (!r.is_zero()) all.push_back(r);
  }
  for (const auto& r : ring_->basis()) all.push_back(r);
  basis_ = std::make_shared<const std::vector<Polynomial>>(groebner_basis(all, ring_->ring()));
}

bool Ideal::contains(const Ideal& other) const {
  for (const auto& g : other.generators())
    if (!contains(g)) return false;
  return true;
}

bool Ideal::is_zero() const {
  for (const auto& g : gens_)
    if (!ring_->is_zero(g)) return false;
  return true;
}

bool Ideal::is_unit() const { return basis().size() == 1 && basis().front().is_unit(); }

std::string Ideal::to_string() const {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < gens_.size(); ++i) os << (i ? ", " : "") << gens_[i].to_string();
  os << ">";
  return os.str();
}

bool ideal_equal(const Ideal& a, const Ideal& b) {
  if (a.ring()->ring() != b.ring()->ring()) throw RingMismatch();
  return a.contains(b) && b.contains(a);
}

std::vector<Polynomial> interreduce(const std::vector<Polynomial>& gens, const QuotientRing* ring) {
  std::vector<Polynomial> cur;
  for (const auto& g : gens) {
    Polynomial r = ring ? ring->reduce(g) : g;
    if (!r.is_zero()) cur.push_back(r);
  }
  for (int pass = 0; pass < 1000; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      std::vector<Polynomial> others;
      for (std::size_t j = 0; j < cur.size(); ++j)
        if (j != i && !cur[j].is_zero()) others.push_back(cur[j]);
      if (ring)
        for (const auto& r : ring->basis()) others.push_back(r);
      Polynomial r = reduce_poly(cur[i], others);
      if (r != cur[i]) {
        cur[i] = r;
        changed = true;
      }
    }
    std::erase_if(cur, [](const Polynomial& p) { return p.is_zero(); });
    if (!changed) break;
  }
  std::sort(cur.begin(), cur.end(), [](const Polynomial& a, const Polynomial& b) {
    return a.ring()->compare(a.lead_monomial(), b.lead_monomial()) < 0;
  });
  return cur;
}

}  // namespace mcm
