#include "voacoh/zhu.hpp"

#include <algorithm>
#include <set>

#include "voacoh/lattice.hpp"

namespace voacoh {

namespace {

int max_degree(const GradedModule& m, const Vector& v) {
  int d = 0;
  for (const auto& [k, c] : v.terms()) d = std::max(d, m.degree(k));
  return d;
}

std::optional<long> nonneg_int(const Scalar& e) {
  if (!e.is_const()) return std::nullopt;
  Rational q = e.const_value();
  if (q.get_den() != 1 || q < 0) return std::nullopt;
  return q.get_num().get_si();
}

int lattice_rank(const GradedModule& m) {
  if (auto* l = dynamic_cast<const LatticeVOA*>(&m)) return l->fock().rank();
  if (auto* l = dynamic_cast<const LatticeModule*>(&m)) return l->fock().rank();
  return 0;
}

}  // namespace

Scalar gbinom(const Scalar& a, int j) {
  Scalar r(1);
  for (int i = 0; i < j; ++i) r = r * (a - Scalar(i)) / Scalar(i + 1);
  return r;
}

ZhuTruncation::ZhuTruncation(const VertexAlgebra& v, ZhuOptions opts)
    : v_(v), m_(v), module_(false), opts_(opts) {
  build();
}

ZhuTruncation::ZhuTruncation(const VertexAlgebra& v, const GradedModule& w, const Grading& g, ZhuOptions opts)
    : v_(v), m_(w), module_(true), s_(g.subtracted(w)), opts_(opts) {
  build();
}

Scalar ZhuTruncation::grading_value(int deg) const {
  if (!module_) return Scalar(deg);
  return m_.lowest_weight() + Scalar(deg) - s_;
}

Key ZhuTruncation::sector_of(const Key& k) const {
  if (rank_ == 0) return {};
  return Key(k.begin(), k.begin() + rank_);
}

ZhuTruncation::Sector& ZhuTruncation::sector(const Key& s) {
  return sectors_[s];
}

ScalarVector ZhuTruncation::coords(const Sector& s, const Vector& part) const {
  ScalarVector out(s.keys.size());
  if (m_.is_quotient()) {
    for (const auto& [d, comp] : m_.by_degree(part)) {
      if (d > realize_) throw TruncationError("vector of weight " + std::to_string(d) + " beyond the realized range");
      auto cs = m_.coords(d, comp);
      auto keys = m_.basis(d);
      for (size_t i = 0; i < cs.size(); ++i)
        if (!cs[i].is_zero()) out[s.index.at(keys[i])] += cs[i];
    }
    return out;
  }
  for (const auto& [k, c] : part.terms()) {
    auto it = s.index.find(k);
    if (it == s.index.end()) throw TruncationError("key " + m_.key_str(k) + " beyond the realized range");
    out[it->second] += c;
  }
  return out;
}

void ZhuTruncation::add(const Vector& z) {
  ++generated_;
  if (z.is_zero()) return;
  std::map<Key, Vector> parts;
  for (const auto& [k, c] : z.terms()) parts[sector_of(k)].add(k, c);
  for (const auto& [s, part] : parts) {
    auto it = sectors_.find(s);
    if (it == sectors_.end()) continue;  // sector not kept
    it->second.span.add(coords(it->second, part));
  }
}

Vector ZhuTruncation::residue(const Vector& a, const Scalar& e, int shift, const Vector& b) const {
  Vector r;
  if (a.is_zero() || b.is_zero()) return r;
  int top = v_.vector_degree(a) + max_degree(m_, b) + shift - 1;
  if (auto n = nonneg_int(e)) top = std::min<long>(top, *n);
  for (int j = 0; j <= top; ++j) {
    Scalar c = gbinom(e, j);
    if (!c.is_zero()) r.axpy(c, state_mode(v_, m_, a, j - shift, b));
  }
  return r;
}

Vector ZhuTruncation::right_residue(const Vector& w, const Scalar& e, int shift, const Vector& v) const {
  Vector r;
  if (w.is_zero() || v.is_zero()) return r;
  int top = m_.vector_degree(w) + max_degree(v_, v) + shift - 1;
  if (auto n = nonneg_int(e)) top = std::min<long>(top, *n);
  for (int j = 0; j <= top; ++j) {
    Scalar c = gbinom(e, j);
    if (!c.is_zero()) r.axpy(c, intertwiner_mode(v_, m_, w, j - shift, v));
  }
  return r;
}

void ZhuTruncation::build() {
  const int N = opts_.level, K = opts_.cutoff;
  if (N < 0 || N > 2) throw ModuleError("Zhu level must be 0, 1 or 2");
  realize_ = opts_.realize < 0 ? K + N + 2 : opts_.realize;
  if (realize_ < K) throw ModuleError("realized weight below the cutoff");
  if (m_.depth() < realize_ || v_.depth() < realize_)
    throw TruncationError("Zhu truncation needs the modules realized to weight " + std::to_string(realize_));
  rank_ = lattice_rank(m_);
  std::set<Key> keep(opts_.only_sectors.begin(), opts_.only_sectors.end());
  auto kept = [&](const Key& s) { return keep.empty() || keep.count(s) > 0; };
  // basis of M by degree and sector
  std::vector<std::map<Key, std::vector<Key>>> grouped(realize_ + 1);
  for (int d = realize_; d >= 0; --d)
    for (const Key& k : m_.basis(d)) {
      Key sk = sector_of(k);
      grouped[d][sk].push_back(k);
      if (!kept(sk)) continue;
      Sector& s = sector(sk);
      s.index[k] = s.keys.size();
      s.keys.push_back(k);
      s.weight.push_back(d);
    }
  for (auto& [key, s] : sectors_) s.span = RowSpace(s.keys.size());

  const int R = realize_;
  int umax = opts_.max_u_weight < 0 ? R : opts_.max_u_weight;
  // partners of u: the M-basis at degree b whose sector lands in a kept sector
  auto partners = [&](const Key& u, int b) {
    std::vector<const std::vector<Key>*> out;
    if (keep.empty()) {
      for (const auto& [sk, ks] : grouped[b]) out.push_back(&ks);
      return out;
    }
    Key beta = sector_of(u);
    for (const Key& t : keep) {
      Key need = t;
      for (int i = 0; i < rank_; ++i) need[i] -= beta[i];
      auto it = grouped[b].find(need);
      if (it != grouped[b].end()) out.push_back(&it->second);
    }
    return out;
  };
  // Res x^{-2N-2-n} Y((1+x)^{L(0)+N} u, x) v, with n = 0 only for modules
  for (int a = 1; a <= std::min(umax, R); ++a)
    for (const Key& u : v_.basis(a))
      for (int b = 0; a + b + 2 * N + 1 <= R; ++b)
        for (const auto* ks : partners(u, b))
          for (const Key& v : *ks)
            for (int n = 0; a + b + 2 * N + 1 + n <= R; ++n) {
              if (module_ && n > 0) break;
              add(residue(Vector(u), Scalar(a + N), 2 * N + 2 + n, Vector(v)));
            }
  // (d + L(-1)) v
  for (int b = 0; b + 1 <= R; ++b)
    for (const auto& [sk, ks] : grouped[b]) {
      if (!kept(sk)) continue;
      for (const Key& v : ks) {
        Vector z = m_.L(-1, v);
        z.axpy(grading_value(b), Vector(v));
        add(z);
      }
    }
}

std::vector<Key> ZhuTruncation::sectors_of(const Vector& x) const {
  std::set<Key> s;
  for (const auto& [k, c] : x.terms()) s.insert(sector_of(k));
  return {s.begin(), s.end()};
}

bool ZhuTruncation::contains(const Vector& x) const {
  std::map<Key, Vector> parts;
  for (const auto& [k, c] : x.terms()) {
    if (m_.degree(k) > opts_.cutoff)
      throw TruncationError("weight " + std::to_string(m_.degree(k)) + " exceeds the Zhu cutoff");
    parts[sector_of(k)].add(k, c);
  }
  for (const auto& [s, part] : parts) {
    auto it = sectors_.find(s);
    if (it == sectors_.end()) throw TruncationError("unknown charge sector");
    if (!it->second.span.contains(coords(it->second, part))) return false;
  }
  return true;
}

ScalarVector ZhuTruncation::reduce(const Vector& x, const std::vector<Key>& sectors) const {
  std::map<Key, Vector> parts;
  for (const auto& [k, c] : x.terms()) parts[sector_of(k)].add(k, c);
  ScalarVector out;
  for (const Key& s : sectors) {
    const Sector& sec = sectors_.at(s);
    ScalarVector r = sec.span.reduce(coords(sec, parts[s]));
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

std::vector<size_t> ZhuTruncation::o_dim_by_weight() const {
  std::vector<size_t> out(opts_.cutoff + 1, 0);
  for (const auto& [key, s] : sectors_)
    for (size_t p : s.span.pivot_columns())
      if (s.weight[p] <= opts_.cutoff) ++out[s.weight[p]];
  return out;
}

std::vector<size_t> ZhuTruncation::quotient_upper_bounds() const {
  auto o = o_dim_by_weight();
  std::vector<size_t> out;
  for (int d = 0; d <= opts_.cutoff; ++d) {
    size_t n = 0;
    for (const auto& [key, s] : sectors_)
      for (int w : s.weight) n += w == d;
    out.push_back(n - o[d]);
  }
  return out;
}

size_t ZhuTruncation::quotient_dim() const {
  size_t n = 0;
  for (size_t q : quotient_upper_bounds()) n += q;
  return n;
}

std::vector<Vector> ZhuTruncation::o_basis() const {
  std::vector<Vector> out;
  for (const auto& [key, s] : sectors_)
    for (const auto& row : s.span.basis()) {
      size_t first = 0;
      while (first < row.size() && row[first].is_zero()) ++first;
      if (first == row.size() || s.weight[first] > opts_.cutoff) continue;
      Vector v;
      for (size_t i = first; i < row.size(); ++i)
        if (!row[i].is_zero()) v.add(s.keys[i], row[i]);
      out.push_back(std::move(v));
    }
  return out;
}

RedundancyCount ZhuTruncation::redundancy(int max_pair_weight) const {
  RedundancyCount rc;
  const int N = opts_.level, K = opts_.cutoff;
  auto test = [&](const Vector& z) {
    ++rc.total;
    if (contains(z)) ++rc.in_span;
  };
  for (auto [p, q] : {std::pair{1, 0}, {0, 1}, {1, 1}})
    for (int a = 1; a <= max_pair_weight; ++a)
      for (int b = 0; a + b <= max_pair_weight && a + b + 2 * N + 1 + p <= K; ++b)
        for (const Key& u : v_.basis(a))
          for (const Key& w : m_.basis(b)) test(residue(Vector(u), Scalar(a + N + q), 2 * N + 2 + p, Vector(w)));
  if (!module_) return rc;
  for (auto [p, q] : {std::pair{0, 0}, {1, 0}, {0, 1}})
    for (int b = 0; b <= max_pair_weight; ++b)
      for (int a = 0; a + b <= max_pair_weight && a + b + 2 * N + 1 + p <= K; ++a)
        for (const Key& w : m_.basis(b))
          for (const Key& u : v_.basis(a))
            test(right_residue(Vector(w), grading_value(b) + Scalar(N + q), 2 * N + 2 + p, Vector(u)));
  return rc;
}

Vector ZhuTruncation::star(const Vector& u, const Vector& v) const {
  const int N = opts_.level;
  Vector r;
  for (const auto& [a, ua] : v_.by_degree(u))
    for (int m = 0; m <= N; ++m) {
      Scalar c(binomial(Rational(m + N), N) * (m % 2 ? -1 : 1));
      r.axpy(c, residue(ua, Scalar(a + N), N + m + 1, v));
    }
  return r;
}

Vector ZhuTruncation::left(const Vector& v, const Vector& w) const {
  const int N = opts_.level;
  Vector r;
  for (const auto& [a, va] : v_.by_degree(v))
    for (int m = 0; m <= N; ++m) {
      Scalar c(binomial(Rational(m + N), N) * (opts_.alternating_left && m % 2 ? -1 : 1));
      r.axpy(c, residue(va, Scalar(a + N), N + m + 1, w));
    }
  return r;
}

Vector ZhuTruncation::right(const Vector& w, const Vector& v) const {
  const int N = opts_.level;
  Vector r;
  for (const auto& [b, wb] : m_.by_degree(w))
    for (int m = 0; m <= N; ++m) {
      Scalar c(binomial(Rational(m + N), N) * (opts_.alternating_right && m % 2 ? -1 : 1));
      r.axpy(c, right_residue(wb, grading_value(b) + Scalar(N), N + m + 1, v));
    }
  return r;
}

Vector ZhuTruncation::commutator_residue(const Vector& v, const Vector& w) const {
  Vector r;
  for (const auto& [a, va] : v_.by_degree(v)) r.axpy(Scalar(-1), residue(va, Scalar(a - 1), 0, w));
  return r;
}

Vector ZhuTruncation::intertwiner_residue(const Vector& w, const Vector& v) const {
  Vector r;
  for (const auto& [b, wb] : m_.by_degree(w)) r.axpy(Scalar(-1), right_residue(wb, grading_value(b) - Scalar(1), 0, v));
  return r;
}

// --- checks ---

InducedMapReport induced_map_check(const DerivationSystem& s, const ScalarVector& x, const ZhuTruncation& av,
                                   const ZhuTruncation& aw, int pair_weight) {
  InducedMapReport rep;
  const VertexAlgebra& v = s.algebra();
  const GradedModule& w = s.module();
  auto F = [&](const Vector& z) { return s.evaluate(x, z); };
  if (auto off = s.offset(); off && aw.cutoff() < av.cutoff() + *off)
    throw TruncationError("module cutoff must be at least " + std::to_string(av.cutoff() + *off));
  for (const Vector& z : av.o_basis()) {
    Vector fz = F(z);
    ++rep.o_checked;
    if (!fz.is_zero() && !aw.contains(fz)) {
      rep.o_containment = false;
      rep.failure = "F(" + v.render(z) + ") is not in the O-span of W";
      return rep;
    }
  }
  for (int a = 0; a <= pair_weight; ++a)
    for (int b = 0; a + b <= pair_weight; ++b)
      for (const Key& u : v.basis(a))
        for (const Key& k : v.basis(b)) {
          Vector uv(u), kv(k);
          Vector d = F(av.star(uv, kv)) - aw.left(uv, F(kv)) - aw.right(F(uv), kv);
          ++rep.pairs_checked;
          if (!aw.contains(d)) {
            rep.leibniz = false;
            rep.failure = "Leibniz rule fails on (" + v.key_str(u) + ", " + v.key_str(k) + ")";
            return rep;
          }
        }
  // w1 with F(g) = (w1)_0 g modulo O(W) on the generators
  auto off = s.offset();
  if (!off) {
    rep.w1 = Vector();
    return rep;
  }
  std::vector<Key> cands;
  if (*off + 1 >= 0) cands = w.basis(*off + 1);
  std::vector<Vector> targets;
  std::vector<std::vector<Vector>> images;
  std::set<Key> secs;
  for (const auto& g : v.generators()) {
    Vector gs(g.state);
    targets.push_back(F(gs));
    images.emplace_back();
    for (const Key& c : cands) images.back().push_back(intertwiner_mode(v, w, Vector(c), 0, gs));
    for (const auto& k : aw.sectors_of(targets.back())) secs.insert(k);
    for (const auto& im : images.back())
      for (const auto& k : aw.sectors_of(im)) secs.insert(k);
  }
  std::vector<Key> sec(secs.begin(), secs.end());
  RowSpace eq(cands.size() + 1);
  for (size_t gi = 0; gi < targets.size(); ++gi) {
    ScalarVector rt = aw.reduce(targets[gi], sec);
    std::vector<ScalarVector> ri;
    for (const auto& im : images[gi]) ri.push_back(aw.reduce(im, sec));
    for (size_t i = 0; i < rt.size(); ++i) {
      ScalarVector row(cands.size() + 1);
      for (size_t k = 0; k < cands.size(); ++k) row[k] = ri[k][i];
      row[cands.size()] = -rt[i];
      eq.add(row);
    }
  }
  for (const auto& kv : eq.kernel()) {
    const Scalar& last = kv[cands.size()];
    if (last.is_zero()) continue;
    Vector w1;
    for (size_t k = 0; k < cands.size(); ++k)
      if (!kv[k].is_zero()) w1.add(cands[k], kv[k] / last);
    rep.w1 = w1;
    break;
  }
  return rep;
}

ZhuCheck associativity_check(const ZhuTruncation& a, int max_weight) {
  ZhuCheck c{"associativity", true, ""};
  const VertexAlgebra& v = a.algebra();
  size_t n = 0;
  for (int i = 0; i <= max_weight; ++i)
    for (int j = 0; j <= max_weight; ++j)
      for (int k = 0; k <= max_weight; ++k) {
        if (i + j + k > a.cutoff()) continue;
        for (const Key& x : v.basis(i))
          for (const Key& y : v.basis(j))
            for (const Key& z : v.basis(k)) {
              Vector X(x), Y(y), Z(z);
              Vector d = a.star(a.star(X, Y), Z) - a.star(X, a.star(Y, Z));
              if (max_degree(v, d) > a.cutoff()) continue;
              ++n;
              if (!a.contains(d)) {
                c.ok = false;
                c.detail = "associator nonzero on (" + v.key_str(x) + ", " + v.key_str(y) + ", " + v.key_str(z) + ")";
                return c;
              }
            }
      }
  c.detail = std::to_string(n) + " triples";
  return c;
}

ZhuCheck bimodule_check(const ZhuTruncation& av, const ZhuTruncation& aw, int max_weight) {
  ZhuCheck c{"bimodule", true, ""};
  const VertexAlgebra& v = av.algebra();
  const GradedModule& w = aw.space();
  Vector one(v.vacuum());
  size_t n = 0;
  auto fail = [&](const std::string& what) {
    c.ok = false;
    c.detail = what;
    return c;
  };
  for (int k = 0; k <= std::min(max_weight, aw.cutoff()); ++k)
    for (const Key& z : w.basis(k)) {
      Vector Z(z);
      Vector l = aw.left(one, Z) - Z, r = aw.right(Z, one) - Z;
      if (std::max(max_degree(w, l), max_degree(w, r)) > aw.cutoff()) continue;
      if (!aw.contains(l)) return fail("1 * w != w for w = " + w.key_str(z));
      if (!aw.contains(r)) return fail("w * 1 != w for w = " + w.key_str(z));
    }
  for (int i = 0; i <= max_weight; ++i)
    for (int j = 0; j <= max_weight; ++j)
      for (int k = 0; k <= max_weight; ++k) {
        if (i + j + k > aw.cutoff()) continue;
        for (const Key& x : v.basis(i))
          for (const Key& y : v.basis(j))
            for (const Key& z : w.basis(k)) {
              Vector X(x), Y(y), Z(z);
              std::string at = " at (" + v.key_str(x) + ", " + v.key_str(y) + ", " + w.key_str(z) + ")";
              Vector l = aw.left(av.star(X, Y), Z) - aw.left(X, aw.left(Y, Z));
              Vector r = aw.right(Z, av.star(X, Y)) - aw.right(aw.right(Z, X), Y);
              Vector m = aw.right(aw.left(X, Z), Y) - aw.left(X, aw.right(Z, Y));
              if (std::max({max_degree(w, l), max_degree(w, r), max_degree(w, m)}) > aw.cutoff()) continue;
              ++n;
              if (!aw.contains(l)) return fail("left" + at);
              if (!aw.contains(r)) return fail("right" + at);
              if (!aw.contains(m)) return fail("middle" + at);
            }
      }
  c.detail = std::to_string(n) + " triples";
  return c;
}

ZhuCheck bracket_check(const ZhuTruncation& aw, int max_weight, int sign, BracketForm form) {
  std::string name = form == BracketForm::Module ? "bracket" : "bracket (intertwiner form)";
  ZhuCheck c{sign > 0 ? name : name + " (opposite sign)", true, ""};
  const VertexAlgebra& v = aw.algebra();
  const GradedModule& w = aw.space();
  size_t n = 0;
  for (int i = 0; i <= max_weight; ++i)
    for (int k = 0; i + k <= std::min(max_weight, aw.cutoff()); ++k)
      for (const Key& x : v.basis(i))
        for (const Key& z : w.basis(k)) {
          Vector X(x), Z(z);
          Vector d = aw.left(X, Z) - aw.right(Z, X);
          d.axpy(Scalar(-sign), form == BracketForm::Module ? aw.commutator_residue(X, Z) : aw.intertwiner_residue(Z, X));
          if (max_degree(w, d) > aw.cutoff()) continue;
          ++n;
          if (!aw.contains(d)) {
            c.ok = false;
            c.detail = "fails on (" + v.key_str(x) + ", " + w.key_str(z) + ")";
            return c;
          }
        }
  c.detail = std::to_string(n) + " pairs";
  return c;
}

}  // namespace voacoh
