#include "voacoh/modes.hpp"

#include <sstream>

namespace voacoh {

// --- Vector ---

void Vector::add(const Key& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Vector::axpy(const Scalar& c, const Vector& o) {
  if (c.is_zero()) return;
  bool one = c.is_one();
  for (const auto& [k, v] : o.terms_) add(k, one ? v : c * v);
}

Vector& Vector::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

Scalar Vector::coeff(const Key& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Scalar() : it->second;
}

// --- GradedModule ---

namespace {

Key mode_cache_key(const Field& f, int n, const Key& k) {
  Key r;
  r.reserve(4 + f.data.size() + k.size());
  r.push_back(f.kind);
  r.push_back(static_cast<int>(f.data.size()));
  r.insert(r.end(), f.data.begin(), f.data.end());
  r.push_back(n);
  r.insert(r.end(), k.begin(), k.end());
  return r;
}

}  // namespace

Vector GradedModule::mode(const Field& f, int n, const Key& k) const {
  if (degree(k) + mode_shift(f, n) < 0) return Vector();
  Key ck = mode_cache_key(f, n, k);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = mode_cache_.find(ck);
    if (it != mode_cache_.end()) return it->second;
  }
  Vector r = compute_mode(f, n, k);
  std::lock_guard<std::mutex> lock(mu_);
  mode_cache_.emplace(std::move(ck), r);
  return r;
}

Vector GradedModule::mode(const Field& f, int n, const Vector& v) const {
  return v.map_keys([&](const Key& k) { return mode(f, n, k); });
}

Vector GradedModule::L(int n, const Key& k) const {
  if (degree(k) - n < 0) return Vector();
  Key ck;
  ck.reserve(k.size() + 1);
  ck.push_back(n);
  ck.insert(ck.end(), k.begin(), k.end());
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = l_cache_.find(ck);
    if (it != l_cache_.end()) return it->second;
  }
  Vector r = compute_L(n, k);
  std::lock_guard<std::mutex> lock(mu_);
  l_cache_.emplace(std::move(ck), r);
  return r;
}

Vector GradedModule::L(int n, const Vector& v) const {
  return v.map_keys([&](const Key& k) { return L(n, k); });
}

Scalar GradedModule::compute_form(const Key&, const Key&) const {
  throw ModuleError("module flavor '" + flavor() + "' has no contravariant form");
}

Scalar GradedModule::form(const Key& a, const Key& b) const {
  if (degree(a) != degree(b)) return Scalar();
  Key ck;
  ck.push_back(static_cast<int>(a.size()));
  ck.insert(ck.end(), a.begin(), a.end());
  ck.insert(ck.end(), b.begin(), b.end());
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = form_cache_.find(ck);
    if (it != form_cache_.end()) return it->second;
  }
  Scalar r = compute_form(a, b);
  std::lock_guard<std::mutex> lock(mu_);
  form_cache_.emplace(std::move(ck), r);
  return r;
}

ExactMatrix GradedModule::gram(int deg) const {
  if (!has_form()) throw ModuleError("module flavor '" + flavor() + "' has no contravariant form");
  auto keys = cover_basis(deg);
  ExactMatrix g(keys.size(), keys.size());
  for (size_t i = 0; i < keys.size(); ++i)
    for (size_t j = i; j < keys.size(); ++j) {
      Scalar v = form(keys[i], keys[j]);
      g.set(i, j, v);
      g.set(j, i, v);
    }
  return g;
}

namespace {

std::vector<std::vector<Scalar>> invert(const ExactMatrix& m) {
  size_t n = m.rows();
  auto a = m.dense();
  std::vector<std::vector<Scalar>> inv(n, std::vector<Scalar>(n));
  for (size_t i = 0; i < n; ++i) inv[i][i] = Scalar(1);
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    while (piv < n && a[piv][k].is_zero()) ++piv;
    if (piv == n) throw ModuleError("internal: singular Gram block");
    std::swap(a[piv], a[k]);
    std::swap(inv[piv], inv[k]);
    Scalar p = a[k][k].inverse();
    for (size_t j = 0; j < n; ++j) {
      if (!a[k][j].is_zero()) a[k][j] *= p;
      if (!inv[k][j].is_zero()) inv[k][j] *= p;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k].is_zero()) continue;
      Scalar f = a[i][k];
      for (size_t j = 0; j < n; ++j) {
        if (!a[k][j].is_zero()) a[i][j] -= f * a[k][j];
        if (!inv[k][j].is_zero()) inv[i][j] -= f * inv[k][j];
      }
    }
  }
  return inv;
}

}  // namespace

const GradedModule::QuotientData& GradedModule::quotient_data(int deg) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = quotient_cache_.find(deg);
    if (it != quotient_cache_.end()) return *it->second;
  }
  auto qd = std::make_shared<QuotientData>();
  qd->keys = cover_basis(deg);
  if (quotient_) {
    qd->gram = gram(deg);
    qd->chosen = independent_rows(qd->gram);
    if (qd->chosen.size() < qd->keys.size()) {
      ExactMatrix block(qd->chosen.size(), qd->chosen.size());
      for (size_t i = 0; i < qd->chosen.size(); ++i)
        for (size_t j = 0; j < qd->chosen.size(); ++j) block.set(i, j, qd->gram.get(qd->chosen[i], qd->chosen[j]));
      qd->inv = invert(block);
    }
  } else {
    for (size_t i = 0; i < qd->keys.size(); ++i) qd->chosen.push_back(i);
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, ok] = quotient_cache_.emplace(deg, qd);
  return *it->second;
}

std::vector<Key> GradedModule::basis(int deg) const {
  if (deg < 0) return {};
  const auto& qd = quotient_data(deg);
  std::vector<Key> out;
  for (size_t i : qd.chosen) out.push_back(qd.keys[i]);
  return out;
}

ScalarVector GradedModule::coords(int deg, const Vector& v) const {
  const auto& qd = quotient_data(deg);
  size_t r = qd.chosen.size();
  if (r == qd.keys.size()) {
    ScalarVector x(r);
    std::map<Key, size_t> idx;
    for (size_t i = 0; i < qd.keys.size(); ++i) idx.emplace(qd.keys[i], i);
    for (const auto& [k, c] : v.terms()) {
      auto it = idx.find(k);
      if (it == idx.end()) throw ModuleError("vector " + key_str(k) + " is not in degree " + std::to_string(deg));
      x[it->second] = c;
    }
    return x;
  }
  // pair with the chosen basis vectors, then undo the Gram block
  ScalarVector y(r);
  for (size_t i = 0; i < r; ++i)
    for (const auto& [k, c] : v.terms()) {
      if (degree(k) != deg) throw ModuleError("vector " + key_str(k) + " is not in degree " + std::to_string(deg));
      Scalar g = form(qd.keys[qd.chosen[i]], k);
      if (!g.is_zero()) y[i] += g * c;
    }
  ScalarVector x(r);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j)
      if (!qd.inv[i][j].is_zero() && !y[j].is_zero()) x[i] += qd.inv[i][j] * y[j];
  return x;
}

Vector GradedModule::from_coords(int deg, const ScalarVector& x) const {
  auto b = basis(deg);
  if (b.size() != x.size()) throw ModuleError("coordinate length mismatch");
  Vector v;
  for (size_t i = 0; i < b.size(); ++i) v.add(b[i], x[i]);
  return v;
}

std::map<int, Vector> GradedModule::by_degree(const Vector& v) const {
  std::map<int, Vector> out;
  for (const auto& [k, c] : v.terms()) out[degree(k)].add(k, c);
  return out;
}

int GradedModule::vector_degree(const Vector& v) const {
  if (v.is_zero()) throw ModuleError("zero vector has no degree");
  int d = degree(v.terms().begin()->first);
  for (const auto& [k, c] : v.terms())
    if (degree(k) != d) throw ModuleError("vector is not homogeneous");
  return d;
}

Vector GradedModule::normal_form(const Vector& v) const {
  if (!quotient_) return v;
  Vector out;
  for (const auto& [d, part] : by_degree(v)) out += from_coords(d, coords(d, part));
  return out;
}

bool GradedModule::is_zero_mod(const Vector& v) const {
  for (const auto& [d, part] : by_degree(v))
    for (const auto& x : coords(d, part))
      if (!x.is_zero()) return false;
  return true;
}

std::vector<Vector> GradedModule::radical(int deg) const {
  if (!quotient_) return {};
  const auto& qd = quotient_data(deg);
  std::vector<Vector> out;
  if (qd.chosen.size() == qd.keys.size()) return out;
  for (const auto& ns : nullspace(qd.gram)) {
    Vector v;
    for (size_t i = 0; i < ns.size(); ++i) v.add(qd.keys[i], ns[i]);
    out.push_back(std::move(v));
  }
  return out;
}

std::string GradedModule::render(const Vector& v) const {
  if (v.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : v.terms()) {
    std::string cs = c.str();
    std::string ks = key_str(k);
    bool compound = cs.find(' ') != std::string::npos || cs.find('/') != std::string::npos;
    std::string term;
    if (c.is_one()) {
      term = ks;
    } else if (c == Scalar(-1)) {
      term = "-" + ks;
    } else {
      term = (compound ? "(" + cs + ")" : cs) + "·" + ks;
    }
    if (out.empty())
      out = term;
    else if (term[0] == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out;
}

// --- mode calculus ---

Vector state_mode(const VertexAlgebra& V, const GradedModule& W, const Key& a, int n, const Key& w) {
  if (auto f = V.as_field(a)) return W.mode(*f, n, w);
  int wa = V.degree(a);
  if (W.degree(w) + wa - n - 1 < 0) return Vector();
  Key ck;
  ck.reserve(a.size() + w.size() + 2);
  ck.push_back(static_cast<int>(a.size()));
  ck.insert(ck.end(), a.begin(), a.end());
  ck.push_back(n);
  ck.insert(ck.end(), w.begin(), w.end());
  {
    std::lock_guard<std::mutex> lock(W.mu_);
    auto& cache = W.state_cache_[&V];
    auto it = cache.find(ck);
    if (it != cache.end()) return it->second;
  }
  // a = b_m u; (b_m u)_n = sum_i (-1)^i C(m,i) [ b_{m-i} u_{n+i} - (-1)^m u_{m+n-i} b_i ]
  auto s = V.split(a);
  const Field& b = s.field;
  int m = s.mode;
  int wu = V.degree(s.rest);
  int wb = V.field_weight(b);
  int dw = W.degree(w);
  Vector r;
  for (int i = 0; dw + wu - (n + i) - 1 >= 0; ++i) {
    Rational coef = binomial(Rational(m), i);
    if (i % 2) coef = -coef;
    Vector inner = state_mode(V, W, s.rest, n + i, w);
    if (inner.is_zero()) continue;
    r.axpy(Scalar(coef), W.mode(b, m - i, inner));
  }
  for (int i = 0; dw + wb - i - 1 >= 0; ++i) {
    Rational coef = binomial(Rational(m), i);
    if (i % 2) coef = -coef;
    if (m % 2) coef = -coef;
    Vector inner = W.mode(b, i, w);
    if (inner.is_zero()) continue;
    Vector t = inner.map_keys([&](const Key& k) { return state_mode(V, W, s.rest, m + n - i, k); });
    r.axpy(Scalar(-coef), t);
  }
  std::lock_guard<std::mutex> lock(W.mu_);
  W.state_cache_[&V].emplace(std::move(ck), r);
  return r;
}

Vector state_mode(const VertexAlgebra& V, const GradedModule& W, const Vector& a, int n, const Vector& w) {
  Vector r;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kw, cw] : w.terms()) r.axpy(ca * cw, state_mode(V, W, ka, n, kw));
  return r;
}

Vector intertwiner_mode(const VertexAlgebra& V, const GradedModule& W, const Vector& w, int i, const Vector& v) {
  Vector r;
  for (const auto& [kw, cw] : w.terms())
    for (const auto& [kv, cv] : v.terms()) {
      int top = W.degree(kw) + V.degree(kv) - i - 1;
      for (int j = 0; j <= top; ++j) {
        Vector t = state_mode(V, W, kv, i + j, kw);
        if (t.is_zero()) continue;
        for (int k = 0; k < j; ++k) t = W.L(-1, t);
        Rational coef = Rational(1) / Rational(factorial(j));
        if ((i + 1 + j) % 2) coef = -coef;
        r.axpy(cw * cv * Scalar(coef), t);
      }
    }
  return r;
}

Vector apply_mode(const GradedModule& m, const ModeSymbol& s, const Vector& v) {
  Vector r;
  for (const auto& [k, c] : v.terms()) {
    int target = m.degree(k) + m.mode_shift(s.field, s.n);
    if (target > m.depth())
      throw TruncationError("mode result at degree " + std::to_string(target) + " exceeds truncation depth " +
                            std::to_string(m.depth()));
    r.axpy(c, m.mode(s.field, s.n, k));
  }
  return r;
}

Vector translate_power(const GradedModule& m, const Vector& v, int p) {
  Vector r = v;
  for (int i = 0; i < p; ++i) r = m.L(-1, r);
  return r;
}

ImageResult in_image_translate(const GradedModule& m, const Vector& v, int p) {
  if (m.is_zero_mod(v)) return {true, Vector()};
  int d = m.vector_degree(v);
  if (d < p) return {false, Vector()};
  auto src = m.basis(d - p);
  size_t rows = m.dim(d);
  ExactMatrix a(rows, src.size());
  for (size_t j = 0; j < src.size(); ++j) {
    auto col = m.coords(d, translate_power(m, Vector(src[j]), p));
    for (size_t i = 0; i < rows; ++i) a.set(i, j, col[i]);
  }
  auto x = solve(a, m.coords(d, v));
  if (!x) return {false, Vector()};
  Vector wit;
  for (size_t j = 0; j < src.size(); ++j) wit.add(src[j], (*x)[j]);
  return {true, wit};
}

ExactMatrix contravariant_gram(const GradedModule& m, int deg) { return m.gram(deg); }

}  // namespace voacoh
