#include "voacoh/virasoro.hpp"

#include <numeric>

namespace voacoh {

namespace {

void partitions_rec(int n, int max_part, int min_part, Key& cur, std::vector<Key>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= min_part; --p) {
    cur.push_back(p);
    partitions_rec(n - p, p, min_part, cur, out);
    cur.pop_back();
  }
}

int word_degree(const Key& k) { return std::accumulate(k.begin(), k.end(), 0); }

std::string word_str(const Key& k, const char* base) {
  std::string s;
  size_t i = 0;
  while (i < k.size()) {
    size_t j = i;
    while (j < k.size() && k[j] == k[i]) ++j;
    s += "L(-" + std::to_string(k[i]) + ")";
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s + base;
}

// L(n) on the PBW word `word` of a highest-weight module with central charge c and
// lowest weight h.  `min_part` = 2 encodes the vacuum relation L(-1)1 = 0.
// Recursion goes through self.L so every intermediate result is memoized.
Vector vir_L(const GradedModule& self, const Scalar& c, const Scalar& h, int min_part, int n, const Key& word) {
  Vector r;
  if (n == 0) {
    r.add(word, h + Scalar(word_degree(word)));
    return r;
  }
  if (word.empty()) {
    if (n > 0) return r;
    if (-n < min_part) return r;
    r.add(Key{-n}, Scalar(1));
    return r;
  }
  int n1 = word[0];
  Key rest(word.begin() + 1, word.end());
  if (n < 0) {
    int a = -n;
    if (a >= n1) {
      Key w = word;
      w.insert(w.begin(), a);
      r.add(w, Scalar(1));
      return r;
    }
    // L(-a)L(-n1)Y = L(-n1)L(-a)Y + (n1 - a)L(-a-n1)Y
    r += self.L(-n1, self.L(-a, rest));
    r.axpy(Scalar(n1 - a), self.L(-a - n1, rest));
    return r;
  }
  // n > 0: L(n)L(-n1)Y = L(-n1)L(n)Y + (n + n1)L(n - n1)Y + delta (n^3 - n)/12 c Y
  r += self.L(-n1, self.L(n, rest));
  r.axpy(Scalar(n + n1), self.L(n - n1, rest));
  if (n == n1) r.add(rest, c * Scalar(Rational(n * n * n - n) / 12));
  return r;
}

// <a, b> = coefficient of the lowest vector in L(a_k)...L(a_1) b.
Scalar vir_form(const GradedModule& self, const Key& a, const Key& b) {
  Vector v(b);
  for (int part : a) {
    v = self.L(part, v);
    if (v.is_zero()) return Scalar();
  }
  return v.coeff(Key{});
}

}  // namespace

std::vector<Key> partitions(int n, int min_part) {
  std::vector<Key> out;
  if (n < 0) return out;
  Key cur;
  partitions_rec(n, n, std::max(1, min_part), cur, out);
  return out;
}

long partition_count(int n) { return n < 0 ? 0 : static_cast<long>(partitions(n).size()); }

Field conformal_field() { return Field{Field::Conformal, {}}; }
Field identity_field() { return Field{Field::Identity, {}}; }

// --- VirasoroModule ---

VirasoroModule::VirasoroModule(Scalar c, Scalar h, ModuleKind kind, int depth)
    : GradedModule(depth), c_(std::move(c)), h_(std::move(h)), kind_(kind) {
  set_quotient(kind_ == ModuleKind::Simple);
}

std::string VirasoroModule::describe() const {
  return std::string(kind_ == ModuleKind::Verma ? "M(" : "L(") + c_.str() + ", " + h_.str() + ")";
}

int VirasoroModule::degree(const Key& k) const { return word_degree(k); }

std::string VirasoroModule::key_str(const Key& k) const { return word_str(k, "w"); }

int VirasoroModule::field_weight(const Field& f) const {
  switch (f.kind) {
    case Field::Identity:
      return 0;
    case Field::Conformal:
      return 2;
    default:
      throw ModuleError("field not supported on Virasoro modules");
  }
}

Vector VirasoroModule::compute_mode(const Field& f, int n, const Key& k) const {
  if (f.kind == Field::Identity) return n == -1 ? Vector(k) : Vector();
  if (f.kind == Field::Conformal) return L(n - 1, k);
  throw ModuleError("field not supported on Virasoro modules");
}

Vector VirasoroModule::compute_L(int n, const Key& k) const { return vir_L(*this, c_, h_, 1, n, k); }

Scalar VirasoroModule::compute_form(const Key& a, const Key& b) const { return vir_form(*this, a, b); }

// --- VirasoroVOA ---

VirasoroVOA::VirasoroVOA(Scalar c, ModuleKind kind, int depth) : VertexAlgebra(depth), c_(std::move(c)), kind_(kind) {
  set_quotient(kind_ == ModuleKind::Simple);
}

std::string VirasoroVOA::describe() const {
  return std::string(kind_ == ModuleKind::Verma ? "V(" : "L(") + c_.str() + ", 0)";
}

int VirasoroVOA::degree(const Key& k) const { return word_degree(k); }

std::string VirasoroVOA::key_str(const Key& k) const { return word_str(k, "1"); }

int VirasoroVOA::field_weight(const Field& f) const {
  switch (f.kind) {
    case Field::Identity:
      return 0;
    case Field::Conformal:
      return 2;
    default:
      throw ModuleError("field not supported on Virasoro modules");
  }
}

std::optional<Field> VirasoroVOA::as_field(const Key& k) const {
  if (k.empty()) return identity_field();
  if (k.size() == 1 && k[0] == 2) return conformal_field();
  return std::nullopt;
}

VertexAlgebra::Split VirasoroVOA::split(const Key& k) const {
  if (k.empty()) throw ModuleError("internal: vacuum has no split");
  // L(-n) = omega_{1-n}
  return Split{conformal_field(), 1 - k[0], Key(k.begin() + 1, k.end())};
}

std::optional<VertexAlgebra::GenSplit> VirasoroVOA::generator_split(const Key& k) const {
  if (k.empty()) return std::nullopt;
  return GenSplit{0, 1 - k[0], Key(k.begin() + 1, k.end()), Scalar(1)};
}

Vector VirasoroVOA::compute_mode(const Field& f, int n, const Key& k) const {
  if (f.kind == Field::Identity) return n == -1 ? Vector(k) : Vector();
  if (f.kind == Field::Conformal) return L(n - 1, k);
  throw ModuleError("field not supported on Virasoro modules");
}

Vector VirasoroVOA::compute_L(int n, const Key& k) const { return vir_L(*this, c_, Scalar(0), 2, n, k); }

Scalar VirasoroVOA::compute_form(const Key& a, const Key& b) const { return vir_form(*this, a, b); }

// --- quotient ---

std::unique_ptr<VirasoroModule> radical_quotient(const VirasoroModule& m, int up_to) {
  auto q = std::make_unique<VirasoroModule>(m.c(), m.h(), ModuleKind::Simple, m.depth());
  if (m.symbolic()) {
    for (int d = 0; d <= up_to; ++d)
      if (q->dim(d) != partitions(d).size())
        throw ModuleError("radical is not well defined for symbolic parameters: form degenerates at degree " +
                          std::to_string(d));
  }
  return q;
}

// --- minimal models ---

Rational central_charge(long p, long q) {
  if (p < 1 || q < 1 || std::gcd(p, q) != 1) throw ModuleError("p and q must be coprime positive integers");
  return Rational(1) - Rational(6 * (p - q) * (p - q)) / (p * q);
}

Rational lowest_weight(long p, long q, long m, long n) {
  if (p < 1 || q < 1 || std::gcd(p, q) != 1) throw ModuleError("p and q must be coprime positive integers");
  long a = n * p - m * q, b = p - q;
  return Rational(a * a - b * b) / (4 * p * q);
}

Scalar kac_determinant(int level, bool symbolic, const Scalar& c, const Scalar& h) {
  if (level < 0) throw ModuleError("negative level");
  Scalar cc = symbolic ? RatFunc::c() : c;
  Scalar hh = symbolic ? RatFunc::h() : h;
  VirasoroModule m(cc, hh, ModuleKind::Verma, level);
  return determinant(m.gram(level));
}

std::vector<HOneViolation> h_equals_one_scan(long bound) {
  std::vector<HOneViolation> out;
  for (long p = 2; p <= bound; ++p)
    for (long q = 2; q <= bound; ++q) {
      if (std::gcd(p, q) != 1) continue;
      for (long m = 1; m < p; ++m)
        for (long n = 1; n < q; ++n)
          if (lowest_weight(p, q, m, n) == 1) out.push_back({p, q, m, n});
    }
  return out;
}

bool mn_identity_check() {
  SymPoly p = SymPoly::var("p"), q = SymPoly::var("q"), m = SymPoly::var("m"), n = SymPoly::var("n");
  // 4pq * (mn + h_{m,n} - 1) against (np+mq)^2 - (p+q)^2, denominators cleared
  SymPoly four(4);
  SymPoly lhs = four * p * q * (m * n - SymPoly(1)) + (n * p - m * q) * (n * p - m * q) - (p - q) * (p - q);
  SymPoly rhs = (n * p + m * q) * (n * p + m * q) - (p + q) * (p + q);
  return (lhs - rhs).is_zero();
}

}  // namespace voacoh
