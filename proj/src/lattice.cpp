#include "voacoh/lattice.hpp"

#include <algorithm>
#include <functional>

namespace voacoh {

// --- EvenLattice ---

EvenLattice::EvenLattice(std::vector<std::vector<long>> gram) : gram_(std::move(gram)) {
  size_t r = gram_.size();
  if (r == 0) throw ModuleError("lattice: empty Gram matrix");
  for (const auto& row : gram_)
    if (row.size() != r) throw ModuleError("lattice: Gram matrix is not square");
  for (size_t i = 0; i < r; ++i) {
    if (gram_[i][i] % 2 != 0) throw ModuleError("lattice: diagonal entry " + std::to_string(i) + " is odd");
    for (size_t j = 0; j < r; ++j)
      if (gram_[i][j] != gram_[j][i]) throw ModuleError("lattice: Gram matrix is not symmetric");
  }
  q_.assign(r, std::vector<Rational>(r));
  for (size_t i = 0; i < r; ++i) {
    Rational d = gram_[i][i];
    for (size_t k = 0; k < i; ++k) d -= q_[k][k] * q_[k][i] * q_[k][i];
    if (d <= 0) throw ModuleError("lattice: Gram matrix is not positive definite");
    q_[i][i] = d;
    for (size_t j = i + 1; j < r; ++j) {
      Rational s = gram_[i][j];
      for (size_t k = 0; k < i; ++k) s -= q_[k][k] * q_[k][i] * q_[k][j];
      q_[i][j] = s / d;
    }
  }
  ExactMatrix g(r, r);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) g.set(i, j, Scalar(Rational(gram_[i][j])));
  ginv_.assign(r, std::vector<Rational>(r));
  for (size_t j = 0; j < r; ++j) {
    ScalarVector e(r);
    e[j] = Scalar(1);
    auto x = solve(g, e);
    for (size_t i = 0; i < r; ++i) ginv_[i][j] = (*x)[i].const_value();
  }
}

EvenLattice EvenLattice::e8() {
  // Cartan matrix of E8 (Bourbaki labelling)
  std::vector<std::vector<long>> c(8, std::vector<long>(8, 0));
  for (int i = 0; i < 8; ++i) c[i][i] = 2;
  auto link = [&](int a, int b) { c[a][b] = c[b][a] = -1; };
  link(0, 2);
  link(1, 3);
  link(2, 3);
  link(3, 4);
  link(4, 5);
  link(5, 6);
  link(6, 7);
  return EvenLattice(c);
}

Rational EvenLattice::pair(const RatVec& a, const RatVec& b) const {
  Rational s = 0;
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j)
      if (gram_[i][j] != 0) s += a[i] * b[j] * gram_[i][j];
  return s;
}

long EvenLattice::pair(const IntVec& a, const IntVec& b) const {
  long s = 0;
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j) s += a[i] * b[j] * gram_[i][j];
  return s;
}

// --- cosets ---

DualCoset::DualCoset(EvenLattice l, RatVec g) : lattice(std::move(l)), gamma(std::move(g)) {
  if (gamma.empty()) gamma.assign(lattice.rank(), Rational(0));
  if (static_cast<int>(gamma.size()) != lattice.rank()) throw ModuleError("coset representative has wrong length");
  for (int i = 0; i < lattice.rank(); ++i) {
    RatVec e(lattice.rank(), Rational(0));
    e[i] = 1;
    Rational v = lattice.pair(gamma, e);
    if (v.get_den() != 1)
      throw ModuleError("coset representative is not in the dual lattice: <gamma, alpha_" + std::to_string(i + 1) +
                        "> = " + v.get_str());
  }
}

RatVec DualCoset::point(const IntVec& beta) const {
  RatVec p(gamma);
  for (size_t i = 0; i < p.size(); ++i) p[i] += beta[i];
  return p;
}

bool DualCoset::is_trivial() const {
  return std::all_of(gamma.begin(), gamma.end(), [](const Rational& x) { return x == 0; });
}

namespace {

Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace

std::vector<IntVec> enumerate_norm(const DualCoset& coset, const Rational& bound) {
  std::vector<IntVec> out;
  if (bound < 0) return out;
  const auto& q = coset.lattice.pohst();
  int r = coset.lattice.rank();
  IntVec beta(r, 0);
  RatVec x(r);
  std::function<void(int, Rational)> rec = [&](int i, Rational remaining) {
    if (i < 0) {
      out.push_back(beta);
      return;
    }
    Rational center = 0;
    for (int j = i + 1; j < r; ++j) center += q[i][j] * x[j];
    // q_ii (x_i + center)^2 <= remaining with x_i = gamma_i + beta_i
    Integer s = floor_q(remaining / q[i][i]);
    Integer root;
    mpz_sqrt(root.get_mpz_t(), s.get_mpz_t());
    root += 1;
    Rational mid = -center - coset.gamma[i];
    Integer lo = floor_q(mid - Rational(root)), hi = floor_q(mid + Rational(root)) + 1;
    for (Integer b = lo; b <= hi; ++b) {
      Rational xi = coset.gamma[i] + Rational(b);
      Rational t = xi + center;
      Rational used = q[i][i] * t * t;
      if (used > remaining) continue;
      beta[i] = b.get_si();
      x[i] = xi;
      rec(i - 1, remaining - used);
    }
  };
  rec(r - 1, bound);
  std::sort(out.begin(), out.end());
  return out;
}

Rational min_norm(const DualCoset& coset) {
  Rational bound = coset.lattice.norm(coset.gamma);
  Rational best = bound;
  for (const auto& b : enumerate_norm(coset, bound)) best = std::min(best, coset.lattice.norm(coset.point(b)));
  return best;
}

int epsilon(const EvenLattice& l, const IntVec& a, const IntVec& b) {
  long s = 0;
  for (int i = 0; i < l.rank(); ++i)
    for (int j = 0; j < i; ++j) s += a[i] * b[j] * l.gram(i, j);
  return (s % 2 == 0) ? 1 : -1;
}

// --- FockSpace ---

FockSpace::FockSpace(DualCoset coset) : coset_(std::move(coset)), min_norm_(min_norm(coset_)) {
  // (|gamma+beta|^2 - min)/2 = base + <gamma, beta> + |beta|^2/2, all integers
  const int r = rank();
  RatVec g = coset_.gamma;
  for (int i = 0; i < r; ++i) {
    RatVec e(r, Rational(0));
    e[i] = 1;
    gdot_.push_back(lattice().pair(g, e).get_num().get_si());
  }
  Rational b = (lattice().norm(g) - min_norm_) / 2;
  base_ = b.get_num().get_si();
}

long FockSpace::lattice_degree(const IntVec& beta) const {
  long s = base_;
  for (int i = 0; i < rank(); ++i) s += gdot_[i] * beta[i];
  return s + lattice().pair(beta, beta) / 2;
}

IntVec FockSpace::beta(const Key& k) const { return IntVec(k.begin(), k.begin() + rank()); }

std::vector<std::pair<int, int>> FockSpace::modes(const Key& k) const {
  std::vector<std::pair<int, int>> out;
  for (size_t i = rank(); i + 1 < k.size(); i += 2) out.emplace_back(k[i], k[i + 1]);
  return out;
}

Key FockSpace::make_key(const IntVec& beta, std::vector<std::pair<int, int>> ms) const {
  std::sort(ms.begin(), ms.end(), std::greater<>());
  Key k(beta.begin(), beta.end());
  for (const auto& [n, i] : ms) {
    k.push_back(n);
    k.push_back(i);
  }
  return k;
}

int FockSpace::heisenberg_degree(const Key& k) const {
  int d = 0;
  for (size_t i = rank(); i < k.size(); i += 2) d += k[i];
  return d;
}

int FockSpace::degree(const Key& k) const {
  long s = 0, q = 0;
  const int r = rank();
  for (int i = 0; i < r; ++i) {
    if (k[i] == 0) continue;
    s += gdot_[i] * k[i];
    for (int j = 0; j < r; ++j) q += lattice().gram(i, j) * k[i] * k[j];
  }
  return heisenberg_degree(k) + static_cast<int>(base_ + s + q / 2);
}

std::vector<Key> FockSpace::basis(int deg) const {
  std::vector<Key> out;
  if (deg < 0) return out;
  auto points = enumerate_norm(coset_, min_norm_ + 2 * deg);
  std::vector<std::pair<long, IntVec>> by_norm;
  for (auto& p : points) by_norm.emplace_back(lattice_degree(p), std::move(p));
  std::stable_sort(by_norm.begin(), by_norm.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [w, p] : by_norm) {
    int rest = deg - static_cast<int>(w);
    // colored partitions of rest, descending (n, i)
    std::vector<std::pair<int, int>> cur;
    std::function<void(int, std::pair<int, int>)> rec = [&](int left, std::pair<int, int> maxp) {
      if (left == 0) {
        out.push_back(make_key(p, cur));
        return;
      }
      for (int n = std::min(left, maxp.first); n >= 1; --n)
        for (int i = rank() - 1; i >= 0; --i) {
          std::pair<int, int> e{n, i};
          if (e > maxp) continue;
          cur.push_back(e);
          rec(left - n, e);
          cur.pop_back();
        }
    };
    rec(rest, {rest, rank() - 1});
  }
  return out;
}

std::string FockSpace::key_str(const Key& k) const {
  std::string s;
  auto ms = modes(k);
  size_t i = 0;
  while (i < ms.size()) {
    size_t j = i;
    while (j < ms.size() && ms[j] == ms[i]) ++j;
    s += rank() == 1 ? "a" : "a" + std::to_string(ms[i].second + 1);
    s += "(-" + std::to_string(ms[i].first) + ")";
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  IntVec b = beta(k);
  bool zero = std::all_of(b.begin(), b.end(), [](long x) { return x == 0; });
  if (zero && coset_.is_trivial()) return s + "1";
  std::string pt;
  for (size_t t = 0; t < b.size(); ++t) pt += (t ? "," : "") + std::to_string(b[t]);
  return s + (coset_.is_trivial() ? "e^[" : "e^{g+[") + pt + (coset_.is_trivial() ? "]" : "]}");
}

Vector FockSpace::heisenberg(int i, int n, const Key& k) const {
  IntVec b = beta(k);
  auto ms = modes(k);
  if (n < 0) {
    ms.emplace_back(-n, i);
    return Vector(make_key(b, ms));
  }
  if (n == 0) {
    Rational v = 0;
    RatVec pt = coset_.point(b);
    for (int j = 0; j < rank(); ++j) v += pt[j] * lattice().gram(i, j);
    return Vector(k, Scalar(v));
  }
  Vector r;
  for (size_t t = 0; t < ms.size(); ++t) {
    if (ms[t].first != n) continue;
    long g = lattice().gram(i, ms[t].second);
    if (g == 0) continue;
    auto rest = ms;
    rest.erase(rest.begin() + t);
    r.add(make_key(b, rest), Scalar(Rational(n * g)));
  }
  return r;
}

Vector FockSpace::alpha_mode(const GradedModule& self, const IntVec& a, int n, const Vector& v) const {
  Vector r;
  for (int i = 0; i < rank(); ++i)
    if (a[i] != 0) r.axpy(Scalar(Rational(a[i])), self.mode(heisenberg_field(i), n, v));
  return r;
}

Vector FockSpace::vertex(const GradedModule& self, const IntVec& alpha, int n, const Key& k) const {
  IntVec b = beta(k);
  RatVec a_rat(alpha.begin(), alpha.end());
  Rational ip = lattice().pair(a_rat, coset_.point(b));
  if (ip.get_den() != 1) throw ModuleError("internal: non-integral pairing in a vertex operator");
  long am = ip.get_num().get_si();
  int hd = heisenberg_degree(k);
  // E^+ coefficients P_d of x^{-d}
  std::vector<Vector> P{Vector(k)};
  for (int d = 1; d <= hd; ++d) {
    Vector s;
    for (int j = 1; j <= d; ++j) s.axpy(Scalar(1), alpha_mode(self, alpha, j, P[d - j]));
    s *= Scalar(Rational(-1, d));
    P.push_back(std::move(s));
  }
  Vector out;
  for (int dp = 0; dp <= hd; ++dp) {
    if (P[dp].is_zero()) continue;
    long dm = -n - 1 - am + dp;
    if (dm < 0) continue;
    std::vector<Vector> S{P[dp]};
    for (long d = 1; d <= dm; ++d) {
      Vector s;
      for (long j = 1; j <= d; ++j) s.axpy(Scalar(1), alpha_mode(self, alpha, static_cast<int>(-j), S[d - j]));
      s *= Scalar(frac(1, d));
      S.push_back(std::move(s));
    }
    out += S[dm];
  }
  int eps = epsilon(lattice(), alpha, b);
  IntVec nb(b);
  for (int i = 0; i < rank(); ++i) nb[i] += alpha[i];
  return out.map_keys([&](const Key& key) {
    Key shifted(key);
    for (int i = 0; i < rank(); ++i) shifted[i] = static_cast<int>(nb[i]);
    return Vector(shifted, Scalar(eps));
  });
}

Vector FockSpace::virasoro(const GradedModule& self, int n, const Key& k) const {
  int hd = heisenberg_degree(k);
  Vector r;
  Vector v(k);
  for (int kk = n - hd; kk <= hd; ++kk) {
    int first = std::max(kk, n - kk), second = n - first;
    if (first > hd) continue;
    for (int i = 0; i < rank(); ++i) {
      Vector x = self.mode(heisenberg_field(i), first, v);
      if (x.is_zero()) continue;
      for (int j = 0; j < rank(); ++j) {
        const Rational& g = lattice().gram_inverse(i, j);
        if (g == 0) continue;
        r.axpy(Scalar(g / 2), self.mode(heisenberg_field(j), second, x));
      }
    }
  }
  return r;
}

Field heisenberg_field(int i) { return Field{Field::Heisenberg, {i}}; }
Field lattice_vertex_field(const IntVec& alpha) {
  return Field{Field::LatticeVertex, std::vector<int>(alpha.begin(), alpha.end())};
}

namespace {

int fock_field_weight(const FockSpace& f, const Field& fl) {
  switch (fl.kind) {
    case Field::Identity:
      return 0;
    case Field::Heisenberg:
      return 1;
    case Field::Conformal:
      return 2;
    case Field::LatticeVertex: {
      IntVec a(fl.data.begin(), fl.data.end());
      return static_cast<int>(f.lattice().pair(a, a) / 2);
    }
    default:
      throw ModuleError("field not supported on lattice modules");
  }
}

Vector fock_mode(const GradedModule& self, const FockSpace& fs, const Field& f, int n, const Key& k) {
  switch (f.kind) {
    case Field::Identity:
      return n == -1 ? Vector(k) : Vector();
    case Field::Heisenberg:
      return fs.heisenberg(f.data.at(0), n, k);
    case Field::Conformal:
      return self.L(n - 1, k);
    case Field::LatticeVertex:
      return fs.vertex(self, IntVec(f.data.begin(), f.data.end()), n, k);
    default:
      throw ModuleError("field not supported on lattice modules");
  }
}

}  // namespace

// --- LatticeModule ---

LatticeModule::LatticeModule(DualCoset coset, int depth) : GradedModule(depth), fock_(std::move(coset)) {}

std::string LatticeModule::describe() const {
  std::string g;
  for (size_t i = 0; i < fock_.coset().gamma.size(); ++i) g += (i ? "," : "") + fock_.coset().gamma[i].get_str();
  return "V_{[" + g + "]+L0} (rank " + std::to_string(fock_.rank()) + ")";
}

int LatticeModule::field_weight(const Field& f) const { return fock_field_weight(fock_, f); }

Vector LatticeModule::compute_mode(const Field& f, int n, const Key& k) const {
  return fock_mode(*this, fock_, f, n, k);
}

// --- LatticeVOA ---

LatticeVOA::LatticeVOA(EvenLattice lattice, int depth)
    : VertexAlgebra(depth), fock_(DualCoset(std::move(lattice), {})) {}

std::string LatticeVOA::describe() const { return "V_L0 (rank " + std::to_string(fock_.rank()) + ")"; }

int LatticeVOA::field_weight(const Field& f) const { return fock_field_weight(fock_, f); }

Vector LatticeVOA::compute_mode(const Field& f, int n, const Key& k) const { return fock_mode(*this, fock_, f, n, k); }

Key LatticeVOA::vacuum() const { return fock_.make_key(IntVec(fock_.rank(), 0), {}); }

Vector LatticeVOA::conformal_vector() const {
  Vector w;
  IntVec zero(fock_.rank(), 0);
  for (int i = 0; i < fock_.rank(); ++i)
    for (int j = 0; j < fock_.rank(); ++j) {
      const Rational& g = fock_.lattice().gram_inverse(i, j);
      if (g != 0) w.add(fock_.make_key(zero, {{1, i}, {1, j}}), Scalar(g / 2));
    }
  return w;
}

std::optional<Field> LatticeVOA::as_field(const Key& k) const {
  IntVec b = fock_.beta(k);
  auto ms = fock_.modes(k);
  bool zero = std::all_of(b.begin(), b.end(), [](long x) { return x == 0; });
  if (ms.empty()) return zero ? Field{Field::Identity, {}} : lattice_vertex_field(b);
  if (zero && ms.size() == 1 && ms[0].first == 1) return heisenberg_field(ms[0].second);
  return std::nullopt;
}

VertexAlgebra::Split LatticeVOA::split(const Key& k) const {
  auto ms = fock_.modes(k);
  if (ms.empty()) throw ModuleError("internal: lattice vertex states are fields");
  auto first = ms.front();
  ms.erase(ms.begin());
  return Split{heisenberg_field(first.second), -first.first, fock_.make_key(fock_.beta(k), ms)};
}

std::vector<VertexAlgebra::Generator> LatticeVOA::generators() const {
  std::vector<Generator> g;
  int r = fock_.rank();
  std::string suffix;
  for (int i = 0; i < r; ++i) {
    std::string idx = r == 1 ? "" : std::to_string(i + 1);
    g.push_back({"a" + idx + "(-1)1", heisenberg_field(i), heisenberg_state(i)});
  }
  for (int i = 0; i < r; ++i) {
    std::string idx = r == 1 ? "" : std::to_string(i + 1);
    IntVec e(r, 0);
    e[i] = 1;
    g.push_back({"e^{a" + idx + "}", lattice_vertex_field(e), vertex_state(e)});
    e[i] = -1;
    g.push_back({"e^{-a" + idx + "}", lattice_vertex_field(e), vertex_state(e)});
  }
  return g;
}

std::optional<VertexAlgebra::GenSplit> LatticeVOA::generator_split(const Key& k) const {
  int r = fock_.rank();
  IntVec b = fock_.beta(k);
  auto ms = fock_.modes(k);
  if (!ms.empty()) {
    auto first = ms.front();
    ms.erase(ms.begin());
    return GenSplit{static_cast<size_t>(first.second), -first.first, fock_.make_key(b, ms), Scalar(1)};
  }
  int j = 0;
  while (j < r && b[j] == 0) ++j;
  if (j == r) return std::nullopt;
  int s = b[j] > 0 ? 1 : -1;
  IntVec step(r, 0);
  step[j] = s;
  IntVec rest(b);
  rest[j] -= s;
  long m = -fock_.lattice().pair(step, rest) - 1;
  // (e^{step})_m e^{rest} = epsilon(step, rest) e^{b}
  int eps = epsilon(fock_.lattice(), step, rest);
  size_t gen = r + 2 * j + (s > 0 ? 0 : 1);
  return GenSplit{gen, static_cast<int>(m), vertex_state(rest), Scalar(eps)};
}

// --- public operations ---

Vector heisenberg_mode(const GradedModule& m, const RatVec& h, int n, const Vector& v) {
  Vector r;
  for (size_t i = 0; i < h.size(); ++i)
    if (h[i] != 0) r.axpy(Scalar(h[i]), apply_mode(m, ModeSymbol{heisenberg_field(static_cast<int>(i)), n}, v));
  return r;
}

Vector lattice_vertex_mode(const GradedModule& m, const IntVec& alpha, int n, const Vector& v) {
  return apply_mode(m, ModeSymbol{lattice_vertex_field(alpha), n}, v);
}

size_t graded_dim(const GradedModule& m, int degree) { return m.dim(degree); }

}  // namespace voacoh
