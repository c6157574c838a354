#include "voacoh/affine.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"

namespace voacoh {

namespace {

// Dense Gaussian elimination over Q.  Free variables are set to zero.
std::optional<RatVec> q_solve(QMatrix a, RatVec b) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<size_t> piv;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    Rational inv = 1 / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (size_t j = c; j < cols; ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    piv.push_back(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  RatVec x(cols, Rational(0));
  for (size_t k = 0; k < piv.size(); ++k) x[piv[k]] = b[k];
  return x;
}

QMatrix q_inverse(const QMatrix& a) {
  size_t n = a.size();
  QMatrix inv(n, RatVec(n));
  for (size_t j = 0; j < n; ++j) {
    RatVec e(n, Rational(0));
    e[j] = 1;
    QMatrix copy(a);
    auto x = q_solve(copy, e);
    if (!x) throw ModuleError("matrix is singular");
    for (size_t i = 0; i < n; ++i) inv[i][j] = (*x)[i];
  }
  // a square system with a solution for every unit vector is invertible only at full rank
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Rational s = 0;
      for (size_t k = 0; k < n; ++k) s += a[i][k] * inv[k][j];
      if (s != (i == j ? 1 : 0)) throw ModuleError("matrix is singular");
    }
  return inv;
}

QMatrix q_mul(const QMatrix& a, const QMatrix& b) {
  size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  QMatrix r(n, RatVec(m, Rational(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (size_t j = 0; j < m; ++j)
        if (b[t][j] != 0) r[i][j] += a[i][t] * b[t][j];
    }
  return r;
}

QMatrix zero_matrix(size_t n, size_t m) { return QMatrix(n, RatVec(m, Rational(0))); }

void axpy(SparseQ& acc, const Rational& c, const SparseQ& x) {
  for (const auto& [k, v] : x) {
    Rational& slot = acc[k];
    slot += c * v;
    if (slot == 0) acc.erase(k);
  }
}

SparseQ unit(int a) { return SparseQ{{a, Rational(1)}}; }

Rational parse_q(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    Rational q;
    if (q.set_str(j.get<std::string>(), 10) != 0) throw ModuleError("not a rational number: " + j.get<std::string>());
    q.canonicalize();
    return q;
  }
  throw ModuleError("expected a rational number (integer or \"p/q\" string)");
}

std::string join_names(const std::vector<long>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

// --- SimpleLieAlgebra ---

SimpleLieAlgebra SimpleLieAlgebra::sl(int n) {
  if (n < 2) throw ModuleError("sl(n) needs n >= 2");
  SimpleLieAlgebra g;
  g.name = n == 2 ? "A1" : n == 3 ? "A2" : "A" + std::to_string(n - 1);
  g.rank = n - 1;
  auto E = [&](int i, int j) {
    QMatrix m = zero_matrix(n, n);
    m[i][j] = 1;
    return m;
  };
  std::vector<std::pair<int, int>> pos;
  for (int len = 1; len < n; ++len)
    for (int i = 0; i + len < n; ++i) pos.emplace_back(i, i + len);
  auto root_name = [&](char c, int i, int j) {
    if (n == 2) return std::string(1, c);
    std::string s(1, c);
    for (int k = i; k < j; ++k) s += std::to_string(k + 1);
    return s;
  };
  for (int k = 0; k < n - 1; ++k) {
    QMatrix h = zero_matrix(n, n);
    h[k][k] = 1;
    h[k + 1][k + 1] = -1;
    g.natural.push_back(h);
    g.names.push_back(n == 2 ? "h" : "h" + std::to_string(k + 1));
    g.roots.push_back(IntVec(n - 1, 0));
  }
  for (int sgn : {1, -1})
    for (auto [i, j] : pos) {
      g.natural.push_back(sgn > 0 ? E(i, j) : E(j, i));
      g.names.push_back(root_name(sgn > 0 ? 'e' : 'f', i, j));
      IntVec r(n - 1, 0);
      for (int k = i; k < j; ++k) r[k] = sgn;
      g.roots.push_back(r);
    }
  int d = g.dim();
  auto decompose = [&](const QMatrix& x) {
    SparseQ s;
    for (int a = g.rank; a < d; ++a) {
      // root vectors are matrix units
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          if (g.natural[a][p][q] != 0 && x[p][q] != 0) s[a] = x[p][q];
    }
    Rational run = 0;
    for (int k = 0; k < n - 1; ++k) {
      run += x[k][k];
      if (run != 0) s[k] = run;
    }
    return s;
  };
  g.bracket.assign(d, std::vector<SparseQ>(d));
  g.form = zero_matrix(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      QMatrix ab = q_mul(g.natural[a], g.natural[b]), ba = q_mul(g.natural[b], g.natural[a]);
      QMatrix c = zero_matrix(n, n);
      Rational tr = 0;
      for (int p = 0; p < n; ++p) {
        tr += ab[p][p];
        for (int q = 0; q < n; ++q) c[p][q] = ab[p][q] - ba[p][q];
      }
      g.bracket[a][b] = decompose(c);
      g.form[a][b] = tr;
    }
  g.sigma.resize(d);
  int np = static_cast<int>(pos.size());
  for (int a = 0; a < d; ++a) g.sigma[a] = a < g.rank ? a : a < g.rank + np ? a + np : a - np;
  g.finish();
  return g;
}

SimpleLieAlgebra SimpleLieAlgebra::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ModuleError(std::string("structure constants: invalid JSON: ") + e.what());
  }
  if (j.contains("structure_constants")) j = j["structure_constants"];
  SimpleLieAlgebra g;
  g.name = j.value("name", std::string("custom"));
  g.rank = j.at("rank").get<int>();
  g.names = j.at("basis").get<std::vector<std::string>>();
  int d = g.dim();
  if (g.rank < 1 || g.rank >= d) throw ModuleError("structure constants: bad rank");
  g.roots.assign(d, IntVec(g.rank, 0));
  const auto& roots = j.at("roots");
  for (int a = g.rank; a < d; ++a) {
    if (!roots.contains(g.names[a])) throw ModuleError("structure constants: no root given for " + g.names[a]);
    g.roots[a] = roots[g.names[a]].get<IntVec>();
    if (static_cast<int>(g.roots[a].size()) != g.rank)
      throw ModuleError("structure constants: root of " + g.names[a] + " has wrong length");
  }
  g.bracket.assign(d, std::vector<SparseQ>(d));
  std::vector<std::vector<bool>> given(d, std::vector<bool>(d, false));
  for (const auto& e : j.at("brackets")) {
    int a = g.index_of(e.at(0).get<std::string>()), b = g.index_of(e.at(1).get<std::string>());
    SparseQ v;
    for (const auto& [name, q] : e.at(2).items()) {
      Rational x = parse_q(q);
      if (x != 0) v[g.index_of(name)] = x;
    }
    SparseQ neg;
    axpy(neg, Rational(-1), v);
    if ((given[a][b] && g.bracket[a][b] != v) || (given[b][a] && g.bracket[b][a] != neg))
      throw ModuleError("structure constants: inconsistent entries for [" + g.names[a] + ", " + g.names[b] + "]");
    g.bracket[a][b] = v;
    g.bracket[b][a] = neg;
    given[a][b] = given[b][a] = true;
  }
  const auto& form = j.at("form");
  g.form = zero_matrix(d, d);
  if (static_cast<int>(form.size()) != d) throw ModuleError("structure constants: form has wrong size");
  for (int a = 0; a < d; ++a) {
    if (static_cast<int>(form[a].size()) != d) throw ModuleError("structure constants: form has wrong size");
    for (int b = 0; b < d; ++b) g.form[a][b] = parse_q(form[a][b]);
  }
  g.sigma.resize(d);
  for (int a = 0; a < d; ++a) {
    if (a < g.rank) {
      g.sigma[a] = a;
      continue;
    }
    IntVec neg(g.roots[a]);
    for (auto& x : neg) x = -x;
    int b = g.root_index(neg);
    if (b < 0) throw ModuleError("structure constants: no negative for root " + g.names[a]);
    g.sigma[a] = b;
  }
  g.finish();
  g.validate();
  return g;
}

int SimpleLieAlgebra::index_of(const std::string& n) const {
  for (int a = 0; a < dim(); ++a)
    if (names[a] == n) return a;
  throw ModuleError("unknown basis element " + n);
}

int SimpleLieAlgebra::root_index(const IntVec& coords) const {
  for (int a = rank; a < dim(); ++a)
    if (roots[a] == coords) return a;
  return -1;
}

SparseQ SimpleLieAlgebra::br(const SparseQ& x, const SparseQ& y) const {
  SparseQ r;
  for (const auto& [a, p] : x)
    for (const auto& [b, q] : y) axpy(r, p * q, bracket[a][b]);
  return r;
}

void SimpleLieAlgebra::finish() {
  int d = dim();
  form_inv = q_inverse(form);
  cartan_gram = zero_matrix(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) cartan_gram[i][j] = form[i][j];
  cartan_gram_inv = q_inverse(cartan_gram);
  eval.assign(d, RatVec(rank, Rational(0)));
  for (int a = rank; a < d; ++a)
    for (int i = 0; i < rank; ++i) {
      auto it = bracket[i][a].find(a);
      if (it != bracket[i][a].end()) eval[a][i] = it->second;
    }
  theta = -1;
  long best = -1;
  for (int a = rank; a < d; ++a) {
    long ht = 0;
    bool positive = true;
    for (long x : roots[a]) {
      ht += x;
      positive = positive && x >= 0;
    }
    if (positive && ht > best) {
      best = ht;
      theta = a;
    }
  }
}

Rational SimpleLieAlgebra::weight_pair(const RatVec& l, const RatVec& m) const {
  Rational s = 0;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      if (cartan_gram_inv[i][j] != 0) s += l[i] * cartan_gram_inv[i][j] * m[j];
  return s;
}

RatVec SimpleLieAlgebra::rho() const {
  RatVec r(rank, Rational(0));
  for (int a = rank; a < dim(); ++a) {
    if (std::any_of(roots[a].begin(), roots[a].end(), [](long x) { return x < 0; })) continue;
    for (int i = 0; i < rank; ++i) r[i] += eval[a][i] / 2;
  }
  return r;
}

Rational SimpleLieAlgebra::structure_constant(int a, int b) const {
  IntVec s(roots[a]);
  for (int i = 0; i < rank; ++i) s[i] += roots[b][i];
  int c = root_index(s);
  if (c < 0) return 0;
  auto it = bracket[a][b].find(c);
  return it == bracket[a][b].end() ? Rational(0) : it->second;
}

Rational SimpleLieAlgebra::dual_coxeter() const {
  return (root_norm(theta) + 2 * weight_pair(eval[theta], rho())) / 2;
}

Rational SimpleLieAlgebra::theta_coroot_pairing(const RatVec& lambda) const {
  return 2 * weight_pair(lambda, eval[theta]) / root_norm(theta);
}

bool jacobi_check(const SimpleLieAlgebra& g) {
  int d = g.dim();
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c) {
        SparseQ s;
        axpy(s, 1, g.br(unit(a), g.bracket[b][c]));
        axpy(s, 1, g.br(unit(b), g.bracket[c][a]));
        axpy(s, 1, g.br(unit(c), g.bracket[a][b]));
        if (!s.empty()) return false;
      }
  return true;
}

bool chevalley_identity_check(const SimpleLieAlgebra& g) {
  int d = g.dim();
  for (int a = g.rank; a < d; ++a)
    for (int b = g.rank; b < d; ++b) {
      IntVec s(g.roots[a]);
      for (int i = 0; i < g.rank; ++i) s[i] = -(s[i] + g.roots[b][i]);
      int c = g.root_index(s);
      if (c < 0) continue;
      Rational x = g.structure_constant(a, b) / g.root_norm(c);
      Rational y = g.structure_constant(b, c) / g.root_norm(a);
      Rational z = g.structure_constant(c, a) / g.root_norm(b);
      if (x != y || y != z) return false;
    }
  return true;
}

void SimpleLieAlgebra::validate() const {
  int d = dim();
  auto fail = [](const std::string& s) { throw ModuleError("structure constants: " + s); };
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (form[a][b] != form[b][a]) fail("form is not symmetric");
      SparseQ neg;
      axpy(neg, -1, bracket[b][a]);
      if (bracket[a][b] != neg) fail("bracket is not antisymmetric at [" + names[a] + ", " + names[b] + "]");
    }
  if (!jacobi_check(*this)) fail("Jacobi identity fails");
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        Rational l = 0, r = 0;
        for (const auto& [k, v] : bracket[a][b]) l += v * form[k][c];
        for (const auto& [k, v] : bracket[b][c]) r += v * form[a][k];
        if (l != r) fail("form is not invariant");
      }
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      if (!bracket[i][j].empty()) fail("Cartan part is not abelian");
  std::vector<int> simple(rank, -1);
  for (int a = rank; a < d; ++a) {
    bool pos = std::all_of(roots[a].begin(), roots[a].end(), [](long x) { return x >= 0; });
    bool neg = std::all_of(roots[a].begin(), roots[a].end(), [](long x) { return x <= 0; });
    if (pos == neg) fail("root of " + names[a] + " is neither positive nor negative");
    for (int b = rank; b < a; ++b)
      if (roots[a] == roots[b]) fail("root of " + names[a] + " repeats");
    for (int i = 0; i < rank; ++i) {
      SparseQ expect;
      if (eval[a][i] != 0) expect[a] = eval[a][i];
      if (bracket[i][a] != expect) fail(names[a] + " is not an eigenvector of " + names[i]);
    }
    int ones = 0, at = -1;
    for (int i = 0; i < rank; ++i) {
      if (roots[a][i] == 1) ++ones, at = i;
      else if (roots[a][i] != 0) ones = 99;
    }
    if (ones == 1) simple[at] = a;
  }
  for (int i = 0; i < rank; ++i)
    if (simple[i] < 0) fail("missing simple root vector " + std::to_string(i + 1));
  for (int a = rank; a < d; ++a)
    for (int i = 0; i < rank; ++i) {
      Rational e = 0;
      for (int j = 0; j < rank; ++j) e += roots[a][j] * eval[simple[j]][i];
      if (e != eval[a][i]) fail("root coordinates of " + names[a] + " disagree with the Cartan action");
    }
  if (theta < 0 || root_norm(theta) != 2) fail("highest root must have <theta, theta> = 2");
  for (int a = rank; a < d; ++a) {
    int b = sigma[a];
    // [e_a, e_{-a}] = (2/<a,a>) t_a
    SparseQ expect;
    Rational scale = 2 / root_norm(a);
    for (int j = 0; j < rank; ++j) {
      Rational x = 0;
      for (int i = 0; i < rank; ++i) x += cartan_gram_inv[j][i] * eval[a][i];
      if (x * scale != 0) expect[j] = x * scale;
    }
    if (bracket[a][b] != expect) fail("[e, e_-] normalization fails for " + names[a]);
    for (int c = rank; c < d; ++c)
      if (structure_constant(a, c) != -structure_constant(sigma[a], sigma[c]))
        fail("c_{a,b} = -c_{-a,-b} fails for " + names[a] + ", " + names[c]);
  }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      SparseQ l, r;
      for (const auto& [k, v] : bracket[sigma[a]][sigma[b]]) l[k] = v;
      for (const auto& [k, v] : bracket[b][a]) r[sigma[k]] = v;
      if (l != r) fail("sigma is not an anti-involution");
    }
  if (!chevalley_identity_check(*this)) fail("triple identity c_ab/<c,c> = c_bc/<a,a> fails");
}

// --- finite-dimensional modules ---

RatVec GModule::act(int a, const RatVec& v) const {
  RatVec r(v.size(), Rational(0));
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j)
      if (rho[a][i][j] != 0 && v[j] != 0) r[i] += rho[a][i][j] * v[j];
  return r;
}

GModule trivial_module(const SimpleLieAlgebra& g) {
  GModule m;
  m.name = "trivial";
  m.rho.assign(g.dim(), zero_matrix(1, 1));
  m.form = {{Rational(1)}};
  m.highest_weight = RatVec(g.rank, Rational(0));
  return m;
}

GModule adjoint_module(const SimpleLieAlgebra& g) {
  int d = g.dim();
  std::vector<int> order{g.theta};
  for (int a = 0; a < d; ++a)
    if (a != g.theta) order.push_back(a);
  std::vector<int> pos(d);
  for (int i = 0; i < d; ++i) pos[order[i]] = i;
  GModule m;
  m.name = "adjoint";
  m.rho.assign(d, zero_matrix(d, d));
  for (int a = 0; a < d; ++a)
    for (int j = 0; j < d; ++j)
      for (const auto& [k, v] : g.bracket[a][order[j]]) m.rho[a][pos[k]][j] = v;
  m.form = zero_matrix(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m.form[i][j] = g.form[g.sigma[order[i]]][order[j]];
  m.highest_weight = g.eval[g.theta];
  return m;
}

namespace {

using TensorVec = std::map<long, Rational>;

GModule tensor_irreducible(const SimpleLieAlgebra& g, long copies_v, long copies_dual) {
  int n = static_cast<int>(g.natural[0].size());
  int d = g.dim();
  int k = static_cast<int>(copies_v + copies_dual);
  std::vector<long> pw(k + 1, 1);
  for (int i = 1; i <= k; ++i) pw[i] = pw[i - 1] * n;
  long total = pw[k];
  // factor matrices per position: natural or -transpose
  auto entry = [&](int a, int pos, int r, int c) -> Rational {
    return pos < copies_v ? g.natural[a][r][c] : Rational(-g.natural[a][c][r]);
  };
  auto apply = [&](int a, const TensorVec& v) {
    TensorVec out;
    for (const auto& [idx, c] : v)
      for (int p = 0; p < k; ++p) {
        int digit = static_cast<int>((idx / pw[p]) % n);
        for (int r = 0; r < n; ++r) {
          Rational e = entry(a, p, r, digit);
          if (e == 0) continue;
          long ni = idx + (r - digit) * pw[p];
          Rational& slot = out[ni];
          slot += c * e;
          if (slot == 0) out.erase(ni);
        }
      }
    return out;
  };
  long hw_idx = 0;
  for (int p = static_cast<int>(copies_v); p < k; ++p) hw_idx += (n - 1) * pw[p];
  std::vector<TensorVec> basis{TensorVec{{hw_idx, Rational(1)}}};
  RowSpace rs(static_cast<size_t>(total));
  auto dense = [&](const TensorVec& v) {
    ScalarVector x(static_cast<size_t>(total));
    for (const auto& [i, c] : v) x[i] = Scalar(c);
    return x;
  };
  rs.add(dense(basis[0]));
  for (size_t q = 0; q < basis.size(); ++q)
    for (int a = 0; a < d; ++a) {
      if (g.is_cartan(a) || std::any_of(g.roots[a].begin(), g.roots[a].end(), [](long x) { return x > 0; }))
        continue;
      TensorVec w = apply(a, basis[q]);
      if (w.empty()) continue;
      if (rs.add(dense(w))) basis.push_back(std::move(w));
    }
  auto piv = rs.pivot_columns();
  size_t m = basis.size();
  QMatrix st = zero_matrix(m, m);  // transpose of basis restricted to pivots
  for (size_t j = 0; j < m; ++j)
    for (size_t t = 0; t < m; ++t) {
      auto it = basis[j].find(static_cast<long>(piv[t]));
      if (it != basis[j].end()) st[t][j] = it->second;
    }
  QMatrix stinv = q_inverse(st);
  auto coords = [&](const TensorVec& v) {
    RatVec x(m, Rational(0));
    for (size_t t = 0; t < m; ++t) {
      auto it = v.find(static_cast<long>(piv[t]));
      if (it == v.end()) continue;
      for (size_t i = 0; i < m; ++i) x[i] += stinv[i][t] * it->second;
    }
    return x;
  };
  GModule out;
  out.rho.assign(d, zero_matrix(m, m));
  for (int a = 0; a < d; ++a)
    for (size_t j = 0; j < m; ++j) {
      RatVec x = coords(apply(a, basis[j]));
      for (size_t i = 0; i < m; ++i) out.rho[a][i][j] = x[i];
    }
  out.form = zero_matrix(m, m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      for (const auto& [idx, c] : basis[i]) {
        auto it = basis[j].find(idx);
        if (it != basis[j].end()) out.form[i][j] += c * it->second;
      }
  return out;
}

}  // namespace

GModule irreducible_module(const SimpleLieAlgebra& g, const std::vector<long>& lambda) {
  if (static_cast<int>(lambda.size()) != g.rank)
    throw ModuleError("weight needs " + std::to_string(g.rank) + " Dynkin labels");
  for (long x : lambda)
    if (x < 0) throw ModuleError("weight [" + join_names(lambda) + "] is not dominant");
  RatVec lam(lambda.begin(), lambda.end());
  if (std::all_of(lambda.begin(), lambda.end(), [](long x) { return x == 0; })) return trivial_module(g);
  GModule m;
  bool interior = true;
  for (int i = 1; i + 1 < g.rank; ++i) interior = interior && lambda[i] == 0;
  if (!g.natural.empty() && interior) {
    long first = lambda[0], last = g.rank > 1 ? lambda[g.rank - 1] : 0;
    m = tensor_irreducible(g, first, last);
  } else if (lam == g.eval[g.theta]) {
    m = adjoint_module(g);
  } else {
    throw ModuleError("only the trivial and adjoint modules are available for " + g.name);
  }
  m.name = "M[" + join_names(lambda) + "]";
  m.highest_weight = lam;
  // highest-weight sanity: positive roots kill v0, Cartan acts by lambda
  RatVec v0(m.dim(), Rational(0));
  v0[0] = 1;
  for (int a = 0; a < g.dim(); ++a) {
    RatVec w = m.act(a, v0);
    bool positive = !g.is_cartan(a) && std::all_of(g.roots[a].begin(), g.roots[a].end(), [](long x) { return x >= 0; });
    for (int i = 0; i < m.dim(); ++i) {
      Rational expect = (g.is_cartan(a) && i == 0) ? lam[a] : Rational(0);
      if ((g.is_cartan(a) || positive) && w[i] != expect) throw ModuleError("internal: bad highest-weight vector");
    }
  }
  return m;
}

GModule direct_sum(const GModule& a, const GModule& b) {
  int n = a.dim(), m = b.dim();
  GModule s;
  s.name = a.name + "+" + b.name;
  s.highest_weight = a.highest_weight;
  s.form = zero_matrix(n + m, n + m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s.form[i][j] = a.form[i][j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s.form[n + i][n + j] = b.form[i][j];
  for (size_t x = 0; x < a.rho.size(); ++x) {
    QMatrix r = zero_matrix(n + m, n + m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r[i][j] = a.rho[x][i][j];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) r[n + i][n + j] = b.rho[x][i][j];
    s.rho.push_back(std::move(r));
  }
  return s;
}

Rational casimir_eigenvalue(const SimpleLieAlgebra& g, const std::vector<long>& lambda) {
  RatVec l(lambda.begin(), lambda.end());
  return g.weight_pair(l, l) + 2 * g.weight_pair(l, g.rho());
}

Rational casimir_brute_force(const SimpleLieAlgebra& g, const GModule& m) {
  RatVec v0(m.dim(), Rational(0));
  v0[0] = 1;
  RatVec acc(m.dim(), Rational(0));
  for (int a = 0; a < g.dim(); ++a)
    for (int b = 0; b < g.dim(); ++b) {
      if (g.form_inv[a][b] == 0) continue;
      RatVec w = m.act(a, m.act(b, v0));
      for (int i = 0; i < m.dim(); ++i) acc[i] += g.form_inv[a][b] * w[i];
    }
  for (int i = 1; i < m.dim(); ++i)
    if (acc[i] != 0) throw ModuleError("internal: Casimir does not act by a scalar");
  return acc[0];
}

Rational sugawara_lowest_weight(const SimpleLieAlgebra& g, long level, const std::vector<long>& lambda) {
  if (level <= 0) throw ModuleError("level must be a positive integer");
  return casimir_eigenvalue(g, lambda) / (2 * (Rational(level) + g.dual_coxeter()));
}

RatVec whitehead_solve(const SimpleLieAlgebra& g, const GModule& m, const std::vector<RatVec>& f) {
  int d = g.dim(), n = m.dim();
  if (static_cast<int>(f.size()) != d) throw ModuleError("derivation needs one value per basis element");
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      RatVec lhs(n, Rational(0));
      for (const auto& [c, v] : g.bracket[a][b])
        for (int i = 0; i < n; ++i) lhs[i] += v * f[c][i];
      RatVec x = m.act(a, f[b]), y = m.act(b, f[a]);
      for (int i = 0; i < n; ++i)
        if (lhs[i] != x[i] - y[i])
          throw ModuleError("not a derivation: f([" + g.names[a] + ", " + g.names[b] + "]) != " + g.names[a] + ".f(" +
                            g.names[b] + ") - " + g.names[b] + ".f(" + g.names[a] + ")");
    }
  QMatrix sys;
  RatVec rhs;
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < n; ++i) {
      sys.push_back(m.rho[a][i]);
      rhs.push_back(f[a][i]);
    }
  auto x = q_solve(sys, rhs);
  if (!x) throw ModuleError("internal: Whitehead system is inconsistent");
  return *x;
}

QMatrix adjoint_intertwiner(const SimpleLieAlgebra& g, const GModule& m) {
  int d = g.dim(), n = m.dim();
  if (n != d) throw ModuleError("M_lambda is not isomorphic to the adjoint module (dimension " + std::to_string(n) + ")");
  // unknown psi[u][a] at u * d + a
  QMatrix sys;
  RatVec rhs;
  for (int x = 0; x < d; ++x)
    for (int a = 0; a < d; ++a)
      for (int u = 0; u < n; ++u) {
        RatVec row(n * d, Rational(0));
        for (int v = 0; v < n; ++v) row[v * d + a] += m.rho[x][u][v];
        for (const auto& [c, q] : g.bracket[x][a]) row[u * d + c] -= q;
        sys.push_back(std::move(row));
        rhs.push_back(0);
      }
  for (int u = 0; u < n; ++u) {
    RatVec row(n * d, Rational(0));
    row[u * d + g.theta] = 1;
    sys.push_back(std::move(row));
    rhs.push_back(u == 0 ? 1 : 0);
  }
  auto sol = q_solve(sys, rhs);
  if (!sol) throw ModuleError("M_lambda is not isomorphic to the adjoint module");
  QMatrix psi = zero_matrix(n, d);
  for (int u = 0; u < n; ++u)
    for (int a = 0; a < d; ++a) psi[u][a] = (*sol)[u * d + a];
  return psi;
}

Field current_field(int a) { return Field{Field::Current, {a}}; }

// --- AffineCore ---

AffineCore::AffineCore(SimpleLieAlgebra g, long level, std::vector<long> lambda, GModule m)
    : g_(std::move(g)), level_(level), lambda_(std::move(lambda)), m_(std::move(m)) {
  if (level_ <= 0) throw ModuleError("level must be a positive integer");
  hv_ = g_.dual_coxeter();
  RatVec lam(lambda_.begin(), lambda_.end());
  Rational top = g_.theta_coroot_pairing(lam);
  if (top > level_)
    throw ModuleError("lambda(h_theta) = " + top.get_str() + " exceeds the level " + std::to_string(level_));
}

Rational AffineCore::lowest_weight() const { return sugawara_lowest_weight(g_, level_, lambda_); }

std::vector<std::pair<int, int>> AffineCore::modes(const Key& k) const {
  std::vector<std::pair<int, int>> out;
  for (size_t i = 1; i + 1 < k.size(); i += 2) out.emplace_back(k[i], k[i + 1]);
  return out;
}

Key AffineCore::make_key(int u, std::vector<std::pair<int, int>> ms) const {
  std::sort(ms.begin(), ms.end(), std::greater<>());
  Key k{u};
  for (const auto& [n, a] : ms) {
    k.push_back(n);
    k.push_back(a);
  }
  return k;
}

int AffineCore::degree(const Key& k) const {
  int d = 0;
  for (size_t i = 1; i < k.size(); i += 2) d += k[i];
  return d;
}

std::vector<Key> AffineCore::basis(int deg) const {
  std::vector<Key> out;
  if (deg < 0) return out;
  int colors = g_.dim();
  for (int u = 0; u < m_.dim(); ++u) {
    std::vector<std::pair<int, int>> cur;
    std::function<void(int, std::pair<int, int>)> rec = [&](int left, std::pair<int, int> maxp) {
      if (left == 0) {
        out.push_back(make_key(u, cur));
        return;
      }
      for (int n = std::min(left, maxp.first); n >= 1; --n)
        for (int a = colors - 1; a >= 0; --a) {
          std::pair<int, int> e{n, a};
          if (e > maxp) continue;
          cur.push_back(e);
          rec(left - n, e);
          cur.pop_back();
        }
    };
    rec(deg, {deg, colors - 1});
  }
  return out;
}

std::string AffineCore::key_str(const Key& k, bool vacuum) const {
  std::string s;
  auto ms = modes(k);
  size_t i = 0;
  while (i < ms.size()) {
    size_t j = i;
    while (j < ms.size() && ms[j] == ms[i]) ++j;
    s += g_.names[ms[i].second] + "(-" + std::to_string(ms[i].first) + ")";
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s + (vacuum ? "1" : "v" + std::to_string(k[0]));
}

Vector AffineCore::current(const GradedModule& self, int a, int m, const Key& k) const {
  int u = k[0];
  auto ms = modes(k);
  Vector r;
  if (ms.empty()) {
    if (m > 0) return r;
    if (m < 0) return Vector(make_key(u, {{-m, a}}));
    for (int j = 0; j < m_.dim(); ++j)
      if (m_.rho[a][j][u] != 0) r.add(Key{j}, Scalar(m_.rho[a][j][u]));
    return r;
  }
  auto [n1, b] = ms.front();
  if (m < 0 && std::make_pair(-m, a) >= ms.front()) {
    ms.emplace_back(-m, a);
    return Vector(make_key(u, ms));
  }
  ms.erase(ms.begin());
  Key rest = make_key(u, ms);
  // a(m) b(-n1) Y = b(-n1) a(m) Y + [a,b](m-n1) Y + m <a,b> l delta_{m,n1} Y
  r += self.mode(current_field(b), -n1, self.mode(current_field(a), m, rest));
  for (const auto& [c, q] : g_.bracket[a][b]) r.axpy(Scalar(q), self.mode(current_field(c), m - n1, rest));
  if (m == n1 && g_.form[a][b] != 0) r.add(rest, Scalar(Rational(m) * g_.form[a][b] * level_));
  return r;
}

Vector AffineCore::sugawara(const GradedModule& self, int n, const Key& k) const {
  int H = degree(k);
  Vector v(k), r;
  int d = g_.dim();
  for (int kk = n - H; kk <= H; ++kk) {
    int first = std::max(kk, n - kk), second = n - first;
    if (first > H) continue;
    for (int a = 0; a < d; ++a) {
      Vector x = self.mode(current_field(a), first, v);
      if (x.is_zero()) continue;
      for (int b = 0; b < d; ++b)
        if (g_.form_inv[a][b] != 0) r.axpy(Scalar(g_.form_inv[a][b]), self.mode(current_field(b), second, x));
    }
  }
  r *= Scalar(1 / (2 * (Rational(level_) + hv_)));
  return r;
}

Scalar AffineCore::form(const GradedModule& self, const Key& a, const Key& b) const {
  if (degree(a) != degree(b)) return Scalar();
  Vector y(b);
  for (const auto& [n, x] : modes(a)) {
    y = self.mode(current_field(g_.sigma[x]), n, y);
    if (y.is_zero()) return Scalar();
  }
  Rational s = 0;
  for (const auto& [key, c] : y.terms()) s += c.const_value() * m_.form[a[0]][key[0]];
  return Scalar(s);
}

// --- AffineModule ---

AffineModule::AffineModule(SimpleLieAlgebra g, long level, std::vector<long> lambda, ModuleKind kind, int depth)
    : GradedModule(depth), core_(g, level, lambda, irreducible_module(g, lambda)) {
  set_quotient(kind == ModuleKind::Simple);
}

std::string AffineModule::describe() const {
  return std::string(is_quotient() ? "L" : "V") + "(" + std::to_string(core_.level()) + ", [" +
         join_names(core_.lambda()) + "]) over " + core_.algebra().name;
}

int AffineModule::field_weight(const Field& f) const {
  switch (f.kind) {
    case Field::Identity:
      return 0;
    case Field::Current:
      return 1;
    case Field::Conformal:
      return 2;
    default:
      throw ModuleError("field not supported on affine modules");
  }
}

Vector AffineModule::compute_mode(const Field& f, int n, const Key& k) const {
  switch (f.kind) {
    case Field::Identity:
      return n == -1 ? Vector(k) : Vector();
    case Field::Current:
      return core_.current(*this, f.data.at(0), n, k);
    case Field::Conformal:
      return L(n - 1, k);
    default:
      throw ModuleError("field not supported on affine modules");
  }
}

Vector AffineModule::top_vector(const RatVec& x) const {
  Vector v;
  for (size_t u = 0; u < x.size(); ++u)
    if (x[u] != 0) v.add(Key{static_cast<int>(u)}, Scalar(x[u]));
  return v;
}

// --- AffineVOA ---

AffineVOA::AffineVOA(SimpleLieAlgebra g, long level, ModuleKind kind, int depth)
    : VertexAlgebra(depth), core_(g, level, std::vector<long>(g.rank, 0), trivial_module(g)) {
  set_quotient(kind == ModuleKind::Simple);
}

std::string AffineVOA::describe() const {
  return std::string(is_quotient() ? "L" : "V") + "(" + std::to_string(core_.level()) + ", 0) over " +
         core_.algebra().name;
}

int AffineVOA::field_weight(const Field& f) const {
  switch (f.kind) {
    case Field::Identity:
      return 0;
    case Field::Current:
      return 1;
    case Field::Conformal:
      return 2;
    default:
      throw ModuleError("field not supported on affine modules");
  }
}

Vector AffineVOA::compute_mode(const Field& f, int n, const Key& k) const {
  switch (f.kind) {
    case Field::Identity:
      return n == -1 ? Vector(k) : Vector();
    case Field::Current:
      return core_.current(*this, f.data.at(0), n, k);
    case Field::Conformal:
      return L(n - 1, k);
    default:
      throw ModuleError("field not supported on affine modules");
  }
}

std::optional<Field> AffineVOA::as_field(const Key& k) const {
  if (k.size() == 1) return Field{Field::Identity, {}};
  if (k.size() == 3 && k[1] == 1) return current_field(k[2]);
  return std::nullopt;
}

VertexAlgebra::Split AffineVOA::split(const Key& k) const {
  auto ms = core_.modes(k);
  if (ms.empty()) throw ModuleError("internal: vacuum has no split");
  auto [n, a] = ms.front();
  ms.erase(ms.begin());
  return Split{current_field(a), -n, core_.make_key(0, ms)};
}

Vector AffineVOA::conformal_vector() const {
  const auto& g = core_.algebra();
  Vector w;
  Vector vac(vacuum());
  for (int a = 0; a < g.dim(); ++a)
    for (int b = 0; b < g.dim(); ++b)
      if (g.form_inv[a][b] != 0)
        w.axpy(Scalar(g.form_inv[a][b]), mode(current_field(a), -1, mode(current_field(b), -1, vac)));
  w *= Scalar(1 / (2 * (Rational(core_.level()) + core_.dual_coxeter())));
  return w;
}

Scalar AffineVOA::central_charge() const {
  Rational l(core_.level());
  return Scalar(l * core_.algebra().dim() / (l + core_.dual_coxeter()));
}

std::vector<VertexAlgebra::Generator> AffineVOA::generators() const {
  std::vector<Generator> out;
  const auto& g = core_.algebra();
  for (int a = 0; a < g.dim(); ++a) out.push_back({g.names[a] + "(-1)1", current_field(a), current_state(a)});
  return out;
}

std::optional<VertexAlgebra::GenSplit> AffineVOA::generator_split(const Key& k) const {
  auto ms = core_.modes(k);
  if (ms.empty()) return std::nullopt;
  auto [n, a] = ms.front();
  ms.erase(ms.begin());
  return GenSplit{static_cast<size_t>(a), -n, core_.make_key(0, ms), Scalar(1)};
}

// --- w_(1) ---

Vector build_w1(const AffineModule& w, const QMatrix& psi) {
  const auto& g = w.core().algebra();
  int d = g.dim();
  bool nonzero = false;
  for (const auto& row : psi)
    for (const auto& x : row) nonzero = nonzero || x != 0;
  if (!nonzero) throw ModuleError("psi must be nonzero");
  Vector r;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (g.form_inv[a][b] == 0) continue;
      RatVec col(psi.size());
      for (size_t u = 0; u < psi.size(); ++u) col[u] = psi[u][b];
      r.axpy(Scalar(g.form_inv[a][b]), w.mode(current_field(a), -1, w.top_vector(col)));
    }
  for (int a = 0; a < d; ++a) {
    bool positive = !g.is_cartan(a) && std::all_of(g.roots[a].begin(), g.roots[a].end(), [](long x) { return x >= 0; });
    if (!g.is_cartan(a) && !positive) continue;
    if (!w.is_zero_mod(w.mode(current_field(a), 0, r)))
      throw ModuleError("internal: w_(1) is not killed by " + g.names[a] + "(0)");
  }
  return r;
}

}  // namespace voacoh
