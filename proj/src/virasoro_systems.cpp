#include "voacoh/virasoro_systems.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace voacoh {

std::vector<Key> ascending_words(int deg) {
  auto parts = partitions(deg, 1);
  for (auto& w : parts) std::reverse(w.begin(), w.end());
  return parts;
}

int leading_ones(const Key& word) {
  int r = 0;
  while (r < static_cast<int>(word.size()) && word[r] == 1) ++r;
  return r;
}

std::string ascending_str(const Key& word) {
  std::string s;
  size_t i = 0;
  while (i < word.size()) {
    size_t j = i;
    while (j < word.size() && word[j] == word[i]) ++j;
    s += "L(-" + std::to_string(word[i]) + ")";
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s + "w";
}

Vector apply_word(const GradedModule& m, const Key& word) {
  Vector v(Key{});
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = m.L(-*it, v);
  return v;
}

ScalarVector ascending_coords(const GradedModule& m, int deg, const Vector& v) {
  auto words = ascending_words(deg);
  size_t n = m.dim(deg);
  ExactMatrix a(n, words.size());
  for (size_t j = 0; j < words.size(); ++j) {
    auto col = m.coords(deg, apply_word(m, words[j]));
    for (size_t i = 0; i < n; ++i) a.set(i, j, col[i]);
  }
  auto x = solve(a, m.coords(deg, v));
  if (!x) throw ModuleError("internal: vector outside the span of the ascending words");
  return *x;
}

std::vector<Rational> minimal_model_charges(long bound) {
  std::set<Rational> seen;
  for (long p = 2; p <= bound; ++p)
    for (long q = p + 1; q <= bound; ++q)
      if (std::gcd(p, q) == 1) seen.insert(central_charge(p, q));
  return {seen.begin(), seen.end()};
}

namespace {

std::vector<Key> ansatz_words(int h) {
  switch (h) {
    case -1:
      return {{1, 2}, {1, 1, 1}};
    case -2:
      return {{1, 3}, {1, 1, 2}, {1, 1, 1, 1}};
    case -3:
      return {{1, 4}, {1, 2, 2}, {1, 1, 3}, {1, 1, 1, 2}, {1, 1, 1, 1, 1}};
    default:
      throw ModuleError("negative-energy systems are tabulated for h = -1, -2, -3 only");
  }
}

std::string unknown_name(const Key& w) {
  std::string s = "a";
  for (int k : w) s += std::to_string(k);
  return s;
}

// All size-k subsets of {0..n-1}.
void subsets(size_t n, size_t k, std::vector<std::vector<size_t>>& out) {
  std::vector<size_t> cur;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

// gcd of the numerators of all k x k minors; the zero set is where the rank drops below k.
Poly minor_gcd(const ExactMatrix& m, size_t k) {
  if (k == 0) return Poly(1);
  std::vector<std::vector<size_t>> rs, cs;
  subsets(m.rows(), k, rs);
  subsets(m.cols(), k, cs);
  Poly g;
  for (const auto& r : rs)
    for (const auto& c : cs) {
      ExactMatrix sub(k, k);
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) sub.set(i, j, m.get(r[i], c[j]));
      Scalar d = determinant(sub);
      if (d.is_zero()) continue;
      g = g.is_zero() ? d.num() : Poly::gcd(g, d.num());
    }
  return g;
}

bool avoids(const Poly& locus, long bound) {
  if (locus.is_zero()) return false;
  for (const auto& c : minimal_model_charges(bound))
    if (locus.substitute(c, std::nullopt).is_zero()) return false;
  return true;
}

int verma_depth(int h) { return 2 - h + 4; }

}  // namespace

NegativeEnergyReport negative_energy_system(int h, long minimal_model_bound) {
  NegativeEnergyReport rep;
  rep.h = h;
  rep.ansatz = ansatz_words(h);
  for (const auto& w : rep.ansatz) rep.unknowns.push_back(unknown_name(w));
  VirasoroModule W(RatFunc::c(), Scalar(h), ModuleKind::Verma, verma_depth(h));
  const int deg = 2 - h;
  const size_t n = rep.ansatz.size();
  std::vector<Vector> ans;
  for (const auto& w : rep.ansatz) ans.push_back(apply_word(W, w));

  auto table = [&](int op) {
    ActionTable t;
    t.n = op;
    t.degree = deg - op;
    t.basis = ascending_words(t.degree);
    for (const auto& a : ans) t.images.push_back(ascending_coords(W, t.degree, W.L(op, a)));
    return t;
  };

  // Necessary conditions: L(2m)F in Im L(-1) and L(2m)F - 1/2 L(-1)L(2m+1)F in Im L(-1)^2.
  for (int m = 1; deg - 2 * m >= 0; ++m) {
    rep.actions.push_back(table(2 * m));
    rep.actions.push_back(table(2 * m + 1));
    int d = deg - 2 * m;
    auto basis = ascending_words(d);
    std::vector<ScalarVector> first, second;
    for (const auto& a : ans) {
      Vector x = W.L(2 * m, a);
      Vector y = x;
      y.axpy(Scalar(frac(-1, 2)), W.L(-1, W.L(2 * m + 1, a)));
      first.push_back(ascending_coords(W, d, x));
      second.push_back(ascending_coords(W, d, y));
    }
    auto emit = [&](const std::vector<ScalarVector>& cols, int p, const std::string& what) {
      for (size_t k = 0; k < basis.size(); ++k) {
        if (leading_ones(basis[k]) >= p) continue;
        ConstraintRow row;
        row.m = m;
        row.label = what + ": coefficient of " + ascending_str(basis[k]);
        row.coeffs.resize(n);
        bool any = false;
        for (size_t j = 0; j < n; ++j) {
          row.coeffs[j] = cols[j][k];
          any = any || !row.coeffs[j].is_zero();
        }
        if (any) rep.rows.push_back(std::move(row));
      }
    };
    std::string l2m = "L(" + std::to_string(2 * m) + ")F";
    emit(first, 1, l2m + " in Im L(-1)");
    emit(second, 2, l2m + " - 1/2 L(-1)L(" + std::to_string(2 * m + 1) + ")F in Im L(-1)^2");
  }

  ExactMatrix all(0, n);
  for (const auto& r : rep.rows) all.append_row(r.coeffs);
  rep.solutions = nullspace(all);

  std::vector<size_t> low;
  for (size_t j = 0; j < n; ++j)
    if (leading_ones(rep.ansatz[j]) < 2) low.push_back(j);
  rep.low_block = ExactMatrix(0, low.size());
  for (const auto& r : rep.rows) {
    if (r.m != 1) continue;
    std::vector<Scalar> row;
    for (size_t j : low) row.push_back(r.coeffs[j]);
    rep.low_block.append_row(row);
    for (size_t j = 0; j < n; ++j)
      if (leading_ones(rep.ansatz[j]) >= 2 && !r.coeffs[j].is_zero()) rep.high_columns_vanish = false;
  }
  if (rank(rep.low_block) == low.size()) {
    rep.locus = minor_gcd(rep.low_block, low.size());
    if (!rep.locus.is_const()) rep.locus_roots = rational_roots_c(rep.locus);
    rep.excludes_minimal_models = avoids(rep.locus, minimal_model_bound);
  }
  return rep;
}

ZeroModeReport zero_mode_matching(int h, long minimal_model_bound) {
  ZeroModeReport rep;
  rep.h = h;
  const int deg = 2 - h;
  const int depth = verma_depth(h);
  VirasoroVOA V(RatFunc::c(), ModuleKind::Verma, depth);
  VirasoroModule W(RatFunc::c(), Scalar(h), ModuleKind::Verma, depth);
  for (const auto& w : ascending_words(1 - h))
    if (leading_ones(w) == 0) rep.candidates.push_back(w);
  rep.basis = ascending_words(deg);
  Vector omega = V.conformal_vector();
  for (const auto& u : rep.candidates)
    rep.images.push_back(ascending_coords(W, deg, intertwiner_mode(V, W, apply_word(W, u), 0, omega)));

  std::vector<size_t> rows;
  for (size_t k = 0; k < rep.basis.size(); ++k) {
    int r1 = leading_ones(rep.basis[k]);
    if (r1 == 2 || r1 == 3) {
      rows.push_back(k);
      rep.matched_words.push_back(rep.basis[k]);
    }
  }
  rep.matching = ExactMatrix(rows.size(), rep.candidates.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rep.candidates.size(); ++j) rep.matching.set(i, j, rep.images[j][rows[i]]);
  size_t k = std::min(rows.size(), rep.candidates.size());
  if (rank(rep.matching) == k) {
    rep.locus = minor_gcd(rep.matching, k);
    if (!rep.locus.is_const()) rep.locus_roots = rational_roots_c(rep.locus);
    rep.excludes_minimal_models = avoids(rep.locus, minimal_model_bound);
  }

  // Each solution F of the constraint system: find x with F - sum x_j (u_j)_0 omega in Im L(-1)^4.
  auto ne = negative_energy_system(h, minimal_model_bound);
  rep.residual_in_image4 = true;
  for (const auto& sol : ne.solutions) {
    ScalarVector f(rep.basis.size());
    for (size_t j = 0; j < ne.ansatz.size(); ++j) {
      if (sol[j].is_zero()) continue;
      auto col = ascending_coords(W, deg, apply_word(W, ne.ansatz[j]));
      for (size_t i = 0; i < f.size(); ++i) f[i] += sol[j] * col[i];
    }
    ScalarVector target;
    for (size_t r : rows) target.push_back(f[r]);
    auto x = solve(rep.matching, target);
    if (!x) {
      rep.residual_in_image4 = false;
      rep.matching_coefficients.push_back({});
      continue;
    }
    for (size_t i = 0; i < f.size(); ++i) {
      if (leading_ones(rep.basis[i]) >= 4) continue;
      Scalar res = f[i];
      for (size_t j = 0; j < x->size(); ++j) res -= (*x)[j] * rep.images[j][i];
      if (!res.is_zero()) rep.residual_in_image4 = false;
    }
    rep.matching_coefficients.push_back(*x);
  }
  return rep;
}

Poly kac_factor(int r, int s) {
  if (r < 1 || s < 1) throw ModuleError("Kac labels must be positive");
  if (r > s) std::swap(r, s);
  Poly c = Poly::var_c(), h = Poly::var_h();
  if (r == s) return h - (Poly(1) - c) * frac(r * r - 1, 24);
  // c = 13 - 6u with u = t + 1/t; h_{r,s} = (A t + B/t)/4 - k
  Rational A = r * r - 1, B = s * s - 1, k = frac(r * s - 1, 2);
  Poly u = (Poly(13) - c) * frac(1, 6);
  Poly sum = u * ((A + B) / 4) - Poly(2 * k);
  Poly prod = (u * u - Poly(2)) * (A * B / 16) + Poly((A * A + B * B) / 16) - u * (k * (A + B) / 4) + Poly(k * k);
  return h * h - sum * h + prod;
}

KacCheck kac_factorization(int level) {
  KacCheck out;
  out.level = level;
  Scalar det = kac_determinant(level, true);
  if (!det.is_polynomial()) throw ModuleError("internal: Kac determinant has a denominator");
  out.determinant = det.num();
  Poly rest = out.determinant;
  out.ok = !rest.is_zero();
  for (int r = 1; r <= level; ++r)
    for (int s = r; r * s <= level; ++s) {
      unsigned e = static_cast<unsigned>(partition_count(level - r * s));
      auto [found, cof] = factor_multiplicity(out.determinant, kac_factor(r, s));
      out.factors.push_back({r, s, e, found});
      if (found != e) out.ok = false;
      Poly f = kac_factor(r, s).pow(e);
      auto q = Poly::try_divide(rest, f);
      if (!q) {
        out.ok = false;
      } else {
        rest = *q;
      }
    }
  out.cofactor = rest;
  out.cofactor_constant = rest.is_const() && !rest.is_zero();
  out.ok = out.ok && out.cofactor_constant;
  return out;
}

bool kac_factor_matches_level_two() {
  Scalar d2 = kac_determinant(2, true);
  auto q = Poly::try_divide(d2.num(), Poly::var_h());
  if (!q) return false;
  auto r = Poly::try_divide(*q, kac_factor(1, 2));
  return r && r->is_const() && !r->is_zero();
}

std::vector<IdentityFailure> translate_commutator_check(int max_m, int max_p, int max_deg) {
  std::vector<IdentityFailure> out;
  VirasoroModule M(RatFunc::c(), RatFunc::h(), ModuleKind::Verma, max_deg + 2 * max_p + 2);
  for (int d = 0; d <= max_deg; ++d)
    for (const auto& word : M.cover_basis(d)) {
      Vector v(word);
      for (int m = 1; m <= max_m; ++m)
        for (int p = 1; p <= max_p; ++p) {
          Vector lhs = M.L(m, translate_power(M, v, p));
          Vector rhs;
          for (int i = 0; i <= p; ++i) {
            Rational coef = Rational(factorial(i)) * binomial(Rational(p), i) * binomial(Rational(m + 1), i);
            if (coef == 0) continue;
            rhs.axpy(Scalar(coef), translate_power(M, M.L(m - i, v), p - i));
          }
          if (lhs != rhs) out.push_back({m, p, word});
        }
    }
  return out;
}

}  // namespace voacoh
