#include <random>

#include "doctest.h"
#include "voacoh/lattice.hpp"
#include "voacoh/virasoro.hpp"

using namespace voacoh;

namespace {

// Sum over lattice points of colored partition counts: independent count of Fock dimensions.
long colored_partitions(int n, int colors) {
  std::vector<long> p(n + 1, 0);
  p[0] = 1;
  for (int c = 0; c < colors; ++c)
    for (int k = 1; k <= n; ++k)
      for (int m = k; m <= n; ++m) p[m] += p[m - k];
  return p[n];
}

long brute_force_dim(const DualCoset& cs, int deg) {
  // brute force box search for the lattice points, no Fincke-Pohst
  Rational mn = min_norm(cs);
  long total = 0;
  int r = cs.lattice.rank();
  IntVec b(r, -6);
  while (true) {
    Rational w = (cs.lattice.norm(cs.point(b)) - mn) / 2;
    if (w <= deg) total += colored_partitions(deg - static_cast<int>(w.get_num().get_si()), r);
    int i = 0;
    while (i < r && ++b[i] > 6) b[i++] = -6;
    if (i == r) break;
  }
  return total;
}

Vector random_vector(const GradedModule& m, std::mt19937& rng, int max_deg) {
  int d = std::uniform_int_distribution<int>(0, max_deg)(rng);
  auto keys = m.basis(d);
  Vector v;
  for (int t = 0; t < 2; ++t) {
    const Key& k = keys[std::uniform_int_distribution<size_t>(0, keys.size() - 1)(rng)];
    v.add(k, Scalar(Rational(std::uniform_int_distribution<int>(-3, 3)(rng))));
  }
  return v;
}

long binom(long n, long k) {
  // generalized binomial for integer n and k >= 0
  Rational r = 1;
  for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r.get_num().get_si();
}

}  // namespace

TEST_CASE("lattice validation") {
  CHECK_THROWS_AS(EvenLattice(GramRows{{1}}), ModuleError);
  CHECK_THROWS_AS(EvenLattice(GramRows{{2, 1}, {0, 2}}), ModuleError);
  CHECK_THROWS_AS(EvenLattice(GramRows{{2, 3}, {3, 2}}), ModuleError);
  CHECK_THROWS_AS(DualCoset(EvenLattice::a1(), {Rational(1, 3)}), ModuleError);
  CHECK_NOTHROW(DualCoset(EvenLattice::a2(), {Rational(2, 3), Rational(1, 3)}));
}

TEST_CASE("norm enumeration") {
  DualCoset a1(EvenLattice::a1(), {});
  auto pts = enumerate_norm(a1, 8);
  CHECK(pts == std::vector<IntVec>{{-2}, {-1}, {0}, {1}, {2}});
  CHECK(enumerate_norm(DualCoset(EvenLattice::a2(), {}), 2).size() == 7);
  // theta series of E8: 1 + 240 q + 2160 q^2
  CHECK(enumerate_norm(DualCoset(EvenLattice::e8(), {}), 4).size() == 1 + 240 + 2160);
  DualCoset half(EvenLattice::a1(), {Rational(1, 2)});
  CHECK(min_norm(half) == Rational(1, 2));
  CHECK(enumerate_norm(half, Rational(1, 2)) == std::vector<IntVec>{{-1}, {0}});
}

TEST_CASE("cocycle identities") {
  std::mt19937 rng(20240611);
  for (const auto& l : {EvenLattice::a1(), EvenLattice::a2(), EvenLattice::e8()}) {
    auto pts = enumerate_norm(DualCoset(l, {}), 8);
    std::uniform_int_distribution<size_t> pick(0, pts.size() - 1);
    for (int t = 0; t < 200; ++t) {
      const auto &a = pts[pick(rng)], &b = pts[pick(rng)], &c = pts[pick(rng)];
      IntVec bc(b);
      for (size_t i = 0; i < bc.size(); ++i) bc[i] += c[i];
      CHECK(epsilon(l, a, bc) == epsilon(l, a, b) * epsilon(l, a, c));
      CHECK(epsilon(l, bc, a) == epsilon(l, b, a) * epsilon(l, c, a));
      int sign = (l.pair(a, b) % 2 == 0) ? 1 : -1;
      CHECK(epsilon(l, a, b) * epsilon(l, b, a) == sign);
      long diag = 0;
      for (int i = 0; i < l.rank(); ++i) diag += a[i] * a[i] * l.gram(i, i) / 2;
      CHECK(epsilon(l, a, a) == ((l.pair(a, a) / 2 - diag) % 2 == 0 ? 1 : -1));
    }
  }
}

TEST_CASE("graded dimensions") {
  LatticeVOA v(EvenLattice::a1(), 6);
  CHECK(graded_dim(v, 0) == 1);
  CHECK(graded_dim(v, 1) == 3);
  for (int d = 0; d <= 6; ++d) CHECK(graded_dim(v, d) == static_cast<size_t>(brute_force_dim(v.fock().coset(), d)));
  LatticeModule w(DualCoset(EvenLattice::a1(), {Rational(1, 2)}), 4);
  CHECK(graded_dim(w, 0) == 2);
  CHECK(w.lowest_weight() == Scalar(Rational(1, 4)));
  for (int d = 0; d <= 4; ++d) CHECK(graded_dim(w, d) == static_cast<size_t>(brute_force_dim(w.fock().coset(), d)));
  LatticeModule w3(DualCoset(EvenLattice::a2(), {Rational(2, 3), Rational(1, 3)}), 3);
  CHECK(graded_dim(w3, 0) == 3);
  for (int d = 0; d <= 3; ++d) CHECK(graded_dim(w3, d) == static_cast<size_t>(brute_force_dim(w3.fock().coset(), d)));
  LatticeVOA e8(EvenLattice::e8(), 2);
  CHECK(graded_dim(e8, 1) == 248);
  CHECK(graded_dim(e8, 2) == 4124);
}

TEST_CASE("vertex operators on A1") {
  LatticeVOA v(EvenLattice::a1(), 6);
  Vector em(v.vertex_state({-1}));
  CHECK(lattice_vertex_mode(v, {1}, 1, em) == Vector(v.vacuum()));
  CHECK(lattice_vertex_mode(v, {1}, 0, em) == Vector(v.heisenberg_state(0)));
  CHECK(lattice_vertex_mode(v, {1}, 2, em).is_zero());
  // e^a_{-1} 1 = e^a and L(-1) e^a = a(-1) e^a
  CHECK(lattice_vertex_mode(v, {1}, -1, Vector(v.vacuum())) == Vector(v.vertex_state({1})));
  CHECK(v.L(-1, Vector(v.vertex_state({1}))) == Vector(v.fock().make_key({1}, {{1, 0}})));
  CHECK(v.L(0, Vector(v.vertex_state({2}))) == Vector(v.vertex_state({2}), Scalar(4)));
  // the conformal vector's modes are L(n-1)
  for (const Key& k : v.basis(2))
    for (int n = -1; n <= 3; ++n)
      CHECK(state_mode(v, v, v.conformal_vector(), n + 1, Vector(k)) == v.L(n, k));
}

TEST_CASE("Heisenberg commutes with vertex operators as a derivation") {
  std::mt19937 rng(7);
  for (const auto& lat : {EvenLattice::a1(), EvenLattice::a2()}) {
    LatticeVOA v(lat, 6);
    int r = lat.rank();
    for (int t = 0; t < 40; ++t) {
      Vector x = random_vector(v, rng, 2);
      IntVec alpha(r);
      for (auto& a : alpha) a = std::uniform_int_distribution<int>(-1, 1)(rng);
      RatVec h(r);
      for (auto& a : h) a = std::uniform_int_distribution<int>(-2, 2)(rng);
      int m = std::uniform_int_distribution<int>(-2, 2)(rng);
      int n = std::uniform_int_distribution<int>(-2, 2)(rng);
      Vector lhs = heisenberg_mode(v, h, m, lattice_vertex_mode(v, alpha, n, x)) -
                   lattice_vertex_mode(v, alpha, n, heisenberg_mode(v, h, m, x));
      Rational hv = lat.pair(h, RatVec(alpha.begin(), alpha.end()));
      Vector rhs = Scalar(hv) * lattice_vertex_mode(v, alpha, m + n, x);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("vertex operator commutator formula") {
  // [a_m, b_n] = sum_j C(m, j) (a_j b)_{m+n-j}, using the state-mode iterate on the right
  std::mt19937 rng(11);
  LatticeVOA v(EvenLattice::a2(), 7);
  std::vector<IntVec> roots{{1, 0}, {0, 1}, {1, 1}, {-1, 0}, {0, -1}, {-1, -1}};
  for (int t = 0; t < 25; ++t) {
    Vector x = random_vector(v, rng, 1);
    const IntVec& a = roots[rng() % roots.size()];
    const IntVec& b = roots[rng() % roots.size()];
    int m = std::uniform_int_distribution<int>(-1, 2)(rng);
    int n = std::uniform_int_distribution<int>(-1, 2)(rng);
    Vector lhs = lattice_vertex_mode(v, a, m, lattice_vertex_mode(v, b, n, x)) -
                 lattice_vertex_mode(v, b, n, lattice_vertex_mode(v, a, m, x));
    Vector rhs;
    Vector bstate(v.vertex_state(b));
    for (int j = 0; j <= 4; ++j) {
      Vector ajb = lattice_vertex_mode(v, a, j, bstate);
      if (ajb.is_zero() || binom(m, j) == 0) continue;
      rhs.axpy(Scalar(Rational(binom(m, j))), state_mode(v, v, ajb, m + n - j, x));
    }
    CHECK(lhs == rhs);
  }
}

TEST_CASE("generator splits reproduce keys") {
  LatticeVOA v(EvenLattice::a2(), 5);
  auto gens = v.generators();
  CHECK(gens.size() == 6);
  for (int d = 0; d <= 3; ++d)
    for (const Key& k : v.basis(d)) {
      auto s = v.generator_split(k);
      if (!s) {
        CHECK(k == v.vacuum());
        continue;
      }
      Vector rebuilt = s->coef * state_mode(v, v, gens[s->gen].state, s->mode, s->rest);
      CHECK(rebuilt == Vector(k));
    }
}

TEST_CASE("Heisenberg-vertex commutator on every A1 basis vector to depth 4") {
  LatticeVOA v(EvenLattice::a1(), 12);
  for (int d = 0; d <= 4; ++d)
    for (const Key& k : v.basis(d))
      for (long a : {-1L, 1L, 2L})
        for (int m = -1; m <= 2; ++m)
          for (int n = -2; n <= 2; ++n) {
            Vector x(k);
            Vector lhs = heisenberg_mode(v, {1}, m, lattice_vertex_mode(v, {a}, n, x)) -
                         lattice_vertex_mode(v, {a}, n, heisenberg_mode(v, {1}, m, x));
            CHECK(lhs == Scalar(Rational(2 * a)) * lattice_vertex_mode(v, {a}, m + n, x));
          }
}

TEST_CASE("vertex modes shift weight by wt(e^a) - n - 1") {
  LatticeModule w(DualCoset(EvenLattice::a2(), {Rational(2, 3), Rational(1, 3)}), 8);
  for (int d = 0; d <= 2; ++d)
    for (const Key& k : w.basis(d))
      for (const IntVec& a : {IntVec{1, 0}, IntVec{-1, -1}, IntVec{2, 1}})
        for (int n = -2; n <= 2; ++n) {
          Vector out = lattice_vertex_mode(w, a, n, Vector(k));
          long wt = w.fock().lattice().pair(a, a) / 2;
          for (const auto& [key, c] : out.terms()) CHECK(w.degree(key) == d + wt - n - 1);
        }
}

TEST_CASE("generator chains reach every lattice point in a norm ball") {
  LatticeVOA v(EvenLattice::a2(), 12);
  auto gens = v.generators();
  for (const IntVec& b : enumerate_norm(DualCoset(EvenLattice::a2(), {}), 8)) {
    Key k = v.vertex_state(b);
    Scalar coef(1);
    int steps = 0;
    while (auto s = v.generator_split(k)) {
      CHECK(gens[s->gen].field.kind == Field::LatticeVertex);
      CHECK(s->rest.size() == k.size());
      coef = coef * s->coef;
      k = s->rest;
      ++steps;
    }
    CHECK(k == v.vacuum());
    CHECK(!coef.is_zero());
    CHECK(steps == std::abs(b[0]) + std::abs(b[1]));
  }
}
