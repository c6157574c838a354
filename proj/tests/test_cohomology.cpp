#include <random>

#include "doctest.h"
#include "voacoh/affine.hpp"
#include "voacoh/cohomology.hpp"
#include "voacoh/lattice.hpp"
#include "voacoh/virasoro.hpp"

using namespace voacoh;

namespace {

bool in_span(const std::vector<ScalarVector>& span, const ScalarVector& x, size_t n) {
  RowSpace rs(n);
  for (const auto& s : span) rs.add(s);
  return rs.contains(x);
}

}  // namespace

TEST_CASE("degree offsets") {
  VirasoroModule w1(RatFunc::c(), Scalar(1), ModuleKind::Verma, 4);
  CHECK(degree_offset(w1, Grading::l0()) == -1);
  CHECK(degree_offset(w1, Grading::canonical()) == 0);
  CHECK(degree_offset(w1, Grading::shifted(Scalar(3))) == 2);
  VirasoroModule sigma(Scalar(frac(1, 2)), Scalar(frac(1, 16)), ModuleKind::Simple, 4);
  CHECK_FALSE(degree_offset(sigma, Grading::l0()).has_value());
  CHECK(zsp_upper_bound(sigma, Grading::l0()) == 0);
}

TEST_CASE("Ising modules carry no outer derivations") {
  VirasoroVOA v(Scalar(frac(1, 2)), ModuleKind::Simple, 8);
  for (auto h : {frac(0, 1), frac(1, 2), frac(1, 16)}) {
    VirasoroModule w(Scalar(frac(1, 2)), Scalar(h), ModuleKind::Simple, 8);
    for (const auto& g : {Grading::l0(), Grading::canonical()}) {
      auto rep = certify(v, w, g, 5);
      CAPTURE(h.get_str());
      CAPTURE(g.str());
      CHECK(rep.status == Status::CertifiedEqual);
      CHECK(rep.dim_solutions == 0);
      CHECK(rep.dim_zero_mode == 0);
    }
  }
}

TEST_CASE("weight-one Verma module under L(0) grading has a translation derivation") {
  VirasoroVOA v(RatFunc::c(), ModuleKind::Verma, 10);
  VirasoroModule w(RatFunc::c(), Scalar(1), ModuleKind::Verma, 10);
  auto rep = certify(v, w, Grading::l0(), 4);
  CHECK(rep.offset == -1);
  CHECK(rep.dim_solutions == 1);
  CHECK(rep.dim_zero_mode == 0);
  CHECK(rep.zsp_bound == 1);
  REQUIRE(rep.status == Status::Counterexample);
  DerivationSystem sys(v, w, Grading::l0(), 4);
  // F(omega) = L(-1)w
  Vector fw = sys.evaluate(rep.solutions[0], Vector(Key{2}));
  Vector lw = w.L(-1, Key{});
  REQUIRE(!fw.is_zero());
  Scalar ratio = fw.terms().begin()->second / lw.terms().begin()->second;
  CHECK(fw == ratio * lw);
  for (int k = 2; k <= 7; ++k) CHECK(extend_and_verify(sys, rep.solutions[0], k).ok);

  auto canon = certify(v, w, Grading::canonical(), 4);
  CHECK(canon.status == Status::CertifiedEqual);
}

TEST_CASE("rank-one lattice: derivations are zero modes") {
  LatticeVOA v(EvenLattice::a1(), 8);
  auto rep = certify(v, v, Grading::canonical(), 4);
  CHECK(rep.dim_solutions == 3);
  CHECK(rep.dim_zero_mode == 3);
  CHECK(rep.status == Status::CertifiedEqual);

  LatticeModule w(DualCoset(EvenLattice::a1(), RatVec{frac(1, 2)}), 8);
  auto rc = certify(v, w, Grading::canonical(), 4);
  CHECK(rc.offset == 0);
  CHECK(rc.status == Status::CertifiedEqual);
  CHECK(rc.dim_solutions == rc.dim_zero_mode);
}

TEST_CASE("level-one sl2 agrees with the finite Whitehead computation") {
  AffineVOA v(SimpleLieAlgebra::a1(), 1, ModuleKind::Simple, 8);
  auto rep = certify(v, v, Grading::canonical(), 3);
  CHECK(rep.dim_solutions == 3);
  CHECK(rep.dim_zero_mode == 3);
  CHECK(rep.status == Status::CertifiedEqual);
}

TEST_CASE("solution spaces shrink with depth and zero modes solve every row") {
  LatticeVOA v(EvenLattice::a1(), 10);
  DerivationSystem prev(v, v, Grading::canonical(), 2);
  auto sp = prev.solutions();
  size_t n = prev.unknowns().size();
  for (int k = 3; k <= 5; ++k) {
    DerivationSystem cur(v, v, Grading::canonical(), k);
    auto sc = cur.solutions();
    CHECK(sc.size() <= sp.size());
    for (const auto& s : sc) CHECK(in_span(sp, s, n));
    auto z = zero_mode_space(cur);
    for (const auto& t : z.tuples) CHECK_FALSE(cur.violated_row(t).has_value());
    sp = sc;
  }
}

TEST_CASE("injected non-solutions never certify") {
  std::mt19937 rng(20261016);
  std::uniform_int_distribution<int> coef(-3, 3);
  LatticeVOA v(EvenLattice::a1(), 8);
  DerivationSystem sys(v, v, Grading::canonical(), 3);
  auto z = zero_mode_space(sys);
  size_t n = sys.unknowns().size();
  for (int trial = 0; trial < 8; ++trial) {
    ScalarVector x(n);
    for (auto& s : x) s = Scalar(coef(rng));
    if (in_span(z.basis, x, n)) continue;
    CertifyOptions opts;
    opts.inject_solution = x;
    auto rep = certify(v, v, Grading::canonical(), 3, opts);
    CHECK(rep.status != Status::CertifiedEqual);
    CHECK(rep.status == Status::Inconclusive);
    CHECK(sys.violated_row(x).has_value());
  }
}

TEST_CASE("corrupted images fail verification") {
  LatticeVOA v(EvenLattice::a1(), 8);
  DerivationSystem sys(v, v, Grading::canonical(), 3);
  auto z = zero_mode_space(sys);
  REQUIRE(!z.basis.empty());
  for (const auto& t : z.basis) CHECK(extend_and_verify(sys, t, 3).ok);
  auto bad = z.basis[0];
  bad[0] = bad[0] + Scalar(1);
  auto res = extend_and_verify(sys, bad, 3);
  CHECK_FALSE(res.ok);
  CHECK(!res.failure.empty());
}
