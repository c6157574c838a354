#include <chrono>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "voacoh/affine.hpp"
#include "voacoh/cohomology.hpp"
#include "voacoh/lattice.hpp"
#include "voacoh/virasoro.hpp"
#include "voacoh/virasoro_systems.hpp"
#include "voacoh/zhu.hpp"

using namespace voacoh;

namespace {

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;
  void need(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back(std::string(cond ? "ok: " : "FAILED: ") + what);
  }
};

Scalar P(const std::string& s) { return RatFunc::parse(s); }

ZhuOptions cut(int k, int n = 0) {
  ZhuOptions o;
  o.cutoff = k;
  o.level = n;
  return o;
}

bool in_span(const std::vector<ScalarVector>& span, const ScalarVector& x, size_t n) {
  RowSpace rs(n);
  for (const auto& s : span) rs.add(s);
  return rs.contains(x);
}

Vector word(const GradedModule& m, const std::vector<int>& modes) {
  Vector v(Key{});
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) v = m.L(*it, v);
  return v;
}

// sum_j (-1)^{j+1}/j! L(-1)^j L(j-1) u
Vector zero_mode_on_omega(const GradedModule& w, const Vector& u) {
  Vector out;
  Rational fact(1);
  for (int j = 0; j <= w.depth(); ++j) {
    if (j > 0) fact *= j;
    Vector t = w.L(j - 1, u);
    for (int i = 0; i < j; ++i) t = w.L(-1, t);
    out.axpy(Scalar(Rational(j % 2 ? 1 : -1) / fact), t);
  }
  return out;
}

// L(m)L(-1)^p u through sum_i i! C(p,i) C(m+1,i) L(-1)^{p-i} L(m-i) u
Vector translate_formula(const GradedModule& w, int m, int p, const Vector& u) {
  Vector out;
  for (int i = 0; i <= p; ++i) {
    Rational coef = Rational(factorial(i)) * binomial(Rational(p), i) * binomial(Rational(m + 1), i);
    if (coef == 0) continue;
    Vector t = w.L(m - i, u);
    for (int k = 0; k < p - i; ++k) t = w.L(-1, t);
    out.axpy(Scalar(coef), t);
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome c1() {
  Outcome o;
  VirasoroModule w(RatFunc::c(), Scalar(-1), ModuleKind::Verma, 4);
  Vector lw = word(w, {-1});
  Vector a = w.L(2, word(w, {-1, -2}));
  Vector b = w.L(2, word(w, {-1, -1, -1}));
  o.need(a == P("5 + c/2") * lw, "L(2)L(-1)L(-2)w = (5 + c/2)L(-1)w, engine " + w.render(a));
  o.need(b == Scalar(-12) * lw, "L(2)L(-1)^3w = -12 L(-1)w, engine " + w.render(b));
  auto ne = negative_energy_system(-1);
  Scalar got = ne.rows.empty() ? Scalar() : ne.rows[0].coeffs[0];
  o.need(got == P("7 + c/4"), "combined coefficient of a12 is 7 + c/4, engine " + got.str() +
                                  " (L(3)L(-1)L(-2)w = " + w.render(w.L(3, word(w, {-1, -2}))) + ")");
  return o;
}

Outcome c2() {
  Outcome o;
  auto z1 = zero_mode_matching(-1);
  {
    VirasoroModule w(RatFunc::c(), Scalar(-1), ModuleKind::Verma, 8);
    Vector want = P("-13/6 + c/12") * word(w, {-1, -1, -1});
    Vector got = zero_mode_on_omega(w, word(w, {-2}));
    o.need(got == want, "h=-1: (L(-2)w)_0 omega = (-13/6 + c/12)L(-1)^3w, engine " + w.render(got));
    o.need(z1.images.size() == 1 && ascending_coords(w, 3, got) == z1.images[0], "h=-1: zero-mode table agrees");
  }
  {
    VirasoroModule w(RatFunc::c(), Scalar(-2), ModuleKind::Verma, 8);
    Vector want = Scalar(-2) * (word(w, {-1, -1, -2}) + P("(-8 + c/2)/12") * word(w, {-1, -1, -1, -1}));
    Vector got = zero_mode_on_omega(w, word(w, {-3}));
    o.need(got == want, "h=-2: (L(-3)w)_0 omega = -2(L(-1)^2L(-2) + (-8 + c/2)/12 L(-1)^4)w");
  }
  // h = -3: internal consistency of the tables the audit compares
  bool transport = true, commut = true;
  for (int h : {-1, -2, -3}) {
    VirasoroModule w(RatFunc::c(), Scalar(h), ModuleKind::Verma, 2 - h + 4);
    auto z = zero_mode_matching(h);
    for (size_t j = 0; j < z.candidates.size(); ++j)
      transport = transport &&
                  ascending_coords(w, 2 - h, zero_mode_on_omega(w, apply_word(w, z.candidates[j]))) == z.images[j];
    auto ne = negative_energy_system(h);
    for (const auto& t : ne.actions)
      for (size_t j = 0; j < ne.ansatz.size(); ++j) {
        const Key& wd = ne.ansatz[j];
        int p = leading_ones(wd);
        Key rest(wd.begin() + p, wd.end());
        Vector via = translate_formula(w, t.n, p, apply_word(w, rest));
        commut = commut && ascending_coords(w, t.degree, via) == t.images[j];
      }
  }
  o.need(transport, "zero-mode images agree with the transport series sum_j (-1)^{j+1}/j! L(-1)^j L(j-1)u (h = -1, -2, -3)");
  o.need(commut, "L(n) action tables agree with the L(m)L(-1)^p expansion (h = -1, -2, -3)");
  bool loci = true;
  std::string roots;
  for (int h : {-1, -2, -3}) {
    auto ne = negative_energy_system(h);
    auto z = zero_mode_matching(h);
    loci = loci && ne.excludes_minimal_models && z.excludes_minimal_models && z.residual_in_image4;
    for (const auto& r : ne.locus_roots) roots += " " + to_string(r);
  }
  o.need(loci, "vanishing loci exclude every c_{p,q}, p, q <= 50, and solutions are zero modes modulo Im L(-1)^4 (loci:" +
                   roots + ")");
  return o;
}

Outcome c3() {
  Outcome o;
  auto bad = translate_commutator_check(6, 6, 4);
  o.need(bad.empty(), "L(m)L(-1)^p expansion on every Verma word of degree <= 4, 1 <= m, p <= 6 (" +
                          std::to_string(bad.size()) + " failures)");
  return o;
}

Outcome c4() {
  Outcome o;
  for (int level = 1; level <= 4; ++level) {
    auto k = kac_factorization(level);
    o.need(k.ok && k.cofactor_constant, "level " + std::to_string(level) + ": all factors with expected multiplicity, cofactor " +
                                             k.cofactor.str());
  }
  return o;
}

Outcome c5() {
  Outcome o;
  o.need(h_equals_one_scan(50).empty(), "no h_{m,n} = 1 for p, q <= 50");
  o.need(mn_identity_check(), "mn + h_{m,n} - 1 = ((np+mq)^2 - (p+q)^2)/4pq");
  return o;
}

Outcome c6() {
  Outcome o;
  auto g = SimpleLieAlgebra::a1();
  bool cas = true;
  for (long m = 0; m <= 4; ++m) cas = cas && casimir_eigenvalue(g, {m}) == casimir_brute_force(g, irreducible_module(g, {m}));
  o.need(cas, "Casimir eigenvalue matches the brute-force action on M_{m w1}, m <= 4");
  o.need(sugawara_lowest_weight(g, 1, {1}) == frac(1, 4), "Sugawara lowest weight of L(1, w1) is 1/4");
  for (long l : {2L, 3L}) {
    AffineModule w(g, l, {2}, ModuleKind::Verma, 3);
    QMatrix psi = adjoint_intertwiner(g, w.core().top());
    Vector w1 = build_w1(w, psi);
    bool zero = true, scaled = true;
    for (int a = 0; a < g.dim(); ++a) {
      zero = zero && w.mode(current_field(a), 0, w1).is_zero();
      RatVec col(psi.size());
      for (size_t u = 0; u < psi.size(); ++u) col[u] = psi[u][a];
      scaled = scaled && w.mode(current_field(a), 1, w1) == Scalar(Rational(2 * g.dual_coxeter() + l)) * w.top_vector(col);
    }
    o.need(zero, "l = " + std::to_string(l) + ": h(0), e(0), f(0) kill w_(1)");
    o.need(scaled, "l = " + std::to_string(l) + ": a(1)w_(1) = (2h + l)psi(a)");
  }
  return o;
}

Outcome c7() {
  Outcome o;
  EvenLattice a1 = EvenLattice::a1();
  auto pts = enumerate_norm(DualCoset(a1, {Rational(0)}), Rational(8));
  bool eps = true;
  for (const auto& a : pts)
    for (const auto& b : pts) eps = eps && epsilon(a1, a, b) * epsilon(a1, b, a) == (a1.pair(a, b) % 2 == 0 ? 1 : -1);
  o.need(eps, "epsilon(a,b)/epsilon(b,a) = (-1)^<a,b> on " + std::to_string(pts.size()) + "^2 pairs of norm <= 8");
  LatticeVOA v(a1, 4);
  Vector em(v.vertex_state({-1}));
  o.need(lattice_vertex_mode(v, {1}, 1, em) == Vector(v.vacuum()), "(e^a)_1 e^{-a} = 1");
  o.need(lattice_vertex_mode(v, {1}, 0, em) == Vector(v.heisenberg_state(0)), "(e^a)_0 e^{-a} = a(-1)1");
  o.need(graded_dim(v, 1) == 3, "dim V_(1) = 3");
  return o;
}

struct Inst {
  std::string name;
  std::function<CohomologyReport(int)> run;
};

Outcome c8() {
  Outcome o;
  const int K = 6;
  VirasoroVOA is(Scalar(frac(1, 2)), ModuleKind::Simple, K + 4);
  std::vector<std::unique_ptr<VirasoroModule>> ws;
  for (auto h : {frac(0, 1), frac(1, 2), frac(1, 16)})
    ws.push_back(std::make_unique<VirasoroModule>(Scalar(frac(1, 2)), Scalar(h), ModuleKind::Simple, K + 4));
  std::vector<std::future<std::pair<std::string, CohomologyReport>>> jobs;
  for (const auto& w : ws)
    for (const auto& g : {Grading::l0(), Grading::canonical()})
      jobs.push_back(std::async(std::launch::async, [&is, &w, g, K] {
        return std::make_pair(w->describe() + " " + g.str(), certify(is, *w, g, K));
      }));
  bool ising = true;
  for (auto& j : jobs) {
    auto [name, rep] = j.get();
    ising = ising && rep.status == Status::CertifiedEqual && rep.dim_solutions == 0 && rep.dim_zero_mode == 0;
  }
  o.need(ising, "(a) Ising, three modules, L0 and canonical gradings: CERTIFIED_EQUAL, all dimensions 0");

  VirasoroVOA v(RatFunc::c(), ModuleKind::Verma, K + 4);
  VirasoroModule m1(RatFunc::c(), Scalar(1), ModuleKind::Verma, K + 4);
  auto canon = certify(v, m1, Grading::canonical(), K);
  auto l0 = certify(v, m1, Grading::l0(), K);
  bool l0_ok = l0.status == Status::Counterexample;
  if (l0_ok) {
    DerivationSystem sys(v, m1, Grading::l0(), K);
    l0_ok = extend_and_verify(sys, l0.solutions[0], K).ok;
  }
  o.need(canon.status == Status::Counterexample,
         "(b) M(c,1) with d_W = L(0) - 1: expected COUNTEREXAMPLE, engine " + status_str(canon.status) +
             " with dim S = " + std::to_string(canon.dim_solutions) + " (F(omega) = L(-1)w only preserves grading when d_W = L(0); under L0 the engine gives " +
             status_str(l0.status) + (l0_ok ? ", verified to depth 6" : ", NOT verified") + ")");

  LatticeVOA lv(EvenLattice::a1(), K + 4);
  LatticeModule lw(DualCoset(EvenLattice::a1(), {frac(1, 2)}), K + 4);
  auto self = certify(lv, lv, Grading::canonical(), K);
  auto coset = certify(lv, lw, Grading::canonical(), K);
  o.need(self.status == Status::CertifiedEqual && self.dim_solutions == 3 && self.dim_zero_mode == 3,
         "(c) A1 lattice, W = V: CERTIFIED_EQUAL, dim S = dim Z = " + std::to_string(self.dim_zero_mode));
  o.need(coset.status == Status::CertifiedEqual && coset.dim_solutions == coset.dim_zero_mode,
         "(c) A1 lattice, W = V_{1/2 a + L}: CERTIFIED_EQUAL, dim S = dim Z = " + std::to_string(coset.dim_zero_mode));
  return o;
}

Outcome c9() {
  Outcome o;
  const int K = 4;
  VirasoroVOA v(Scalar(frac(1, 2)), ModuleKind::Simple, 10);
  bool wv = true, yw = true, trans = true;
  ZhuTruncation av(v, cut(K));
  for (int d = 0; d < K; ++d)
    for (const Key& k : v.basis(d)) trans = trans && av.contains(v.L(0, k) + v.L(-1, k));
  for (auto h : {frac(0, 1), frac(1, 2), frac(1, 16)}) {
    VirasoroModule w(Scalar(frac(1, 2)), Scalar(h), ModuleKind::Simple, 10);
    for (const auto& g : {Grading::l0(), Grading::canonical()}) {
      ZhuTruncation aw(v, w, g, cut(K));
      wv = wv && bracket_check(aw, 3, 1, BracketForm::Intertwiner).ok;
      if (g.kind == Grading::L0) yw = yw && bracket_check(aw, 3, 1).ok;
      Scalar s = g.subtracted(w);
      for (int d = 0; d < K; ++d)
        for (const Key& k : w.basis(d)) {
          Vector x = w.L(0, k) + w.L(-1, k);
          x.axpy(-s, Vector(k));
          trans = trans && aw.contains(x);
        }
    }
  }
  o.need(wv, "v*w - w*v = -Res Y_WV((1+x)^{d_W-1}w,x)v mod O_0(W), Ising, all modules and both gradings, weight <= 3");
  o.need(yw, "v*w - w*v = -Res Y_W((1+x)^{L(0)-1}v,x)w mod O_0(W) under the L0 grading");
  o.need(trans, "(L(0) + L(-1))v in O_0(V) and (d_W + L(-1))w in O_0(W) for every basis vector");

  LatticeVOA lv(EvenLattice::a1(), 8);
  ZhuTruncation al(lv, cut(K));
  o.need(al.o_dim_by_weight()[1] == 0, "A1 lattice: O_0 has no weight-one part");

  bool induced = true;
  size_t count = 0;
  auto run = [&](const VertexAlgebra& a, const GradedModule& w, const Grading& g, int depth, int kv, int kw, int pw) {
    DerivationSystem s(a, w, g, depth);
    ZhuTruncation za(a, cut(kv)), zw(a, w, g, cut(kw));
    auto sols = s.solutions();
    if (sols.empty()) sols.push_back(ScalarVector(s.unknowns().size()));
    for (const auto& x : sols) {
      auto r = induced_map_check(s, x, za, zw, pw);
      induced = induced && r.o_containment && r.leibniz;
      ++count;
    }
  };
  AffineVOA g1(SimpleLieAlgebra::a1(), 1, ModuleKind::Simple, 8);
  run(g1, g1, Grading::canonical(), 3, 3, 3, 2);
  VirasoroVOA vc(RatFunc::c(), ModuleKind::Verma, 10);
  VirasoroModule wc(RatFunc::c(), Scalar(1), ModuleKind::Verma, 10);
  run(vc, wc, Grading::l0(), 4, 4, 3, 3);
  run(lv, lv, Grading::canonical(), 4, 4, 4, 2);
  run(v, v, Grading::canonical(), 4, 4, 4, 3);
  o.need(induced, "induced maps on " + std::to_string(count) +
                      " solver derivations (sl2 level 1, M(c,1) under L0, A1 lattice, Ising F = 0) preserve O and satisfy Leibniz");
  return o;
}

Outcome c10() {
  Outcome o;
  VirasoroVOA is(Scalar(frac(1, 2)), ModuleKind::Simple, 10);
  VirasoroModule i0(Scalar(frac(1, 2)), Scalar(0), ModuleKind::Simple, 10);
  VirasoroModule i1(Scalar(frac(1, 2)), Scalar(frac(1, 2)), ModuleKind::Simple, 10);
  VirasoroModule i2(Scalar(frac(1, 2)), Scalar(frac(1, 16)), ModuleKind::Simple, 10);
  VirasoroVOA vc(RatFunc::c(), ModuleKind::Verma, 10);
  VirasoroModule m1(RatFunc::c(), Scalar(1), ModuleKind::Verma, 10);
  LatticeVOA lv(EvenLattice::a1(), 10);
  LatticeModule lw(DualCoset(EvenLattice::a1(), {frac(1, 2)}), 10);
  struct Case {
    std::string name;
    const VertexAlgebra* v;
    const GradedModule* w;
    Grading g;
  };
  std::vector<Case> cases;
  for (const auto* w : {&i0, &i1, &i2})
    for (const auto& g : {Grading::l0(), Grading::canonical()}) cases.push_back({w->describe() + " " + g.str(), &is, w, g});
  cases.push_back({"M(c,1) canonical", &vc, &m1, Grading::canonical()});
  cases.push_back({"M(c,1) L0", &vc, &m1, Grading::l0()});
  cases.push_back({"A1 self", &lv, &lv, Grading::canonical()});
  cases.push_back({"A1 coset", &lv, &lw, Grading::canonical()});

  std::mt19937 rng(20261016);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<std::string> mono, resid, mut;
  for (const auto& c : cases) {
    std::vector<ScalarVector> prev;
    size_t n = 0;
    for (int k = 2; k <= 6; ++k) {
      DerivationSystem s(*c.v, *c.w, c.g, k);
      n = s.unknowns().size();
      auto cur = s.solutions();
      if (k > 2)
        for (const auto& x : cur)
          if (!in_span(prev, x, n)) mono.push_back(c.name + " K=" + std::to_string(k));
      for (const auto& t : zero_mode_space(s).tuples)
        if (s.violated_row(t)) resid.push_back(c.name + " K=" + std::to_string(k));
      prev = cur;
    }
    if (n == 0) continue;
    DerivationSystem s(*c.v, *c.w, c.g, 3);
    auto z = zero_mode_space(s);
    for (int trial = 0; trial < 3; ++trial) {
      ScalarVector x(n);
      for (auto& e : x) e = Scalar(coef(rng));
      if (in_span(z.basis, x, n)) continue;
      CertifyOptions opts;
      opts.inject_solution = x;
      auto rep = certify(*c.v, *c.w, c.g, 3, opts);
      if (rep.status == Status::CertifiedEqual) mut.push_back(c.name);
    }
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s.empty() ? "none" : s;
  };
  o.need(mono.empty(), "S_{K+1} inside S_K for K = 2..5 on " + std::to_string(cases.size()) + " instances (violations: " + join(mono) + ")");
  o.need(resid.empty(), "zero-mode tuples satisfy every constraint row (violations: " + join(resid) + ")");
  o.need(mut.empty(), "injected non-solutions never certify (violations: " + join(mut) + ")");
  return o;
}

struct Criterion {
  int id;
  std::string title;
  Outcome (*run)();
};

std::set<int> parse_ids(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.insert(std::stoi(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string expect_fail, only;
  bool verbose = false;
  app.add_option("--expect-fail", expect_fail, "comma-separated criteria known to fail; exit 0 iff exactly these fail");
  app.add_option("--only", only, "comma-separated criteria to run");
  app.add_flag("-v,--verbose", verbose, "print every sub-check");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "printed h = -1 actions and combined coefficient", c1},
      {2, "zero-mode identities and vanishing loci", c2},
      {3, "L(m)L(-1)^p expansion", c3},
      {4, "Kac determinant factorization, levels 1-4", c4},
      {5, "h = 1 scan and mn identity", c5},
      {6, "affine Casimir, Sugawara weight, w_(1)", c6},
      {7, "A1 lattice cocycle and vertex modes", c7},
      {8, "cohomology certificates at depth 6", c8},
      {9, "Zhu suite at cutoff 4", c9},
      {10, "solver soundness", c10},
  };
  std::set<int> want, expected, failed;
  try {
    want = parse_ids(only);
    expected = parse_ids(expect_fail);
  } catch (const std::exception&) {
    std::cerr << "criterion lists must be comma-separated integers\n";
    return 3;
  }
  for (const auto& c : all) {
    if (!want.empty() && !want.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.need(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.ok) failed.insert(c.id);
    std::cout << "CRITERION " << std::setw(2) << c.id << ": " << (o.ok ? "PASS" : "FAIL") << "  " << c.title << "  ("
              << std::fixed << std::setprecision(1) << secs << " s)\n";
    for (const auto& n : o.notes)
      if (verbose || !o.ok) std::cout << "    " << n << "\n";
    std::cout.flush();
  }
  if (!expect_fail.empty()) {
    for (int id : expected)
      if (!want.empty() && !want.count(id)) failed.insert(id);  // not run; keep the comparison meaningful
    bool same = failed == expected;
    std::cout << (same ? "failing set matches --expect-fail" : "failing set differs from --expect-fail") << "\n";
    return same ? 0 : 1;
  }
  return failed.empty() ? 0 : 1;
}
