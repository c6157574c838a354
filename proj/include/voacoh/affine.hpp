#pragma once

#include <map>
#include <string>
#include <vector>

#include "voacoh/lattice.hpp"
#include "voacoh/modes.hpp"
#include "voacoh/virasoro.hpp"

namespace voacoh {

using QMatrix = std::vector<std::vector<Rational>>;
using SparseQ = std::map<int, Rational>;

// A simple Lie algebra in a Chevalley-type basis: Cartan elements h_1..h_r (simple coroots),
// then positive root vectors, then negative root vectors.
struct SimpleLieAlgebra {
  std::string name;
  int rank = 0;
  std::vector<std::string> names;
  std::vector<IntVec> roots;  // simple-root coordinates, zero on the Cartan part
  std::vector<std::vector<SparseQ>> bracket;
  QMatrix form;  // invariant form with <theta, theta> = 2
  std::vector<int> sigma;  // Chevalley anti-involution e_a <-> e_{-a}, h fixed
  std::vector<QMatrix> natural;  // matrix realization for the built-in types

  // derived by finish()
  QMatrix form_inv;
  QMatrix cartan_gram, cartan_gram_inv;  // <h_i, h_j>
  std::vector<RatVec> eval;  // alpha(h_i) for each basis element
  int theta = -1;

  static SimpleLieAlgebra sl(int n);
  static SimpleLieAlgebra a1() { return sl(2); }
  static SimpleLieAlgebra a2() { return sl(3); }
  // {"rank": r, "basis": [...], "roots": {name: coords}, "brackets": [[a, b, {c: q}]], "form": [[...]]}
  static SimpleLieAlgebra from_json(const std::string& text);

  int dim() const { return static_cast<int>(names.size()); }
  bool is_cartan(int a) const { return a < rank; }
  int root_index(const IntVec& coords) const;  // -1 when not a root
  int index_of(const std::string& name) const;
  SparseQ br(const SparseQ& x, const SparseQ& y) const;
  Rational weight_pair(const RatVec& l, const RatVec& m) const;  // l^T K^{-1} m on evaluation vectors
  RatVec rho() const;
  Rational root_norm(int a) const { return weight_pair(eval[a], eval[a]); }
  // coefficient of e_{alpha+beta} in [e_alpha, e_beta]; zero when alpha+beta is not a root
  Rational structure_constant(int a, int b) const;
  Rational dual_coxeter() const;
  // lambda(h_theta) for Dynkin labels lambda
  Rational theta_coroot_pairing(const RatVec& lambda) const;

  void finish();
  // Throws ModuleError naming the first violated invariant.
  void validate() const;
};

bool jacobi_check(const SimpleLieAlgebra& g);
bool chevalley_identity_check(const SimpleLieAlgebra& g);

// Finite-dimensional g-module with a contravariant form; basis vector 0 is a highest-weight vector.
struct GModule {
  std::string name;
  std::vector<QMatrix> rho;
  QMatrix form;
  RatVec highest_weight;
  int dim() const { return static_cast<int>(form.size()); }
  RatVec act(int a, const RatVec& v) const;
};

GModule trivial_module(const SimpleLieAlgebra& g);
GModule adjoint_module(const SimpleLieAlgebra& g);
// Irreducible module of highest weight lambda (Dynkin labels).
GModule irreducible_module(const SimpleLieAlgebra& g, const std::vector<long>& lambda);
GModule direct_sum(const GModule& a, const GModule& b);

Rational casimir_eigenvalue(const SimpleLieAlgebra& g, const std::vector<long>& lambda);
// Sum_ab K^{ab} rho(a) rho(b) on the highest-weight vector.
Rational casimir_brute_force(const SimpleLieAlgebra& g, const GModule& m);
Rational sugawara_lowest_weight(const SimpleLieAlgebra& g, long level, const std::vector<long>& lambda);

// f: one vector per basis element of g.  Returns m with x.m = f(x).
RatVec whitehead_solve(const SimpleLieAlgebra& g, const GModule& m, const std::vector<RatVec>& f);
// The g-module map g -> M normalized by psi(e_theta) = highest-weight vector; columns indexed by g.
QMatrix adjoint_intertwiner(const SimpleLieAlgebra& g, const GModule& m);

Field current_field(int a);

// Generalized Verma module V(l, lambda) = U(g^) (x) M_lambda, or its simple quotient.
// Key layout: [u, n1, a1, n2, a2, ...] for a1(-n1)a2(-n2)...u with (n, a) pairs descending.
class AffineCore {
 public:
  AffineCore(SimpleLieAlgebra g, long level, std::vector<long> lambda, GModule m);
  const SimpleLieAlgebra& algebra() const { return g_; }
  long level() const { return level_; }
  const std::vector<long>& lambda() const { return lambda_; }
  const GModule& top() const { return m_; }
  Rational dual_coxeter() const { return hv_; }
  Rational lowest_weight() const;

  int degree(const Key& k) const;
  std::vector<Key> basis(int deg) const;
  std::string key_str(const Key& k, bool vacuum) const;
  Key make_key(int u, std::vector<std::pair<int, int>> modes) const;
  std::vector<std::pair<int, int>> modes(const Key& k) const;

  Vector current(const GradedModule& self, int a, int n, const Key& k) const;
  Vector sugawara(const GradedModule& self, int n, const Key& k) const;
  Scalar form(const GradedModule& self, const Key& a, const Key& b) const;

 private:
  SimpleLieAlgebra g_;
  long level_;
  std::vector<long> lambda_;
  GModule m_;
  Rational hv_;
};

class AffineModule : public GradedModule {
 public:
  AffineModule(SimpleLieAlgebra g, long level, std::vector<long> lambda, ModuleKind kind, int depth);
  std::string describe() const override;
  std::string flavor() const override { return "affine"; }
  Scalar lowest_weight() const override { return Scalar(core_.lowest_weight()); }
  int degree(const Key& k) const override { return core_.degree(k); }
  std::vector<Key> cover_basis(int deg) const override { return core_.basis(deg); }
  std::string key_str(const Key& k) const override { return core_.key_str(k, false); }
  bool symbolic() const override { return false; }
  int field_weight(const Field& f) const override;
  bool has_form() const override { return true; }
  const AffineCore& core() const { return core_; }
  Key top_key(int u) const { return Key{u}; }
  // Embeds a grade-0 vector of M_lambda.
  Vector top_vector(const RatVec& x) const;

 protected:
  Vector compute_mode(const Field& f, int n, const Key& k) const override;
  Vector compute_L(int n, const Key& k) const override { return core_.sugawara(*this, n, k); }
  Scalar compute_form(const Key& a, const Key& b) const override { return core_.form(*this, a, b); }

 private:
  AffineCore core_;
};

// The affine VOA V(l, 0) or its simple quotient L(l, 0).
class AffineVOA : public VertexAlgebra {
 public:
  AffineVOA(SimpleLieAlgebra g, long level, ModuleKind kind, int depth);
  std::string describe() const override;
  std::string flavor() const override { return "affine"; }
  int degree(const Key& k) const override { return core_.degree(k); }
  std::vector<Key> cover_basis(int deg) const override { return core_.basis(deg); }
  std::string key_str(const Key& k) const override { return core_.key_str(k, true); }
  bool symbolic() const override { return false; }
  int field_weight(const Field& f) const override;
  bool has_form() const override { return true; }
  const AffineCore& core() const { return core_; }

  std::optional<Field> as_field(const Key& k) const override;
  Split split(const Key& k) const override;
  Key vacuum() const override { return Key{0}; }
  Vector conformal_vector() const override;
  Scalar central_charge() const override;
  std::vector<Generator> generators() const override;
  std::optional<GenSplit> generator_split(const Key& k) const override;
  Key current_state(int a) const { return Key{0, 1, a}; }

 protected:
  Vector compute_mode(const Field& f, int n, const Key& k) const override;
  Vector compute_L(int n, const Key& k) const override { return core_.sugawara(*this, n, k); }
  Scalar compute_form(const Key& a, const Key& b) const override { return core_.form(*this, a, b); }

 private:
  AffineCore core_;
};

// w_(1) = sum_a a(-1) psi(a^vee) in the grade-1 piece of W; asserts that g(0) kills it.
Vector build_w1(const AffineModule& w, const QMatrix& psi);

}  // namespace voacoh
