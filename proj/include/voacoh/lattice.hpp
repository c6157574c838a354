#pragma once

#include <string>
#include <vector>

#include "voacoh/modes.hpp"

namespace voacoh {

using IntVec = std::vector<long>;
using RatVec = std::vector<Rational>;
using GramRows = std::vector<std::vector<long>>;

// Positive definite even lattice L0 = Z^r with Gram matrix G.
class EvenLattice {
 public:
  explicit EvenLattice(GramRows gram);
  static EvenLattice a1() { return EvenLattice(GramRows{{2}}); }
  static EvenLattice a2() { return EvenLattice(GramRows{{2, -1}, {-1, 2}}); }
  static EvenLattice e8();

  int rank() const { return static_cast<int>(gram_.size()); }
  long gram(int i, int j) const { return gram_[i][j]; }
  const Rational& gram_inverse(int i, int j) const { return ginv_[i][j]; }
  Rational pair(const RatVec& a, const RatVec& b) const;
  long pair(const IntVec& a, const IntVec& b) const;
  Rational norm(const RatVec& a) const { return pair(a, a); }

  // Fincke-Pohst data: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
  const std::vector<std::vector<Rational>>& pohst() const { return q_; }

 private:
  std::vector<std::vector<long>> gram_;
  std::vector<std::vector<Rational>> ginv_;
  std::vector<std::vector<Rational>> q_;
};

// gamma + L0 with gamma in the dual lattice.
struct DualCoset {
  EvenLattice lattice;
  RatVec gamma;
  DualCoset(EvenLattice l, RatVec g);
  RatVec point(const IntVec& beta) const;
  bool is_trivial() const;
};

// All beta with <gamma+beta, gamma+beta> <= bound, lexicographic in beta.
std::vector<IntVec> enumerate_norm(const DualCoset& coset, const Rational& bound);
// Smallest norm attained on the coset.
Rational min_norm(const DualCoset& coset);

// Bimultiplicative cocycle: (-1)^{sum_{i>j} a_i b_j G_ij}.
int epsilon(const EvenLattice& l, const IntVec& a, const IntVec& b);

// Shared Fock-space machinery for M(1) (x) C[gamma + L0].
// Key layout: beta_1..beta_r followed by (n, i) pairs for alpha_i(-n), sorted descending.
class FockSpace {
 public:
  explicit FockSpace(DualCoset coset);
  const DualCoset& coset() const { return coset_; }
  const EvenLattice& lattice() const { return coset_.lattice; }
  int rank() const { return coset_.lattice.rank(); }
  Rational lowest_weight() const { return min_norm_ / 2; }

  IntVec beta(const Key& k) const;
  // (|gamma+beta|^2 - min norm)/2
  long lattice_degree(const IntVec& beta) const;
  int heisenberg_degree(const Key& k) const;
  int degree(const Key& k) const;
  std::vector<Key> basis(int deg) const;
  std::string key_str(const Key& k) const;
  Key make_key(const IntVec& beta, std::vector<std::pair<int, int>> modes) const;
  std::vector<std::pair<int, int>> modes(const Key& k) const;

  // alpha_i(n) on a key.
  Vector heisenberg(int i, int n, const Key& k) const;
  // The x^{-n-1} coefficient of Y(e^alpha, x) on a key, alpha in L0.
  Vector vertex(const GradedModule& self, const IntVec& alpha, int n, const Key& k) const;
  // L(n) = 1/2 sum_k G^{ij} :alpha_i(k) alpha_j(n-k):
  Vector virasoro(const GradedModule& self, int n, const Key& k) const;
  // alpha(n) = sum_i a_i alpha_i(n) on a vector, through the memoized module action.
  Vector alpha_mode(const GradedModule& self, const IntVec& a, int n, const Vector& v) const;

 private:
  DualCoset coset_;
  Rational min_norm_;
  std::vector<long> gdot_;
  long base_ = 0;
};

Field heisenberg_field(int i);
Field lattice_vertex_field(const IntVec& alpha);

// The module V_{gamma+L0} over the lattice VOA.
class LatticeModule : public GradedModule {
 public:
  LatticeModule(DualCoset coset, int depth);
  std::string describe() const override;
  std::string flavor() const override { return "lattice"; }
  Scalar lowest_weight() const override { return Scalar(fock_.lowest_weight()); }
  int degree(const Key& k) const override { return fock_.degree(k); }
  std::vector<Key> cover_basis(int deg) const override { return fock_.basis(deg); }
  std::string key_str(const Key& k) const override { return fock_.key_str(k); }
  bool symbolic() const override { return false; }
  int field_weight(const Field& f) const override;
  const FockSpace& fock() const { return fock_; }

 protected:
  Vector compute_mode(const Field& f, int n, const Key& k) const override;
  Vector compute_L(int n, const Key& k) const override { return fock_.virasoro(*this, n, k); }

 private:
  FockSpace fock_;
};

// The lattice VOA V_{L0}.
class LatticeVOA : public VertexAlgebra {
 public:
  LatticeVOA(EvenLattice lattice, int depth);
  std::string describe() const override;
  std::string flavor() const override { return "lattice"; }
  int degree(const Key& k) const override { return fock_.degree(k); }
  std::vector<Key> cover_basis(int deg) const override { return fock_.basis(deg); }
  std::string key_str(const Key& k) const override { return fock_.key_str(k); }
  bool symbolic() const override { return false; }
  int field_weight(const Field& f) const override;
  const FockSpace& fock() const { return fock_; }

  std::optional<Field> as_field(const Key& k) const override;
  Split split(const Key& k) const override;
  Key vacuum() const override;
  Vector conformal_vector() const override;
  Scalar central_charge() const override { return Scalar(fock_.rank()); }
  // alpha_i(-1)1 for each i, then e^{alpha_i}, e^{-alpha_i}.
  std::vector<Generator> generators() const override;
  std::optional<GenSplit> generator_split(const Key& k) const override;
  Key vertex_state(const IntVec& beta) const { return fock_.make_key(beta, {}); }
  Key heisenberg_state(int i) const { return fock_.make_key(IntVec(fock_.rank(), 0), {{1, i}}); }

 protected:
  Vector compute_mode(const Field& f, int n, const Key& k) const override;
  Vector compute_L(int n, const Key& k) const override { return fock_.virasoro(*this, n, k); }

 private:
  FockSpace fock_;
};

// Public operations on any Fock-type module (LatticeModule or LatticeVOA).
Vector heisenberg_mode(const GradedModule& m, const RatVec& h, int n, const Vector& v);
Vector lattice_vertex_mode(const GradedModule& m, const IntVec& alpha, int n, const Vector& v);
size_t graded_dim(const GradedModule& m, int degree);

}  // namespace voacoh
