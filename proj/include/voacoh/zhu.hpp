#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voacoh/cohomology.hpp"
#include "voacoh/modes.hpp"

namespace voacoh {

// Generalized binomial coefficient a(a-1)...(a-j+1)/j!.
Scalar gbinom(const Scalar& a, int j);

struct ZhuOptions {
  int level = 0;    // N
  int cutoff = 2;   // K
  int realize = -1;  // spanning vectors are generated up to this weight; default K + N + 2
  // (-1)^m inside the module products (the algebra product always alternates)
  bool alternating_left = true;
  bool alternating_right = true;
  // Spanning vectors use only u of weight <= this (still a lower bound of O_N); -1 for all.
  int max_u_weight = -1;
  // Lattice flavors: keep only these charge sectors (beta coordinates); empty keeps all.
  std::vector<Key> only_sectors;
};

struct RedundancyCount {
  size_t total = 0;
  size_t in_span = 0;
};

// Lower bound of O_N(V) or O_N(W): the span of generated relation vectors, cut at weight <= K.
class ZhuTruncation {
 public:
  ZhuTruncation(const VertexAlgebra& v, ZhuOptions opts);
  ZhuTruncation(const VertexAlgebra& v, const GradedModule& w, const Grading& g, ZhuOptions opts);

  bool is_module() const { return module_; }
  int level() const { return opts_.level; }
  int cutoff() const { return opts_.cutoff; }
  int realize() const { return realize_; }
  const VertexAlgebra& algebra() const { return v_; }
  const GradedModule& space() const { return m_; }
  size_t generated() const { return generated_; }

  // Exact membership in the stored span; x must have weight <= K.
  bool contains(const Vector& x) const;
  // dim (O cap M_{<=d}) / (O cap M_{<=d-1}) for d = 0..K
  std::vector<size_t> o_dim_by_weight() const;
  std::vector<size_t> quotient_upper_bounds() const;
  size_t quotient_dim() const;
  // Basis of the stored span cut at weight <= K, as vectors of the space.
  std::vector<Vector> o_basis() const;
  // Reduced coordinates modulo the span, concatenated over the given sectors.
  ScalarVector reduce(const Vector& x, const std::vector<Key>& sectors) const;
  std::vector<Key> sectors_of(const Vector& x) const;

  // Relation vectors of the other known kinds (x^{-2N-2-p}, (1+x)^{L(0)+N+q} and the right-action ones), tested
  // for membership.
  RedundancyCount redundancy(int max_pair_weight) const;

  // d_W eigenvalue on a degree (L(0) on V).
  Scalar grading_value(int deg) const;

  Vector star(const Vector& u, const Vector& v) const;  // u *_N v in V
  Vector left(const Vector& v, const Vector& w) const;  // v *_N w
  Vector right(const Vector& w, const Vector& v) const;  // w *_N v
  // -Res_x Y_W((1+x)^{L(0)-1} v, x) w
  Vector commutator_residue(const Vector& v, const Vector& w) const;
  // -Res_x Y_WV((1+x)^{d_W-1} w, x) v
  Vector intertwiner_residue(const Vector& w, const Vector& v) const;

 private:
  struct Sector {
    std::map<Key, size_t> index;
    std::vector<Key> keys;
    std::vector<int> weight;
    RowSpace span{0};
  };
  void build();
  Key sector_of(const Key& k) const;
  Sector& sector(const Key& s);
  ScalarVector coords(const Sector& s, const Vector& part) const;
  void add(const Vector& z);
  // O-type vector sum_j binom(e, j) (a_{j-shift}) b with a in V
  Vector residue(const Vector& a, const Scalar& e, int shift, const Vector& b) const;
  Vector right_residue(const Vector& w, const Scalar& e, int shift, const Vector& v) const;

  const VertexAlgebra& v_;
  const GradedModule& m_;
  bool module_;
  Scalar s_;  // d_W = L(0) - s_
  ZhuOptions opts_;
  int realize_;
  int rank_ = 0;  // lattice rank for charge sectors
  size_t generated_ = 0;
  std::map<Key, Sector> sectors_;
};

struct InducedMapReport {
  bool o_containment = true;
  bool leibniz = true;
  size_t o_checked = 0;
  size_t pairs_checked = 0;
  std::string failure;
  std::optional<Vector> w1;  // F(g) = (w1)_0 g mod O_0(W) on generators
};

// F given by generator images x of a derivation system; av and aw truncate V and W.
InducedMapReport induced_map_check(const DerivationSystem& s, const ScalarVector& x, const ZhuTruncation& av,
                                   const ZhuTruncation& aw, int pair_weight);

struct ZhuCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

// Associator (u*v)*w - u*(v*w) in the span for all basis triples of weight <= max_weight each.
ZhuCheck associativity_check(const ZhuTruncation& a, int max_weight);
// Left, right and middle associativity plus the unit on both sides.
ZhuCheck bimodule_check(const ZhuTruncation& av, const ZhuTruncation& aw, int max_weight);
enum class BracketForm { Module, Intertwiner };
// v*w - w*v - sign * (-Res Y((1+x)^{L(0)-1}v,x)w) in the span for all basis pairs;
// the intertwiner form uses -Res Y_WV((1+x)^{d_W-1}w,x)v instead.
ZhuCheck bracket_check(const ZhuTruncation& aw, int max_weight, int sign = 1, BracketForm form = BracketForm::Module);

}  // namespace voacoh
