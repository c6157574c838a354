#pragma once

#include <string>
#include <vector>

#include "voacoh/virasoro.hpp"

namespace voacoh {

// Words L(-k1)L(-k2)...w with k1 <= k2 <= ..., i.e. L(-1)^{r1}L(-2)^{r2}...w.
// In this basis Im L(-1)^p is spanned by the words with r1 >= p.
std::vector<Key> ascending_words(int deg);
int leading_ones(const Key& word);
std::string ascending_str(const Key& word);
Vector apply_word(const GradedModule& m, const Key& word);
// Coordinates of a homogeneous Verma vector in ascending_words(deg).
ScalarVector ascending_coords(const GradedModule& m, int deg, const Vector& v);

struct ActionTable {
  int n = 0;                        // the operator L(n)
  int degree = 0;                   // degree of the image
  std::vector<Key> basis;           // ascending words at that degree
  std::vector<ScalarVector> images;  // one per ansatz word
};

struct ConstraintRow {
  std::string label;
  int m = 1;  // row comes from the L(2m) condition
  ScalarVector coeffs;
};

struct NegativeEnergyReport {
  int h = 0;
  std::vector<Key> ansatz;
  std::vector<std::string> unknowns;  // a12, a111, ...
  std::vector<ActionTable> actions;
  std::vector<ConstraintRow> rows;
  // Kernel of all rows over Q(c).
  std::vector<ScalarVector> solutions;
  // Rows with m = 1 restricted to the ansatz words with r1 < 2.
  ExactMatrix low_block;
  bool high_columns_vanish = true;  // m = 1 rows ignore the words with r1 >= 2
  Poly locus;                       // gcd of the maximal minors of low_block
  std::vector<Rational> locus_roots;
  // True when every minimal-model c_{p,q} with p, q <= bound keeps low_block at full column rank.
  bool excludes_minimal_models = false;
};

NegativeEnergyReport negative_energy_system(int h, long minimal_model_bound = 50);

struct ZeroModeReport {
  int h = 0;
  std::vector<Key> candidates;         // basis of W_[1] outside Im L(-1)
  std::vector<Key> basis;              // ascending words of F(omega)'s degree
  std::vector<ScalarVector> images;    // (u)_0 omega per candidate
  std::vector<Key> matched_words;      // words with r1 in {2, 3}
  ExactMatrix matching;                // rows matched_words, columns candidates
  Poly locus;
  std::vector<Rational> locus_roots;
  bool excludes_minimal_models = false;
  // Every solution of the negative-energy system differs from a zero mode by Im L(-1)^4.
  bool residual_in_image4 = false;
  std::vector<ScalarVector> matching_coefficients;  // per solution vector
};

ZeroModeReport zero_mode_matching(int h, long minimal_model_bound = 50);

// Phi_{r,s} in Q[c,h]: (h - h_{r,s})(h - h_{s,r}) for r < s and h - h_{r,r} for r = s.
Poly kac_factor(int r, int s);

struct KacCheck {
  int level = 0;
  Poly determinant;
  struct Factor {
    int r, s;
    unsigned expected;  // sum of partition counts P(level - rs) over (r,s) and (s,r)
    unsigned found;
  };
  std::vector<Factor> factors;
  Poly cofactor;
  bool cofactor_constant = false;
  bool ok = false;
};
KacCheck kac_factorization(int level);
// The level-2 determinant divided by h, i.e. Phi_{1,2} up to a constant, as derived from Gram data.
bool kac_factor_matches_level_two();

// L(m)L(-1)^p v against sum_i i! C(p,i) C(m+1,i) L(-1)^{p-i} L(m-i) v on every PBW word of degree <= max_deg.
struct IdentityFailure {
  int m, p;
  Key word;
};
std::vector<IdentityFailure> translate_commutator_check(int max_m, int max_p, int max_deg);

// Minimal-model central charges c_{p,q} for coprime 2 <= p < q <= bound.
std::vector<Rational> minimal_model_charges(long bound);

}  // namespace voacoh
