#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voacoh/modes.hpp"

namespace voacoh {

// Grading operator d_W on a module W.
struct Grading {
  enum Kind { L0, Canonical, Shift };
  Kind kind = L0;
  Scalar shift;  // for Shift: d_W = L(0) - shift
  static Grading l0() { return {}; }
  static Grading canonical() { return {Canonical, Scalar()}; }
  static Grading shifted(const Scalar& s) { return {Shift, s}; }
  // s with d_W = L(0) - s
  Scalar subtracted(const GradedModule& w) const;
  std::string str() const;
};

// F maps V_(n) into the W-degree n + offset; nullopt when no integer offset exists (then F = 0).
std::optional<int> degree_offset(const GradedModule& w, const Grading& g);

// Linear in the unknown generator images: unknown index -> W vector.
using LinVec = std::map<size_t, Vector>;

struct Unknown {
  size_t gen;
  Key key;  // basis key of W
  int degree;
};

struct ProvenancedRow {
  std::string relation;  // "null", "generator", "conformal"
  std::string detail;
  ScalarVector coeffs;
};

// The depth-K constraint system for derivations V -> W, parametrized by the generator images.
class DerivationSystem {
 public:
  DerivationSystem(const VertexAlgebra& v, const GradedModule& w, Grading g, int depth);

  const VertexAlgebra& algebra() const { return v_; }
  const GradedModule& module() const { return w_; }
  const Grading& grading() const { return g_; }
  std::optional<int> offset() const { return offset_; }
  int depth() const { return depth_; }
  const std::vector<Unknown>& unknowns() const { return unknowns_; }
  std::vector<std::string> unknown_labels() const;

  // F on cover keys and vectors of V by the generator recursion.
  const LinVec& image(const Key& k) const;
  LinVec image(const Vector& v) const;
  Vector evaluate(const ScalarVector& x, const LinVec& f) const;
  Vector evaluate(const ScalarVector& x, const Vector& v) const { return evaluate(x, image(v)); }
  // F(u_m v) - u_m F(v) - F(u)_m v.
  LinVec residual(const Vector& u, int m, const Key& v) const;

  const std::vector<ProvenancedRow>& rows() const;
  std::vector<ScalarVector> solutions() const;
  // Index of the first row not satisfied by x.
  std::optional<size_t> violated_row(const ScalarVector& x) const;

  // Image tuple of the zero-mode derivation v -> w_0 v.
  ScalarVector zero_mode_tuple(const Key& w) const;
  std::string render(const ScalarVector& x) const;

 private:
  void build_rows() const;
  void add_rows(const std::string& rel, const std::string& detail, int deg, const LinVec& r) const;

  const VertexAlgebra& v_;
  const GradedModule& w_;
  Grading g_;
  int depth_;
  std::optional<int> offset_;
  std::vector<VertexAlgebra::Generator> gens_;
  std::vector<Unknown> unknowns_;
  std::vector<std::vector<size_t>> by_gen_;
  mutable std::map<Key, LinVec> memo_;
  mutable std::vector<ProvenancedRow> rows_;
  mutable bool built_ = false;
};

struct ZeroModeSpace {
  std::vector<Key> weight_one;           // basis of W_[1]
  std::vector<ScalarVector> tuples;      // one per weight_one vector
  std::vector<ScalarVector> basis;       // reduced span
  size_t dim() const { return basis.size(); }
};
ZeroModeSpace zero_mode_space(const DerivationSystem& s);

// dim W_[1] - dim L(-1)W_[0]
size_t zsp_upper_bound(const GradedModule& w, const Grading& g);

struct VerifyResult {
  bool ok = true;
  std::string failure;  // violated (u, v, mode) triple
};
VerifyResult extend_and_verify(const DerivationSystem& s, const ScalarVector& images, int depth);

enum class Status { CertifiedEqual, Counterexample, Inconclusive };
std::string status_str(Status s);

struct CohomologyReport {
  std::string instance;
  std::string grading;
  int depth = 0;
  std::optional<int> offset;
  std::vector<std::string> unknowns;
  size_t rows = 0;
  size_t dim_solutions = 0;
  size_t dim_zero_mode = 0;
  size_t zsp_bound = 0;
  Status status = Status::Inconclusive;
  std::vector<std::string> solution_witnesses;
  std::vector<std::string> zero_mode_witnesses;
  std::optional<std::string> counterexample;
  int suggested_depth = 0;
  std::vector<ScalarVector> solutions;
  std::vector<ScalarVector> zero_modes;
};

struct CertifyOptions {
  // Appended to the solution basis before classification (mutation testing).
  std::optional<ScalarVector> inject_solution;
};

CohomologyReport certify(const VertexAlgebra& v, const GradedModule& w, const Grading& g, int depth,
                         const CertifyOptions& opts = {});

}  // namespace voacoh
