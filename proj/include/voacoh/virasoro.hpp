#pragma once

#include <memory>
#include <string>
#include <vector>

#include "voacoh/modes.hpp"

namespace voacoh {

enum class ModuleKind { Verma, Simple };

// Partitions of n with parts >= min_part, largest first part first.
std::vector<Key> partitions(int n, int min_part = 1);
long partition_count(int n);

// Highest-weight module M(c,h) or its simple quotient L(c,h); keys are PBW words
// L(-n1)...L(-nk)w with n1 >= ... >= nk >= 1.
class VirasoroModule : public GradedModule {
 public:
  VirasoroModule(Scalar c, Scalar h, ModuleKind kind, int depth);

  std::string describe() const override;
  std::string flavor() const override { return kind_ == ModuleKind::Verma ? "virasoro-verma" : "virasoro-simple"; }
  Scalar lowest_weight() const override { return h_; }
  int degree(const Key& k) const override;
  std::vector<Key> cover_basis(int deg) const override { return partitions(deg, 1); }
  std::string key_str(const Key& k) const override;
  bool symbolic() const override { return !c_.is_const() || !h_.is_const(); }
  int field_weight(const Field& f) const override;
  bool has_form() const override { return true; }

  const Scalar& c() const { return c_; }
  const Scalar& h() const { return h_; }
  ModuleKind kind() const { return kind_; }

 protected:
  Vector compute_mode(const Field& f, int n, const Key& k) const override;
  Vector compute_L(int n, const Key& k) const override;
  Scalar compute_form(const Key& a, const Key& b) const override;

 private:
  Scalar c_, h_;
  ModuleKind kind_;
};

// The vertex operator algebra V(c,0) = M(c,0)/<L(-1)1> or its simple quotient L(c,0).
Field conformal_field();
Field identity_field();

class VirasoroVOA : public VertexAlgebra {
 public:
  VirasoroVOA(Scalar c, ModuleKind kind, int depth);

  std::string describe() const override;
  std::string flavor() const override { return kind_ == ModuleKind::Verma ? "virasoro-vacuum" : "virasoro-simple-vacuum"; }
  int degree(const Key& k) const override;
  std::vector<Key> cover_basis(int deg) const override { return partitions(deg, 2); }
  std::string key_str(const Key& k) const override;
  bool symbolic() const override { return !c_.is_const(); }
  int field_weight(const Field& f) const override;
  bool has_form() const override { return true; }

  std::optional<Field> as_field(const Key& k) const override;
  Split split(const Key& k) const override;
  Key vacuum() const override { return {}; }
  Vector conformal_vector() const override { return Vector(Key{2}); }
  std::vector<Generator> generators() const override { return {{"omega", conformal_field(), Key{2}}}; }
  std::optional<GenSplit> generator_split(const Key& k) const override;
  Scalar central_charge() const override { return c_; }
  ModuleKind kind() const { return kind_; }

 protected:
  Vector compute_mode(const Field& f, int n, const Key& k) const override;
  Vector compute_L(int n, const Key& k) const override;
  Scalar compute_form(const Key& a, const Key& b) const override;

 private:
  Scalar c_;
  ModuleKind kind_;
};

// Builds the quotient by the radical of the contravariant form; errors when the
// parameters are symbolic and the form is degenerate up to the given degree.
std::unique_ptr<VirasoroModule> radical_quotient(const VirasoroModule& m, int up_to);

// Minimal-model arithmetic.
Rational central_charge(long p, long q);
Rational lowest_weight(long p, long q, long m, long n);
// h_{r,s}(c) on the generic curve, as an element of Q(c) extended by the square root
// parametrization is not rational; we work with t where c = 13 - 6(t + 1/t).
Scalar kac_determinant(int level, bool symbolic, const Scalar& c = RatFunc::c(), const Scalar& h = RatFunc::h());

struct HOneViolation {
  long p, q, m, n;
};
std::vector<HOneViolation> h_equals_one_scan(long bound);
bool mn_identity_check();

}  // namespace voacoh
