#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "voacoh/scalars.hpp"

namespace voacoh {

// Canonical index of a PBW/Fock basis vector; layout is flavor specific.
using Key = std::vector<int>;

struct KeyHash {
  size_t operator()(const Key& k) const noexcept {
    size_t h = k.size();
    for (int x : k) h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite linear combination of basis keys.
class Vector {
 public:
  Vector() = default;
  explicit Vector(const Key& k, const Scalar& c = Scalar(1)) { add(k, c); }

  void add(const Key& k, const Scalar& c);
  void axpy(const Scalar& c, const Vector& o);
  Vector& operator+=(const Vector& o) {
    axpy(Scalar(1), o);
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    axpy(Scalar(-1), o);
    return *this;
  }
  Vector& operator*=(const Scalar& c);
  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(const Scalar& c, Vector a) { return a *= c; }
  bool operator==(const Vector& o) const { return terms_ == o.terms_; }
  bool operator!=(const Vector& o) const { return !(*this == o); }

  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(const Key& k) const;
  const std::map<Key, Scalar>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }

  template <class F>
  Vector map_keys(F&& f) const {
    Vector r;
    for (const auto& [k, c] : terms_) r.axpy(c, f(k));
    return r;
  }

 private:
  std::map<Key, Scalar> terms_;
};

// A state of the vertex algebra whose modes every module implements directly.
struct Field {
  enum Kind : int { Identity = 0, Conformal = 1, Heisenberg = 2, LatticeVertex = 3, Current = 4 };
  Kind kind = Identity;
  std::vector<int> data;
  bool operator==(const Field& o) const { return kind == o.kind && data == o.data; }
  bool operator<(const Field& o) const { return kind != o.kind ? kind < o.kind : data < o.data; }
};

// A mode symbol g_n of a generator field.
struct ModeSymbol {
  Field field;
  int n = 0;
};

// Graded module with PBW basis, generator-mode actions and optional contravariant form.
// Degrees are integers counted from the lowest L(0)-weight.
class GradedModule {
 public:
  explicit GradedModule(int depth) : depth_(depth) {}
  virtual ~GradedModule() = default;
  GradedModule(const GradedModule&) = delete;
  GradedModule& operator=(const GradedModule&) = delete;

  virtual std::string describe() const = 0;
  virtual std::string flavor() const = 0;
  // L(0)-eigenvalue on the degree-0 space.
  virtual Scalar lowest_weight() const = 0;
  virtual int degree(const Key& k) const = 0;
  // Basis of the free (Verma / Fock) cover at a degree, in canonical order.
  virtual std::vector<Key> cover_basis(int deg) const = 0;
  virtual std::string key_str(const Key& k) const = 0;
  virtual bool symbolic() const = 0;

  int depth() const { return depth_; }

  // Memoized generator action; zero when the target degree is negative.
  Vector mode(const Field& f, int n, const Key& k) const;
  Vector mode(const Field& f, int n, const Vector& v) const;
  Vector L(int n, const Key& k) const;
  Vector L(int n, const Vector& v) const;
  // Degree shift of the mode f_n.
  int mode_shift(const Field& f, int n) const { return field_weight(f) - n - 1; }
  virtual int field_weight(const Field& f) const = 0;

  // Contravariant form on the cover, normalized on the lowest vector.
  virtual bool has_form() const { return false; }
  Scalar form(const Key& a, const Key& b) const;
  ExactMatrix gram(int deg) const;

  // Quotient by the radical of the form (simple modules); identity otherwise.
  bool is_quotient() const { return quotient_; }
  std::vector<Key> basis(int deg) const;
  size_t dim(int deg) const { return basis(deg).size(); }
  // Coordinates of a homogeneous vector in basis(deg).
  ScalarVector coords(int deg, const Vector& v) const;
  Vector from_coords(int deg, const ScalarVector& x) const;
  Vector normal_form(const Vector& v) const;
  bool is_zero_mod(const Vector& v) const;
  // Basis of the radical at a degree, as cover vectors.
  std::vector<Vector> radical(int deg) const;

  std::string render(const Vector& v) const;
  // Splits a vector by degree.
  std::map<int, Vector> by_degree(const Vector& v) const;
  int vector_degree(const Vector& v) const;  // throws on mixed degree

 protected:
  virtual Vector compute_mode(const Field& f, int n, const Key& k) const = 0;
  virtual Vector compute_L(int n, const Key& k) const = 0;
  virtual Scalar compute_form(const Key& a, const Key& b) const;
  void set_quotient(bool q) { quotient_ = q; }

  struct QuotientData {
    std::vector<Key> keys;       // cover basis at the degree
    std::vector<size_t> chosen;  // independent rows of the Gram matrix
    ExactMatrix gram;
    std::vector<std::vector<Scalar>> inv;  // inverse of the chosen principal block
  };
  const QuotientData& quotient_data(int deg) const;

  int depth_;

 private:
  bool quotient_ = false;
  mutable std::mutex mu_;
  mutable std::unordered_map<Key, Vector, KeyHash> mode_cache_;
  mutable std::unordered_map<Key, Vector, KeyHash> l_cache_;
  mutable std::unordered_map<Key, Scalar, KeyHash> form_cache_;
  mutable std::map<int, std::shared_ptr<QuotientData>> quotient_cache_;
  mutable std::map<const void*, std::unordered_map<Key, Vector, KeyHash>> state_cache_;
  friend Vector state_mode(const class VertexAlgebra&, const GradedModule&, const Key&, int, const Key&);
};

// A vertex operator algebra realized as a module over itself.
class VertexAlgebra : public GradedModule {
 public:
  using GradedModule::GradedModule;

  struct Split {
    Field field;
    int mode = 0;
    Key rest;
  };
  // Keys that are themselves field states (vacuum, conformal vector, currents, lattice vertices).
  virtual std::optional<Field> as_field(const Key& k) const = 0;
  // For other keys: k = field_mode rest, exactly.
  virtual Split split(const Key& k) const = 0;
  Scalar lowest_weight() const override { return Scalar(0); }
  virtual Key vacuum() const = 0;
  virtual Vector conformal_vector() const = 0;

  // Strong generators used by the derivation recursion.
  struct Generator {
    std::string name;
    Field field;
    Key state;
  };
  virtual std::vector<Generator> generators() const = 0;
  // k = coef * (generators()[gen].state)_mode rest, with rest strictly simpler; nullopt for the vacuum.
  struct GenSplit {
    size_t gen = 0;
    int mode = 0;
    Key rest;
    Scalar coef = Scalar(1);
  };
  virtual std::optional<GenSplit> generator_split(const Key& k) const = 0;
  // Central charge as a scalar.
  virtual Scalar central_charge() const = 0;
};

// n-th mode of the state a (a PBW key of V) acting on a vector of W.
Vector state_mode(const VertexAlgebra& V, const GradedModule& W, const Key& a, int n, const Key& w);
Vector state_mode(const VertexAlgebra& V, const GradedModule& W, const Vector& a, int n, const Vector& w);
// i-th mode of Y_{WV}^W(w, x) applied to v in V: sum_j (-1)^{i+1+j}/j! L(-1)^j v_{i+j} w.
Vector intertwiner_mode(const VertexAlgebra& V, const GradedModule& W, const Vector& w, int i, const Vector& v);

// Public single-mode action with truncation check against the module depth.
Vector apply_mode(const GradedModule& m, const ModeSymbol& s, const Vector& v);

struct ImageResult {
  bool member = false;
  Vector witness;
};
// Decides v in Im L(-1)^p (modulo the radical for quotient modules).
ImageResult in_image_translate(const GradedModule& m, const Vector& v, int p);
Vector translate_power(const GradedModule& m, const Vector& v, int p);

ExactMatrix contravariant_gram(const GradedModule& m, int deg);

}  // namespace voacoh
