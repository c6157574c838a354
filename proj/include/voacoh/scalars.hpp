#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace voacoh {

using Rational = mpq_class;
using Integer = mpz_class;

class ScalarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(const Rational& q);
// Canonical a/b; mpq_class(a, b) alone does not reduce.
inline Rational frac(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}
Rational parse_rational(const std::string& s);
Rational binomial(const Rational& top, long k);
Integer factorial(long n);

// Polynomial in c and h over Q, terms kept in descending deglex order (c < h).
class Poly {
 public:
  struct Term {
    uint16_t ec = 0;
    uint16_t eh = 0;
    Rational coef;
  };

  Poly() = default;
  Poly(long v);  // NOLINT
  Poly(const Rational& v);  // NOLINT
  static Poly var_c();
  static Poly var_h();
  static Poly monomial(const Rational& coef, unsigned ec, unsigned eh);

  bool is_zero() const { return terms_.empty(); }
  bool is_const() const;
  Rational const_value() const;
  const std::vector<Term>& terms() const { return terms_; }
  const Term& lead() const { return terms_.front(); }
  unsigned total_degree() const;
  unsigned degree_c() const;
  unsigned degree_h() const;
  bool uses_c() const;
  bool uses_h() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& q);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& q) { return a *= q; }
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  // Exact division; throws if b does not divide a.
  static Poly divexact(const Poly& a, const Poly& b);
  static std::optional<Poly> try_divide(const Poly& a, const Poly& b);
  static Poly gcd(const Poly& a, const Poly& b);

  Poly substitute(const std::optional<Rational>& c, const std::optional<Rational>& h) const;
  Poly pow(unsigned e) const;
  std::string str() const;
  size_t hash() const;

 private:
  std::vector<Term> terms_;
  void canonicalize();
  friend class PolyBuilder;
};

// Rational roots of a polynomial in c alone, ascending, without multiplicity.
std::vector<Rational> rational_roots_c(const Poly& p);
// Largest power of f dividing p, together with the cofactor.
std::pair<unsigned, Poly> factor_multiplicity(const Poly& p, const Poly& f);

// Element of the fraction field Q(c,h); reduced with monic denominator.
class RatFunc {
 public:
  RatFunc() : num_(), den_(1) {}
  RatFunc(long v) : num_(v), den_(1) {}  // NOLINT
  RatFunc(const Rational& v) : num_(v), den_(1) {}  // NOLINT
  RatFunc(const Poly& p) : num_(p), den_(1) {}  // NOLINT
  RatFunc(const Poly& n, const Poly& d);
  static RatFunc c() { return RatFunc(Poly::var_c()); }
  static RatFunc h() { return RatFunc(Poly::var_h()); }
  static RatFunc parse(const std::string& text);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_const() const { return den_.is_const() && num_.is_const(); }
  Rational const_value() const;
  bool is_polynomial() const { return den_.is_const(); }

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  RatFunc inverse() const;
  RatFunc pow(long e) const;
  // Throws ScalarError naming the denominator when the binding hits a pole.
  RatFunc substitute(const std::map<char, Rational>& bindings) const;
  std::string str() const;
  size_t hash() const { return num_.hash() * 1000003u ^ den_.hash(); }

 private:
  Poly num_;
  Poly den_;
  void normalize();
};

using Scalar = RatFunc;

// Sparse matrix over Q(c,h).  No zero entries are stored.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols) {}
  static ExactMatrix identity(size_t n);
  static ExactMatrix from_rows(const std::vector<std::vector<Scalar>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Scalar get(size_t r, size_t c) const;
  void set(size_t r, size_t c, const Scalar& v);
  void add_to(size_t r, size_t c, const Scalar& v);
  const std::map<std::pair<size_t, size_t>, Scalar>& entries() const { return entries_; }
  void append_row(const std::vector<Scalar>& row);
  void append_sparse_row(const std::map<size_t, Scalar>& row);
  std::vector<std::vector<Scalar>> dense() const;
  ExactMatrix transpose() const;
  ExactMatrix operator*(const ExactMatrix& o) const;
  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;
  bool operator==(const ExactMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_; }
  bool all_constant() const;
  std::string str() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::map<std::pair<size_t, size_t>, Scalar> entries_;
};

using ScalarVector = std::vector<Scalar>;

// Basis of the right nullspace, one vector per free column, in column order.
std::vector<ScalarVector> nullspace(const ExactMatrix& m);
size_t rank(const ExactMatrix& m);
Scalar determinant(const ExactMatrix& m);
// Solves m x = b; nullopt if inconsistent.  Free variables are set to zero.
std::optional<ScalarVector> solve(const ExactMatrix& m, const ScalarVector& b);
// Indices of a maximal set of linearly independent rows, greedy in row order.
std::vector<size_t> independent_rows(const ExactMatrix& m);

// Incremental row echelon form used for spans and membership tests.
class RowSpace {
 public:
  explicit RowSpace(size_t dim) : dim_(dim) {}
  // Returns true if the row enlarged the span.
  bool add(ScalarVector row);
  bool contains(ScalarVector row) const;
  size_t rank() const { return pivots_.size(); }
  size_t dim() const { return dim_; }
  // Reduces row against the stored basis; returns the remainder.
  ScalarVector reduce(ScalarVector row) const;
  // Fully reduced basis rows (reduced row echelon form).
  std::vector<ScalarVector> basis() const;
  std::vector<size_t> pivot_columns() const;
  // Nullspace of the span viewed as a system of equations.
  std::vector<ScalarVector> kernel() const;

 private:
  size_t dim_;
  std::vector<size_t> pivots_;
  std::vector<std::map<size_t, Scalar>> rows_;  // each normalized with leading 1 at pivot
};

// Polynomials in arbitrarily many formal symbols; used for identity checks.
class SymPoly {
 public:
  SymPoly() = default;
  SymPoly(long v);  // NOLINT
  static SymPoly var(const std::string& name);
  SymPoly& operator+=(const SymPoly& o);
  SymPoly& operator-=(const SymPoly& o);
  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend SymPoly operator*(const SymPoly& a, const SymPoly& b);
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const SymPoly& o) const { return terms_ == o.terms_; }
  Rational evaluate(const std::map<std::string, Rational>& at) const;
  std::string str() const;

 private:
  std::map<std::map<std::string, unsigned>, Rational> terms_;
  void prune();
};

}  // namespace voacoh
