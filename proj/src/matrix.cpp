#include <sstream>

#include "voacoh/scalars.hpp"

namespace voacoh {

using SparseRow = std::map<size_t, Scalar>;

namespace {

// row -= f * src
void axpy(SparseRow& row, const Scalar& f, const SparseRow& src) {
  for (const auto& [col, v] : src) {
    auto it = row.find(col);
    Scalar t = f * v;
    if (it == row.end()) {
      row.emplace(col, -t);
    } else {
      it->second -= t;
      if (it->second.is_zero()) row.erase(it);
    }
  }
}

SparseRow to_sparse(const ScalarVector& v) {
  SparseRow r;
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) r.emplace(i, v[i]);
  return r;
}

}  // namespace

// --- ExactMatrix ---

ExactMatrix ExactMatrix::identity(size_t n) {
  ExactMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.set(i, i, Scalar(1));
  return m;
}

ExactMatrix ExactMatrix::from_rows(const std::vector<std::vector<Scalar>>& rows) {
  size_t cols = rows.empty() ? 0 : rows[0].size();
  ExactMatrix m(0, cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ScalarError("ragged matrix rows");
    m.append_row(r);
  }
  return m;
}

Scalar ExactMatrix::get(size_t r, size_t c) const {
  auto it = entries_.find({r, c});
  return it == entries_.end() ? Scalar() : it->second;
}

void ExactMatrix::set(size_t r, size_t c, const Scalar& v) {
  if (r >= rows_ || c >= cols_) throw ScalarError("matrix index out of bounds");
  if (v.is_zero())
    entries_.erase({r, c});
  else
    entries_[{r, c}] = v;
}

void ExactMatrix::add_to(size_t r, size_t c, const Scalar& v) { set(r, c, get(r, c) + v); }

void ExactMatrix::append_row(const std::vector<Scalar>& row) {
  if (row.size() != cols_) throw ScalarError("row length mismatch");
  ++rows_;
  for (size_t c = 0; c < row.size(); ++c)
    if (!row[c].is_zero()) entries_[{rows_ - 1, c}] = row[c];
}

void ExactMatrix::append_sparse_row(const std::map<size_t, Scalar>& row) {
  ++rows_;
  for (const auto& [c, v] : row) {
    if (c >= cols_) throw ScalarError("row index out of bounds");
    if (!v.is_zero()) entries_[{rows_ - 1, c}] = v;
  }
}

std::vector<std::vector<Scalar>> ExactMatrix::dense() const {
  std::vector<std::vector<Scalar>> d(rows_, std::vector<Scalar>(cols_));
  for (const auto& [rc, v] : entries_) d[rc.first][rc.second] = v;
  return d;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_);
  for (const auto& [rc, v] : entries_) t.entries_[{rc.second, rc.first}] = v;
  return t;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
  if (cols_ != o.rows_) throw ScalarError("matrix shape mismatch in product");
  std::vector<SparseRow> orows(o.rows_);
  for (const auto& [rc, v] : o.entries_) orows[rc.first].emplace(rc.second, v);
  std::vector<SparseRow> acc(rows_);
  for (const auto& [rc, v] : entries_) axpy(acc[rc.first], -v, orows[rc.second]);
  ExactMatrix r(rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (const auto& [c, v] : acc[i]) r.entries_[{i, c}] = v;
  return r;
}

std::vector<Scalar> ExactMatrix::apply(const std::vector<Scalar>& v) const {
  if (v.size() != cols_) throw ScalarError("vector length mismatch");
  std::vector<Scalar> r(rows_);
  for (const auto& [rc, e] : entries_)
    if (!v[rc.second].is_zero()) r[rc.first] += e * v[rc.second];
  return r;
}

bool ExactMatrix::all_constant() const {
  for (const auto& [rc, v] : entries_)
    if (!v.is_const()) return false;
  return true;
}

std::string ExactMatrix::str() const {
  std::ostringstream os;
  auto d = dense();
  os << "[";
  for (size_t i = 0; i < d.size(); ++i) {
    os << (i ? ", [" : "[");
    for (size_t j = 0; j < d[i].size(); ++j) os << (j ? ", " : "") << d[i][j].str();
    os << "]";
  }
  os << "]";
  return os.str();
}

// --- RowSpace ---

ScalarVector RowSpace::reduce(ScalarVector row) const {
  SparseRow r = to_sparse(row);
  for (size_t k = 0; k < pivots_.size(); ++k) {
    auto it = r.find(pivots_[k]);
    if (it == r.end()) continue;
    Scalar f = it->second;
    axpy(r, f, rows_[k]);
  }
  ScalarVector out(dim_);
  for (const auto& [c, v] : r) out[c] = v;
  return out;
}

bool RowSpace::add(ScalarVector row) {
  if (row.size() != dim_) throw ScalarError("row length mismatch");
  SparseRow r = to_sparse(row);
  for (size_t k = 0; k < pivots_.size() && !r.empty(); ++k) {
    auto it = r.find(pivots_[k]);
    if (it == r.end()) continue;
    Scalar f = it->second;
    axpy(r, f, rows_[k]);
  }
  if (r.empty()) return false;
  size_t p = r.begin()->first;
  Scalar inv = r.begin()->second.inverse();
  for (auto& [c, v] : r) v *= inv;
  // keep pivots sorted so reduction order is well defined
  size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
  pivots_.insert(pivots_.begin() + pos, p);
  rows_.insert(rows_.begin() + pos, std::move(r));
  return true;
}

bool RowSpace::contains(ScalarVector row) const {
  ScalarVector r = reduce(std::move(row));
  for (const auto& x : r)
    if (!x.is_zero()) return false;
  return true;
}

std::vector<ScalarVector> RowSpace::basis() const {
  std::vector<SparseRow> rr = rows_;
  for (size_t k = rr.size(); k-- > 0;) {
    for (size_t j = 0; j < k; ++j) {
      auto it = rr[j].find(pivots_[k]);
      if (it == rr[j].end()) continue;
      Scalar f = it->second;
      axpy(rr[j], f, rr[k]);
    }
  }
  std::vector<ScalarVector> out;
  for (const auto& r : rr) {
    ScalarVector v(dim_);
    for (const auto& [c, x] : r) v[c] = x;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<size_t> RowSpace::pivot_columns() const { return pivots_; }

std::vector<ScalarVector> RowSpace::kernel() const {
  auto b = basis();
  std::vector<bool> is_pivot(dim_, false);
  for (auto p : pivots_) is_pivot[p] = true;
  std::vector<ScalarVector> out;
  for (size_t f = 0; f < dim_; ++f) {
    if (is_pivot[f]) continue;
    ScalarVector v(dim_);
    v[f] = Scalar(1);
    for (size_t k = 0; k < pivots_.size(); ++k)
      if (!b[k][f].is_zero()) v[pivots_[k]] = -b[k][f];
    out.push_back(std::move(v));
  }
  return out;
}

// --- linear algebra entry points ---

namespace {

RowSpace row_space(const ExactMatrix& m) {
  RowSpace rs(m.cols());
  std::vector<ScalarVector> rows(m.rows(), ScalarVector(m.cols()));
  for (const auto& [rc, v] : m.entries()) rows[rc.first][rc.second] = v;
  for (auto& r : rows) rs.add(std::move(r));
  return rs;
}

// Fraction-free Bareiss elimination on an integer matrix.
Integer bareiss(std::vector<std::vector<Integer>> a) {
  size_t n = a.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t sw = k + 1;
      while (sw < n && a[sw][k] == 0) ++sw;
      if (sw == n) return 0;
      std::swap(a[k], a[sw]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

std::vector<ScalarVector> nullspace(const ExactMatrix& m) { return row_space(m).kernel(); }

size_t rank(const ExactMatrix& m) { return row_space(m).rank(); }

Scalar determinant(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw ScalarError("determinant of a non-square matrix");
  size_t n = m.rows();
  if (n == 0) return Scalar(1);
  if (m.all_constant()) {
    // clear denominators row by row, then Bareiss over Z
    std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
    Rational scale = 1;
    auto d = m.dense();
    for (size_t i = 0; i < n; ++i) {
      Integer l = 1;
      for (size_t j = 0; j < n; ++j) {
        Rational q = d[i][j].const_value();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
      }
      for (size_t j = 0; j < n; ++j) {
        Rational q = d[i][j].const_value() * l;
        a[i][j] = q.get_num();
      }
      scale /= l;
    }
    return Scalar(Rational(bareiss(std::move(a))) * scale);
  }
  auto a = m.dense();
  Scalar det(1);
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    while (piv < n && a[piv][k].is_zero()) ++piv;
    if (piv == n) return Scalar();
    if (piv != k) {
      std::swap(a[piv], a[k]);
      det = -det;
    }
    det *= a[k][k];
    Scalar inv = a[k][k].inverse();
    for (size_t i = k + 1; i < n; ++i) {
      if (a[i][k].is_zero()) continue;
      Scalar f = a[i][k] * inv;
      for (size_t j = k; j < n; ++j)
        if (!a[k][j].is_zero()) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

std::optional<ScalarVector> solve(const ExactMatrix& m, const ScalarVector& b) {
  if (b.size() != m.rows()) throw ScalarError("right-hand side length mismatch");
  size_t n = m.cols();
  RowSpace rs(n + 1);
  std::vector<ScalarVector> rows(m.rows(), ScalarVector(n + 1));
  for (const auto& [rc, v] : m.entries()) rows[rc.first][rc.second] = v;
  for (size_t i = 0; i < m.rows(); ++i) rows[i][n] = b[i];
  for (auto& r : rows) rs.add(std::move(r));
  auto basis = rs.basis();
  auto piv = rs.pivot_columns();
  ScalarVector x(n);
  for (size_t k = 0; k < piv.size(); ++k) {
    if (piv[k] == n) return std::nullopt;
    x[piv[k]] = basis[k][n];
  }
  return x;
}

std::vector<size_t> independent_rows(const ExactMatrix& m) {
  RowSpace rs(m.cols());
  std::vector<ScalarVector> rows(m.rows(), ScalarVector(m.cols()));
  for (const auto& [rc, v] : m.entries()) rows[rc.first][rc.second] = v;
  std::vector<size_t> out;
  for (size_t i = 0; i < rows.size(); ++i)
    if (rs.add(rows[i])) out.push_back(i);
  return out;
}

}  // namespace voacoh
