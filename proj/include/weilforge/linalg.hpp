#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "weilforge/error.hpp"
#include "weilforge/rational.hpp"

namespace weilforge {

using QVec = std::vector<Rat>;

inline bool vec_is_zero(const QVec& v) {
  for (const Rat& x : v)
    if (!is_zero(x)) return false;
  return true;
}

inline QVec vec_zero(int n) { return QVec(static_cast<std::size_t>(n), Rat(0)); }

inline QVec vec_unit(int n, int i) {
  QVec v = vec_zero(n);
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

inline void vec_axpy(QVec& y, const Rat& a, const QVec& x) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!is_zero(x[i])) y[i] += a * x[i];
}

// ---------------------------------------------------------------------------
// Dense matrices
// ---------------------------------------------------------------------------

/// Dense exact-rational matrix, row major. Sized for the desk scale this
/// library targets; the big derivation systems go through SparseRREF instead.
struct QMat {
  int rows = 0;
  int cols = 0;
  std::vector<Rat> a;

  QMat() = default;
  QMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), Rat(0)) {}

  Rat& at(int r, int c) { return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }
  const Rat& at(int r, int c) const {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)];
  }

  static QMat identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  QVec row(int r) const {
    QVec v(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) v[static_cast<std::size_t>(c)] = at(r, c);
    return v;
  }

  QVec apply(const QVec& x) const {
    QVec y = vec_zero(rows);
    for (int r = 0; r < rows; ++r) {
      Rat acc(0);
      for (int c = 0; c < cols; ++c)
        if (!is_zero(at(r, c)) && !is_zero(x[static_cast<std::size_t>(c)])) acc += at(r, c) * x[static_cast<std::size_t>(c)];
      y[static_cast<std::size_t>(r)] = acc;
    }
    return y;
  }

  QMat mul(const QMat& other) const {
    require(cols == other.rows, errc::algebra_mismatch, "matrix dimension mismatch in product");
    QMat out(rows, other.cols);
    for (int r = 0; r < rows; ++r)
      for (int k = 0; k < cols; ++k) {
        const Rat& lhs = at(r, k);
        if (is_zero(lhs)) continue;
        for (int c = 0; c < other.cols; ++c)
          if (!is_zero(other.at(k, c))) out.at(r, c) += lhs * other.at(k, c);
      }
    return out;
  }

  QMat add(const QMat& other) const {
    QMat out = *this;
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] += other.a[i];
    return out;
  }

  QMat sub(const QMat& other) const {
    QMat out = *this;
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] -= other.a[i];
    return out;
  }

  QMat scaled(const Rat& s) const {
    QMat out = *this;
    for (Rat& x : out.a) x *= s;
    return out;
  }

  bool is_zero_matrix() const {
    for (const Rat& x : a)
      if (!is_zero(x)) return false;
    return true;
  }

  bool operator==(const QMat& other) const { return rows == other.rows && cols == other.cols && a == other.a; }

  QVec vectorized() const { return a; }
};

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<int> rref_in_place(QMat& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (!is_zero(m.at(i, c))) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
    Rat inv = 1 / m.at(r, c);
    for (int j = c; j < m.cols; ++j) m.at(r, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || is_zero(m.at(i, c))) continue;
      Rat f = m.at(i, c);
      for (int j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int rank(QMat m) { return static_cast<int>(rref_in_place(m).size()); }

inline std::optional<QMat> try_inverse(const QMat& m) {
  require(m.rows == m.cols, errc::algebra_mismatch, "inverse of non-square matrix");
  int n = m.rows;
  QMat aug(n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, n + r) = 1;
  }
  auto pivots = rref_in_place(aug);
  if (static_cast<int>(pivots.size()) != n || pivots.back() != n - 1) return std::nullopt;
  QMat inv(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv.at(r, c) = aug.at(r, n + c);
  return inv;
}

inline QMat inverse(const QMat& m) {
  auto inv = try_inverse(m);
  require(inv.has_value(), errc::not_invertible, "matrix is singular");
  return *inv;
}

// ---------------------------------------------------------------------------
// Canonical row spaces
// ---------------------------------------------------------------------------

/// Subspace of Q^n kept in reduced echelon form. The row list is a canonical
/// form: two RowSpaces are equal as subspaces iff their rows coincide, which
/// is what makes ideal equality and report output deterministic.
class RowSpace {
 public:
  RowSpace() = default;
  explicit RowSpace(int ambient) : n_(ambient) {}

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<QVec>& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }

  /// Residual of v after reduction against the basis.
  QVec reduce(QVec v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rat& c = v[static_cast<std::size_t>(pivots_[i])];
      if (!is_zero(c)) {
        Rat f = c;  // rows are pivot-normalized
        vec_axpy(v, -f, rows_[i]);
      }
    }
    return v;
  }

  bool contains(const QVec& v) const { return vec_is_zero(reduce(v)); }

  /// Coordinates of v in terms of rows(); nullopt if v is outside the space.
  std::optional<QVec> coordinates(QVec v) const {
    QVec coeff(rows_.size(), Rat(0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rat c = v[static_cast<std::size_t>(pivots_[i])];
      if (!is_zero(c)) {
        coeff[i] = c;
        vec_axpy(v, -c, rows_[i]);
      }
    }
    if (!vec_is_zero(v)) return std::nullopt;
    return coeff;
  }

  /// Inserts v (reduced); returns true if the space grew.
  bool insert(QVec v) {
    v = reduce(std::move(v));
    int piv = -1;
    for (int c = 0; c < n_; ++c)
      if (!is_zero(v[static_cast<std::size_t>(c)])) {
        piv = c;
        break;
      }
    if (piv < 0) return false;
    Rat inv = 1 / v[static_cast<std::size_t>(piv)];
    for (Rat& x : v) x *= inv;
    // back-eliminate the new pivot from existing rows
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Rat f = rows_[i][static_cast<std::size_t>(piv)];
      if (!is_zero(f)) vec_axpy(rows_[i], -f, v);
    }
    auto pos = std::upper_bound(pivots_.begin(), pivots_.end(), piv);
    std::size_t idx = static_cast<std::size_t>(pos - pivots_.begin());
    pivots_.insert(pos, piv);
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), std::move(v));
    return true;
  }

  void insert_all(const std::vector<QVec>& vs) {
    for (const QVec& v : vs) insert(v);
  }

  /// Basis of a complement: ambient unit vectors at the non-pivot columns.
  std::vector<int> complement_columns() const {
    std::vector<int> comp;
    std::size_t pi = 0;
    for (int c = 0; c < n_; ++c) {
      if (pi < pivots_.size() && pivots_[pi] == c) {
        ++pi;
        continue;
      }
      comp.push_back(c);
    }
    return comp;
  }

  bool operator==(const RowSpace& other) const { return n_ == other.n_ && rows_ == other.rows_; }
  bool operator!=(const RowSpace& other) const { return !(*this == other); }

  bool contains_space(const RowSpace& other) const {
    for (const QVec& r : other.rows_)
      if (!contains(r)) return false;
    return true;
  }

 private:
  int n_ = 0;
  std::vector<QVec> rows_;    // reduced echelon, pivot-normalized
  std::vector<int> pivots_;   // ascending
};

// ---------------------------------------------------------------------------
// Sparse elimination for the big structured systems
// ---------------------------------------------------------------------------

/// One equation, stored as sorted (column, coefficient) pairs.
struct SparseRow {
  std::vector<std::pair<int, Rat>> terms;

  void normalize() {
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<int, Rat>> out;
    for (auto& t : terms) {
      if (!out.empty() && out.back().first == t.first)
        out.back().second += t.second;
      else
        out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& t) { return is_zero(t.second); }), out.end());
    terms = std::move(out);
  }
};

/// y += a*x on sorted sparse rows.
inline void sparse_axpy(SparseRow& y, const Rat& a, const SparseRow& x) {
  std::vector<std::pair<int, Rat>> out;
  out.reserve(y.terms.size() + x.terms.size());
  std::size_t i = 0, j = 0;
  while (i < y.terms.size() || j < x.terms.size()) {
    if (j == x.terms.size() || (i < y.terms.size() && y.terms[i].first < x.terms[j].first)) {
      out.push_back(y.terms[i++]);
    } else if (i == y.terms.size() || x.terms[j].first < y.terms[i].first) {
      Rat v = a * x.terms[j].second;
      if (!is_zero(v)) out.emplace_back(x.terms[j].first, std::move(v));
      ++j;
    } else {
      Rat v = y.terms[i].second + a * x.terms[j].second;
      if (!is_zero(v)) out.emplace_back(y.terms[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  y.terms = std::move(out);
}

/// Incremental sparse Gaussian elimination over Q. Rows are reduced against
/// the current pivots on insertion; nullspace() back-substitutes once at the
/// end. Column order is the elimination order, so callers lay out unknowns
/// with the ones to eliminate first at the low indices.
class SparseRREF {
 public:
  explicit SparseRREF(int ncols) : ncols_(ncols) {}

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  void add_row(SparseRow r) {
    r.normalize();
    reduce(r);
    if (r.terms.empty()) return;
    Rat inv = 1 / r.terms.front().second;
    if (inv != 1)
      for (auto& t : r.terms) t.second *= inv;
    int piv = r.terms.front().first;
    rows_.emplace(piv, std::move(r));
    back_eliminated_ = false;
  }

  /// Reduces r against current pivot rows (forward elimination only).
  void reduce(SparseRow& r) const {
    std::size_t i = 0;
    while (i < r.terms.size()) {
      auto it = rows_.find(r.terms[i].first);
      if (it == rows_.end()) {
        ++i;
        continue;
      }
      Rat f = -r.terms[i].second;
      sparse_axpy(r, f, it->second);
      // the pivot column cancelled; entries before position i are untouched
    }
  }

  bool in_row_space(SparseRow r) const {
    r.normalize();
    reduce(r);
    return r.terms.empty();
  }

  /// All pivot columns, ascending.
  std::vector<int> pivot_columns() const {
    std::vector<int> out;
    out.reserve(rows_.size());
    for (const auto& [p, _] : rows_) out.push_back(p);
    return out;
  }

  /// Dense nullspace basis; one vector per free column, in column order.
  std::vector<QVec> nullspace() {
    back_eliminate();
    std::vector<char> is_pivot(static_cast<std::size_t>(ncols_), 0);
    for (const auto& [p, _] : rows_) is_pivot[static_cast<std::size_t>(p)] = 1;
    std::vector<QVec> basis;
    for (int f = 0; f < ncols_; ++f) {
      if (is_pivot[static_cast<std::size_t>(f)]) continue;
      QVec v = vec_zero(ncols_);
      v[static_cast<std::size_t>(f)] = 1;
      for (const auto& [p, row] : rows_) {
        for (const auto& [c, coeff] : row.terms)
          if (c == f) {
            v[static_cast<std::size_t>(p)] = -coeff;
            break;
          }
      }
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  void back_eliminate() {
    if (back_eliminated_) return;
    // walk pivots descending; reduce each row against all later pivot rows
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
      SparseRow& row = it->second;
      std::size_t i = 1;  // entry 0 is the pivot itself
      while (i < row.terms.size()) {
        auto jt = rows_.find(row.terms[i].first);
        if (jt == rows_.end()) {
          ++i;
          continue;
        }
        Rat f = -row.terms[i].second;
        sparse_axpy(row, f, jt->second);
      }
    }
    back_eliminated_ = true;
  }

  int ncols_;
  std::map<int, SparseRow> rows_;  // pivot column -> normalized row
  bool back_eliminated_ = true;
};

}  // namespace weilforge
