#pragma once

// Sparse elimination kernels shared by the verifier and the state classifier.
//
//  - fraction_free_echelon<T>: Bareiss elimination over an integral domain with
//    exact division (BigInt for constraint systems, CycNum for Schmidt ranks).
//  - modp_rank: plain Gaussian elimination over Z/pZ.
//  - float_nullity: singular-value kernel dimension of a dense double matrix.
//
// All pivoting is deterministic: columns are visited in increasing order and
// the pivot is the first remaining row (in row order) with a nonzero entry in
// that column.

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oplm/field.hpp"

namespace oplm {

template <class T>
using SparseRow = std::vector<std::pair<std::size_t, T>>;

template <class T>
struct EchelonForm {
  std::size_t cols = 0;
  std::vector<SparseRow<T>> pivot_rows;  // pivot_rows[k].front() sits in pivot_cols[k]
  std::vector<std::size_t> pivot_cols;

  std::size_t rank() const { return pivot_cols.size(); }
  std::size_t nullity() const { return cols - rank(); }
};

namespace detail {

template <class T>
void scale_row(SparseRow<T>& row, const T& mul, const T& div) {
  for (auto& [c, x] : row) x = exact_div(T(x * mul), div);
}

// (p * row - a * pivot) / prev, with the leading column of both removed.
template <class T>
SparseRow<T> bareiss_combine(const SparseRow<T>& row, const SparseRow<T>& pivot,
                             const T& p, const T& prev) {
  const T a = row.front().second;
  SparseRow<T> out;
  out.reserve(row.size() + pivot.size());
  std::size_t i = 1;
  std::size_t j = 1;
  while (i < row.size() || j < pivot.size()) {
    std::size_t col;
    T val;
    if (j >= pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
      col = row[i].first;
      val = p * row[i].second;
      ++i;
    } else if (i >= row.size() || pivot[j].first < row[i].first) {
      col = pivot[j].first;
      val = -(a * pivot[j].second);
      ++j;
    } else {
      col = row[i].first;
      val = p * row[i].second - a * pivot[j].second;
      ++i;
      ++j;
    }
    if (!is_zero(val)) out.emplace_back(col, exact_div(val, prev));
  }
  return out;
}

inline std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Fraction-free (Bareiss) row echelon form. Every intermediate entry is a
/// minor of the input, so divisions are exact and coefficient growth is
/// bounded by Hadamard's inequality.
template <class T>
EchelonForm<T> fraction_free_echelon(std::vector<SparseRow<T>> rows, std::size_t cols) {
  EchelonForm<T> ef;
  ef.cols = cols;
  T prev(1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::size_t r = rank;
    while (r < rows.size() && (rows[r].empty() || rows[r].front().first != col)) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[rank], rows[r]);
    const SparseRow<T>& pivot = rows[rank];
    const T p = pivot.front().second;
    const bool unit_scale = (p == prev);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      auto& row = rows[i];
      if (row.empty()) continue;
      if (row.front().first == col) {
        row = detail::bareiss_combine(row, pivot, p, prev);
      } else if (!unit_scale) {
        detail::scale_row(row, p, prev);
      }
    }
    prev = p;
    ef.pivot_cols.push_back(col);
    ++rank;
  }
  rows.resize(rank);
  ef.pivot_rows = std::move(rows);
  return ef;
}

template <class T>
std::size_t exact_rank(std::vector<SparseRow<T>> rows, std::size_t cols) {
  return fraction_free_echelon(std::move(rows), cols).rank();
}

/// Rank of an integer matrix reduced modulo a prime p < 2^32.
inline std::size_t modp_rank(const std::vector<SparseRow<BigInt>>& int_rows, std::size_t cols,
                             std::uint64_t p) {
  using Row = SparseRow<std::uint64_t>;
  std::vector<Row> rows;
  rows.reserve(int_rows.size());
  const BigInt bp(static_cast<unsigned long>(p));
  for (const auto& ir : int_rows) {
    Row r;
    r.reserve(ir.size());
    for (const auto& [c, x] : ir) {
      BigInt m = x % bp;
      if (m < 0) m += bp;
      const auto v = static_cast<std::uint64_t>(m.get_ui());
      if (v != 0) r.emplace_back(c, v);
    }
    rows.push_back(std::move(r));
  }

  std::size_t rank = 0;
  Row scratch;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::size_t r = rank;
    while (r < rows.size() && (rows[r].empty() || rows[r].front().first != col)) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[rank], rows[r]);
    Row& pivot = rows[rank];
    const std::uint64_t inv = detail::mod_pow(pivot.front().second, p - 2, p);
    for (auto& [c, x] : pivot) x = x * inv % p;
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      Row& row = rows[i];
      if (row.empty() || row.front().first != col) continue;
      const std::uint64_t f = p - row.front().second;  // row += f * pivot
      scratch.clear();
      std::size_t a = 1;
      std::size_t b = 1;
      while (a < row.size() || b < pivot.size()) {
        if (b >= pivot.size() || (a < row.size() && row[a].first < pivot[b].first)) {
          scratch.push_back(row[a++]);
        } else if (a >= row.size() || pivot[b].first < row[a].first) {
          scratch.emplace_back(pivot[b].first, f * pivot[b].second % p);
          ++b;
        } else {
          const std::uint64_t v = (row[a].second + f * pivot[b].second) % p;
          if (v != 0) scratch.emplace_back(row[a].first, v);
          ++a;
          ++b;
        }
      }
      row.swap(scratch);
    }
    ++rank;
  }
  return rank;
}

/// Basis of the rational kernel, one vector per free column, obtained by back
/// substitution through an echelon form.
template <class T>
std::vector<std::vector<BigRational>> kernel_basis(const EchelonForm<T>& ef) {
  std::vector<bool> is_pivot(ef.cols, false);
  for (auto c : ef.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<BigRational>> basis;
  for (std::size_t f = 0; f < ef.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<BigRational> x(ef.cols);
    x[f] = 1;
    for (std::size_t k = ef.rank(); k-- > 0;) {
      const auto& row = ef.pivot_rows[k];
      BigRational acc;
      for (std::size_t t = 1; t < row.size(); ++t) {
        const auto& xv = x[row[t].first];
        if (!xv.is_zero()) acc += BigRational(row[t].second) * xv;
      }
      x[ef.pivot_cols[k]] = -acc / BigRational(row.front().second);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

struct FloatKernel {
  std::size_t nullity = 0;
  double sigma_max = 0.0;
  /// Largest singular value counted as zero and smallest counted as nonzero
  /// (both relative to sigma_max); -1 when absent.
  double largest_null_ratio = -1.0;
  double smallest_live_ratio = -1.0;
};

/// Numerical kernel dimension: columns minus the number of singular values
/// above tol * sigma_max.
inline FloatKernel float_nullity(const Eigen::MatrixXd& a, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("float_nullity: tolerance must be positive");
  FloatKernel out;
  if (a.cols() == 0) return out;
  if (a.rows() == 0) {
    out.nullity = static_cast<std::size_t>(a.cols());
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd s = svd.singularValues();
  out.sigma_max = s.size() ? s(0) : 0.0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double ratio = out.sigma_max > 0 ? s(i) / out.sigma_max : 0.0;
    if (out.sigma_max > 0 && ratio > tol) {
      ++rank;
      out.smallest_live_ratio = ratio;
    } else if (out.largest_null_ratio < 0) {
      out.largest_null_ratio = ratio;
    }
  }
  out.nullity = static_cast<std::size_t>(a.cols()) - rank;
  return out;
}

}  // namespace oplm
