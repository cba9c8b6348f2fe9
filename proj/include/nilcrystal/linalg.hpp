#pragma once

// Dense exact linear algebra over a field object (see field.hpp).
//
// Matrices are plain row-major storage of field elements; every operation
// that needs arithmetic takes the field as its first argument.

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

namespace nilcrystal {

template <class E>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  E& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const E& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  /// Row-major storage.
  const std::vector<E>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<E> data_;
};

namespace la {

template <class K>
using Mat = Matrix<typename K::Element>;

template <class K>
Mat<K> zeros(const K& f, std::size_t r, std::size_t c) {
  Mat<K> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = f.zero();
  return m;
}

template <class K>
Mat<K> identity(const K& f, std::size_t n) {
  auto m = zeros(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
  return m;
}

template <class K>
Mat<K> multiply(const K& f, const Mat<K>& a, const Mat<K>& b) {
  assert(a.cols() == b.rows());
  auto c = zeros(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (f.is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = f.add(c(i, j), f.mul(a(i, k), b(k, j)));
    }
  }
  return c;
}

template <class K>
Mat<K> add(const K& f, const Mat<K>& a, const Mat<K>& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  Mat<K> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.add(a(i, j), b(i, j));
  return c;
}

template <class K>
Mat<K> sub(const K& f, const Mat<K>& a, const Mat<K>& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  Mat<K> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.sub(a(i, j), b(i, j));
  return c;
}

template <class K>
Mat<K> scale(const K& f, const typename K::Element& s, const Mat<K>& a) {
  Mat<K> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.mul(s, a(i, j));
  return c;
}

template <class E>
Matrix<E> transpose(const Matrix<E>& a) {
  Matrix<E> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

template <class K>
bool is_zero(const K& f, const Mat<K>& a) {
  for (const auto& x : a.data())
    if (!f.is_zero(x)) return false;
  return true;
}

template <class K>
bool equal(const K& f, const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (!f.equal(a.data()[i], b.data()[i])) return false;
  return true;
}

/// Copies `src` into `dst` with its top-left corner at (r0, c0).
template <class E>
void paste(Matrix<E>& dst, const Matrix<E>& src, std::size_t r0, std::size_t c0) {
  assert(r0 + src.rows() <= dst.rows() && c0 + src.cols() <= dst.cols());
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) dst(r0 + i, c0 + j) = src(i, j);
}

template <class E>
Matrix<E> block(const Matrix<E>& a, std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) {
  assert(r0 + nr <= a.rows() && c0 + nc <= a.cols());
  Matrix<E> b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = a(r0 + i, c0 + j);
  return b;
}

template <class K>
Mat<K> hstack(const K& f, const Mat<K>& a, const Mat<K>& b) {
  assert(a.rows() == b.rows());
  auto c = zeros(f, a.rows(), a.cols() + b.cols());
  paste(c, a, 0, 0);
  paste(c, b, 0, a.cols());
  return c;
}

template <class K>
Mat<K> vstack(const K& f, const Mat<K>& a, const Mat<K>& b) {
  assert(a.cols() == b.cols());
  auto c = zeros(f, a.rows() + b.rows(), a.cols());
  paste(c, a, 0, 0);
  paste(c, b, a.rows(), 0);
  return c;
}

template <class K>
struct Echelon {
  Mat<K> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan elimination to reduced row echelon form.
template <class K>
Echelon<K> rref(const K& f, Mat<K> a) {
  Echelon<K> out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && f.is_zero(a(piv, col))) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    const auto inv = f.inv(a(row, col));
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) = f.mul(inv, a(row, j));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || f.is_zero(a(i, col))) continue;
      const auto factor = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) = f.sub(a(i, j), f.mul(factor, a(row, j)));
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(a);
  return out;
}

template <class K>
std::size_t rank(const K& f, const Mat<K>& a) {
  if (a.empty()) return 0;
  // Eliminate along the shorter side.
  if (a.rows() > a.cols()) return rref(f, transpose(a)).pivots.size();
  return rref(f, a).pivots.size();
}

/// Columns form a basis of {x : a x = 0}.
template <class K>
Mat<K> kernel(const K& f, const Mat<K>& a) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) return identity(f, n);
  const auto e = rref(f, a);
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free.push_back(j);
  auto basis = zeros(f, n, free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = f.one();
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], k) = f.neg(e.reduced(r, free[k]));
  }
  return basis;
}

/// Rows form a basis of {y : y a = 0}.
template <class K>
Mat<K> left_null(const K& f, const Mat<K>& a) {
  return transpose(kernel(f, transpose(a)));
}

/// For `a` of full column rank, some x with x a = I.
template <class K>
Mat<K> left_inverse(const K& f, const Mat<K>& a) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  if (k == 0) return zeros(f, 0, m);
  const auto e = rref(f, hstack(f, a, identity(f, m)));
  assert(e.pivots.size() >= k && e.pivots[k - 1] == k - 1);
  return block(e.reduced, 0, k, k, m);
}

/// For `a` of full row rank, some x with a x = I.
template <class K>
Mat<K> right_inverse(const K& f, const Mat<K>& a) {
  return transpose(left_inverse(f, transpose(a)));
}

/// Independent columns of `a` spanning its column space.
template <class K>
Mat<K> column_basis(const K& f, const Mat<K>& a) {
  if (a.empty()) return zeros(f, a.rows(), 0);
  const auto e = rref(f, a);
  Mat<K> b(a.rows(), e.pivots.size());
  for (std::size_t k = 0; k < e.pivots.size(); ++k)
    for (std::size_t i = 0; i < a.rows(); ++i) b(i, k) = a(i, e.pivots[k]);
  return b;
}

/// True iff every column of x lies in the column space of basis.
template <class K>
bool in_column_space(const K& f, const Mat<K>& basis, const Mat<K>& x) {
  if (x.cols() == 0) return true;
  return rank(f, hstack(f, basis, x)) == rank(f, basis);
}

}  // namespace la
}  // namespace nilcrystal
