#ifndef PSSA_EXACT_HPP
#define PSSA_EXACT_HPP

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "pssa/errors.hpp"

namespace pssa::exact {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Small dense matrix over an exact scalar. Lattice sizes here are tiny,
/// so all arithmetic is plain loops; Eigen is used only for floating-point
/// work (its expression machinery does not instantiate cleanly against the
/// system Boost's multiprecision types).
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(Eigen::Index rows, Eigen::Index cols)
      : rows_(rows), cols_(cols),
        a_(static_cast<std::size_t>(rows * cols), T(0)) {}
  Mat(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = static_cast<Eigen::Index>(rows.size());
    cols_ = rows_ > 0 ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
    a_.reserve(static_cast<std::size_t>(rows_ * cols_));
    for (const auto& r : rows) {
      if (static_cast<Eigen::Index>(r.size()) != cols_)
        throw DimensionError("exact::Mat: ragged initializer");
      for (const auto& v : r) a_.push_back(v);
    }
  }

  static Mat identity(Eigen::Index n) {
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  T& operator()(Eigen::Index i, Eigen::Index j) {
    return a_[static_cast<std::size_t>(i * cols_ + j)];
  }
  const T& operator()(Eigen::Index i, Eigen::Index j) const {
    return a_[static_cast<std::size_t>(i * cols_ + j)];
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i)
      for (Eigen::Index j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat top_rows(Eigen::Index k) const {
    Mat t(k, cols_);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < cols_; ++j) t(i, j) = (*this)(i, j);
    return t;
  }

  void swap_rows(Eigen::Index i, Eigen::Index j) {
    for (Eigen::Index c = 0; c < cols_; ++c)
      std::swap((*this)(i, c), (*this)(j, c));
  }

  void swap_cols(Eigen::Index i, Eigen::Index j) {
    for (Eigen::Index r = 0; r < rows_; ++r)
      std::swap((*this)(r, i), (*this)(r, j));
  }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw DimensionError("exact::Mat: size mismatch");
    Mat c(a.rows_, b.cols_);
    for (Eigen::Index i = 0; i < a.rows_; ++i)
      for (Eigen::Index k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (Eigen::Index j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  /// Row-major lexicographic order; gives enumeration a stable total order.
  friend bool operator<(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return a.a_ < b.a_;
  }

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<T> a_;
};

using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;

RatMat to_rational(const IntMat& a);
Eigen::MatrixXd to_double(const IntMat& a);
Eigen::MatrixXd to_double(const RatMat& a);

/// Nearest integer; halves round away from zero.
Int round_nearest(const Rat& q);

/// Floor of a/b for b > 0.
Int floor_div(const Int& a, const Int& b);

/// Exact determinant by fraction-free (Bareiss) elimination.
Int determinant(IntMat a);

/// gcd of all k×k minors of a k×n matrix (k ≤ n); 0 for rank-deficient
/// input. Stops early once the running gcd reaches 1.
Int minor_gcd(const IntMat& a);

/// Row-style Hermite normal form: pivots positive, entries above each
/// pivot reduced into [0, pivot). Canonical representative of the row
/// lattice under GL(k,Z); used for deduplication and lattice equality.
IntMat hnf(IntMat a);

struct HnfTransform {
  IntMat h;     // z * input = h
  IntMat z;     // unimodular
  IntMat zinv;  // exact inverse of z
};
HnfTransform hnf_with_transform(IntMat a);

bool same_row_lattice(const IntMat& a, const IntMat& b);

/// Gauss-Jordan inverse over the rationals; throws SingularGram.
RatMat inverse(RatMat a);

/// Inverse of a determinant-±1 integer matrix, exact and integral.
IntMat inverse_unimodular(const IntMat& a);

/// Lagrange(-Gauss) reduction of a 2-row lattice basis; optimal for rank 2.
IntMat lagrange_reduce(IntMat basis);

/// LLL reduction of the row basis with parameter delta (classical 3/4
/// default). Gram-Schmidt data is kept in exact rationals, so the reduction
/// is deterministic and the returned rows span the same lattice.
IntMat lll_reduce(IntMat basis, const Rat& delta = Rat(3, 4));

}  // namespace pssa::exact

#endif  // PSSA_EXACT_HPP
