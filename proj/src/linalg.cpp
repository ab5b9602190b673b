#include "pssa/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace pssa::linalg {

bool is_orthonormal(const Eigen::MatrixXd& V, double tol) {
  if (V.cols() == 0) return true;
  Eigen::MatrixXd g = V.transpose() * V;
  g.diagonal().array() -= 1.0;
  return g.norm() <= tol;
}

Frame orthonormalize(const Eigen::MatrixXd& M) {
  if (M.rows() == 0 || M.cols() == 0)
    throw DimensionError("orthonormalize: empty matrix");
  if (M.cols() > M.rows())
    throw RankDeficient("orthonormalize: more columns than rows");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= tolerances().rank_relative * sv(0))
    throw RankDeficient("orthonormalize: rank-deficient input");

  Frame V = M;
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i)
        V.col(j) -= V.col(i).dot(V.col(j)) * V.col(i);
      V.col(j).normalize();
    }
  }
  return V;
}

Frame orthogonal_complement(const Frame& V) {
  if (!is_orthonormal(V))
    throw NonOrthonormalFrame("orthogonal_complement: input is not a frame");
  const Eigen::Index n = V.rows();
  const Eigen::Index m = V.cols();
  if (m >= n) return Frame(n, 0);
  // Householder Q is orthogonal to machine precision; its trailing columns
  // complement the column space of V.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - m);
}

namespace {

// First component larger than 1e-12 in absolute value is made positive.
void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

SpectralSubspace smallest_singular_subspace(const Eigen::MatrixXd& X,
                                            Eigen::Index m) {
  const Eigen::Index n = X.rows();
  if (n == 0 || X.cols() == 0)
    throw DimensionError("smallest_singular_subspace: empty matrix");
  if (m < 1 || m > n)
    throw DimensionError("smallest_singular_subspace: m out of range");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeFullU);
  Eigen::MatrixXd u = svd.matrixU();
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n);
  sigma.head(svd.singularValues().size()) = svd.singularValues();
  for (Eigen::Index j = 0; j < n; ++j) canonicalize_sign(u.col(j));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     if (sigma(a) != sigma(b)) return sigma(a) < sigma(b);
                     return std::lexicographical_compare(
                         u.col(a).begin(), u.col(a).end(), u.col(b).begin(),
                         u.col(b).end());
                   });

  SpectralSubspace out;
  out.frame.resize(n, m);
  out.singular_values.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.frame.col(j) = u.col(order[static_cast<std::size_t>(j)]);
    out.singular_values(j) = sigma(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

}  // namespace pssa::linalg
