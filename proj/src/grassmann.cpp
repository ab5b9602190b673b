#include "pssa/grassmann.hpp"

#include <algorithm>
#include <cmath>

namespace pssa::grassmann {

namespace {

void check_pair(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw DimensionError("grassmann: planes have different shapes");
  if (X.cols() < 1 || X.cols() > X.rows())
    throw DimensionError("grassmann: plane dimension out of range");
}

void check_planes(const std::vector<Eigen::MatrixXd>& planes) {
  if (planes.empty()) throw DimensionError("grassmann: no planes");
  for (const auto& f : planes) {
    check_pair(planes.front(), f);
    if (!linalg::is_orthonormal(f))
      throw NonOrthonormalFrame("grassmann: plane basis is not orthonormal");
  }
}

}  // namespace

Eigen::VectorXd principal_angles(const Eigen::MatrixXd& X,
                                 const Eigen::MatrixXd& Y) {
  check_pair(X, Y);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X.transpose() * Y);
  Eigen::VectorXd theta = svd.singularValues();
  // descending cosines give nondecreasing angles
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    theta(i) = std::acos(std::clamp(theta(i), 0.0, 1.0));
  return theta;
}

double chordal_distance(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  check_pair(X, Y);
  const Eigen::Index k = X.cols();
  Eigen::MatrixXd g = X.transpose() * Y;
  double s = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) s += g(i, i) * g(i, i);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      s += g(i, j) * g(i, j) + g(j, i) * g(j, i);
  return std::sqrt(std::max(0.0, static_cast<double>(k) - s));
}

double distance_to_subgrassmannian(const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& W) {
  if (X.rows() != W.rows())
    throw DimensionError("distance_to_subgrassmannian: ambient dims differ");
  const Eigen::Index k = X.cols();
  const Eigen::Index p = W.cols();
  if (k > X.rows() - p)
    throw DimensionError(
        "distance_to_subgrassmannian: G(k, n-p) holds no k-planes");
  return (X.transpose() * W).norm();
}

SubgrassmannianModel fit_subgrassmannian(
    const std::vector<Eigen::MatrixXd>& planes, Eigen::Index p) {
  check_planes(planes);
  const Eigen::Index n = planes.front().rows();
  const Eigen::Index k = planes.front().cols();
  if (p < 1 || p > n - k)
    throw DimensionError("fit_subgrassmannian: codim out of range");

  const Eigen::Index d = static_cast<Eigen::Index>(planes.size());
  Eigen::MatrixXd X(n, k * d);
  for (Eigen::Index i = 0; i < d; ++i)
    X.middleCols(i * k, k) = planes[static_cast<std::size_t>(i)];

  auto sub = linalg::smallest_singular_subspace(X, p);

  SubgrassmannianModel model;
  model.ambient_dim = n;
  model.plane_dim = k;
  model.codim = p;
  model.complement_frame = std::move(sub.frame);
  model.singular_values = std::move(sub.singular_values);
  model.per_point_errors.resize(d);
  for (Eigen::Index i = 0; i < d; ++i)
    model.per_point_errors(i) =
        (planes[static_cast<std::size_t>(i)].transpose() *
         model.complement_frame)
            .norm();
  model.total_error = model.singular_values.norm();
  return model;
}

std::vector<SubgrassmannianModel> pssa_chain(
    const std::vector<Eigen::MatrixXd>& planes, Eigen::Index p_max) {
  check_planes(planes);
  const Eigen::Index n = planes.front().rows();
  const Eigen::Index k = planes.front().cols();
  if (p_max < 1 || p_max > n - k)
    throw DimensionError("grassmann pssa_chain: p_max out of range");
  std::vector<SubgrassmannianModel> chain;
  chain.reserve(static_cast<std::size_t>(p_max));
  for (Eigen::Index p = 1; p <= p_max; ++p)
    chain.push_back(fit_subgrassmannian(planes, p));
  return chain;
}

}  // namespace pssa::grassmann
