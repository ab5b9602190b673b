#include "pssa/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace pssa::sphere {

namespace {

void check_dims(const Eigen::VectorXd& x, const Eigen::MatrixXd& V) {
  if (x.size() != V.rows())
    throw DimensionError("subsphere distance: ambient dimensions differ");
  if (V.cols() < 1 || V.cols() > V.rows())
    throw DimensionError("subsphere distance: bad complement dimension");
}

}  // namespace

double projection_distance_to_subsphere(const Eigen::VectorXd& x,
                                        const Eigen::MatrixXd& V) {
  check_dims(x, V);
  double s = (V.transpose() * x).norm();
  return std::clamp(s, 0.0, 1.0);
}

double riemannian_distance_to_subsphere(const Eigen::VectorXd& x,
                                        const Eigen::MatrixXd& V) {
  return std::asin(projection_distance_to_subsphere(x, V));
}

Eigen::MatrixXd validate_unit_columns(const Eigen::MatrixXd& X,
                                      bool renormalize) {
  Eigen::MatrixXd out = X;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (std::abs(norm - 1.0) <= tolerances().unit_norm) continue;
    if (!renormalize || norm <= tolerances().rank_relative)
      throw NonUnitData("column " + std::to_string(j) +
                        " is not unit norm (|x| = " + std::to_string(norm) +
                        ")");
    out.col(j) /= norm;
  }
  return out;
}

SubsphereModel fit_subsphere(const Eigen::MatrixXd& X, Eigen::Index m,
                             bool renormalize) {
  const Eigen::Index n = X.rows() - 1;  // sphere dimension
  if (X.rows() < 2 || X.cols() < 1)
    throw DimensionError("fit_subsphere: need data in R^{n+1}, n >= 1");
  if (m < 1 || m > n) throw DimensionError("fit_subsphere: codim out of range");

  const Eigen::MatrixXd data = validate_unit_columns(X, renormalize);
  auto sub = linalg::smallest_singular_subspace(data, m);

  SubsphereModel model;
  model.sphere_dim = n;
  model.codim = m;
  model.complement_frame = std::move(sub.frame);
  model.singular_values = std::move(sub.singular_values);
  model.per_point_errors.resize(data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j)
    model.per_point_errors(j) =
        projection_distance_to_subsphere(data.col(j), model.complement_frame);
  model.total_error = model.singular_values.norm();
  model.antipodal_pair = (m == n);
  return model;
}

std::vector<SubsphereModel> pssa_chain(const Eigen::MatrixXd& X,
                                       bool renormalize) {
  const Eigen::Index n = X.rows() - 1;
  if (n < 1) throw DimensionError("pssa_chain: need S^n with n >= 1");
  std::vector<SubsphereModel> chain;
  chain.reserve(static_cast<std::size_t>(std::max<Eigen::Index>(n - 1, 0)));
  for (Eigen::Index m = 1; m <= n - 1; ++m)
    chain.push_back(fit_subsphere(X, m, renormalize));
  return chain;
}

Eigen::VectorXd spherical_mean(const Eigen::MatrixXd& points) {
  if (points.cols() < 1) throw DimensionError("spherical_mean: no points");
  Eigen::VectorXd mean = points.rowwise().mean();
  const double norm = mean.norm();
  if (norm <= tolerances().degenerate_mean)
    throw DegenerateMean("spherical_mean: mean vector is numerically zero");
  return mean / norm;
}

}  // namespace pssa::sphere
