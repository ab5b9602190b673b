#ifndef PSSA_SPHERE_HPP
#define PSSA_SPHERE_HPP

#include <Eigen/Dense>
#include <vector>

#include "pssa/linalg.hpp"

namespace pssa::sphere {

/// Best-fit subsphere S_N = S^n ∩ N of codimension m, stored through an
/// orthonormal basis of the complement N^⊥ in R^{n+1}.
struct SubsphereModel {
  Eigen::Index sphere_dim = 0;  // n: the data lives on S^n ⊂ R^{n+1}
  Eigen::Index codim = 0;       // m: the fit is an (n-m)-sphere
  Eigen::MatrixXd complement_frame;  // (n+1) × m
  Eigen::VectorXd singular_values;   // the m smallest, nondecreasing
  Eigen::VectorXd per_point_errors;  // projection distances
  double total_error = 0.0;
  bool antipodal_pair = false;  // codim == sphere_dim: S^0, two antipodes
};

/// Geodesic (angular) distance from a unit vector x to the subsphere with
/// complement frame V; lies in [0, π/2].
double riemannian_distance_to_subsphere(const Eigen::VectorXd& x,
                                        const Eigen::MatrixXd& V);

/// sin of the Riemannian distance; the metric the SVD fit minimizes.
double projection_distance_to_subsphere(const Eigen::VectorXd& x,
                                        const Eigen::MatrixXd& V);

/// Best (n-m)-sphere through the data in the projection distance. Columns
/// of X are unit vectors in R^{n+1}; m may equal n, in which case the fit
/// is the antipodal pair S^0 and flagged as such. With renormalize set,
/// columns are scaled to unit length instead of rejected.
SubsphereModel fit_subsphere(const Eigen::MatrixXd& X, Eigen::Index m,
                             bool renormalize = false);

/// Nested fits for m = 1 … n-1: the chain S^{n-1} ⊃ … ⊃ S^1.
std::vector<SubsphereModel> pssa_chain(const Eigen::MatrixXd& X,
                                       bool renormalize = false);

/// Normalized Euclidean mean of the columns (extrinsic mean). Throws
/// DegenerateMean when the mean vector is numerically zero.
Eigen::VectorXd spherical_mean(const Eigen::MatrixXd& points);

/// Columns checked against unit norm (tolerance unit_norm); returns the
/// possibly renormalized matrix.
Eigen::MatrixXd validate_unit_columns(const Eigen::MatrixXd& X,
                                      bool renormalize);

}  // namespace pssa::sphere

#endif  // PSSA_SPHERE_HPP
