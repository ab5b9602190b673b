#ifndef PSSA_GRASSMANN_HPP
#define PSSA_GRASSMANN_HPP

#include <Eigen/Dense>
#include <vector>

#include "pssa/linalg.hpp"

namespace pssa::grassmann {

/// Points of G(k,n) are represented by n×k orthonormal frames; every
/// operation here depends only on the column span.

/// Principal angles θ_1 ≤ … ≤ θ_k between two k-planes,
/// cos θ_i = σ_i(X^T Y).
Eigen::VectorXd principal_angles(const Eigen::MatrixXd& X,
                                 const Eigen::MatrixXd& Y);

/// ‖sin θ‖₂ = sqrt(k - ‖X^T Y‖_F²) = ‖X^T Y⊥‖_F. The Frobenius sum is
/// accumulated symmetrically so the distance is exactly symmetric in its
/// arguments.
double chordal_distance(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

/// Chordal distance from the k-plane X to the set of k-planes orthogonal
/// to the subspace spanned by W (unsquared).
double distance_to_subgrassmannian(const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& W);

struct SubgrassmannianModel {
  Eigen::Index ambient_dim = 0;  // n
  Eigen::Index plane_dim = 0;    // k
  Eigen::Index codim = 0;        // p: the fit is G(k, n-p)
  Eigen::MatrixXd complement_frame;  // W, n × p
  Eigen::VectorXd singular_values;   // the p smallest, nondecreasing
  Eigen::VectorXd per_point_errors;
  double total_error = 0.0;
};

/// Best G(k, n-p): W spans the singular directions of the concatenated
/// frame matrix belonging to its p smallest singular values.
SubgrassmannianModel fit_subgrassmannian(
    const std::vector<Eigen::MatrixXd>& planes, Eigen::Index p);

/// Nested fits for p = 1 … p_max.
std::vector<SubgrassmannianModel> pssa_chain(
    const std::vector<Eigen::MatrixXd>& planes, Eigen::Index p_max);

}  // namespace pssa::grassmann

#endif  // PSSA_GRASSMANN_HPP
