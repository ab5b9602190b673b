#ifndef PSSA_LINALG_HPP
#define PSSA_LINALG_HPP

#include <Eigen/Dense>

#include "pssa/config.hpp"
#include "pssa/errors.hpp"

namespace pssa::linalg {

/// A frame is a matrix with orthonormal columns.
using Frame = Eigen::MatrixXd;

bool is_orthonormal(const Eigen::MatrixXd& V,
                    double tol = tolerances().orthonormal);

/// Orthonormal basis of the column space of M, computed by two passes of
/// modified Gram-Schmidt. Columns that are already orthonormal are returned
/// unchanged. Throws RankDeficient when the smallest singular value of M
/// falls below rank_relative times the largest.
Frame orthonormalize(const Eigen::MatrixXd& M);

/// Frame W such that [V | W] is orthogonal; V must be a frame.
Frame orthogonal_complement(const Frame& V);

struct SpectralSubspace {
  Frame frame;                     // one column per requested direction
  Eigen::VectorXd singular_values; // nondecreasing
};

/// The span of the left singular vectors of X belonging to its m smallest
/// singular values (missing singular values of a wide/short X count as
/// zero). Ties are broken deterministically: triplets are ordered by
/// singular value and then lexicographically by the sign-canonicalized
/// vector, so the subspace for m is always contained in the one for m+1.
SpectralSubspace smallest_singular_subspace(const Eigen::MatrixXd& X,
                                            Eigen::Index m);

}  // namespace pssa::linalg

#endif  // PSSA_LINALG_HPP
