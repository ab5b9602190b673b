#ifndef PSSA_TORUS_HPP
#define PSSA_TORUS_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "pssa/exact.hpp"

namespace pssa::torus {

using exact::Int;
using exact::IntMat;
using exact::Rat;
using exact::RatMat;

/// Angles are fractions of a full turn; points of T^n live in [0,1)^n.

inline double wrap_unit(double x) {
  double w = x - std::floor(x);
  return w < 1.0 ? w : 0.0;
}

/// Wraps into (-1/2, 1/2].
inline double wrap_centered(double x) { return x - std::ceil(x - 0.5); }

/// Chordal circle distance d_c(a,b) = (1/2) sin(pi |a-b|), wrap-aware.
inline double circle_distance(double a, double b) {
  return 0.5 * std::sin(M_PI * std::abs(wrap_centered(a - b)));
}

/// True iff the gcd of all k×k minors of A is 1 (exact arithmetic).
bool is_unimodular(const IntMat& A);

/// Exact dual-lattice basis B = A^T (A A^T)^{-1}; columns lie in the row
/// span of A and satisfy A B = I_k exactly.
RatMat dual_lattice_basis(const IntMat& A);

/// Extends the unimodular k×n matrix A by n-k integer rows to a matrix of
/// determinant ±1. The completion comes from the Hermite-normal-form
/// transform of A^T and is verified by an exact determinant.
IntMat complete_to_unimodular(const IntMat& A);

/// Circular (Karcher) mean of angles in [0,1).
double circular_mean(const Eigen::VectorXd& angles);

struct SubtorusModel {
  IntMat A;                  // k×n resonance relations, unimodular
  Eigen::VectorXd offset;    // c in [0,1)^k
  Eigen::VectorXd per_point_errors;
  Eigen::VectorXd per_direction_errors;  // RMS of d_c per resonance row
  double mean_error = 0.0;               // RMS of per-point errors
  std::optional<double> loo_error;
};

/// e(x) = || (1/2) sin(pi (A x - c)) ||_2 with the rows wrapped into
/// (-1/2, 1/2]; lies in [0, sqrt(k)/2].
double subtorus_residual(const Eigen::VectorXd& x, const SubtorusModel& model);

/// Best subtorus {A x = c} in the metric d_C: c is the componentwise
/// circular mean of A x_i. Columns of X are points of T^n.
SubtorusModel fit_subtorus(const Eigen::MatrixXd& X, const IntMat& A);

/// All unimodular k×n matrices with entries strictly below `bound` in
/// absolute value, deduplicated up to GL(k,Z) row equivalence via the
/// Hermite normal form. Returned in canonical form, sorted.
std::vector<IntMat> enumerate_resonances(Eigen::Index n, Eigen::Index k,
                                         const Int& bound);

struct RankedResonance {
  IntMat A;
  double loo_error = 0.0;
};

struct SelectionResult {
  std::vector<RankedResonance> ranked;  // ascending loo error
  std::vector<IntMat> skipped;          // degenerate circular means
};

/// Leave-one-out scoring of candidate resonance matrices: for each left-out
/// point the model is refit on the rest and its prediction error recorded;
/// the score is ||e||_2 / sqrt(d). Candidates are evaluated in parallel and
/// ranked deterministically (ties by canonical form).
SelectionResult loo_model_selection(const Eigen::MatrixXd& X,
                                    const std::vector<IntMat>& candidates);

/// Nested models A_k = first k rows of the determinant-±1 matrix C, for
/// k = 1 … n-1. Offsets are prefix-stable across the chain.
std::vector<SubtorusModel> nested_chain(const Eigen::MatrixXd& X,
                                        const IntMat& C);

/// Replaces A by Z A with Z in GL(k,Z) so the rows are more nearly
/// orthogonal: Lagrange reduction for k = 2 (optimal), LLL with delta = 3/4
/// for larger k. The row lattice is unchanged.
IntMat reduce_resonance_basis(const IntMat& A);

/// Exact nearest lattice point to `target` in the lattice spanned by the
/// columns of B, by exhaustive enumeration (testing aid, k ≤ 3 only).
Eigen::VectorXd cvp_oracle(const RatMat& B, const Eigen::VectorXd& target);

}  // namespace pssa::torus

#endif  // PSSA_TORUS_HPP
