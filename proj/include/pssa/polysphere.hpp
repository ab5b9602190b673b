#ifndef PSSA_POLYSPHERE_HPP
#define PSSA_POLYSPHERE_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pssa/torus.hpp"

namespace pssa::poly {

using torus::Int;
using torus::IntMat;

/// A point of (S^2)^n: one unit vector per factor.
using PolyPoint = std::vector<Eigen::Vector3d>;

// ---------------------------------------------------------------------------
// Tangent algebra
// ---------------------------------------------------------------------------

/// Tangent block vectors m(ξ_1,…,ξ_n) are stored as 2×n matrices, one
/// column per factor. Checks whether the span of the basis is closed under
/// the triple bracket [[u,v],w], evaluated blockwise per factor; this is
/// the Lie-triple-system criterion for a totally geodesic submanifold
/// through the base point.
bool lie_triple_check(const std::vector<Eigen::Matrix2Xd>& basis);

/// [[u,v],w], blockwise.
Eigen::Matrix2Xd triple_bracket(const Eigen::Matrix2Xd& u,
                                const Eigen::Matrix2Xd& v,
                                const Eigen::Matrix2Xd& w);

// ---------------------------------------------------------------------------
// Per-type fitters
// ---------------------------------------------------------------------------

struct ProcrustesFit {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // R in O(3)
  double error = 0.0;           // sum of squared great-circle distances
  bool well_determined = true;  // false when the cross-covariance degenerates
};

/// argmin over O(3) of Σ ‖y_i − R x_i‖² via the SVD of Σ y_i x_iᵀ; both
/// determinant branches are compared in the reported great-circle error.
ProcrustesFit fit_coupled_spheres(const Eigen::Matrix3Xd& x,
                                  const Eigen::Matrix3Xd& y);

struct PointFit {
  Eigen::Vector3d point;
  double error = 0.0;  // sum of squared great-circle distances
};

PointFit fit_fixed_factor(const Eigen::Matrix3Xd& points);

struct CircleFit {
  Eigen::Vector3d axis;
  double error = 0.0;  // 2-norm of projection distances
};

CircleFit fit_circle_factor(const Eigen::Matrix3Xd& points);

struct CircleFrame {
  Eigen::Vector3d u, v;  // orthonormal basis of the plane normal to axis
};

/// Deterministic chart of the great circle normal to `axis`:
/// u = normalize(e_z × axis), falling back to e_x × axis near ±e_z.
CircleFrame circle_frame(const Eigen::Vector3d& axis);

/// Angle (fraction of a turn) of each point projected to the circle.
Eigen::VectorXd angles_on_circle(const Eigen::Matrix3Xd& points,
                                 const Eigen::Vector3d& axis);

// ---------------------------------------------------------------------------
// Model templates on products of S^2 and S^1 factors
// ---------------------------------------------------------------------------

enum class FactorKind { Sphere, Circle };

/// Dataset at a polysphere node. Sphere factors carry unit 3-vectors,
/// circle factors carry angles.
struct MixedData {
  std::vector<FactorKind> shape;
  std::vector<Eigen::Matrix3Xd> spheres;  // one per Sphere factor, in order
  Eigen::MatrixXd angles;                 // (#Circle factors) × d
  std::vector<Eigen::Index> slot;         // factor index -> slot in its kind

  Eigen::Index count() const;
  static MixedData from_points(const std::vector<PolyPoint>& pts);
  MixedData without_point(Eigen::Index i) const;
};

struct ResonanceSpec {
  std::vector<int> factors;  // circle factors, ascending
  IntMat A;                  // unimodular, no zero column
};

struct TemplateSpec {
  enum class Action { Keep, ToCircle, ToPoint, Coupled };
  std::vector<Action> actions;                 // one per factor
  std::vector<std::pair<int, int>> couplings;  // disjoint sphere pairs
  std::optional<ResonanceSpec> resonance;

  int dim(const std::vector<FactorKind>& shape) const;
  bool is_identity() const;
  std::string label(const std::vector<FactorKind>& shape) const;
};

struct EnumOptions {
  Int resonance_bound = 3;
  int max_resonance_codim = 1;
  int max_couplings = 1;
};

/// Every admissible template on the given factor shape: per-factor
/// reductions (S²→S¹, S²→point, S¹→point), couplings of sphere-factor
/// pairs by a fixed orthogonal map, and resonances among circle factors
/// (delegated to the torus enumeration). Includes the identity template;
/// deterministic order.
std::vector<TemplateSpec> enumerate_models(const std::vector<FactorKind>& shape,
                                           const EnumOptions& options);

/// Root enumeration for (S^2)^n.
std::vector<TemplateSpec> enumerate_models(int n, const EnumOptions& options);

// ---------------------------------------------------------------------------
// Fitted models
// ---------------------------------------------------------------------------

struct CoupledSpheres {
  int i, j;
  Eigen::Matrix3d rotation;
  double error = 0.0;
  bool well_determined = true;
};

struct FixedFactor {
  int i;
  Eigen::Vector3d point;
  double error = 0.0;
};

struct CircleFactor {
  int i;
  Eigen::Vector3d axis;
  double error = 0.0;
};

struct FixedAngle {
  int i;
  double angle = 0.0;
  double error = 0.0;
};

struct TorusResonance {
  std::vector<int> factors;
  torus::SubtorusModel model;
};

using Constraint = std::variant<CoupledSpheres, FixedFactor, CircleFactor,
                                FixedAngle, TorusResonance>;

struct PolysphereModel {
  TemplateSpec spec;
  std::vector<Constraint> constraints;
  /// Aggregate per-point residuals: each constrained factor contributes a
  /// chordal-type residual on a [0,1] scale and the contributions combine
  /// in quadrature. Per-constraint errors in their native metrics live on
  /// the constraints themselves.
  Eigen::VectorXd per_point_errors;
  double total_error = 0.0;  // l2 norm of per-point errors
  std::optional<double> loo_error;
};

PolysphereModel fit_model(const MixedData& data, const TemplateSpec& spec);
PolysphereModel fit_model(const std::vector<PolyPoint>& pts,
                          const TemplateSpec& spec);

/// Leave-one-out score ‖e‖₂/√d of a template (refits d times).
double loo_score(const MixedData& data, const TemplateSpec& spec);

/// Data in the intrinsic coordinates of the fitted submanifold; the factor
/// shape shrinks according to the model's constraints.
MixedData project(const MixedData& data, const PolysphereModel& model);

}  // namespace pssa::poly

#endif  // PSSA_POLYSPHERE_HPP
