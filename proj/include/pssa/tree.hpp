#ifndef PSSA_TREE_HPP
#define PSSA_TREE_HPP

#include <cstdint>
#include <optional>

#include "pssa/dataset.hpp"
#include "pssa/serialize.hpp"

namespace pssa::tree {

enum class Selection { Loo, TrainingError };

enum class SphereTerminal { AntipodalPair, Mean };

struct PssaConfig {
  int max_children_per_node = 3;
  exact::Int resonance_bound = 4;
  int min_dim = 0;
  Selection selection = Selection::Loo;
  std::uint64_t seed = 0;
  int max_couplings = 1;
  int max_resonance_codim = 1;
  SphereTerminal sphere_terminal = SphereTerminal::AntipodalPair;
};

struct PssaNode {
  std::string label;
  int dim = 0;
  double fit_error = 0.0;
  std::optional<double> loo_error;
  Json model;  // family-specific parameters
  std::vector<std::string> warnings;
  std::vector<PssaNode> children;
};

/// The rooted tree of nested symmetric space approximations. The root is
/// the whole manifold; children are the ranked best fits per enumerated
/// model type (truncated to max_children_per_node); recursion happens in
/// the intrinsic coordinates of each child, down to min_dim.
///
/// For spheres, Grassmannians and nested torus reductions the recursion
/// collapses to a chain read off one SVD (or prefix-stable circular
/// means), so node errors match the module-level chain fits; polysphere
/// nodes genuinely branch and re-fit after projection.
PssaNode build_tree(const Dataset& data, const PssaConfig& config);

Json config_to_json(const PssaConfig& config);
Json serialize_tree(const PssaNode& root, const ManifoldDescriptor& manifold,
                    const PssaConfig& config);

struct ParsedTree {
  ManifoldDescriptor manifold;
  Json provenance;
  PssaNode root;
};
ParsedTree parse_tree(const Json& doc);

// --- projections onto fitted submanifolds (and lifts back) ---

/// Orthonormal basis of the subsphere's plane N (complement of the model
/// frame); the columns chart S^{n-m} in R^{n+1-m}.
Eigen::MatrixXd subsphere_basis(const sphere::SubsphereModel& model);
Eigen::VectorXd project_to_subsphere(const Eigen::VectorXd& x,
                                     const Eigen::MatrixXd& basis);
Eigen::VectorXd lift_from_subsphere(const Eigen::VectorXd& intrinsic,
                                    const Eigen::MatrixXd& basis);

/// Basis of the complement of W; charts G(k, n-p) inside G(k, n).
Eigen::MatrixXd subgrassmannian_basis(
    const grassmann::SubgrassmannianModel& model);
Eigen::MatrixXd project_to_subgrassmannian(const Eigen::MatrixXd& frame,
                                           const Eigen::MatrixXd& basis);

/// Intrinsic angles of x on the subtorus {Ax = c}: y = Cx with the
/// constrained rows dropped. C must extend the model's A.
Eigen::VectorXd project_to_subtorus(const Eigen::VectorXd& x,
                                    const torus::SubtorusModel& model,
                                    const exact::IntMat& C);
Eigen::VectorXd lift_from_subtorus(const Eigen::VectorXd& intrinsic,
                                   const torus::SubtorusModel& model,
                                   const exact::IntMat& C);

}  // namespace pssa::tree

#endif  // PSSA_TREE_HPP
