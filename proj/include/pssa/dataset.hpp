#ifndef PSSA_DATASET_HPP
#define PSSA_DATASET_HPP

#include <optional>
#include <string>
#include <vector>

#include "pssa/manifold.hpp"

namespace pssa {

/// A parsed, validated dataset. Exactly one payload member is populated,
/// according to the manifold type.
struct Dataset {
  ManifoldDescriptor manifold;
  Eigen::MatrixXd columns;  // sphere: (n+1)×d unit columns; torus: n×d angles
  std::vector<Eigen::MatrixXd> frames;     // grassmann: n×k orthonormal
  std::vector<poly::PolyPoint> poly_points;  // polysphere
  std::vector<std::string> header;  // '#' comment lines, without the '#'

  Eigen::Index count() const;
};

/// Loads a CSV or JSON dataset (decided by file extension). CSV rows are
/// comma-separated with '.' decimals; '#' lines are comments (and may
/// declare `manifold=... n=... k=...`); blank lines separate Grassmannian
/// frames. A manifold passed by the caller must agree with the file header
/// when both are present. Torus angles are wrapped into [0,1); sphere and
/// polysphere rows are checked for unit norm unless renormalize is set.
Dataset load_dataset(const std::string& path,
                     const std::optional<ManifoldDescriptor>& manifold,
                     bool renormalize);

void save_dataset_csv(const std::string& path, const Dataset& data);
void save_dataset_json(const std::string& path, const Dataset& data);

}  // namespace pssa

#endif  // PSSA_DATASET_HPP
