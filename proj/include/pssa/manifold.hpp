#ifndef PSSA_MANIFOLD_HPP
#define PSSA_MANIFOLD_HPP

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pssa/polysphere.hpp"

namespace pssa {

using Json = nlohmann::ordered_json;

struct SphereDesc {
  int n = 0;  // S^n, data in R^{n+1}
};

struct GrassmannDesc {
  int k = 0;
  int n = 0;  // G(k,n)
};

struct TorusDesc {
  int n = 0;  // T^n
};

struct PolysphereDesc {
  std::vector<poly::FactorKind> factors;  // product of S^2 and S^1 factors
};

using ManifoldDescriptor =
    std::variant<SphereDesc, GrassmannDesc, TorusDesc, PolysphereDesc>;

int manifold_dim(const ManifoldDescriptor& m);
std::string manifold_label(const ManifoldDescriptor& m);
Json manifold_to_json(const ManifoldDescriptor& m);
ManifoldDescriptor manifold_from_json(const Json& j);

}  // namespace pssa

#endif  // PSSA_MANIFOLD_HPP
