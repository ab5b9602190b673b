#include "pssa/manifold.hpp"

namespace pssa {

int manifold_dim(const ManifoldDescriptor& m) {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SphereDesc>) return d.n;
        if constexpr (std::is_same_v<T, GrassmannDesc>)
          return d.k * (d.n - d.k);
        if constexpr (std::is_same_v<T, TorusDesc>) return d.n;
        if constexpr (std::is_same_v<T, PolysphereDesc>) {
          int dim = 0;
          for (auto f : d.factors) dim += f == poly::FactorKind::Sphere ? 2 : 1;
          return dim;
        }
      },
      m);
}

std::string manifold_label(const ManifoldDescriptor& m) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SphereDesc>)
          return "S" + std::to_string(d.n);
        if constexpr (std::is_same_v<T, GrassmannDesc>)
          return "G(" + std::to_string(d.k) + "," + std::to_string(d.n) + ")";
        if constexpr (std::is_same_v<T, TorusDesc>)
          return "T" + std::to_string(d.n);
        if constexpr (std::is_same_v<T, PolysphereDesc>) {
          std::string out;
          for (auto f : d.factors) {
            if (!out.empty()) out += "x";
            out += f == poly::FactorKind::Sphere ? "S2" : "S1";
          }
          return out.empty() ? "point" : out;
        }
      },
      m);
}

Json manifold_to_json(const ManifoldDescriptor& m) {
  return std::visit(
      [](const auto& d) -> Json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SphereDesc>)
          return Json{{"type", "sphere"}, {"n", d.n}};
        if constexpr (std::is_same_v<T, GrassmannDesc>)
          return Json{{"type", "grassmann"}, {"k", d.k}, {"n", d.n}};
        if constexpr (std::is_same_v<T, TorusDesc>)
          return Json{{"type", "torus"}, {"n", d.n}};
        if constexpr (std::is_same_v<T, PolysphereDesc>) {
          Json factors = Json::array();
          for (auto f : d.factors)
            factors.push_back(f == poly::FactorKind::Sphere ? "S2" : "S1");
          return Json{{"type", "polysphere"}, {"factors", factors}};
        }
      },
      m);
}

ManifoldDescriptor manifold_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "sphere") return SphereDesc{j.at("n").get<int>()};
  if (type == "grassmann")
    return GrassmannDesc{j.at("k").get<int>(), j.at("n").get<int>()};
  if (type == "torus") return TorusDesc{j.at("n").get<int>()};
  if (type == "polysphere") {
    PolysphereDesc d;
    for (const auto& f : j.at("factors")) {
      const std::string s = f.get<std::string>();
      if (s == "S2")
        d.factors.push_back(poly::FactorKind::Sphere);
      else if (s == "S1")
        d.factors.push_back(poly::FactorKind::Circle);
      else
        throw ParseError("unknown polysphere factor: " + s);
    }
    return d;
  }
  throw ParseError("unknown manifold type: " + type);
}

}  // namespace pssa
