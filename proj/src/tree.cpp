#include "pssa/tree.hpp"

#include <algorithm>
#include <cmath>

#include "pssa/parallel.hpp"

namespace pssa::tree {

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

Eigen::MatrixXd subsphere_basis(const sphere::SubsphereModel& model) {
  return linalg::orthogonal_complement(model.complement_frame);
}

Eigen::VectorXd project_to_subsphere(const Eigen::VectorXd& x,
                                     const Eigen::MatrixXd& basis) {
  Eigen::VectorXd coords = basis.transpose() * x;
  const double norm = coords.norm();
  if (norm < tolerances().projection)
    throw DegenerateProjection("project_to_subsphere: point orthogonal to N");
  return coords / norm;
}

Eigen::VectorXd lift_from_subsphere(const Eigen::VectorXd& intrinsic,
                                    const Eigen::MatrixXd& basis) {
  return basis * intrinsic;
}

Eigen::MatrixXd subgrassmannian_basis(
    const grassmann::SubgrassmannianModel& model) {
  return linalg::orthogonal_complement(model.complement_frame);
}

Eigen::MatrixXd project_to_subgrassmannian(const Eigen::MatrixXd& frame,
                                           const Eigen::MatrixXd& basis) {
  // nearest k-plane orthogonal to W: drop the W components, re-orthonormalize
  Eigen::MatrixXd projected = basis.transpose() * frame;
  try {
    return linalg::orthonormalize(projected);
  } catch (const RankDeficient&) {
    throw DegenerateProjection(
        "project_to_subgrassmannian: plane degenerates under projection");
  }
}

Eigen::VectorXd project_to_subtorus(const Eigen::VectorXd& x,
                                    const torus::SubtorusModel& model,
                                    const exact::IntMat& C) {
  const Eigen::Index k = model.A.rows();
  const Eigen::Index n = C.rows();
  Eigen::VectorXd y = exact::to_double(C) * x;
  Eigen::VectorXd intrinsic(n - k);
  for (Eigen::Index i = k; i < n; ++i)
    intrinsic(i - k) = torus::wrap_unit(y(i));
  return intrinsic;
}

Eigen::VectorXd lift_from_subtorus(const Eigen::VectorXd& intrinsic,
                                   const torus::SubtorusModel& model,
                                   const exact::IntMat& C) {
  const Eigen::Index k = model.A.rows();
  const Eigen::Index n = C.rows();
  Eigen::VectorXd y(n);
  y.head(k) = model.offset;
  y.tail(n - k) = intrinsic;
  const Eigen::MatrixXd Cinv = exact::to_double(exact::inverse_unimodular(C));
  Eigen::VectorXd x = Cinv * y;
  for (Eigen::Index i = 0; i < n; ++i) x(i) = torus::wrap_unit(x(i));
  return x;
}

// ---------------------------------------------------------------------------
// Family-specific tree builders
// ---------------------------------------------------------------------------

namespace {

PssaNode sphere_terminal_node(const Eigen::MatrixXd& X,
                              const PssaConfig& config,
                              std::vector<std::string>& parent_warnings) {
  PssaNode node;
  node.dim = 0;
  if (config.sphere_terminal == SphereTerminal::AntipodalPair) {
    const Eigen::Index n = X.rows() - 1;
    auto model = sphere::fit_subsphere(X, n);
    node.label = "S0";
    node.fit_error = model.total_error;
    node.model = to_json(model);
    node.model["note"] = "antipodal pair";
    return node;
  }
  try {
    const Eigen::VectorXd mean = sphere::spherical_mean(X);
    double err = 0.0;
    for (Eigen::Index i = 0; i < X.cols(); ++i) {
      const double d = std::acos(std::clamp(X.col(i).dot(mean), -1.0, 1.0));
      err += d * d;
    }
    node.label = "point";
    node.fit_error = std::sqrt(err);
    node.model = Json{{"type", "spherical_mean"},
                      {"point", vector_to_json(mean)},
                      {"metric", "riemannian"}};
    return node;
  } catch (const DegenerateMean& e) {
    parent_warnings.push_back(std::string("terminal mean skipped: ") +
                              e.what());
    node.label = "none";
    node.dim = -1;  // sentinel: caller drops it
    return node;
  }
}

PssaNode build_sphere_tree(const Dataset& data, const PssaConfig& config) {
  const Eigen::MatrixXd& X = data.columns;
  const int n = static_cast<int>(X.rows()) - 1;

  PssaNode root;
  root.label = "S" + std::to_string(n);
  root.dim = n;
  root.fit_error = 0.0;
  root.model = Json{{"type", "manifold"}};

  PssaNode* current = &root;
  const auto chain = sphere::pssa_chain(X);
  for (const auto& model : chain) {
    const int dim = static_cast<int>(model.sphere_dim - model.codim);
    if (dim < config.min_dim) return root;
    PssaNode node;
    node.label = "S" + std::to_string(dim);
    node.dim = dim;
    node.fit_error = model.total_error;
    node.model = to_json(model);
    current->children.push_back(std::move(node));
    current = &current->children.back();
  }
  if (config.min_dim <= 0 && n >= 1) {
    PssaNode terminal = sphere_terminal_node(X, config, current->warnings);
    if (terminal.dim == 0) current->children.push_back(std::move(terminal));
  }
  return root;
}

PssaNode build_grassmann_tree(const Dataset& data, const PssaConfig& config) {
  const auto& desc = std::get<GrassmannDesc>(data.manifold);
  const int k = desc.k;
  const int n = desc.n;

  PssaNode root;
  root.label = "G(" + std::to_string(k) + "," + std::to_string(n) + ")";
  root.dim = k * (n - k);
  root.fit_error = 0.0;
  root.model = Json{{"type", "manifold"}};

  PssaNode* current = &root;
  if (n - k < 1) return root;
  const auto chain = grassmann::pssa_chain(data.frames, n - k);
  for (const auto& model : chain) {
    const int m = n - static_cast<int>(model.codim);
    const int dim = k * (m - k);
    if (dim < config.min_dim) return root;
    PssaNode node;
    node.label = "G(" + std::to_string(k) + "," + std::to_string(m) + ")";
    node.dim = dim;
    node.fit_error = model.total_error;
    node.model = to_json(model);
    current->children.push_back(std::move(node));
    current = &current->children.back();
  }
  return root;
}

// Torus recursion state: `transform` maps original angles to the current
// node's intrinsic angles; `ambient` collects the accumulated resonance
// rows so node errors are measured against the original data (and are
// monotone along any branch).
struct TorusLevel {
  Eigen::MatrixXd intrinsic;  // current angles, (n_level × d)
  exact::IntMat transform;    // n_level × n_root
};

void build_torus_children(PssaNode& node, const TorusLevel& level,
                          const Eigen::MatrixXd& root_data,
                          const exact::IntMat& ambient,
                          const PssaConfig& config) {
  const Eigen::Index n = level.intrinsic.rows();
  if (n < 1 || node.dim - 1 < config.min_dim) return;

  const auto candidates =
      torus::enumerate_resonances(n, 1, config.resonance_bound);
  if (candidates.empty()) return;

  struct Scored {
    exact::IntMat A;
    std::optional<double> loo;
  };
  std::vector<Scored> picked;
  if (config.selection == Selection::Loo && level.intrinsic.cols() >= 2) {
    auto sel = torus::loo_model_selection(level.intrinsic, candidates);
    for (const auto& r : sel.ranked) picked.push_back({r.A, r.loo_error});
    for (const auto& s : sel.skipped) {
      std::string txt = "candidate skipped (degenerate mean): [";
      for (Eigen::Index j = 0; j < s.cols(); ++j)
        txt += (j ? "," : "") + s(0, j).str();
      node.warnings.push_back(txt + "]");
    }
  } else {
    struct Fit {
      exact::IntMat A;
      double err;
      bool ok;
    };
    std::vector<Fit> fits;
    for (const auto& A : candidates) {
      try {
        fits.push_back({A, torus::fit_subtorus(level.intrinsic, A).mean_error,
                        true});
      } catch (const NumericalError&) {
      }
    }
    std::sort(fits.begin(), fits.end(), [](const Fit& a, const Fit& b) {
      if (a.err != b.err) return a.err < b.err;
      return a.A < b.A;
    });
    for (const auto& f : fits) picked.push_back({f.A, std::nullopt});
  }

  const int take =
      std::min<int>(config.max_children_per_node, static_cast<int>(picked.size()));
  for (int c = 0; c < take; ++c) {
    const exact::IntMat& A = picked[static_cast<std::size_t>(c)].A;
    try {
      // resonance rows in the coordinates of the original torus
      const exact::IntMat ambient_row = A * level.transform;
      exact::IntMat stacked(ambient.rows() + 1, ambient.cols());
      for (Eigen::Index i = 0; i < ambient.rows(); ++i)
        for (Eigen::Index j = 0; j < ambient.cols(); ++j)
          stacked(i, j) = ambient(i, j);
      for (Eigen::Index j = 0; j < ambient.cols(); ++j)
        stacked(ambient.rows(), j) = ambient_row(0, j);

      auto cumulative = torus::fit_subtorus(root_data, stacked);
      auto local = torus::fit_subtorus(level.intrinsic, A);

      PssaNode child;
      child.dim = static_cast<int>(n) - 1;
      child.label = child.dim == 0 ? "point" : "T" + std::to_string(child.dim);
      child.fit_error = cumulative.mean_error;
      child.loo_error = picked[static_cast<std::size_t>(c)].loo;
      child.model = to_json(cumulative);
      child.model["A_intrinsic"] = intmat_to_json(A);
      child.model["offset_intrinsic"] = vector_to_json(local.offset);

      if (child.dim > 0) {
        const exact::IntMat C = torus::complete_to_unimodular(A);
        TorusLevel next;
        // the unconstrained rows of C chart the intrinsic torus
        exact::IntMat bottom(C.rows() - 1, C.cols());
        for (Eigen::Index i = 1; i < C.rows(); ++i)
          for (Eigen::Index j = 0; j < C.cols(); ++j)
            bottom(i - 1, j) = C(i, j);
        next.transform = bottom * level.transform;
        next.intrinsic.resize(n - 1, level.intrinsic.cols());
        const Eigen::MatrixXd y =
            exact::to_double(bottom) * level.intrinsic;
        for (Eigen::Index i = 0; i < y.rows(); ++i)
          for (Eigen::Index p = 0; p < y.cols(); ++p)
            next.intrinsic(i, p) = torus::wrap_unit(y(i, p));
        build_torus_children(child, next, root_data, stacked, config);
      }
      node.children.push_back(std::move(child));
    } catch (const NumericalError& e) {
      node.warnings.push_back(std::string("child fit failed: ") + e.what());
    }
  }
}

PssaNode build_torus_tree(const Dataset& data, const PssaConfig& config) {
  const int n = static_cast<int>(data.columns.rows());
  PssaNode root;
  root.label = "T" + std::to_string(n);
  root.dim = n;
  root.fit_error = 0.0;
  root.model = Json{{"type", "manifold"}};

  TorusLevel level;
  level.intrinsic = data.columns;
  level.transform = exact::IntMat::identity(n);
  exact::IntMat ambient(0, n);
  build_torus_children(root, level, data.columns, ambient, config);
  return root;
}

void build_poly_children(PssaNode& node, const poly::MixedData& data,
                         const PssaConfig& config) {
  if (node.dim <= config.min_dim) return;

  poly::EnumOptions options;
  options.resonance_bound = config.resonance_bound;
  options.max_resonance_codim = config.max_resonance_codim;
  options.max_couplings = config.max_couplings;
  const auto all = poly::enumerate_models(data.shape, options);

  std::vector<poly::TemplateSpec> specs;
  for (const auto& t : all) {
    const int dim = t.dim(data.shape);
    if (dim >= config.min_dim && dim < node.dim) specs.push_back(t);
  }

  struct Scored {
    bool ok = false;
    poly::PolysphereModel model;
    double rank_key = 0.0;
    std::string warning;
  };
  std::vector<Scored> scored(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) {
    try {
      auto model = poly::fit_model(data, specs[i]);
      if (config.selection == Selection::Loo && data.count() >= 2) {
        model.loo_error = poly::loo_score(data, specs[i]);
        scored[i].rank_key = *model.loo_error;
      } else {
        scored[i].rank_key = model.total_error;
      }
      scored[i].model = std::move(model);
      scored[i].ok = true;
    } catch (const NumericalError& e) {
      scored[i].warning = e.what();
    }
  });

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].ok)
      order.push_back(i);
    else if (!scored[i].warning.empty())
      node.warnings.push_back("template " + specs[i].label(data.shape) +
                              " skipped: " + scored[i].warning);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a].rank_key != scored[b].rank_key)
      return scored[a].rank_key < scored[b].rank_key;
    return a < b;  // enumeration order as the deterministic tie break
  });

  const std::size_t take = std::min<std::size_t>(
      static_cast<std::size_t>(config.max_children_per_node), order.size());
  for (std::size_t c = 0; c < take; ++c) {
    const auto& entry = scored[order[c]];
    PssaNode child;
    child.label = entry.model.spec.label(data.shape);
    child.dim = entry.model.spec.dim(data.shape);
    child.fit_error = entry.model.total_error;
    child.loo_error = entry.model.loo_error;
    child.model = to_json(entry.model);
    if (child.dim > config.min_dim) {
      try {
        const poly::MixedData projected = poly::project(data, entry.model);
        build_poly_children(child, projected, config);
      } catch (const NumericalError& e) {
        child.warnings.push_back(std::string("projection failed: ") +
                                 e.what());
      }
    }
    node.children.push_back(std::move(child));
  }
}

PssaNode build_poly_tree(const Dataset& data, const PssaConfig& config) {
  const auto mixed = poly::MixedData::from_points(data.poly_points);
  PssaNode root;
  root.label = manifold_label(data.manifold);
  root.dim = manifold_dim(data.manifold);
  root.fit_error = 0.0;
  root.model = Json{{"type", "manifold"}};
  build_poly_children(root, mixed, config);
  return root;
}

}  // namespace

PssaNode build_tree(const Dataset& data, const PssaConfig& config) {
  if (data.count() < 1) throw DimensionError("build_tree: empty dataset");
  return std::visit(
      [&](const auto& m) -> PssaNode {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SphereDesc>)
          return build_sphere_tree(data, config);
        else if constexpr (std::is_same_v<T, GrassmannDesc>)
          return build_grassmann_tree(data, config);
        else if constexpr (std::is_same_v<T, TorusDesc>)
          return build_torus_tree(data, config);
        else
          return build_poly_tree(data, config);
      },
      data.manifold);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

Json config_to_json(const PssaConfig& config) {
  Json j;
  j["max_children_per_node"] = config.max_children_per_node;
  j["resonance_bound"] = config.resonance_bound.convert_to<long long>();
  j["min_dim"] = config.min_dim;
  j["selection"] =
      config.selection == Selection::Loo ? "loo" : "training-error";
  j["seed"] = config.seed;
  j["max_couplings"] = config.max_couplings;
  j["max_resonance_codim"] = config.max_resonance_codim;
  j["sphere_terminal"] =
      config.sphere_terminal == SphereTerminal::AntipodalPair ? "antipodal"
                                                              : "mean";
  return j;
}

namespace {

Json node_to_json(const PssaNode& node) {
  Json j;
  j["label"] = node.label;
  j["dim"] = node.dim;
  j["fit_error"] = node.fit_error;
  if (node.loo_error) j["loo_error"] = *node.loo_error;
  j["model"] = node.model;
  if (!node.warnings.empty()) j["warnings"] = node.warnings;
  Json children = Json::array();
  for (const auto& child : node.children)
    children.push_back(node_to_json(child));
  j["children"] = std::move(children);
  return j;
}

PssaNode node_from_json(const Json& j) {
  PssaNode node;
  node.label = j.at("label").get<std::string>();
  node.dim = j.at("dim").get<int>();
  node.fit_error = j.at("fit_error").get<double>();
  if (j.contains("loo_error"))
    node.loo_error = j.at("loo_error").get<double>();
  node.model = j.at("model");
  if (j.contains("warnings"))
    node.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& child : j.at("children"))
    node.children.push_back(node_from_json(child));
  return node;
}

}  // namespace

Json serialize_tree(const PssaNode& root, const ManifoldDescriptor& manifold,
                    const PssaConfig& config) {
  Json doc;
  doc["schema"] = "pssa-tree/1";
  doc["manifold"] = manifold_to_json(manifold);
  doc["provenance"] = Json{{"config", config_to_json(config)}};
  doc["tree"] = node_to_json(root);
  return doc;
}

ParsedTree parse_tree(const Json& doc) {
  if (!doc.contains("schema") ||
      doc.at("schema").get<std::string>() != "pssa-tree/1")
    throw ParseError("not a pssa-tree/1 document");
  ParsedTree out;
  out.manifold = manifold_from_json(doc.at("manifold"));
  out.provenance = doc.at("provenance");
  out.root = node_from_json(doc.at("tree"));
  return out;
}

}  // namespace pssa::tree
