#include "pssa/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pssa/parallel.hpp"
#include "pssa/synth.hpp"
#include "pssa/tree.hpp"

namespace pssa::cli {

namespace {

namespace fs = std::filesystem;

std::optional<ManifoldDescriptor> manifold_hint(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "sphere") return SphereDesc{0};
  if (name == "grassmann") return GrassmannDesc{0, 0};
  if (name == "torus") return TorusDesc{0};
  if (name == "polysphere") return PolysphereDesc{{}};
  throw ValidationError("unknown manifold: " + name);
}

Json dataset_to_json_payload(const Dataset& data) {
  Json j;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GrassmannDesc>) {
          Json frames = Json::array();
          for (const auto& frame : data.frames) {
            Json block = Json::array();
            for (Eigen::Index c = 0; c < frame.cols(); ++c) {
              Json row = Json::array();
              for (Eigen::Index r = 0; r < frame.rows(); ++r)
                row.push_back(frame(r, c));
              block.push_back(std::move(row));
            }
            frames.push_back(std::move(block));
          }
          j["frames"] = std::move(frames);
        } else if constexpr (std::is_same_v<T, PolysphereDesc>) {
          Json pts = Json::array();
          for (const auto& p : data.poly_points) {
            Json row = Json::array();
            for (const auto& v : p)
              for (int c = 0; c < 3; ++c) row.push_back(v(c));
            pts.push_back(std::move(row));
          }
          j["points"] = std::move(pts);
        } else {
          Json pts = Json::array();
          for (Eigen::Index i = 0; i < data.columns.cols(); ++i) {
            Json row = Json::array();
            for (Eigen::Index r = 0; r < data.columns.rows(); ++r)
              row.push_back(data.columns(r, i));
            pts.push_back(std::move(row));
          }
          j["points"] = std::move(pts);
        }
      },
      data.manifold);
  return j;
}

void write_json(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad report JSON: ") + e.what());
  }
  return doc;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct FitOptions {
  std::string manifold;
  std::string input;
  std::string output = "report.json";
  std::uint64_t seed = 0;
  long long resonance_bound = 10;
  std::string selection = "loo";
  bool renormalize = false;
  int top = 10;
  int max_couplings = 1;
  int max_resonance_codim = 1;
};

Json fit_sphere(const Dataset& data) {
  Json results;
  const Eigen::Index n = data.columns.rows() - 1;
  Json chain = Json::array();
  for (const auto& model : sphere::pssa_chain(data.columns))
    chain.push_back(to_json(model));
  results["chain"] = std::move(chain);
  if (n >= 1) results["antipodal"] = to_json(sphere::fit_subsphere(data.columns, n));
  try {
    const Eigen::VectorXd mean = sphere::spherical_mean(data.columns);
    double err = 0.0;
    for (Eigen::Index i = 0; i < data.columns.cols(); ++i) {
      const double d =
          std::acos(std::clamp(data.columns.col(i).dot(mean), -1.0, 1.0));
      err += d * d;
    }
    results["mean"] = Json{{"point", vector_to_json(mean)},
                           {"error", std::sqrt(err)},
                           {"metric", "riemannian"}};
  } catch (const DegenerateMean& e) {
    results["warnings"] = Json::array({std::string(e.what())});
  }
  return results;
}

Json fit_grassmann(const Dataset& data) {
  const auto& desc = std::get<GrassmannDesc>(data.manifold);
  Json results;
  Json chain = Json::array();
  if (desc.n - desc.k >= 1)
    for (const auto& model : grassmann::pssa_chain(data.frames, desc.n - desc.k))
      chain.push_back(to_json(model));
  results["chain"] = std::move(chain);
  return results;
}

Json fit_torus(const Dataset& data, const FitOptions& opt) {
  Json results;
  const Eigen::Index n = data.columns.rows();
  const auto candidates =
      torus::enumerate_resonances(n, 1, exact::Int(opt.resonance_bound));
  results["candidates_tested"] = candidates.size();

  Json ranking = Json::array();
  exact::IntMat best;
  std::optional<double> best_loo;
  if (opt.selection == "loo" && data.columns.cols() >= 2) {
    const auto sel = torus::loo_model_selection(data.columns, candidates);
    if (sel.ranked.empty())
      throw DegenerateMean("torus fit: every candidate degenerated");
    for (std::size_t i = 0;
         i < std::min<std::size_t>(sel.ranked.size(),
                                   static_cast<std::size_t>(opt.top));
         ++i)
      ranking.push_back(Json{{"A", intmat_to_json(sel.ranked[i].A)},
                             {"loo_error", sel.ranked[i].loo_error}});
    Json skipped = Json::array();
    for (const auto& s : sel.skipped) skipped.push_back(intmat_to_json(s));
    results["skipped"] = std::move(skipped);
    best = sel.ranked.front().A;
    best_loo = sel.ranked.front().loo_error;
  } else {
    struct Fit {
      exact::IntMat A;
      double err;
    };
    std::vector<Fit> fits;
    for (const auto& A : candidates) {
      try {
        fits.push_back({A, torus::fit_subtorus(data.columns, A).mean_error});
      } catch (const NumericalError&) {
      }
    }
    if (fits.empty())
      throw DegenerateMean("torus fit: every candidate degenerated");
    std::sort(fits.begin(), fits.end(), [](const Fit& a, const Fit& b) {
      if (a.err != b.err) return a.err < b.err;
      return a.A < b.A;
    });
    for (std::size_t i = 0;
         i < std::min<std::size_t>(fits.size(), static_cast<std::size_t>(opt.top));
         ++i)
      ranking.push_back(Json{{"A", intmat_to_json(fits[i].A)},
                             {"training_error", fits[i].err}});
    best = fits.front().A;
  }
  results["ranking"] = std::move(ranking);

  auto model = torus::fit_subtorus(data.columns, best);
  model.loo_error = best_loo;
  results["best"] = to_json(model);
  return results;
}

Json fit_polysphere(const Dataset& data, const FitOptions& opt) {
  const auto mixed = poly::MixedData::from_points(data.poly_points);
  poly::EnumOptions options;
  options.resonance_bound = exact::Int(opt.resonance_bound);
  options.max_couplings = opt.max_couplings;
  options.max_resonance_codim = opt.max_resonance_codim;

  const int full_dim = manifold_dim(data.manifold);
  std::vector<poly::TemplateSpec> specs;
  for (const auto& t : poly::enumerate_models(mixed.shape, options))
    if (t.dim(mixed.shape) < full_dim) specs.push_back(t);

  struct Scored {
    bool ok = false;
    poly::PolysphereModel model;
    double key = 0.0;
  };
  std::vector<Scored> scored(specs.size());
  const bool use_loo = opt.selection == "loo" && mixed.count() >= 2;
  parallel_for(specs.size(), [&](std::size_t i) {
    try {
      auto model = poly::fit_model(mixed, specs[i]);
      if (use_loo) {
        model.loo_error = poly::loo_score(mixed, specs[i]);
        scored[i].key = *model.loo_error;
      } else {
        scored[i].key = model.total_error;
      }
      scored[i].model = std::move(model);
      scored[i].ok = true;
    } catch (const NumericalError&) {
    }
  });

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < scored.size(); ++i)
    if (scored[i].ok) order.push_back(i);
  if (order.empty())
    throw DegenerateMean("polysphere fit: every template degenerated");
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a].key != scored[b].key) return scored[a].key < scored[b].key;
    return a < b;
  });

  Json results;
  results["templates_tested"] = specs.size();
  Json ranking = Json::array();
  for (std::size_t i = 0;
       i < std::min<std::size_t>(order.size(), static_cast<std::size_t>(opt.top));
       ++i) {
    const auto& entry = scored[order[i]];
    Json e{{"label", entry.model.spec.label(mixed.shape)},
           {"dim", entry.model.spec.dim(mixed.shape)},
           {"total_error", entry.model.total_error}};
    if (entry.model.loo_error) e["loo_error"] = *entry.model.loo_error;
    ranking.push_back(std::move(e));
  }
  results["ranking"] = std::move(ranking);
  results["best"] = to_json(scored[order.front()].model);
  return results;
}

int cmd_fit(const FitOptions& opt) {
  const Dataset data =
      load_dataset(opt.input, manifold_hint(opt.manifold), opt.renormalize);

  Json doc;
  doc["schema"] = "pssa-report/1";
  doc["command"] = "fit";
  doc["manifold"] = manifold_to_json(data.manifold);
  doc["config"] = Json{{"seed", opt.seed},
                       {"resonance_bound", opt.resonance_bound},
                       {"selection", opt.selection},
                       {"renormalize", opt.renormalize},
                       {"top", opt.top}};
  doc["input"] = Json{{"path", opt.input},
                      {"points", data.count()},
                      {"data", dataset_to_json_payload(data)}};

  doc["results"] = std::visit(
      [&](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SphereDesc>) return fit_sphere(data);
        else if constexpr (std::is_same_v<T, GrassmannDesc>)
          return fit_grassmann(data);
        else if constexpr (std::is_same_v<T, TorusDesc>)
          return fit_torus(data, opt);
        else
          return fit_polysphere(data, opt);
      },
      data.manifold);

  write_json(opt.output, doc);
  std::cout << "wrote " << opt.output << "\n";
  return 0;
}

struct TreeOptions {
  FitOptions fit;
  int max_children = 3;
  int min_dim = 0;
  std::string sphere_terminal = "antipodal";
};

int cmd_tree(const TreeOptions& opt) {
  const Dataset data = load_dataset(opt.fit.input,
                                    manifold_hint(opt.fit.manifold),
                                    opt.fit.renormalize);
  tree::PssaConfig config;
  config.max_children_per_node = opt.max_children;
  config.resonance_bound = exact::Int(opt.fit.resonance_bound);
  config.min_dim = opt.min_dim;
  config.selection = opt.fit.selection == "loo"
                         ? tree::Selection::Loo
                         : tree::Selection::TrainingError;
  config.seed = opt.fit.seed;
  config.max_couplings = opt.fit.max_couplings;
  config.max_resonance_codim = opt.fit.max_resonance_codim;
  config.sphere_terminal = opt.sphere_terminal == "mean"
                               ? tree::SphereTerminal::Mean
                               : tree::SphereTerminal::AntipodalPair;

  const auto root = tree::build_tree(data, config);
  Json doc = tree::serialize_tree(root, data.manifold, config);
  doc["provenance"]["command"] = "tree";
  doc["provenance"]["input"] = Json{{"path", opt.fit.input},
                                    {"points", data.count()},
                                    {"data", dataset_to_json_payload(data)}};
  write_json(opt.fit.output, doc);
  std::cout << "wrote " << opt.fit.output << "\n";
  return 0;
}

struct SynthOptions {
  std::string example;
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_synth(const SynthOptions& opt) {
  const Dataset data = synth::generate(opt.example, opt.seed);
  if (opt.output.size() > 5 &&
      opt.output.compare(opt.output.size() - 5, 5, ".json") == 0)
    save_dataset_json(opt.output, data);
  else
    save_dataset_csv(opt.output, data);
  std::cout << "wrote " << opt.output << "\n";
  return 0;
}

struct PlotOptions {
  std::string report;
  std::string what;
  std::string output_dir = ".";
  int samples = 512;
};

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j)
      out << (j ? "," : "") << format_double(rows(i, j));
    out << "\n";
  }
  std::cout << "wrote " << path << "\n";
}

Eigen::MatrixXd report_points(const Json& doc) {
  const auto& pts = doc.at("input").at("data").at("points");
  const Eigen::Index d = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index w =
      d > 0 ? static_cast<Eigen::Index>(pts.at(0).size()) : 0;
  Eigen::MatrixXd X(w, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < w; ++j)
      X(j, i) = pts.at(static_cast<std::size_t>(i))
                    .at(static_cast<std::size_t>(j))
                    .get<double>();
  return X;
}

const Json& chain_entry_with_dim(const Json& doc, long long dim) {
  for (const auto& entry : doc.at("results").at("chain"))
    if (entry.at("dim").get<long long>() == dim) return entry;
  throw UnknownReportSection("report has no chain node of dimension " +
                             std::to_string(dim));
}

int cmd_plotdata(const PlotOptions& opt) {
  const Json doc = read_json(opt.report);
  if (!doc.contains("schema") ||
      doc.at("schema").get<std::string>() != "pssa-report/1" ||
      doc.at("command").get<std::string>() != "fit")
    throw UnknownReportSection("plotdata expects a fit report");
  const std::string manifold = doc.at("manifold").at("type").get<std::string>();
  fs::create_directories(opt.output_dir);
  const auto path = [&](const std::string& name) {
    return (fs::path(opt.output_dir) / name).string();
  };

  if (opt.what == "best-circle" && manifold == "sphere") {
    const auto model = subsphere_from_json(chain_entry_with_dim(doc, 1));
    const Eigen::MatrixXd basis = tree::subsphere_basis(model);  // (n+1)×2
    Eigen::MatrixXd rows(opt.samples, basis.rows());
    for (int s = 0; s < opt.samples; ++s) {
      const double t = 2.0 * M_PI * s / opt.samples;
      rows.row(s) =
          (std::cos(t) * basis.col(0) + std::sin(t) * basis.col(1)).transpose();
    }
    write_csv_matrix(path("circle.csv"), rows);
    return 0;
  }

  if (opt.what == "winds" && manifold == "torus") {
    const auto model = subtorus_from_json(doc.at("results").at("best"));
    const exact::IntMat C = torus::complete_to_unimodular(model.A);
    const Eigen::MatrixXd Cinv =
        exact::to_double(exact::inverse_unimodular(C));
    const Eigen::Index n = C.rows();
    const Eigen::Index k = model.A.rows();
    // base point on the subtorus from the exact dual basis
    const Eigen::MatrixXd B =
        exact::to_double(torus::dual_lattice_basis(model.A));
    const Eigen::VectorXd x0 = B * model.offset;
    for (Eigen::Index g = k; g < n; ++g) {
      const Eigen::VectorXd wind = Cinv.col(g);  // integer direction
      const int loops = static_cast<int>(std::ceil(
          std::max(1.0, wind.cwiseAbs().maxCoeff())));
      const int total = opt.samples * loops;
      Eigen::MatrixXd rows(total, n);
      for (int s = 0; s < total; ++s) {
        const double t = static_cast<double>(s) / total;
        for (Eigen::Index j = 0; j < n; ++j)
          rows(s, j) = torus::wrap_unit(x0(j) + t * wind(j));
      }
      write_csv_matrix(
          path("winds_" + std::to_string(g - k) + ".csv"), rows);
    }
    return 0;
  }

  if (opt.what == "projection") {
    const Eigen::MatrixXd X = report_points(doc);
    if (manifold == "sphere") {
      const auto& chain = doc.at("results").at("chain");
      if (chain.empty())
        throw UnknownReportSection("sphere report has an empty chain");
      const auto model = subsphere_from_json(chain.at(0));  // codim 1
      const Eigen::MatrixXd basis = tree::subsphere_basis(model);
      Eigen::MatrixXd rows(X.cols(), basis.cols());
      for (Eigen::Index i = 0; i < X.cols(); ++i)
        rows.row(i) = tree::project_to_subsphere(X.col(i), basis).transpose();
      write_csv_matrix(path("projection.csv"), rows);
      return 0;
    }
    if (manifold == "torus") {
      const auto model = subtorus_from_json(doc.at("results").at("best"));
      const Eigen::MatrixXd Ad = exact::to_double(model.A);
      Eigen::MatrixXd rows(X.cols(), Ad.rows());
      for (Eigen::Index i = 0; i < X.cols(); ++i)
        for (Eigen::Index j = 0; j < Ad.rows(); ++j)
          rows(i, j) = torus::wrap_unit(Ad.row(j).dot(X.col(i)));
      write_csv_matrix(path("projection.csv"), rows);
      return 0;
    }
    if (manifold == "polysphere") {
      const auto& best = doc.at("results").at("best");
      std::vector<std::pair<int, Eigen::Vector3d>> circles;
      for (const auto& c : best.at("constraints"))
        if (c.at("type").get<std::string>() == "circle_factor")
          circles.emplace_back(c.at("i").get<int>(),
                               vector_from_json(c.at("axis")));
      if (circles.empty())
        throw UnknownReportSection("best model has no circle factors");
      Eigen::MatrixXd rows(X.cols(),
                           static_cast<Eigen::Index>(circles.size()));
      for (std::size_t ci = 0; ci < circles.size(); ++ci) {
        Eigen::Matrix3Xd pts(3, X.cols());
        for (Eigen::Index i = 0; i < X.cols(); ++i)
          pts.col(i) = X.col(i).segment(3 * circles[ci].first, 3);
        rows.col(static_cast<Eigen::Index>(ci)) =
            poly::angles_on_circle(pts, circles[ci].second);
      }
      write_csv_matrix(path("projection.csv"), rows);
      return 0;
    }
  }

  if (opt.what == "factor-circles" && manifold == "polysphere") {
    const auto& best = doc.at("results").at("best");
    bool any = false;
    for (const auto& c : best.at("constraints")) {
      if (c.at("type").get<std::string>() != "circle_factor") continue;
      any = true;
      const int factor = c.at("i").get<int>();
      const Eigen::Vector3d axis = vector_from_json(c.at("axis"));
      const auto frame = poly::circle_frame(axis);
      Eigen::MatrixXd rows(opt.samples, 3);
      for (int s = 0; s < opt.samples; ++s) {
        const double t = 2.0 * M_PI * s / opt.samples;
        rows.row(s) =
            (std::cos(t) * frame.u + std::sin(t) * frame.v).transpose();
      }
      write_csv_matrix(path("circle_factor_" + std::to_string(factor) + ".csv"),
                       rows);
    }
    if (!any) throw UnknownReportSection("best model has no circle factors");
    return 0;
  }

  throw UnknownReportSection("section '" + opt.what +
                             "' is not available for manifold '" + manifold +
                             "'");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"principal symmetric space approximation toolkit"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* cfit = app.add_subcommand("fit", "fit submanifold models to a dataset");
  cfit->add_option("--manifold", fit.manifold,
                   "sphere | grassmann | torus | polysphere");
  cfit->add_option("--input", fit.input, "dataset file (CSV or JSON)")
      ->required();
  cfit->add_option("--output", fit.output, "report path");
  cfit->add_option("--seed", fit.seed, "seed recorded in the report");
  cfit->add_option("--resonance-bound", fit.resonance_bound,
                   "strict bound on |A| entries for torus candidates");
  cfit->add_option("--selection", fit.selection, "loo | training");
  cfit->add_flag("--renormalize", fit.renormalize,
                 "renormalize near-unit data instead of rejecting");
  cfit->add_option("--top", fit.top, "ranking length in the report");
  cfit->add_option("--max-couplings", fit.max_couplings,
                   "polysphere coupling pairs per template");
  cfit->add_option("--max-resonance-codim", fit.max_resonance_codim,
                   "polysphere resonance codimension limit");

  TreeOptions tr;
  auto* ctree = app.add_subcommand("tree", "build the recursive PSSA tree");
  ctree->add_option("--manifold", tr.fit.manifold,
                    "sphere | grassmann | torus | polysphere");
  ctree->add_option("--input", tr.fit.input, "dataset file")->required();
  ctree->add_option("--output", tr.fit.output, "report path");
  ctree->add_option("--seed", tr.fit.seed, "seed recorded in the report");
  ctree->add_option("--resonance-bound", tr.fit.resonance_bound,
                    "strict bound on |A| entries");
  ctree->add_option("--selection", tr.fit.selection, "loo | training");
  ctree->add_flag("--renormalize", tr.fit.renormalize,
                  "renormalize near-unit data instead of rejecting");
  ctree->add_option("--max-children", tr.max_children,
                    "children kept per node after ranking");
  ctree->add_option("--min-dim", tr.min_dim, "recursion floor");
  ctree->add_option("--sphere-terminal", tr.sphere_terminal,
                    "antipodal | mean");
  ctree->add_option("--max-couplings", tr.fit.max_couplings,
                    "polysphere coupling pairs per template");
  ctree->add_option("--max-resonance-codim", tr.fit.max_resonance_codim,
                    "polysphere resonance codimension limit");

  SynthOptions sy;
  auto* csynth =
      app.add_subcommand("synth", "generate a published-example dataset");
  csynth->add_option("--example", sy.example, "example id")->required();
  csynth->add_option("--seed", sy.seed, "generator seed");
  csynth->add_option("--output", sy.output, "dataset path")->required();

  PlotOptions pl;
  auto* cplot = app.add_subcommand("plotdata", "emit plot CSVs from a report");
  cplot->add_option("--report", pl.report, "fit report path")->required();
  cplot->add_option("--what", pl.what,
                    "best-circle | winds | projection | factor-circles")
      ->required();
  cplot->add_option("--output-dir", pl.output_dir, "directory for CSVs");
  cplot->add_option("--samples", pl.samples, "samples per curve");

  try {
    // CLI11's vector overload consumes arguments back to front
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cfit->parsed()) return cmd_fit(fit);
    if (ctree->parsed()) return cmd_tree(tr);
    if (csynth->parsed()) return cmd_synth(sy);
    if (cplot->parsed()) return cmd_plotdata(pl);
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace pssa::cli
