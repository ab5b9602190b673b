#include "pssa/polysphere.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pssa/sphere.hpp"

namespace pssa::poly {

// ---------------------------------------------------------------------------
// Tangent algebra
// ---------------------------------------------------------------------------

Eigen::Matrix2Xd triple_bracket(const Eigen::Matrix2Xd& u,
                                const Eigen::Matrix2Xd& v,
                                const Eigen::Matrix2Xd& w) {
  const Eigen::Index n = u.cols();
  if (v.cols() != n || w.cols() != n)
    throw DimensionError("triple_bracket: factor counts differ");
  Eigen::Matrix2Xd out(2, n);
  for (Eigen::Index f = 0; f < n; ++f) {
    // [[u,v]] = s E with E the rotation generator; [h(sE), m(w)] = m(sEw)
    const double s = v(0, f) * u(1, f) - u(0, f) * v(1, f);
    out(0, f) = s * w(1, f);
    out(1, f) = -s * w(0, f);
  }
  return out;
}

bool lie_triple_check(const std::vector<Eigen::Matrix2Xd>& basis) {
  if (basis.empty()) throw DegenerateBasis("lie_triple_check: empty basis");
  const Eigen::Index n = basis.front().cols();
  const Eigen::Index b = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd flat(2 * n, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    const auto& m = basis[static_cast<std::size_t>(j)];
    if (m.cols() != n)
      throw DimensionError("lie_triple_check: factor counts differ");
    flat.col(j) = Eigen::Map<const Eigen::VectorXd>(m.data(), 2 * n);
  }
  Eigen::MatrixXd q;
  try {
    q = linalg::orthonormalize(flat);
  } catch (const RankDeficient&) {
    throw DegenerateBasis("lie_triple_check: basis is linearly dependent");
  }

  std::vector<Eigen::Matrix2Xd> ortho;
  ortho.reserve(static_cast<std::size_t>(b));
  for (Eigen::Index j = 0; j < b; ++j)
    ortho.push_back(
        Eigen::Map<const Eigen::Matrix2Xd>(q.col(j).data(), 2, n));

  for (const auto& u : ortho)
    for (const auto& v : ortho)
      for (const auto& w : ortho) {
        const Eigen::Matrix2Xd t = triple_bracket(u, v, w);
        const Eigen::VectorXd tf =
            Eigen::Map<const Eigen::VectorXd>(t.data(), 2 * n);
        const double residual = (tf - q * (q.transpose() * tf)).norm();
        if (residual > tolerances().span_residual * std::max(1.0, tf.norm()))
          return false;
      }
  return true;
}

// ---------------------------------------------------------------------------
// Per-type fitters
// ---------------------------------------------------------------------------

namespace {

double great_circle(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

double rotation_error(const Eigen::Matrix3d& r, const Eigen::Matrix3Xd& x,
                      const Eigen::Matrix3Xd& y) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double d = great_circle(y.col(i), r * x.col(i));
    e += d * d;
  }
  return e;
}

}  // namespace

ProcrustesFit fit_coupled_spheres(const Eigen::Matrix3Xd& x,
                                  const Eigen::Matrix3Xd& y) {
  if (x.cols() != y.cols() || x.cols() < 1)
    throw DimensionError("fit_coupled_spheres: need paired points");
  const Eigen::Matrix3d m = y * x.transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d uv = svd.matrixU() * svd.matrixV().transpose();
  Eigen::Matrix3d flipped =
      svd.matrixU() * Eigen::Vector3d(1, 1, -1).asDiagonal() *
      svd.matrixV().transpose();

  ProcrustesFit fit;
  const double e1 = rotation_error(uv, x, y);
  const double e2 = rotation_error(flipped, x, y);
  if (e1 <= e2) {
    fit.rotation = uv;
    fit.error = e1;
  } else {
    fit.rotation = flipped;
    fit.error = e2;
  }
  const auto& sv = svd.singularValues();
  fit.well_determined = sv(2) > 1e-10 * std::max(sv(0), 1.0);
  return fit;
}

PointFit fit_fixed_factor(const Eigen::Matrix3Xd& points) {
  PointFit fit;
  fit.point = sphere::spherical_mean(points);
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const double d = great_circle(points.col(i), fit.point);
    fit.error += d * d;
  }
  return fit;
}

CircleFit fit_circle_factor(const Eigen::Matrix3Xd& points) {
  if (points.cols() < 2)
    throw DimensionError("fit_circle_factor: need at least 2 points");
  const auto model = sphere::fit_subsphere(points, 1);
  CircleFit fit;
  fit.axis = model.complement_frame.col(0);
  fit.error = model.total_error;
  return fit;
}

CircleFrame circle_frame(const Eigen::Vector3d& axis) {
  CircleFrame frame;
  Eigen::Vector3d u = Eigen::Vector3d::UnitZ().cross(axis);
  if (u.norm() < 1e-6) u = Eigen::Vector3d::UnitX().cross(axis);
  frame.u = u.normalized();
  frame.v = axis.cross(frame.u).normalized();
  return frame;
}

Eigen::VectorXd angles_on_circle(const Eigen::Matrix3Xd& points,
                                 const Eigen::Vector3d& axis) {
  const CircleFrame frame = circle_frame(axis);
  Eigen::VectorXd angles(points.cols());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const Eigen::Vector3d p = points.col(i);
    const Eigen::Vector3d q = p - p.dot(axis) * axis;
    if (q.norm() < tolerances().projection)
      throw DegenerateProjection("angles_on_circle: point at circle pole");
    angles(i) =
        torus::wrap_unit(std::atan2(q.dot(frame.v), q.dot(frame.u)) /
                         (2.0 * M_PI));
  }
  return angles;
}

// ---------------------------------------------------------------------------
// Mixed data
// ---------------------------------------------------------------------------

Eigen::Index MixedData::count() const {
  if (!spheres.empty()) return spheres.front().cols();
  return angles.cols();
}

MixedData MixedData::from_points(const std::vector<PolyPoint>& pts) {
  if (pts.empty()) throw DimensionError("polysphere data: empty");
  const std::size_t n = pts.front().size();
  if (n == 0) throw DimensionError("polysphere data: zero factors");
  MixedData data;
  data.shape.assign(n, FactorKind::Sphere);
  data.slot.resize(n);
  data.angles.resize(0, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t f = 0; f < n; ++f) {
    Eigen::Matrix3Xd m(3, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].size() != n)
        throw DimensionError("polysphere data: ragged factor counts");
      m.col(static_cast<Eigen::Index>(i)) = pts[i][f];
    }
    data.slot[f] = static_cast<Eigen::Index>(data.spheres.size());
    data.spheres.push_back(std::move(m));
  }
  return data;
}

MixedData MixedData::without_point(Eigen::Index drop) const {
  MixedData out;
  out.shape = shape;
  out.slot = slot;
  const Eigen::Index d = count();
  for (const auto& m : spheres) {
    Eigen::Matrix3Xd r(3, d - 1);
    r.leftCols(drop) = m.leftCols(drop);
    r.rightCols(d - 1 - drop) = m.rightCols(d - 1 - drop);
    out.spheres.push_back(std::move(r));
  }
  out.angles.resize(angles.rows(), d - 1);
  out.angles.leftCols(drop) = angles.leftCols(drop);
  out.angles.rightCols(d - 1 - drop) = angles.rightCols(d - 1 - drop);
  return out;
}

// ---------------------------------------------------------------------------
// Templates
// ---------------------------------------------------------------------------

int TemplateSpec::dim(const std::vector<FactorKind>& shape) const {
  int d = 0;
  for (std::size_t f = 0; f < shape.size(); ++f) {
    switch (actions[f]) {
      case Action::Keep:
        d += shape[f] == FactorKind::Sphere ? 2 : 1;
        break;
      case Action::ToCircle:
      case Action::Coupled:  // each member of a pair contributes 1
        d += 1;
        break;
      case Action::ToPoint:
        break;
    }
  }
  if (resonance) d -= static_cast<int>(resonance->A.rows());
  return d;
}

bool TemplateSpec::is_identity() const {
  if (!couplings.empty() || resonance) return false;
  return std::all_of(actions.begin(), actions.end(),
                     [](Action a) { return a == Action::Keep; });
}

std::string TemplateSpec::label(const std::vector<FactorKind>& shape) const {
  int s2 = static_cast<int>(couplings.size());
  int s1 = 0;
  for (std::size_t f = 0; f < shape.size(); ++f) {
    if (actions[f] == Action::Keep)
      (shape[f] == FactorKind::Sphere ? s2 : s1) += 1;
    else if (actions[f] == Action::ToCircle)
      s1 += 1;
  }
  if (resonance) s1 -= static_cast<int>(resonance->A.rows());
  std::string out;
  for (int i = 0; i < s2; ++i) out += out.empty() ? "S2" : "xS2";
  for (int i = 0; i < s1; ++i) out += out.empty() ? "S1" : "xS1";
  return out.empty() ? "point" : out;
}

namespace {

void append_matchings(const std::vector<int>& candidates, int max_pairs,
                      std::vector<std::pair<int, int>>& current,
                      std::vector<std::vector<std::pair<int, int>>>& out) {
  if (!current.empty()) out.push_back(current);
  if (static_cast<int>(current.size()) >= max_pairs) return;
  for (std::size_t a = 0; a < candidates.size(); ++a)
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      const int i = candidates[a], j = candidates[b];
      const auto used = [&](int f) {
        return std::any_of(current.begin(), current.end(), [&](auto p) {
          return p.first == f || p.second == f;
        });
      };
      if (used(i) || used(j)) continue;
      if (!current.empty() && current.back().first > i) continue;  // ordered
      current.emplace_back(i, j);
      append_matchings(candidates, max_pairs, current, out);
      current.pop_back();
    }
}

bool has_zero_column(const IntMat& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    bool all_zero = true;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != 0) all_zero = false;
    if (all_zero) return true;
  }
  return false;
}

}  // namespace

std::vector<TemplateSpec> enumerate_models(const std::vector<FactorKind>& shape,
                                           const EnumOptions& options) {
  const std::size_t n = shape.size();
  if (n == 0) throw DimensionError("enumerate_models: zero factors");
  using Action = TemplateSpec::Action;

  std::vector<TemplateSpec> out;
  std::vector<Action> assignment(n, Action::Keep);
  while (true) {
    // coupling choices over sphere factors kept free
    std::vector<int> free_spheres;
    std::vector<int> free_circles;
    for (std::size_t f = 0; f < n; ++f) {
      if (assignment[f] != Action::Keep) continue;
      (shape[f] == FactorKind::Sphere ? free_spheres : free_circles)
          .push_back(static_cast<int>(f));
    }
    std::vector<std::vector<std::pair<int, int>>> matchings{{}};
    {
      std::vector<std::pair<int, int>> scratch;
      append_matchings(free_spheres, options.max_couplings, scratch,
                       matchings);
    }
    // resonance choices over circle factors kept free
    std::vector<std::optional<ResonanceSpec>> resonances{std::nullopt};
    const int m = static_cast<int>(free_circles.size());
    for (int k = 1; k <= std::min(options.max_resonance_codim, m - 1); ++k) {
      for (auto& A : torus::enumerate_resonances(m, k, options.resonance_bound)) {
        if (has_zero_column(A)) continue;  // would duplicate a point fix
        resonances.push_back(ResonanceSpec{free_circles, std::move(A)});
      }
    }

    for (const auto& pairs : matchings)
      for (const auto& res : resonances) {
        TemplateSpec spec;
        spec.actions = assignment;
        for (auto [i, j] : pairs) {
          spec.actions[static_cast<std::size_t>(i)] = Action::Coupled;
          spec.actions[static_cast<std::size_t>(j)] = Action::Coupled;
        }
        spec.couplings = pairs;
        spec.resonance = res;
        out.push_back(std::move(spec));
      }

    // odometer over per-factor actions
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      Action& a = assignment[pos];
      if (shape[pos] == FactorKind::Sphere) {
        if (a == Action::Keep) {
          a = Action::ToCircle;
          break;
        }
        if (a == Action::ToCircle) {
          a = Action::ToPoint;
          break;
        }
      } else if (a == Action::Keep) {
        a = Action::ToPoint;
        break;
      }
      a = Action::Keep;
      if (pos == 0) return out;
    }
  }
}

std::vector<TemplateSpec> enumerate_models(int n, const EnumOptions& options) {
  if (n < 1) throw DimensionError("enumerate_models: need n >= 1");
  return enumerate_models(
      std::vector<FactorKind>(static_cast<std::size_t>(n), FactorKind::Sphere),
      options);
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

namespace {

using Action = TemplateSpec::Action;

void validate_spec(const MixedData& data, const TemplateSpec& spec) {
  if (spec.actions.size() != data.shape.size())
    throw DimensionError("fit_model: template/shape mismatch");
  for (std::size_t f = 0; f < data.shape.size(); ++f) {
    if (spec.actions[f] == Action::ToCircle &&
        data.shape[f] != FactorKind::Sphere)
      throw DimensionError("fit_model: circle reduction on a circle factor");
    if (spec.actions[f] == Action::Coupled &&
        data.shape[f] != FactorKind::Sphere)
      throw DimensionError("fit_model: coupling on a circle factor");
  }
  if (spec.resonance) {
    for (int f : spec.resonance->factors) {
      if (data.shape[static_cast<std::size_t>(f)] != FactorKind::Circle ||
          spec.actions[static_cast<std::size_t>(f)] != Action::Keep)
        throw DimensionError("fit_model: resonance needs free circle factors");
    }
    if (spec.resonance->A.cols() !=
        static_cast<Eigen::Index>(spec.resonance->factors.size()))
      throw DimensionError("fit_model: resonance matrix width mismatch");
  }
}

}  // namespace

PolysphereModel fit_model(const MixedData& data, const TemplateSpec& spec) {
  validate_spec(data, spec);
  const Eigen::Index d = data.count();

  PolysphereModel model;
  model.spec = spec;
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(d);

  for (auto [i, j] : spec.couplings) {
    const auto& x = data.spheres[static_cast<std::size_t>(
        data.slot[static_cast<std::size_t>(i)])];
    const auto& y = data.spheres[static_cast<std::size_t>(
        data.slot[static_cast<std::size_t>(j)])];
    auto fit = fit_coupled_spheres(x, y);
    for (Eigen::Index p = 0; p < d; ++p) {
      const double r = (y.col(p) - fit.rotation * x.col(p)).norm() / 2.0;
      sq(p) += r * r;
    }
    model.constraints.push_back(
        CoupledSpheres{i, j, fit.rotation, fit.error, fit.well_determined});
  }

  for (std::size_t f = 0; f < data.shape.size(); ++f) {
    const auto action = spec.actions[f];
    if (action == Action::Keep || action == Action::Coupled) continue;
    if (data.shape[f] == FactorKind::Sphere) {
      const auto& pts = data.spheres[static_cast<std::size_t>(data.slot[f])];
      if (action == Action::ToPoint) {
        auto fit = fit_fixed_factor(pts);
        for (Eigen::Index p = 0; p < d; ++p) {
          const double r = (pts.col(p) - fit.point).norm() / 2.0;
          sq(p) += r * r;
        }
        model.constraints.push_back(
            FixedFactor{static_cast<int>(f), fit.point, fit.error});
      } else {  // ToCircle
        auto fit = fit_circle_factor(pts);
        for (Eigen::Index p = 0; p < d; ++p) {
          const double r = std::abs(pts.col(p).dot(fit.axis));
          sq(p) += r * r;
        }
        model.constraints.push_back(
            CircleFactor{static_cast<int>(f), fit.axis, fit.error});
      }
    } else {  // circle factor, ToPoint
      const Eigen::VectorXd row = data.angles.row(data.slot[f]);
      const double c = torus::circular_mean(row);
      double err = 0.0;
      for (Eigen::Index p = 0; p < d; ++p) {
        const double r = torus::circle_distance(row(p), c);
        sq(p) += r * r;
        err += r * r;
      }
      model.constraints.push_back(
          FixedAngle{static_cast<int>(f), c, std::sqrt(err)});
    }
  }

  if (spec.resonance) {
    Eigen::MatrixXd sub(spec.resonance->factors.size(), d);
    for (std::size_t r = 0; r < spec.resonance->factors.size(); ++r)
      sub.row(static_cast<Eigen::Index>(r)) = data.angles.row(
          data.slot[static_cast<std::size_t>(spec.resonance->factors[r])]);
    auto fit = torus::fit_subtorus(sub, spec.resonance->A);
    for (Eigen::Index p = 0; p < d; ++p) {
      const double r = fit.per_point_errors(p);
      sq(p) += r * r;
    }
    model.constraints.push_back(
        TorusResonance{spec.resonance->factors, std::move(fit)});
  }

  model.per_point_errors = sq.cwiseSqrt();
  model.total_error = model.per_point_errors.norm();
  return model;
}

PolysphereModel fit_model(const std::vector<PolyPoint>& pts,
                          const TemplateSpec& spec) {
  return fit_model(MixedData::from_points(pts), spec);
}

double loo_score(const MixedData& data, const TemplateSpec& spec) {
  const Eigen::Index d = data.count();
  if (d < 2) throw DimensionError("loo_score: need >= 2 points");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto fit = fit_model(data.without_point(i), spec);
    // held-out residual under the same aggregation
    double e2 = 0.0;
    for (const auto& constraint : fit.constraints) {
      if (const auto* c = std::get_if<CoupledSpheres>(&constraint)) {
        const auto& x = data.spheres[static_cast<std::size_t>(
            data.slot[static_cast<std::size_t>(c->i)])];
        const auto& y = data.spheres[static_cast<std::size_t>(
            data.slot[static_cast<std::size_t>(c->j)])];
        const double r = (y.col(i) - c->rotation * x.col(i)).norm() / 2.0;
        e2 += r * r;
      } else if (const auto* c = std::get_if<FixedFactor>(&constraint)) {
        const auto& pts = data.spheres[static_cast<std::size_t>(
            data.slot[static_cast<std::size_t>(c->i)])];
        const double r = (pts.col(i) - c->point).norm() / 2.0;
        e2 += r * r;
      } else if (const auto* c = std::get_if<CircleFactor>(&constraint)) {
        const auto& pts = data.spheres[static_cast<std::size_t>(
            data.slot[static_cast<std::size_t>(c->i)])];
        const double r = std::abs(pts.col(i).dot(c->axis));
        e2 += r * r;
      } else if (const auto* c = std::get_if<FixedAngle>(&constraint)) {
        const double a =
            data.angles(data.slot[static_cast<std::size_t>(c->i)], i);
        const double r = torus::circle_distance(a, c->angle);
        e2 += r * r;
      } else if (const auto* c = std::get_if<TorusResonance>(&constraint)) {
        Eigen::VectorXd theta(c->factors.size());
        for (std::size_t r = 0; r < c->factors.size(); ++r)
          theta(static_cast<Eigen::Index>(r)) = data.angles(
              data.slot[static_cast<std::size_t>(c->factors[r])], i);
        const double r = torus::subtorus_residual(theta, c->model);
        e2 += r * r;
      }
    }
    sum += e2;
  }
  return std::sqrt(sum / static_cast<double>(d));
}

MixedData project(const MixedData& data, const PolysphereModel& model) {
  const Eigen::Index d = data.count();
  const auto& spec = model.spec;

  // constraint lookup per factor
  std::vector<const Constraint*> by_factor(data.shape.size(), nullptr);
  const TorusResonance* resonance = nullptr;
  for (const auto& c : model.constraints) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, TorusResonance>) {
            resonance = &v;
          } else if constexpr (std::is_same_v<T, CoupledSpheres>) {
            by_factor[static_cast<std::size_t>(v.i)] = &c;
            by_factor[static_cast<std::size_t>(v.j)] = &c;
          } else {
            by_factor[static_cast<std::size_t>(v.i)] = &c;
          }
        },
        c);
  }

  MixedData out;
  std::vector<Eigen::VectorXd> angle_rows;
  auto push_sphere = [&](const Eigen::Matrix3Xd& m) {
    out.shape.push_back(FactorKind::Sphere);
    out.slot.push_back(static_cast<Eigen::Index>(out.spheres.size()));
    out.spheres.push_back(m);
  };
  auto push_circle = [&](const Eigen::VectorXd& row) {
    out.shape.push_back(FactorKind::Circle);
    out.slot.push_back(static_cast<Eigen::Index>(angle_rows.size()));
    angle_rows.push_back(row);
  };

  for (std::size_t f = 0; f < data.shape.size(); ++f) {
    switch (spec.actions[f]) {
      case Action::ToPoint:
        break;  // factor disappears
      case Action::Coupled: {
        const auto* c = std::get_if<CoupledSpheres>(by_factor[f]);
        if (static_cast<std::size_t>(c->j) == f) break;  // handled at i
        const auto& x = data.spheres[static_cast<std::size_t>(
            data.slot[static_cast<std::size_t>(c->i)])];
        const auto& y = data.spheres[static_cast<std::size_t>(
            data.slot[static_cast<std::size_t>(c->j)])];
        Eigen::Matrix3Xd z(3, d);
        for (Eigen::Index p = 0; p < d; ++p) {
          Eigen::Vector3d v = x.col(p) + c->rotation.transpose() * y.col(p);
          if (v.norm() < tolerances().projection)
            throw DegenerateProjection(
                "project: coupled pair is antipodal under R");
          z.col(p) = v.normalized();
        }
        push_sphere(z);
        break;
      }
      case Action::ToCircle: {
        const auto* c = std::get_if<CircleFactor>(by_factor[f]);
        const auto& pts = data.spheres[static_cast<std::size_t>(data.slot[f])];
        push_circle(angles_on_circle(pts, c->axis));
        break;
      }
      case Action::Keep: {
        if (data.shape[f] == FactorKind::Sphere) {
          push_sphere(data.spheres[static_cast<std::size_t>(data.slot[f])]);
          break;
        }
        const bool in_resonance =
            resonance &&
            std::find(resonance->factors.begin(), resonance->factors.end(),
                      static_cast<int>(f)) != resonance->factors.end();
        if (!in_resonance) {
          push_circle(data.angles.row(data.slot[f]));
          break;
        }
        if (static_cast<int>(f) != resonance->factors.front()) break;
        // intrinsic coordinates of the subtorus: y = Cθ, drop the first
        // k (constrained) rows
        const Eigen::Index m =
            static_cast<Eigen::Index>(resonance->factors.size());
        const Eigen::Index k = resonance->model.A.rows();
        const IntMat C = torus::complete_to_unimodular(resonance->model.A);
        Eigen::MatrixXd theta(m, d);
        for (Eigen::Index r = 0; r < m; ++r)
          theta.row(r) = data.angles.row(data.slot[static_cast<std::size_t>(
              resonance->factors[static_cast<std::size_t>(r)])]);
        Eigen::MatrixXd y = exact::to_double(C) * theta;
        for (Eigen::Index r = k; r < m; ++r) {
          Eigen::VectorXd row = y.row(r);
          for (Eigen::Index p = 0; p < d; ++p)
            row(p) = torus::wrap_unit(row(p));
          push_circle(row);
        }
        break;
      }
    }
  }

  out.angles.resize(static_cast<Eigen::Index>(angle_rows.size()), d);
  for (std::size_t r = 0; r < angle_rows.size(); ++r)
    out.angles.row(static_cast<Eigen::Index>(r)) = angle_rows[r];
  return out;
}

}  // namespace pssa::poly
