#include "pssa/serialize.hpp"

namespace pssa {

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols =
      rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = j.at(static_cast<std::size_t>(r))
                    .at(static_cast<std::size_t>(c))
                    .get<double>();
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

Json intmat_to_json(const exact::IntMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j).convert_to<long long>());
    rows.push_back(std::move(row));
  }
  return rows;
}

exact::IntMat intmat_from_json(const Json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols =
      rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  exact::IntMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = j.at(static_cast<std::size_t>(r))
                    .at(static_cast<std::size_t>(c))
                    .get<long long>();
  return m;
}

Json ratmat_to_json(const exact::RatMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto& q = m(i, j);
      row.push_back(numerator(q).str() + "/" + denominator(q).str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

exact::RatMat ratmat_from_json(const Json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols =
      rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  exact::RatMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::string s = j.at(static_cast<std::size_t>(r))
                                .at(static_cast<std::size_t>(c))
                                .get<std::string>();
      const auto slash = s.find('/');
      if (slash == std::string::npos) {
        m(r, c) = exact::Rat(exact::Int(s));
      } else {
        m(r, c) = exact::Rat(exact::Int(s.substr(0, slash)),
                             exact::Int(s.substr(slash + 1)));
      }
    }
  return m;
}

Json to_json(const sphere::SubsphereModel& m) {
  Json j;
  j["type"] = "subsphere";
  j["sphere_dim"] = m.sphere_dim;
  j["codim"] = m.codim;
  j["dim"] = m.sphere_dim - m.codim;
  j["antipodal_pair"] = m.antipodal_pair;
  j["singular_values"] = vector_to_json(m.singular_values);
  j["complement_frame"] = matrix_to_json(m.complement_frame);
  j["total_error"] = m.total_error;
  j["per_point_errors"] = vector_to_json(m.per_point_errors);
  return j;
}

sphere::SubsphereModel subsphere_from_json(const Json& j) {
  sphere::SubsphereModel m;
  m.sphere_dim = j.at("sphere_dim").get<Eigen::Index>();
  m.codim = j.at("codim").get<Eigen::Index>();
  m.antipodal_pair = j.at("antipodal_pair").get<bool>();
  m.singular_values = vector_from_json(j.at("singular_values"));
  m.complement_frame = matrix_from_json(j.at("complement_frame"));
  m.total_error = j.at("total_error").get<double>();
  m.per_point_errors = vector_from_json(j.at("per_point_errors"));
  return m;
}

Json to_json(const grassmann::SubgrassmannianModel& m) {
  Json j;
  j["type"] = "subgrassmannian";
  j["ambient_dim"] = m.ambient_dim;
  j["plane_dim"] = m.plane_dim;
  j["codim"] = m.codim;
  j["dim"] = m.plane_dim * (m.ambient_dim - m.codim - m.plane_dim);
  j["singular_values"] = vector_to_json(m.singular_values);
  j["complement_frame"] = matrix_to_json(m.complement_frame);
  j["total_error"] = m.total_error;
  j["per_point_errors"] = vector_to_json(m.per_point_errors);
  return j;
}

Json to_json(const torus::SubtorusModel& m) {
  Json j;
  j["type"] = "subtorus";
  j["A"] = intmat_to_json(m.A);
  j["offset"] = vector_to_json(m.offset);
  j["dual_basis"] = ratmat_to_json(torus::dual_lattice_basis(m.A));
  j["mean_error"] = m.mean_error;
  j["per_direction_errors"] = vector_to_json(m.per_direction_errors);
  j["per_point_errors"] = vector_to_json(m.per_point_errors);
  if (m.loo_error) j["loo_error"] = *m.loo_error;
  return j;
}

torus::SubtorusModel subtorus_from_json(const Json& j) {
  torus::SubtorusModel m;
  m.A = intmat_from_json(j.at("A"));
  m.offset = vector_from_json(j.at("offset"));
  m.mean_error = j.at("mean_error").get<double>();
  m.per_direction_errors = vector_from_json(j.at("per_direction_errors"));
  m.per_point_errors = vector_from_json(j.at("per_point_errors"));
  if (j.contains("loo_error")) m.loo_error = j.at("loo_error").get<double>();
  return m;
}

Json to_json(const poly::PolysphereModel& m) {
  Json j;
  j["type"] = "polysphere";
  Json constraints = Json::array();
  for (const auto& c : m.constraints) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          Json e;
          if constexpr (std::is_same_v<T, poly::CoupledSpheres>) {
            e["type"] = "coupled_spheres";
            e["i"] = v.i;
            e["j"] = v.j;
            e["rotation"] = matrix_to_json(v.rotation);
            e["error"] = v.error;
            e["well_determined"] = v.well_determined;
          } else if constexpr (std::is_same_v<T, poly::FixedFactor>) {
            e["type"] = "fixed_factor";
            e["i"] = v.i;
            e["point"] = vector_to_json(v.point);
            e["error"] = v.error;
          } else if constexpr (std::is_same_v<T, poly::CircleFactor>) {
            e["type"] = "circle_factor";
            e["i"] = v.i;
            e["axis"] = vector_to_json(v.axis);
            e["error"] = v.error;
          } else if constexpr (std::is_same_v<T, poly::FixedAngle>) {
            e["type"] = "fixed_angle";
            e["i"] = v.i;
            e["angle"] = v.angle;
            e["error"] = v.error;
          } else if constexpr (std::is_same_v<T, poly::TorusResonance>) {
            e["type"] = "torus_resonance";
            e["factors"] = v.factors;
            e["model"] = to_json(v.model);
          }
          constraints.push_back(std::move(e));
        },
        c);
  }
  j["constraints"] = std::move(constraints);
  j["total_error"] = m.total_error;
  j["per_point_errors"] = vector_to_json(m.per_point_errors);
  if (m.loo_error) j["loo_error"] = *m.loo_error;
  return j;
}

}  // namespace pssa
