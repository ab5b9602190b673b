#ifndef PSSA_SERIALIZE_HPP
#define PSSA_SERIALIZE_HPP

#include "pssa/grassmann.hpp"
#include "pssa/manifold.hpp"
#include "pssa/sphere.hpp"

namespace pssa {

// Matrices are serialized row-major; exact rationals as "p/q" strings.

Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);
Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);
Json intmat_to_json(const exact::IntMat& m);
exact::IntMat intmat_from_json(const Json& j);
Json ratmat_to_json(const exact::RatMat& m);
exact::RatMat ratmat_from_json(const Json& j);

Json to_json(const sphere::SubsphereModel& m);
Json to_json(const grassmann::SubgrassmannianModel& m);
Json to_json(const torus::SubtorusModel& m);
Json to_json(const poly::PolysphereModel& m);

sphere::SubsphereModel subsphere_from_json(const Json& j);
torus::SubtorusModel subtorus_from_json(const Json& j);

}  // namespace pssa

#endif  // PSSA_SERIALIZE_HPP
