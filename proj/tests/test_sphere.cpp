#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pssa/sphere.hpp"
#include "pssa/synth.hpp"

using namespace pssa;

namespace {

Eigen::MatrixXd random_sphere_data(oracle::Rng& rng, Eigen::Index dim,
                                   Eigen::Index count) {
  Eigen::MatrixXd x(dim, count);
  for (Eigen::Index i = 0; i < count; ++i)
    x.col(i) = oracle::random_unit(rng, dim);
  return x;
}

}  // namespace

TEST_CASE("distances to a great circle of S^2") {
  Eigen::MatrixXd v(3, 1);
  v << 0, 0, 1;  // equator x3 = 0
  Eigen::Vector3d pole(0, 0, 1), on(1, 0, 0), mid(1.0 / std::sqrt(2.0), 0,
                                                  1.0 / std::sqrt(2.0));
  CHECK(sphere::riemannian_distance_to_subsphere(pole, v) ==
        doctest::Approx(M_PI / 2));
  CHECK(sphere::riemannian_distance_to_subsphere(on, v) ==
        doctest::Approx(0.0));
  CHECK(sphere::riemannian_distance_to_subsphere(mid, v) ==
        doctest::Approx(M_PI / 4));
  CHECK(sphere::projection_distance_to_subsphere(pole, v) ==
        doctest::Approx(1.0));
  CHECK(sphere::projection_distance_to_subsphere(on, v) ==
        doctest::Approx(0.0));
}

TEST_CASE("projection distance is the sine of the Riemannian distance") {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd x = oracle::random_unit(rng, 5);
    const Eigen::MatrixXd v = oracle::random_frame(rng, 5, 2);
    const double riem = sphere::riemannian_distance_to_subsphere(x, v);
    const double proj = sphere::projection_distance_to_subsphere(x, v);
    CHECK(std::abs(proj - std::sin(riem)) < 1e-10);
  }
}

TEST_CASE("fit_subsphere: plane data recovers the equator exactly") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 0, 0, 1, 0, 0;
  const auto model = sphere::fit_subsphere(x, 1);
  CHECK(model.total_error == doctest::Approx(0.0));
  CHECK(std::abs(model.complement_frame(2, 0)) == doctest::Approx(1.0));
  CHECK_FALSE(model.antipodal_pair);
}

TEST_CASE("fit_subsphere rejects non-unit data unless renormalizing") {
  Eigen::MatrixXd x(3, 2);
  x << 2, 0, 0, 1, 0, 0;
  CHECK_THROWS_AS(sphere::fit_subsphere(x, 1), NonUnitData);
  const auto model = sphere::fit_subsphere(x, 1, true);
  CHECK(model.total_error == doctest::Approx(0.0));
}

TEST_CASE("fit_subsphere minimality against sampled frames") {
  oracle::Rng rng(29);
  const Eigen::MatrixXd x = random_sphere_data(rng, 4, 20);
  const auto model = sphere::fit_subsphere(x, 2);
  for (int s = 0; s < 10000; ++s) {
    const Eigen::MatrixXd v = oracle::random_frame(rng, 4, 2);
    CHECK(model.total_error <= oracle::frame_fit_error(x, v) + 1e-12);
  }
}

TEST_CASE("per-point errors recombine into the total") {
  oracle::Rng rng(31);
  const Eigen::MatrixXd x = random_sphere_data(rng, 4, 15);
  for (Eigen::Index m = 1; m <= 3; ++m) {
    const auto model = sphere::fit_subsphere(x, m);
    CHECK(model.total_error * model.total_error ==
          doctest::Approx(model.per_point_errors.squaredNorm())
              .epsilon(1e-8));
    // energy split: small tail + large head = number of points
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
    const double head = svd.singularValues().squaredNorm() -
                        model.singular_values.squaredNorm();
    CHECK(model.total_error * model.total_error + head ==
          doctest::Approx(static_cast<double>(x.cols())).epsilon(1e-8));
  }
}

TEST_CASE("m = n yields the antipodal pair flag") {
  oracle::Rng rng(37);
  const Eigen::MatrixXd x = random_sphere_data(rng, 4, 10);
  const auto model = sphere::fit_subsphere(x, 3);
  CHECK(model.antipodal_pair);
}

TEST_CASE("pssa_chain is nested with nondecreasing errors") {
  oracle::Rng rng(41);
  const Eigen::MatrixXd x = random_sphere_data(rng, 5, 25);
  const auto chain = sphere::pssa_chain(x);
  REQUIRE(chain.size() == 3);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    CHECK(chain[i].total_error <= chain[i + 1].total_error + 1e-12);
    const auto& small = chain[i].complement_frame;
    const auto& big = chain[i + 1].complement_frame;
    const Eigen::MatrixXd residual =
        small - big * (big.transpose() * small);
    CHECK(residual.norm() < 1e-8);
  }
}

TEST_CASE("example regeneration: dataset 1 spectrum splits two small vs two large") {
  const auto data = synth::generate("sphere-1", 1);
  const auto model = sphere::fit_subsphere(data.columns, 2);
  // the two complement directions carry far less energy than the two kept
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(data.columns);
  Eigen::VectorXd sv = svd.singularValues();  // descending
  CHECK(model.singular_values(1) < 0.5 * sv(1));
}

TEST_CASE("example regeneration: dataset 2 chain errors strictly ordered") {
  const auto data = synth::generate("sphere-2", 1);
  const auto chain = sphere::pssa_chain(data.columns);
  REQUIRE(chain.size() == 2);
  CHECK(chain[0].total_error < chain[1].total_error);
  // the S^0 fit (axis = direction kept last) aligns with e1
  const auto s0 = sphere::fit_subsphere(data.columns, 3);
  const Eigen::MatrixXd axis =
      linalg::orthogonal_complement(s0.complement_frame);
  CHECK(std::abs(axis(0, 0)) > std::cos(25.0 * M_PI / 180.0));
  // direct minimization oracle: no sampled axis does better
  oracle::Rng rng(43);
  for (int s = 0; s < 10000; ++s) {
    const Eigen::MatrixXd v = oracle::random_frame(rng, 4, 3);
    CHECK(s0.total_error <= oracle::frame_fit_error(data.columns, v) + 1e-12);
  }
}

TEST_CASE("spherical_mean basics") {
  Eigen::MatrixXd same(3, 3);
  same << 1, 1, 1, 0, 0, 0, 0, 0, 0;
  CHECK((sphere::spherical_mean(same) - Eigen::Vector3d(1, 0, 0)).norm() <
        1e-14);

  Eigen::MatrixXd pair(3, 2);
  pair << 1, 0, 0, 1, 0, 0;
  const Eigen::VectorXd mean = sphere::spherical_mean(pair);
  CHECK(mean(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(mean(1) == doctest::Approx(1.0 / std::sqrt(2.0)));

  Eigen::MatrixXd antipodal(3, 2);
  antipodal << 1, -1, 0, 0, 0, 0;
  CHECK_THROWS_AS(sphere::spherical_mean(antipodal), DegenerateMean);
}

TEST_CASE("fit_subsphere rejects codimensions out of range") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 0, 0, 1, 0, 0;
  CHECK_THROWS_AS(sphere::fit_subsphere(x, 0), DimensionError);
  CHECK_THROWS_AS(sphere::fit_subsphere(x, 3), DimensionError);
}
