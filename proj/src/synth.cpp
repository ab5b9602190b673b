#include "pssa/synth.hpp"

#include <cmath>
#include <random>

#include "pssa/torus.hpp"

namespace pssa::synth {

namespace {

using Rng = std::mt19937_64;

Eigen::VectorXd gaussian_point(Rng& rng, const Eigen::VectorXd& mean,
                               const Eigen::VectorXd& stddev) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    z(i) = mean(i) + stddev(i) * normal(rng);
  return z;
}

Dataset sphere_example(int variant, std::uint64_t seed) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd stddev(4);
  if (variant == 1) {
    stddev << 1.0, 1.0, 0.1, 0.05;
  } else if (variant == 2) {
    stddev << 1.0, 0.3, 0.1, 0.05;
  } else {
    mean << 1.0, 0.0, 0.0, 0.0;
    stddev << 0.0, 0.4, 0.1, 0.05;
  }

  Rng rng(seed);
  const int d = 20;
  Eigen::MatrixXd X(4, d);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd z;
    do {
      z = gaussian_point(rng, mean, stddev);
    } while (z.norm() < 1e-8);
    X.col(i) = z / z.norm();
  }

  Dataset data;
  data.manifold = SphereDesc{3};
  data.columns = X;
  data.header = {
      " pssa dataset",
      " manifold=sphere n=3",
      " example=sphere-" + std::to_string(variant) +
          " seed=" + std::to_string(seed),
      " generator: 20 points, componentwise normal (stddev " +
          (variant == 1 ? std::string("[1,1,0.1,0.05]")
           : variant == 2
               ? std::string("[1,0.3,0.1,0.05]")
               : std::string("[0,0.4,0.1,0.05] around [1,0,0,0]")) +
          ") projected to the unit sphere",
  };
  return data;
}

Dataset torus25_example(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 0.1 / (2.0 * M_PI));

  const int d = 50;
  const double c = uniform(rng);
  // base point with 2x + 5y = c, winding direction (5,-2)
  const Eigen::Vector2d x0(2.0 * c / 29.0, 5.0 * c / 29.0);
  const Eigen::Vector2d wind(5.0, -2.0);

  Eigen::MatrixXd X(2, d);
  for (int i = 0; i < d; ++i) {
    const double t = uniform(rng);
    Eigen::Vector2d p = x0 + t * wind;
    p(0) = torus::wrap_unit(p(0) + normal(rng));
    p(1) = torus::wrap_unit(p(1) + normal(rng));
    X.col(i) = p;
  }

  Dataset data;
  data.manifold = TorusDesc{2};
  data.columns = X;
  data.header = {
      " pssa dataset",
      " manifold=torus n=2",
      " example=torus-25 seed=" + std::to_string(seed),
      " generator: 50 points on the geodesic 2x1+5x2=const, normal angle "
      "noise of stddev 0.1/(2pi) per coordinate",
  };
  return data;
}

Dataset torus123_example(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  // resonance rows orthogonal to the direction [1,2,3]; det C = 1
  const exact::IntMat C{{-1, -1, 1}, {-2, 1, 0}, {0, 1, -1}};
  const Eigen::Matrix3d Cinv = exact::to_double(exact::inverse_unimodular(C));

  // stddevs in the resonance coordinates, chosen so the fitted chain's
  // per-direction d_c errors land near 0.049 and 0.169
  const double sigma1 = 0.0313;
  const double sigma2 = 0.1146;

  const int d = 50;
  const double c1 = uniform(rng);
  const double c2 = uniform(rng);
  Eigen::MatrixXd X(3, d);
  for (int i = 0; i < d; ++i) {
    Eigen::Vector3d y(c1 + sigma1 * normal(rng), c2 + sigma2 * normal(rng),
                      uniform(rng));
    Eigen::Vector3d x = Cinv * y;
    for (int j = 0; j < 3; ++j) X(j, i) = torus::wrap_unit(x(j));
  }

  Dataset data;
  data.manifold = TorusDesc{3};
  data.columns = X;
  data.header = {
      " pssa dataset",
      " manifold=torus n=3",
      " example=torus-123 seed=" + std::to_string(seed),
      " generator: 50 points near the geodesic through direction [1,2,3]; "
      "resonance-coordinate noise stddev [0.0313, 0.1146], free coordinate "
      "uniform",
  };
  return data;
}

Eigen::Matrix3d random_rotation(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector4d q;
  do {
    for (int i = 0; i < 4; ++i) q(i) = normal(rng);
  } while (q.norm() < 1e-8);
  q.normalize();
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  Eigen::Matrix3d r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

Eigen::Vector3d jitter_unit(Rng& rng, const Eigen::Vector3d& v, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  Eigen::Vector3d out = v;
  for (int i = 0; i < 3; ++i) out(i) += normal(rng);
  const double norm = out.norm();
  return norm < 1e-8 ? v : Eigen::Vector3d(out / norm);
}

Dataset poly_coupled_example(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const Eigen::Matrix3d r0 = random_rotation(rng);

  const int d = 20;
  Dataset data;
  data.manifold = PolysphereDesc{{poly::FactorKind::Sphere,
                                  poly::FactorKind::Sphere}};
  for (int i = 0; i < d; ++i) {
    const double t = 2.0 * M_PI * uniform(rng);
    const Eigen::Vector3d equator(std::cos(t), std::sin(t), 0.0);
    const Eigen::Vector3d x = jitter_unit(rng, equator, 0.15);
    const Eigen::Vector3d y = jitter_unit(rng, r0 * x, 0.02);
    data.poly_points.push_back({x, y});
  }
  data.header = {
      " pssa dataset",
      " manifold=polysphere n=2",
      " example=poly-coupled seed=" + std::to_string(seed),
      " generator: 20 pairs (x, R0 x): x near the equator (jitter 0.15), "
      "second factor rotated by a fixed random R0 plus jitter 0.02",
  };
  return data;
}

Dataset poly_locked_example(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const Eigen::Matrix3d q = random_rotation(rng);
  const double phase = uniform(rng);

  const int d = 20;
  Dataset data;
  data.manifold = PolysphereDesc{{poly::FactorKind::Sphere,
                                  poly::FactorKind::Sphere}};
  for (int i = 0; i < d; ++i) {
    const double t = uniform(rng);
    const double a = 2.0 * M_PI * t;
    const double b = 2.0 * M_PI * (t + phase);
    const Eigen::Vector3d x = jitter_unit(
        rng, Eigen::Vector3d(std::cos(a), std::sin(a), 0.0), 0.02);
    const Eigen::Vector3d y = jitter_unit(
        rng, q * Eigen::Vector3d(std::cos(b), std::sin(b), 0.0), 0.02);
    data.poly_points.push_back({x, y});
  }
  data.header = {
      " pssa dataset",
      " manifold=polysphere n=2",
      " example=poly-locked seed=" + std::to_string(seed),
      " generator: 20 pairs of phase-locked circle points (offset fixed per "
      "seed), second circle rotated by a fixed random frame, jitter 0.02",
  };
  return data;
}

}  // namespace

std::vector<std::string> known_examples() {
  return {"sphere-1", "sphere-2", "sphere-3", "torus-25",
          "torus-123", "poly-coupled", "poly-locked"};
}

Dataset generate(const std::string& example_id, std::uint64_t seed) {
  if (example_id == "sphere-1") return sphere_example(1, seed);
  if (example_id == "sphere-2") return sphere_example(2, seed);
  if (example_id == "sphere-3") return sphere_example(3, seed);
  if (example_id == "torus-25") return torus25_example(seed);
  if (example_id == "torus-123") return torus123_example(seed);
  if (example_id == "poly-coupled") return poly_coupled_example(seed);
  if (example_id == "poly-locked") return poly_locked_example(seed);
  throw UnknownExample("unknown synthetic example: " + example_id);
}

}  // namespace pssa::synth
