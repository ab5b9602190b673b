#ifndef PSSA_TESTS_ORACLES_HPP
#define PSSA_TESTS_ORACLES_HPP

// Test-only sampling and brute-force helpers. These stay independent of the
// library's fitting paths so they can serve as oracles for them.

#include <Eigen/Dense>
#include <random>

namespace oracle {

using Rng = std::mt19937_64;

inline Eigen::MatrixXd gaussian(Rng& rng, Eigen::Index rows,
                                Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Eigen::VectorXd random_unit(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd v;
  do {
    v = gaussian(rng, n, 1).col(0);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

/// Uniformly distributed orthonormal n×m frame (QR of a Gaussian matrix,
/// deliberately a different construction than the library's).
inline Eigen::MatrixXd random_frame(Rng& rng, Eigen::Index n,
                                    Eigen::Index m) {
  const Eigen::MatrixXd g = gaussian(rng, n, m);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q.leftCols(m);
}

inline Eigen::Matrix3d random_rotation(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q;
  do {
    q = Eigen::Quaterniond(normal(rng), normal(rng), normal(rng), normal(rng));
  } while (q.norm() < 1e-8);
  q.normalize();
  return q.toRotationMatrix();
}

/// Sum-of-squares projection error of unit columns X against a candidate
/// complement frame V, as a plain formula.
inline double frame_fit_error(const Eigen::MatrixXd& X,
                              const Eigen::MatrixXd& V) {
  return (X.transpose() * V).norm();
}

inline double wrap_unit(double x) {
  const double w = x - std::floor(x);
  return w < 1.0 ? w : 0.0;
}

inline double wrap_centered(double x) { return x - std::ceil(x - 0.5); }

/// d_c on the circle, straight from its definition.
inline double circle_dist(double a, double b) {
  return 0.5 * std::sin(M_PI * std::abs(wrap_centered(a - b)));
}

}  // namespace oracle

#endif  // PSSA_TESTS_ORACLES_HPP
