#include "pssa/torus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pssa/config.hpp"
#include "pssa/parallel.hpp"

namespace pssa::torus {

bool is_unimodular(const IntMat& A) {
  const Eigen::Index k = A.rows();
  const Eigen::Index n = A.cols();
  if (k < 1 || k > n)
    throw DimensionError("is_unimodular: need 1 <= k <= n");
  return exact::minor_gcd(A) == 1;
}

RatMat dual_lattice_basis(const IntMat& A) {
  const IntMat gram = A * A.transpose();
  if (exact::determinant(gram) == 0)
    throw SingularGram("dual_lattice_basis: A A^T is singular");
  return exact::to_rational(A.transpose()) * exact::inverse(exact::to_rational(gram));
}

IntMat complete_to_unimodular(const IntMat& A) {
  if (!is_unimodular(A)) throw NotUnimodular("complete_to_unimodular");
  const Eigen::Index k = A.rows();
  const Eigen::Index n = A.cols();
  // A^T = Z^{-1} H with H = [H1; 0]; then A = H1^T V for the unimodular
  // V = (Z^{-1})^T, and stacking A on the trailing rows of V completes it.
  auto t = exact::hnf_with_transform(A.transpose());
  IntMat C(n, n);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < n; ++j) C(i, j) = A(i, j);
  for (Eigen::Index i = k; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) C(i, j) = t.zinv(j, i);
  const Int det = exact::determinant(C);
  if (det != 1 && det != -1)
    throw NotUnimodular("complete_to_unimodular: completion failed");
  return C;
}

double circular_mean(const Eigen::VectorXd& angles) {
  if (angles.size() == 0) throw DimensionError("circular_mean: no angles");
  double s = 0.0, c = 0.0;
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    s += std::sin(2.0 * M_PI * angles(i));
    c += std::cos(2.0 * M_PI * angles(i));
  }
  if (std::hypot(s, c) <= tolerances().degenerate_mean)
    throw DegenerateMean("circular_mean: resultant is numerically zero");
  return wrap_unit(std::atan2(s, c) / (2.0 * M_PI));
}

double subtorus_residual(const Eigen::VectorXd& x, const SubtorusModel& model) {
  if (x.size() != model.A.cols())
    throw DimensionError("subtorus_residual: dimension mismatch");
  const Eigen::MatrixXd Ad = exact::to_double(model.A);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < Ad.rows(); ++j) {
    const double r = wrap_centered(Ad.row(j).dot(x) - model.offset(j));
    const double e = 0.5 * std::sin(M_PI * std::abs(r));
    sum += e * e;
  }
  return std::sqrt(sum);
}

namespace {

// Residual matrix of d_c values, one row per resonance relation.
Eigen::MatrixXd residual_table(const Eigen::MatrixXd& Y,
                               const Eigen::VectorXd& c) {
  Eigen::MatrixXd E(Y.rows(), Y.cols());
  for (Eigen::Index j = 0; j < Y.rows(); ++j)
    for (Eigen::Index i = 0; i < Y.cols(); ++i)
      E(j, i) = 0.5 * std::sin(M_PI * std::abs(wrap_centered(Y(j, i) - c(j))));
  return E;
}

void finish_model(SubtorusModel& model, const Eigen::MatrixXd& Y) {
  const Eigen::MatrixXd E = residual_table(Y, model.offset);
  const Eigen::Index d = Y.cols();
  model.per_point_errors = E.colwise().norm();
  model.per_direction_errors.resize(E.rows());
  for (Eigen::Index j = 0; j < E.rows(); ++j)
    model.per_direction_errors(j) = E.row(j).norm() / std::sqrt(double(d));
  model.mean_error = model.per_point_errors.norm() / std::sqrt(double(d));
}

Eigen::MatrixXd resonance_coordinates(const Eigen::MatrixXd& X,
                                      const IntMat& A) {
  Eigen::MatrixXd Y = exact::to_double(A) * X;
  for (Eigen::Index j = 0; j < Y.rows(); ++j)
    for (Eigen::Index i = 0; i < Y.cols(); ++i) Y(j, i) = wrap_unit(Y(j, i));
  return Y;
}

}  // namespace

SubtorusModel fit_subtorus(const Eigen::MatrixXd& X, const IntMat& A) {
  if (X.cols() < 1) throw DimensionError("fit_subtorus: no data");
  if (A.cols() != X.rows())
    throw DimensionError("fit_subtorus: resonance/data dimensions differ");
  if (!is_unimodular(A)) throw NotUnimodular("fit_subtorus: A not unimodular");

  const Eigen::MatrixXd Y = resonance_coordinates(X, A);
  SubtorusModel model;
  model.A = A;
  model.offset.resize(Y.rows());
  for (Eigen::Index j = 0; j < Y.rows(); ++j)
    model.offset(j) = circular_mean(Y.row(j));
  finish_model(model, Y);
  return model;
}

std::vector<IntMat> enumerate_resonances(Eigen::Index n, Eigen::Index k,
                                         const Int& bound) {
  if (bound < 1) throw DimensionError("enumerate_resonances: bound >= 1");
  if (k < 1 || k > n)
    throw DimensionError("enumerate_resonances: need 1 <= k <= n");
  const long hi = bound.convert_to<long>() - 1;
  const Eigen::Index cells = k * n;
  std::vector<long> entry(static_cast<std::size_t>(cells), -hi);
  std::set<IntMat> canon;
  if (hi >= 0) {
    while (true) {
      IntMat A(k, n);
      bool nonzero = false;
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          const long v = entry[static_cast<std::size_t>(i * n + j)];
          A(i, j) = v;
          nonzero |= (v != 0);
        }
      if (nonzero && exact::minor_gcd(A) == 1) canon.insert(exact::hnf(A));
      // odometer
      Eigen::Index pos = cells - 1;
      while (pos >= 0 && entry[static_cast<std::size_t>(pos)] == hi) {
        entry[static_cast<std::size_t>(pos)] = -hi;
        --pos;
      }
      if (pos < 0) break;
      ++entry[static_cast<std::size_t>(pos)];
    }
  }
  return {canon.begin(), canon.end()};
}

SelectionResult loo_model_selection(const Eigen::MatrixXd& X,
                                    const std::vector<IntMat>& candidates) {
  const Eigen::Index d = X.cols();
  if (d < 2) throw DimensionError("loo_model_selection: need >= 2 points");

  struct Slot {
    bool ok = false;
    double loo = 0.0;
  };
  std::vector<Slot> slots(candidates.size());

  parallel_for(candidates.size(), [&](std::size_t idx) {
    const IntMat& A = candidates[idx];
    try {
      const Eigen::MatrixXd Y = resonance_coordinates(X, A);
      const Eigen::Index k = Y.rows();
      // per-row resultant sums; leaving one point out subtracts its terms
      Eigen::MatrixXd sins(k, d), coss(k, d);
      Eigen::VectorXd sin_tot = Eigen::VectorXd::Zero(k);
      Eigen::VectorXd cos_tot = Eigen::VectorXd::Zero(k);
      for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
          sins(j, i) = std::sin(2.0 * M_PI * Y(j, i));
          coss(j, i) = std::cos(2.0 * M_PI * Y(j, i));
          sin_tot(j) += sins(j, i);
          cos_tot(j) += coss(j, i);
        }
      double sum = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        double e2 = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
          const double s = sin_tot(j) - sins(j, i);
          const double c = cos_tot(j) - coss(j, i);
          if (std::hypot(s, c) <= tolerances().degenerate_mean)
            throw DegenerateMean("loo fit degenerate");
          const double cj = wrap_unit(std::atan2(s, c) / (2.0 * M_PI));
          const double e =
              0.5 * std::sin(M_PI * std::abs(wrap_centered(Y(j, i) - cj)));
          e2 += e * e;
        }
        sum += e2;
      }
      slots[idx].ok = true;
      slots[idx].loo = std::sqrt(sum / static_cast<double>(d));
    } catch (const NumericalError&) {
      slots[idx].ok = false;
    }
  });

  SelectionResult result;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (slots[i].ok)
      result.ranked.push_back({candidates[i], slots[i].loo});
    else
      result.skipped.push_back(candidates[i]);
  }
  std::sort(result.ranked.begin(), result.ranked.end(),
            [](const RankedResonance& a, const RankedResonance& b) {
              if (a.loo_error != b.loo_error) return a.loo_error < b.loo_error;
              return a.A < b.A;
            });
  return result;
}

std::vector<SubtorusModel> nested_chain(const Eigen::MatrixXd& X,
                                        const IntMat& C) {
  if (C.rows() != C.cols() || C.rows() != X.rows())
    throw DimensionError("nested_chain: C must be n×n");
  const Int det = exact::determinant(C);
  if (det != 1 && det != -1)
    throw NotUnimodular("nested_chain: |det C| != 1");
  std::vector<SubtorusModel> chain;
  const Eigen::Index n = C.rows();
  for (Eigen::Index k = 1; k <= n - 1; ++k)
    chain.push_back(fit_subtorus(X, C.top_rows(k)));
  return chain;
}

IntMat reduce_resonance_basis(const IntMat& A) {
  if (!is_unimodular(A))
    throw NotUnimodular("reduce_resonance_basis: A not unimodular");
  if (A.rows() == 1) return A;
  IntMat reduced = (A.rows() == 2) ? exact::lagrange_reduce(A)
                                   : exact::lll_reduce(A);
  if (!exact::same_row_lattice(A, reduced))
    throw Error("reduce_resonance_basis: lattice changed");  // unreachable
  return reduced;
}

Eigen::VectorXd cvp_oracle(const RatMat& B, const Eigen::VectorXd& target) {
  const Eigen::Index k = B.cols();
  if (k < 1 || k > 3)
    throw DimensionError("cvp_oracle: desk scale only (k <= 3)");
  if (B.rows() != target.size())
    throw DimensionError("cvp_oracle: dimension mismatch");
  const Eigen::MatrixXd Bd = exact::to_double(B);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bd, Eigen::ComputeThinU |
                                                Eigen::ComputeThinV);
  const double sigma_min = svd.singularValues().minCoeff();
  if (sigma_min <= 0.0)
    throw SingularGram("cvp_oracle: degenerate basis");

  // Babai start, then enumerate every coefficient vector that could beat it:
  // ||B a - t|| <= d0 forces ||a - a0||_inf <= 2 d0 / sigma_min.
  const Eigen::VectorXd coeff =
      svd.solve(target);
  Eigen::VectorXi base(k);
  for (Eigen::Index j = 0; j < k; ++j)
    base(j) = static_cast<int>(std::lround(coeff(j)));
  const double d0 =
      (Bd * base.cast<double>() - target).norm();
  const int radius =
      static_cast<int>(std::ceil(2.0 * d0 / sigma_min + 1e-9)) + 1;

  Eigen::VectorXi best = base;
  double best_dist = d0;
  Eigen::VectorXi delta = Eigen::VectorXi::Constant(k, -radius);
  while (true) {
    const Eigen::VectorXi a = base + delta;
    const double dist = (Bd * a.cast<double>() - target).norm();
    if (dist < best_dist ||
        (dist == best_dist &&
         std::lexicographical_compare(a.begin(), a.end(), best.begin(),
                                      best.end()))) {
      best_dist = dist;
      best = a;
    }
    Eigen::Index pos = k - 1;
    while (pos >= 0 && delta(pos) == radius) {
      delta(pos) = -radius;
      --pos;
    }
    if (pos < 0) break;
    ++delta(pos);
  }
  return Bd * best.cast<double>();
}

}  // namespace pssa::torus
