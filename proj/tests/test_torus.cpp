#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pssa/synth.hpp"
#include "pssa/torus.hpp"

using namespace pssa;
using exact::Int;
using exact::IntMat;
using exact::Rat;

namespace {

// rational-solve membership check, independent of the HNF route
bool row_in_lattice_torus(const IntMat& a, const IntMat& row) {
  const exact::RatMat ar = exact::to_rational(a);
  const exact::RatMat gram_inv =
      exact::inverse(exact::to_rational(a * a.transpose()));
  const exact::RatMat coeff =
      gram_inv * (ar * exact::to_rational(row).transpose());
  for (Eigen::Index i = 0; i < coeff.rows(); ++i)
    if (denominator(coeff(i, 0)) != 1) return false;
  exact::RatMat recon(1, a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      recon(0, j) += coeff(i, 0) * ar(i, j);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (recon(0, j) != Rat(row(0, j))) return false;
  return true;
}

bool lattices_equal_by_membership_torus(const IntMat& a, const IntMat& b) {
  for (const auto* m : {&a, &b}) {
    const auto& other = (m == &a) ? b : a;
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      IntMat row(1, m->cols());
      for (Eigen::Index j = 0; j < m->cols(); ++j) row(0, j) = (*m)(i, j);
      if (!row_in_lattice_torus(other, row)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("unimodularity of the published examples") {
  CHECK(torus::is_unimodular(IntMat{{2, 5}}));
  CHECK_FALSE(torus::is_unimodular(IntMat{{2, 0}}));
  CHECK(torus::is_unimodular(IntMat{{-3, 0, 1}, {-2, 1, 0}}));
  CHECK_THROWS_AS(torus::is_unimodular(IntMat{{1, 0}, {0, 1}, {1, 1}}),
                  DimensionError);
}

TEST_CASE("dual lattice basis, exactly") {
  const auto b = torus::dual_lattice_basis(IntMat{{-3, 0, 1}, {-2, 1, 0}});
  CHECK(b(0, 0) == Rat(-3, 14));
  CHECK(b(0, 1) == Rat(-1, 7));
  CHECK(b(1, 0) == Rat(-6, 14));
  CHECK(b(1, 1) == Rat(5, 7));
  CHECK(b(2, 0) == Rat(5, 14));
  CHECK(b(2, 1) == Rat(-3, 7));

  const auto b25 = torus::dual_lattice_basis(IntMat{{2, 5}});
  CHECK(b25(0, 0) == Rat(2, 29));
  CHECK(b25(1, 0) == Rat(5, 29));
  const Eigen::MatrixXd bd = exact::to_double(b25);
  CHECK(bd.norm() == doctest::Approx(1.0 / std::sqrt(29.0)).epsilon(1e-12));

  const auto axis = torus::dual_lattice_basis(IntMat{{1, 0}});
  CHECK(axis(0, 0) == Rat(1));
  CHECK(axis(1, 0) == Rat(0));
}

TEST_CASE("complete_to_unimodular") {
  const IntMat id_prefix{{1, 0, 0}, {0, 1, 0}};
  const IntMat c0 = torus::complete_to_unimodular(id_prefix);
  Int det0 = exact::determinant(c0);
  CHECK((det0 == 1 || det0 == -1));

  for (const IntMat& a : {IntMat{{2, 5}}, IntMat{{-3, 0, 1}, {-2, 1, 0}}}) {
    const IntMat c = torus::complete_to_unimodular(a);
    CHECK(c.rows() == a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) CHECK(c(i, j) == a(i, j));
    const Int det = exact::determinant(c);
    CHECK((det == 1 || det == -1));
  }
  CHECK_THROWS_AS(torus::complete_to_unimodular(IntMat{{2, 4}}),
                  NotUnimodular);
}

TEST_CASE("circular mean") {
  Eigen::VectorXd single(1);
  single << 0.25;
  CHECK(torus::circular_mean(single) == doctest::Approx(0.25));

  Eigen::VectorXd sym(2);
  sym << 0.1, 0.9;
  CHECK(torus::circular_mean(sym) == doctest::Approx(0.0).epsilon(1e-12));

  Eigen::VectorXd pair(2);
  pair << 0.2, 0.3;
  CHECK(torus::circular_mean(pair) == doctest::Approx(0.25));

  Eigen::VectorXd antipodal(2);
  antipodal << 0.0, 0.5;
  CHECK_THROWS_AS(torus::circular_mean(antipodal), DegenerateMean);
}

TEST_CASE("subtorus residual against the metric definition") {
  torus::SubtorusModel model;
  model.A = IntMat{{2, 5}};
  model.offset = Eigen::VectorXd::Constant(1, 0.3);

  Eigen::VectorXd on(2);
  on << 0.4, 0.1;  // 2x1 + 5x2 = 1.3, one full turn past the offset
  CHECK(torus::subtorus_residual(on, model) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // half a turn away from the offset in the resonance coordinate
  Eigen::VectorXd mid(2);
  mid << (0.3 + 0.5) / 2.0, 0.0;
  CHECK(torus::subtorus_residual(mid, model) == doctest::Approx(0.5));

  oracle::Rng rng(73);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd x(2);
    x << uniform(rng), uniform(rng);
    const double direct =
        oracle::circle_dist(2 * x(0) + 5 * x(1), model.offset(0));
    CHECK(std::abs(torus::subtorus_residual(x, model) - direct) < 1e-12);
  }
}

TEST_CASE("fit_subtorus: exact data on a subtorus") {
  const IntMat a{{2, 5}};
  Eigen::MatrixXd x(2, 8);
  oracle::Rng rng(79);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int i = 0; i < 8; ++i) {
    const double t = uniform(rng);
    x(0, i) = oracle::wrap_unit(0.3 * 2.0 / 29.0 + 5.0 * t);
    x(1, i) = oracle::wrap_unit(0.3 * 5.0 / 29.0 - 2.0 * t);
  }
  const auto model = torus::fit_subtorus(x, a);
  CHECK(oracle::circle_dist(model.offset(0), 0.3) < 1e-9);
  CHECK(model.mean_error < 1e-9);
}

TEST_CASE("fit_subtorus beats a fine grid of offsets") {
  oracle::Rng rng(83);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::MatrixXd x(2, 30);
  for (int i = 0; i < 30; ++i) {
    x(0, i) = uniform(rng);
    x(1, i) = uniform(rng);
  }
  const IntMat a{{2, 5}};
  const auto model = torus::fit_subtorus(x, a);

  auto objective = [&](double c) {
    double sum = 0.0;
    for (int i = 0; i < 30; ++i) {
      const double e = oracle::circle_dist(2 * x(0, i) + 5 * x(1, i), c);
      sum += e * e;
    }
    return sum;
  };
  const double fitted = objective(model.offset(0));
  for (int g = 0; g < 10000; ++g)
    CHECK(fitted <= objective(g / 10000.0) + 1e-9);
}

TEST_CASE("fit_subtorus recovers the offset of the noisy published dataset") {
  const auto data = synth::generate("torus-25", 5);
  const auto model = torus::fit_subtorus(data.columns, IntMat{{2, 5}});
  // noise per resonance coordinate: sigma * sqrt(4 + 25)
  const double sigma = (0.1 / (2 * M_PI)) * std::sqrt(29.0);
  // recover the seed's true offset by refitting noiseless data
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double c_true = uniform(rng);  // first draw in the generator
  CHECK(oracle::circle_dist(model.offset(0), c_true) <
        0.5 * std::sin(M_PI * 3.0 * sigma / std::sqrt(50.0)));
}

TEST_CASE("translation equivariance and relabeling invariance") {
  oracle::Rng rng(89);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::MatrixXd x(3, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 3; ++j) x(j, i) = uniform(rng);
  const IntMat a{{-3, 0, 1}, {-2, 1, 0}};
  const auto base = torus::fit_subtorus(x, a);

  Eigen::VectorXd t(3);
  t << 0.37, 0.81, 0.12;
  Eigen::MatrixXd shifted = x;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 3; ++j)
      shifted(j, i) = oracle::wrap_unit(shifted(j, i) + t(j));
  const auto moved = torus::fit_subtorus(shifted, a);
  const Eigen::MatrixXd ad = exact::to_double(a);
  const Eigen::VectorXd expected = ad * t;
  for (int j = 0; j < 2; ++j)
    CHECK(oracle::circle_dist(moved.offset(j),
                              oracle::wrap_unit(base.offset(j) + expected(j))) <
          1e-10);

  // permuting the data and integer-shifting a point changes nothing
  Eigen::MatrixXd permuted = x.rowwise().reverse();
  permuted(0, 0) += 3.0;  // integer lift
  permuted(0, 0) = oracle::wrap_unit(permuted(0, 0));
  const auto relabeled = torus::fit_subtorus(permuted, a);
  for (int j = 0; j < 2; ++j)
    CHECK(oracle::circle_dist(relabeled.offset(j), base.offset(j)) < 1e-12);
  CHECK(std::abs(relabeled.mean_error - base.mean_error) < 1e-12);
}

TEST_CASE("enumerate_resonances: small cases") {
  const auto tiny = torus::enumerate_resonances(2, 1, 2);
  REQUIRE(tiny.size() == 4);
  CHECK(tiny[0] == IntMat{{0, 1}});
  CHECK(tiny[1] == IntMat{{1, -1}});
  CHECK(tiny[2] == IntMat{{1, 0}});
  CHECK(tiny[3] == IntMat{{1, 1}});

  const auto big = torus::enumerate_resonances(2, 1, 10);
  bool has25 = false;
  for (const auto& a : big) has25 |= (a == IntMat{{2, 5}});
  CHECK(has25);
  for (const auto& a : big) CHECK(torus::is_unimodular(a));
  // duplicate-free by construction
  for (std::size_t i = 0; i + 1 < big.size(); ++i) CHECK(big[i] < big[i + 1]);
}

TEST_CASE("loo ranks the generating resonance first on the published dataset") {
  const auto data = synth::generate("torus-25", 1);
  const auto candidates = torus::enumerate_resonances(2, 1, 10);
  const auto sel = torus::loo_model_selection(data.columns, candidates);
  REQUIRE_FALSE(sel.ranked.empty());
  CHECK(sel.ranked.front().A == IntMat{{2, 5}});
}

TEST_CASE("loo: exact-data candidate wins with zero error") {
  Eigen::MatrixXd x(2, 10);
  oracle::Rng rng(97);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double t = uniform(rng);
    x(0, i) = oracle::wrap_unit(0.2 * 1.0 / 2.0 + 1.0 * t);
    x(1, i) = oracle::wrap_unit(0.2 * 1.0 / 2.0 - 1.0 * t);
  }
  // data lies on x1 + x2 = 0.2
  const auto sel =
      torus::loo_model_selection(x, torus::enumerate_resonances(2, 1, 3));
  REQUIRE_FALSE(sel.ranked.empty());
  CHECK(sel.ranked.front().A == IntMat{{1, 1}});
  CHECK(sel.ranked.front().loo_error < 1e-9);
}

TEST_CASE("loo on two points matches the hand calculation") {
  Eigen::MatrixXd x(2, 2);
  x << 0.10, 0.30,  //
      0.00, 0.00;
  const IntMat a{{1, 0}};
  const auto sel = torus::loo_model_selection(x, {a});
  REQUIRE(sel.ranked.size() == 1);
  // each left-out fit centers on the other point; both residuals equal
  const double e = oracle::circle_dist(0.10, 0.30);
  CHECK(sel.ranked.front().loo_error == doctest::Approx(e).epsilon(1e-12));
}

TEST_CASE("nested chain: offsets are prefix stable and errors grow") {
  const auto data = synth::generate("torus-123", 3);
  const IntMat c{{-1, -1, 1}, {-2, 1, 0}, {0, 1, -1}};
  const auto chain = torus::nested_chain(data.columns, c);
  REQUIRE(chain.size() == 2);
  CHECK(chain[0].offset(0) == chain[1].offset(0));  // bitwise identical
  CHECK(chain[0].per_direction_errors(0) ==
        doctest::Approx(chain[1].per_direction_errors(0)).epsilon(1e-12));
  CHECK(chain[0].mean_error <= chain[1].mean_error + 1e-12);
  // every point of the codim-2 subtorus satisfies the codim-1 constraint
  // (prefix rows are shared by construction)
  CHECK(chain[1].A.top_rows(1) == chain[0].A);
  CHECK_THROWS_AS(torus::nested_chain(data.columns, IntMat{{2, 0, 0},
                                                           {0, 1, 0},
                                                           {0, 0, 1}}),
                  NotUnimodular);
}

TEST_CASE("reduce_resonance_basis improves the paper's example") {
  const IntMat a{{-3, 0, 1}, {-2, 1, 0}};
  const IntMat reduced = torus::reduce_resonance_basis(a);
  CHECK(exact::same_row_lattice(a, reduced));
  double dot = 0, n0 = 0, n1 = 0;
  for (int j = 0; j < 3; ++j) {
    const double p = reduced(0, j).convert_to<double>();
    const double q = reduced(1, j).convert_to<double>();
    dot += p * q;
    n0 += p * p;
    n1 += q * q;
  }
  const double angle =
      std::acos(std::abs(dot) / std::sqrt(n0 * n1)) * 180.0 / M_PI;
  CHECK(angle >= 70.0);

  // already-orthogonal rows come back with the same lattice and no worse
  const IntMat axes{{1, 0, 0}, {0, 1, 0}};
  const IntMat same = torus::reduce_resonance_basis(axes);
  CHECK(exact::same_row_lattice(axes, same));
}

TEST_CASE("reduction preserves the model family on sample points") {
  const IntMat a{{-3, 0, 1}, {-2, 1, 0}};
  const IntMat reduced = torus::reduce_resonance_basis(a);

  // sample points exactly on the subtorus {Ax = c}
  const Eigen::VectorXd c = (Eigen::VectorXd(2) << 0.3, 0.7).finished();
  const Eigen::VectorXd x0 =
      exact::to_double(torus::dual_lattice_basis(a)) * c;
  const IntMat comp = torus::complete_to_unimodular(a);
  const Eigen::VectorXd tangent =
      exact::to_double(exact::inverse_unimodular(comp)).col(2);
  Eigen::MatrixXd x(3, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 3; ++j)
      x(j, i) = oracle::wrap_unit(x0(j) + (i / 9.0) * tangent(j));

  // both bases fit the same point set with zero residual, and the fitted
  // offsets differ by the GL(2,Z) change of basis Z = reduced · A^+
  const auto model_a = torus::fit_subtorus(x, a);
  const auto model_r = torus::fit_subtorus(x, reduced);
  CHECK(model_a.mean_error < 1e-9);
  CHECK(model_r.mean_error < 1e-9);

  const exact::RatMat z_rat = exact::to_rational(reduced * a.transpose()) *
                              exact::inverse(exact::to_rational(a * a.transpose()));
  Eigen::MatrixXd z(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      REQUIRE(denominator(z_rat(i, j)) == 1);  // Z is integral
      z(i, j) = z_rat(i, j).convert_to<double>();
    }
  const Eigen::VectorXd mapped = z * model_a.offset;
  for (int j = 0; j < 2; ++j)
    CHECK(oracle::circle_dist(model_r.offset(j),
                              oracle::wrap_unit(mapped(j))) < 1e-9);
}

TEST_CASE("cvp oracle") {
  const auto b = torus::dual_lattice_basis(IntMat{{-3, 0, 1}, {-2, 1, 0}});
  const Eigen::MatrixXd bd = exact::to_double(b);

  CHECK(torus::cvp_oracle(b, Eigen::VectorXd::Zero(3)).norm() == 0.0);
  CHECK((torus::cvp_oracle(b, bd.col(1)) - bd.col(1)).norm() < 1e-12);

  oracle::Rng rng(103);
  std::uniform_real_distribution<double> uniform(-0.6, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd target(3);
    for (int j = 0; j < 3; ++j) target(j) = uniform(rng);
    const Eigen::VectorXd v = torus::cvp_oracle(b, target);
    double best = std::numeric_limits<double>::infinity();
    for (int a1 = -20; a1 <= 20; ++a1)
      for (int a2 = -20; a2 <= 20; ++a2) {
        const Eigen::VectorXd lattice = a1 * bd.col(0) + a2 * bd.col(1);
        best = std::min(best, (lattice - target).norm());
      }
    CHECK((v - target).norm() == doctest::Approx(best).epsilon(1e-12));
  }

  const IntMat wide{{1, 0, 0, 0, 0},
                    {0, 1, 0, 0, 0},
                    {0, 0, 1, 0, 0},
                    {0, 0, 0, 1, 0}};
  const auto b4 = torus::dual_lattice_basis(wide);
  CHECK_THROWS_AS(torus::cvp_oracle(b4, Eigen::VectorXd::Zero(5)),
                  DimensionError);
}

TEST_CASE("dual lattice basis satisfies A B = I exactly and rejects singular Grams") {
  const IntMat a{{-3, 0, 1}, {-2, 1, 0}};
  const auto b = torus::dual_lattice_basis(a);
  const exact::RatMat product = exact::to_rational(a) * b;
  CHECK(product == exact::RatMat::identity(2));
  // columns lie in the row span of A: (I - A^+A) B = 0, checked through the
  // exact pseudoinverse built from the same Gram
  const exact::RatMat gram_inv =
      exact::inverse(exact::to_rational(a * a.transpose()));
  const exact::RatMat proj =
      exact::to_rational(a.transpose()) * (gram_inv * (exact::to_rational(a) * b));
  CHECK(proj == b);

  CHECK_THROWS_AS(torus::dual_lattice_basis(IntMat{{1, 1}, {1, 1}}),
                  SingularGram);
}

TEST_CASE("residuals stay inside [0, sqrt(k)/2]") {
  oracle::Rng rng(107);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  torus::SubtorusModel model;
  model.A = IntMat{{-3, 0, 1}, {-2, 1, 0}};
  model.offset = (Eigen::VectorXd(2) << 0.9, 0.4).finished();
  const double bound = std::sqrt(2.0) / 2.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd x(3);
    for (int j = 0; j < 3; ++j) x(j) = uniform(rng);
    const double e = torus::subtorus_residual(x, model);
    CHECK(e >= 0.0);
    CHECK(e <= bound + 1e-12);
  }
}

TEST_CASE("nested chain with the identity matrix fits axis subtori") {
  oracle::Rng rng(109);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::MatrixXd x(3, 15);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 3; ++j) x(j, i) = uniform(rng) * 0.2;
  const auto chain = torus::nested_chain(x, IntMat::identity(3));
  REQUIRE(chain.size() == 2);
  CHECK(chain[0].offset(0) == chain[1].offset(0));
  CHECK(chain[0].offset(0) ==
        doctest::Approx(torus::circular_mean(x.row(0))).epsilon(1e-12));
}

TEST_CASE("reduce_resonance_basis straightens skewed random bases") {
  std::mt19937_64 rng(111);
  std::uniform_int_distribution<int> entry(-4, 4);
  std::uniform_int_distribution<int> shear(2, 6);

  // worst pairwise |cos| between rows: the "how diagonal is the normalized
  // Gram matrix" measure
  auto max_cos = [](const IntMat& m) {
    double worst = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = i + 1; k < m.rows(); ++k) {
        double dot = 0, ni = 0, nk = 0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          const double a = m(i, j).convert_to<double>();
          const double b = m(k, j).convert_to<double>();
          dot += a * b;
          ni += a * a;
          nk += b * b;
        }
        worst = std::max(worst, std::abs(dot) / std::sqrt(ni * nk));
      }
    return worst;
  };
  // squared orthogonality defect numerator/denominator, exactly
  auto defect2 = [](const IntMat& m) {
    Int prod = 1;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      Int n2 = 0;
      for (Eigen::Index j = 0; j < m.cols(); ++j) n2 += m(i, j) * m(i, j);
      prod *= n2;
    }
    return std::pair<Int, Int>(prod, exact::determinant(m * m.transpose()));
  };

  int done2 = 0, done3 = 0;
  while (done2 < 10 || done3 < 5) {
    const Eigen::Index k = (done2 < 10) ? 2 : 3;
    IntMat base(k, 4);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) base(i, j) = entry(rng);
    if (exact::minor_gcd(base) != 1) continue;
    // skew by stacked unimodular shears so the rows become nearly parallel
    IntMat z = IntMat::identity(k);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
          if (i == j) continue;
          const Int q = shear(rng);
          for (Eigen::Index c = 0; c < k; ++c) z(i, c) += q * z(j, c);
        }
    const IntMat skewed = z * base;
    if (max_cos(skewed) < 0.9) continue;  // not skewed enough to be a test
    (k == 2 ? done2 : done3) += 1;

    const IntMat reduced = torus::reduce_resonance_basis(skewed);
    CHECK(exact::same_row_lattice(skewed, reduced));
    CHECK(lattices_equal_by_membership_torus(skewed, reduced));
    CHECK(max_cos(reduced) < max_cos(skewed));
    // orthogonality defect strictly improves; compared by exact
    // cross-multiplication of the squared defects
    const auto [pr, dr] = defect2(reduced);
    const auto [ps, ds] = defect2(skewed);
    CHECK(pr * ds < ps * dr);
  }
}

TEST_CASE("loo ranking is independent of the worker count") {
  const auto data = synth::generate("torus-25", 11);
  const auto candidates = torus::enumerate_resonances(2, 1, 6);
  setenv("PSSA_THREADS", "1", 1);
  const auto serial = torus::loo_model_selection(data.columns, candidates);
  setenv("PSSA_THREADS", "4", 1);
  const auto parallel = torus::loo_model_selection(data.columns, candidates);
  unsetenv("PSSA_THREADS");
  REQUIRE(serial.ranked.size() == parallel.ranked.size());
  for (std::size_t i = 0; i < serial.ranked.size(); ++i) {
    CHECK(serial.ranked[i].A == parallel.ranked[i].A);
    CHECK(serial.ranked[i].loo_error == parallel.ranked[i].loo_error);
  }
}
