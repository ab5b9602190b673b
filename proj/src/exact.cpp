#include "pssa/exact.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace pssa::exact {

using boost::multiprecision::abs;
using boost::multiprecision::gcd;

RatMat to_rational(const IntMat& a) {
  RatMat r(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r(i, j) = Rat(a(i, j));
  return r;
}

Eigen::MatrixXd to_double(const IntMat& a) {
  Eigen::MatrixXd d(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      d(i, j) = a(i, j).convert_to<double>();
  return d;
}

Eigen::MatrixXd to_double(const RatMat& a) {
  Eigen::MatrixXd d(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      d(i, j) = a(i, j).convert_to<double>();
  return d;
}

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;  // truncates toward zero
  if (a % b != 0 && a < 0) --q;
  return q;
}

Int round_nearest(const Rat& q) {
  const Int num = numerator(q);
  const Int den = denominator(q);  // positive by normalization
  if (num >= 0) return (2 * num + den) / (2 * den);
  return -((2 * -num + den) / (2 * den));
}

Int determinant(IntMat a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant: not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return 1;
  Int sign = 1;
  Int prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index pivot = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          pivot = i;
          break;
        }
      if (pivot < 0) return 0;
      a.swap_rows(k, pivot);
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Int minor_gcd(const IntMat& a) {
  const Eigen::Index k = a.rows();
  const Eigen::Index n = a.cols();
  if (k < 1 || k > n) throw DimensionError("minor_gcd: need 1 <= k <= n");
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  Int g = 0;
  while (true) {
    IntMat sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        sub(i, j) = a(i, pick[static_cast<std::size_t>(j)]);
    g = gcd(g, determinant(std::move(sub)));
    if (g == 1) return g;
    // next k-combination of columns
    Eigen::Index i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j)
      pick[static_cast<std::size_t>(j)] =
          pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return g;
}

namespace {

// Shared HNF elimination; ops is called back for every elementary row
// operation so transforms can be tracked.
template <class Ops>
IntMat hnf_impl(IntMat a, Ops&& ops) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    // Euclidean elimination below row r in column c.
    while (true) {
      Eigen::Index pivot = -1;
      for (Eigen::Index i = r; i < rows; ++i) {
        if (a(i, c) == 0) continue;
        if (pivot < 0 || abs(a(i, c)) < abs(a(pivot, c))) pivot = i;
      }
      if (pivot < 0) break;
      if (pivot != r) {
        a.swap_rows(pivot, r);
        ops.swap(pivot, r);
      }
      bool remaining = false;
      for (Eigen::Index i = r + 1; i < rows; ++i) {
        if (a(i, c) == 0) continue;
        const Int q = a(i, c) / a(r, c);
        if (q != 0) {
          for (Eigen::Index j = 0; j < cols; ++j) a(i, j) -= q * a(r, j);
          ops.axpy(i, r, q);
        }
        if (a(i, c) != 0) remaining = true;
      }
      if (!remaining) break;
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0) {
      for (Eigen::Index j = 0; j < cols; ++j) a(r, j) = -a(r, j);
      ops.negate(r);
    }
    // entries above the pivot into [0, pivot)
    for (Eigen::Index i = 0; i < r; ++i) {
      const Int q = floor_div(a(i, c), a(r, c));
      if (q != 0) {
        for (Eigen::Index j = 0; j < cols; ++j) a(i, j) -= q * a(r, j);
        ops.axpy(i, r, q);
      }
    }
    ++r;
  }
  return a;
}

struct NoOps {
  void swap(Eigen::Index, Eigen::Index) {}
  void axpy(Eigen::Index, Eigen::Index, const Int&) {}
  void negate(Eigen::Index) {}
};

struct TrackOps {
  IntMat& z;
  IntMat& zinv;
  // row_i -= q * row_r on the working matrix
  void axpy(Eigen::Index i, Eigen::Index r, const Int& q) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) -= q * z(r, j);
    for (Eigen::Index j = 0; j < zinv.rows(); ++j)
      zinv(j, r) += q * zinv(j, i);
  }
  void swap(Eigen::Index i, Eigen::Index r) {
    z.swap_rows(i, r);
    zinv.swap_cols(i, r);
  }
  void negate(Eigen::Index r) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(r, j) = -z(r, j);
    for (Eigen::Index j = 0; j < zinv.rows(); ++j) zinv(j, r) = -zinv(j, r);
  }
};

}  // namespace

IntMat hnf(IntMat a) { return hnf_impl(std::move(a), NoOps{}); }

HnfTransform hnf_with_transform(IntMat a) {
  HnfTransform t;
  t.z = IntMat::identity(a.rows());
  t.zinv = IntMat::identity(a.rows());
  t.h = hnf_impl(std::move(a), TrackOps{t.z, t.zinv});
  return t;
}

bool same_row_lattice(const IntMat& a, const IntMat& b) {
  if (a.cols() != b.cols()) return false;
  return hnf(a) == hnf(b);
}

RatMat inverse(RatMat a) {
  if (a.rows() != a.cols()) throw DimensionError("inverse: not square");
  const Eigen::Index n = a.rows();
  RatMat inv = RatMat::identity(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = c; i < n; ++i)
      if (a(i, c) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) throw SingularGram("inverse: singular matrix");
    if (pivot != c) {
      a.swap_rows(pivot, c);
      inv.swap_rows(pivot, c);
    }
    const Rat scale = a(c, c);
    for (Eigen::Index j = 0; j < n; ++j) {
      a(c, j) /= scale;
      inv(c, j) /= scale;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      const Rat f = a(i, c);
      for (Eigen::Index j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

IntMat inverse_unimodular(const IntMat& a) {
  RatMat r = inverse(to_rational(a));
  IntMat out(r.rows(), r.cols());
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      if (denominator(r(i, j)) != 1)
        throw NotUnimodular("inverse_unimodular: determinant is not ±1");
      out(i, j) = numerator(r(i, j));
    }
  return out;
}

namespace {

Int row_dot(const IntMat& m, Eigen::Index a, Eigen::Index b) {
  Int s = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(a, j) * m(b, j);
  return s;
}

}  // namespace

IntMat lagrange_reduce(IntMat basis) {
  if (basis.rows() != 2) throw DimensionError("lagrange_reduce: need 2 rows");
  while (true) {
    if (row_dot(basis, 0, 0) > row_dot(basis, 1, 1)) basis.swap_rows(0, 1);
    const Int n0 = row_dot(basis, 0, 0);
    if (n0 == 0) throw RankDeficient("lagrange_reduce: zero basis vector");
    const Int q = round_nearest(Rat(row_dot(basis, 1, 0), n0));
    if (q != 0)
      for (Eigen::Index j = 0; j < basis.cols(); ++j)
        basis(1, j) -= q * basis(0, j);
    if (row_dot(basis, 1, 1) >= n0) break;
  }
  return basis;
}

namespace {

struct Gso {
  std::vector<std::vector<Rat>> mu;  // lower triangular
  std::vector<Rat> norm2;            // ||b*_i||^2

  explicit Gso(const IntMat& b) { recompute(b); }

  void recompute(const IntMat& b) {
    const Eigen::Index k = b.rows();
    const Eigen::Index n = b.cols();
    std::vector<std::vector<Rat>> star(
        static_cast<std::size_t>(k),
        std::vector<Rat>(static_cast<std::size_t>(n)));
    mu.assign(static_cast<std::size_t>(k),
              std::vector<Rat>(static_cast<std::size_t>(k), Rat(0)));
    norm2.assign(static_cast<std::size_t>(k), Rat(0));
    for (Eigen::Index i = 0; i < k; ++i) {
      auto& si = star[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < n; ++j) si[static_cast<std::size_t>(j)] = Rat(b(i, j));
      for (Eigen::Index p = 0; p < i; ++p) {
        const auto& sp = star[static_cast<std::size_t>(p)];
        Rat dot(0);
        for (Eigen::Index j = 0; j < n; ++j)
          dot += Rat(b(i, j)) * sp[static_cast<std::size_t>(j)];
        const Rat m = dot / norm2[static_cast<std::size_t>(p)];
        mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = m;
        for (Eigen::Index j = 0; j < n; ++j)
          si[static_cast<std::size_t>(j)] -= m * sp[static_cast<std::size_t>(j)];
      }
      Rat n2(0);
      for (Eigen::Index j = 0; j < n; ++j)
        n2 += si[static_cast<std::size_t>(j)] * si[static_cast<std::size_t>(j)];
      if (n2 == 0) throw RankDeficient("lll_reduce: dependent basis rows");
      norm2[static_cast<std::size_t>(i)] = n2;
    }
  }
};

}  // namespace

IntMat lll_reduce(IntMat basis, const Rat& delta) {
  const Eigen::Index k = basis.rows();
  if (k <= 1) return basis;
  Gso gso(basis);

  auto size_reduce = [&](Eigen::Index i, Eigen::Index j) {
    const Int q =
        round_nearest(gso.mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    if (q == 0) return;
    for (Eigen::Index c = 0; c < basis.cols(); ++c)
      basis(i, c) -= q * basis(j, c);
    for (Eigen::Index l = 0; l < j; ++l)
      gso.mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] -=
          Rat(q) * gso.mu[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
    gso.mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -= Rat(q);
  };

  Eigen::Index i = 1;
  while (i < k) {
    size_reduce(i, i - 1);
    const Rat mu2 =
        gso.mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(i - 1)] *
        gso.mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(i - 1)];
    if (gso.norm2[static_cast<std::size_t>(i)] >=
        (delta - mu2) * gso.norm2[static_cast<std::size_t>(i - 1)]) {
      for (Eigen::Index j = i - 2; j >= 0; --j) size_reduce(i, j);
      ++i;
    } else {
      basis.swap_rows(i, i - 1);
      gso.recompute(basis);  // lattice ranks here are tiny
      i = std::max<Eigen::Index>(i - 1, 1);
    }
  }
  return basis;
}

}  // namespace pssa::exact
