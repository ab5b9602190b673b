#ifndef PSSA_CONFIG_HPP
#define PSSA_CONFIG_HPP

namespace pssa {

/// All numerical tolerances used across the library, in one record.
struct Tolerances {
  /// Relative singular-value cutoff below which a matrix counts as rank
  /// deficient.
  double rank_relative = 1e-12;
  /// Bound on ||V^T V - I||_F for a matrix to count as an orthonormal frame.
  double orthonormal = 1e-10;
  /// Allowed deviation of data vectors from unit norm before validation
  /// rejects them.
  double unit_norm = 1e-8;
  /// Resultant-length cutoff below which circular and spherical means are
  /// reported as degenerate.
  double degenerate_mean = 1e-10;
  /// Residual bound for subspace-membership and nesting checks.
  double span_residual = 1e-8;
  /// A projected point closer than this to the projection kernel is
  /// degenerate.
  double projection = 1e-8;
};

inline const Tolerances& tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace pssa

#endif  // PSSA_CONFIG_HPP
