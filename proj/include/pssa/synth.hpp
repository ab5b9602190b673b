#ifndef PSSA_SYNTH_HPP
#define PSSA_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pssa/dataset.hpp"

namespace pssa::synth {

/// Known synthetic families (regenerations of the published examples, with
/// generator parameters recorded in the dataset header):
///   sphere-1, sphere-2, sphere-3   20 points on S^3, anisotropic Gaussians
///   torus-25                       50 points near 2x1 + 5x2 = const on T^2
///   torus-123                      50 points near the [1,2,3] geodesic on T^3
///   poly-coupled                   20 rotation-coupled pairs on S^2 × S^2
///   poly-locked                    20 phase-locked circle pairs on S^2 × S^2
Dataset generate(const std::string& example_id, std::uint64_t seed);

std::vector<std::string> known_examples();

}  // namespace pssa::synth

#endif  // PSSA_SYNTH_HPP
