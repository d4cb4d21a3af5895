#pragma once

// Shared family builders for the tests and the acceptance binary.

#include <cstdint>
#include <vector>

#include "rdl/sampling.hpp"
#include "rdl/state_family.hpp"
#include "rdl/two_qubit.hpp"

namespace rdl::fixture {

inline LinearityCoefficients random_plant(Rng& rng, double scale = 0.1) {
  LinearityCoefficients c;
  c.a11 = uniform(rng, -scale, scale);
  c.a21 = uniform(rng, -scale, scale);
  for (int i = 0; i < 3; ++i) {
    c.b11(i) = uniform(rng, -scale, scale);
    c.b21(i) = uniform(rng, -scale, scale);
  }
  return c;
}

inline StateFamily constrained_family(const LinearityCoefficients& c, std::size_t samples,
                                      std::uint64_t seed) {
  return constrained_two_qubit_family(c, uniform_two_qubit_samples(samples, seed, 0.25)).family;
}

/// Generic two-qubit states; their span is all 16 dimensions once there are
/// enough of them.
inline StateFamily unconstrained_family(std::size_t count, Rng& rng) {
  std::vector<ComplexMatrix> members;
  for (std::size_t k = 0; k < count; ++k) members.push_back(random_density_matrix(4, rng));
  return make_family({2, 2}, members, "unconstrained two-qubit");
}

}  // namespace rdl::fixture
