#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anisocap/anisotropy.hpp"

namespace anisocap {

/// One property of the norm calculus checked at random points.
struct PropCheck {
  std::string name;
  double worst = 0.0;      // worst violation measure seen (0 is perfect)
  double tolerance = 0.0;
  bool pass = true;
};

struct PropReport {
  std::string kind;
  std::vector<PropCheck> checks;
  bool pass = true;

  const PropCheck& find(const std::string& name) const;
};

/// Runs the randomized invariant suite for one norm: homogeneity/evenness,
/// bipolarity, subgradient identities, envelope bounds, the K_λ lower bound,
/// the Yosida gradient bound and its finite-difference consistency, and
/// monotonicity of the Yosida map. Deterministic for a fixed seed.
PropReport run_calculus_properties(const Anisotropy& a, double p, std::uint64_t seed,
                                   int npoints = 1000, int fd_points = 100);

}  // namespace anisocap
