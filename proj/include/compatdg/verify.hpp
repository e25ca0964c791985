// Operator property suite: trace continuity of the exact gradient/curl,
// the discrete vector calculus identities, and the mixed-derivative
// commutator, evaluated on pseudo-random nodal data.

#pragma once

#include <cstdint>

#include "compatdg/operators.hpp"

namespace compatdg {

struct VerifyReport {
  double tangential_grad_jump = 0.0;  // max over edge Gauss points
  double normal_curl_jump = 0.0;
  double curl_of_grad = 0.0;          // max |weak curl of exact gradient|
  double div_of_curl = 0.0;           // max |weak div of exact curl|
  double schwarz_commutator = 0.0;

  double worst() const;
  bool pass(double tol = 1e-12) const { return worst() <= tol; }
  std::string formatted() const;
};

/// Runs the suite with `samples` random fields, nodal values uniform in
/// [0, 0.001] from a SplitMix64 stream with the given seed. Trace jumps are
/// sampled at N+2 Gauss points per interior (and periodic) edge.
VerifyReport verify_operators(const CompatibleOperators& ops, std::uint64_t seed,
                              int samples = 20);

}  // namespace compatdg
