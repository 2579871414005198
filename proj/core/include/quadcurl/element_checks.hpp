#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace quadcurl {

/// One aggregated verification check over a batch of random tets.
struct ElementCheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;      // worst observed value across all trials
  double tolerance = 0.0;  // pass iff worst <= tolerance (dimension checks use 0)
};

/// Per-element verification on `trials` random non-degenerate tets:
/// space dimensions, dof-matrix invertibility and reconstruction, the direct
/// sum N^k + bubbles, trace determination by face/edge dofs, the curl-trace
/// identity of the bubble generators, and (k = 2) the vanishing interior
/// moments of the bubble block.  trials = 0 yields a vacuous pass.
std::vector<ElementCheckResult> verify_element_checks(int k, int trials, std::uint64_t seed);

}  // namespace quadcurl
