#pragma once

// Uniformly discrete sequences shipped for experiments: radial ladders,
// maximal packings and the perturbed dyadic lattice, each with the window
// used for its shell-growth fit.

#include <optional>
#include <string>
#include <vector>

#include "carleson/sequences.hpp"

namespace carleson::cli {

struct BundledSequence {
  std::string label;
  PointSequence points;
  std::optional<double> horizon;  ///< outer Kobayashi radius of the generated region
  std::size_t first_shell = 1;
  /// Whether the last ten terms of sum d^{n+1} form a tail (false when the
  /// deepest level holds many points of equal depth).
  bool tail_checked = true;
};

/// Ladders in the disc and B^2, the perturbed lattice and the disc packing;
/// `with_ball_packing` adds the (slower) packing of B^2.
std::vector<BundledSequence> bundled_sequences(bool with_ball_packing, std::uint64_t seed);

}  // namespace carleson::cli
