#include "bundle.hpp"

#include <cmath>

namespace carleson::cli {

namespace {

// Shell 1 is skipped for packings: kappa(B(0, k)) = sinh^{2n}(k) grows faster
// than e^{2nk} near the origin, so the first shells overstate the slope.
BundledSequence packing(std::size_t n, double delta, double eps, std::size_t candidates,
                        std::uint64_t seed) {
  return {"packing_n" + std::to_string(n), maximal_packing(n, delta, eps, candidates, seed),
          std::atanh(1.0 - eps), 2, true};
}

}  // namespace

std::vector<BundledSequence> bundled_sequences(bool with_ball_packing, std::uint64_t seed) {
  std::vector<BundledSequence> out;
  out.push_back({"ladder_n1", radial_ladder(1, 24), std::nullopt, 1, true});
  out.push_back({"ladder_n2", radial_ladder(2, 24), std::nullopt, 1, true});
  out.push_back({"lattice_n1", perturbed_lattice(8, 0.1, seed), std::nullopt, 1, false});
  out.push_back(packing(1, 0.5, 1e-4, 300000, seed));
  if (with_ball_packing) out.push_back(packing(2, 0.7, 0.004, 300000, seed));
  return out;
}

}  // namespace carleson::cli
