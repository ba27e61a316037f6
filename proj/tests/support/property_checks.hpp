#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// runner. Each returns a verdict plus a one-line summary of what was run.

#include <cstddef>
#include <cstdint>
#include <string>

#include "dcsvm/dataset.hpp"

namespace checks {

struct Verdict {
  bool pass = true;
  std::string detail;
};

/// Gaussian blobs around random centres in [0,1]^dim; roughly a third of the
/// coordinates are zeroed so the vectors stay sparse. Centres depend on
/// `seed` only; `draw` picks an independent sample from the same blobs.
dcsvm::Dataset make_blobs(std::size_t samples, std::size_t classes, std::size_t dim, double spread,
                          std::uint64_t seed, std::uint64_t draw = 0);

Verdict box_constraint(std::size_t updates, std::uint64_t seed);
Verdict no_op_outside_margin(std::size_t trials, std::uint64_t seed);
Verdict dual_ascent(std::size_t streams, std::uint64_t seed, double tolerance = 1e-9);
Verdict stationarity(std::size_t trials, std::uint64_t seed, double eps = 1e-4);
Verdict prune_size_bound(std::uint64_t seed);
Verdict cluster_count(std::uint64_t seed);
Verdict kernel_evals_bound(std::uint64_t seed);
Verdict seeded_determinism(std::uint64_t seed);
Verdict model_roundtrip(std::uint64_t seed);
Verdict dataset_roundtrip(std::uint64_t seed);

/// Library prune against the brute-force reference: membership, labels and
/// weights must match exactly.
Verdict oracle_prune(std::size_t sets, std::size_t max_points, std::uint64_t seed);
/// decision_value and dual_objective against direct summation.
Verdict oracle_sums(std::size_t sets, std::size_t max_points, std::uint64_t seed, double tolerance = 1e-9);

}  // namespace checks
