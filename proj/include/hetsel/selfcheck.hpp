#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetsel/costs.hpp"
#include "hetsel/rng.hpp"

namespace hetsel {

struct PropertyReport {
  int instances = 0;
  long long monotonicity_pairs = 0;
  long long submodularity_triples = 0;
  int normalization_violations = 0;
  int monotonicity_violations = 0;
  int submodularity_violations = 0;
  int wfc_mismatches = 0;
  double worst_excess = 0.0;  // largest slack overshoot seen

  bool ok() const {
    return normalization_violations == 0 && monotonicity_violations == 0 &&
           submodularity_violations == 0 && wfc_mismatches == 0;
  }
};

/// Random instance in the style of the property suite: n in [2, n_max]
/// complex Gaussian rows (K <= n columns) and per-sensor weights in [0, 1].
GramTable random_gram(RngStream& rng, int n_max);

/// Exhaustive verification of WFC normalization (exact zero), monotonicity
/// and submodularity over all subset pairs, with slack 1e-12 * WFP(N).
/// A bitmask subset-sum table built directly from G serves as the oracle
/// and the library wfc() is cross-checked against it on every subset.
void verify_wfc_properties(const GramTable& gram, PropertyReport& report);

PropertyReport run_wfc_property_suite(int instances, int n_max, std::uint64_t seed);

struct DeltaReport {
  int checks = 0;
  int violations = 0;
  double worst_relative = 0.0;
};

/// wfc_delta against two batch wfc evaluations on random greedy walks
/// (1e-9 relative tolerance).
DeltaReport run_delta_consistency(int instances, int n_max, std::uint64_t seed);

struct ValidateReport {
  int checks = 0;
  int disagreements = 0;
};

/// validate_instance against a direct re-check of every invariant on
/// randomized small instances (valid and mutated).
ValidateReport run_validate_agreement(int instances, std::uint64_t seed);

}  // namespace hetsel
