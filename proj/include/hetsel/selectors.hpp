#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "hetsel/cost_oracle.hpp"
#include "hetsel/model.hpp"
#include "hetsel/rng.hpp"

namespace hetsel {

enum class Method { Jgs, Gs, Igs, Irs, Rs, Opt };

Method method_from_name(const std::string& name);  // jgs|gs|igs|irs|rs|opt
const char* method_name(Method method);

/// Nemhauser-style greedy: add the argmax of C(T u {i}) m times over the
/// ground set. Under a complement-mode cost it instead discards
/// |ground| - m elements and keeps the rest. Ties keep the lowest-indexed
/// sensors (so complement-mode ties discard the highest candidate).
SelectionResult greedy_homogeneous(const CostOracle& cost, std::span<const int> ground_set,
                                   int m);

/// Joint greedy selection: one sensor per iteration from the union of the
/// not-yet-exhausted sets, until every per-set quota is met. Complement-mode
/// costs flip the quotas to |S_i| - M_i and report kept = complements.
SelectionResult jgs(const CostOracle& cost, const NoisePartition& noise,
                    const SelectionConstraints& constraints);

/// Homogeneous greedy over all sensors for M = sum M_i, ignoring the per-set
/// counts; the result is flagged infeasible when they are violated.
SelectionResult gs(const CostOracle& cost, const NoisePartition& noise,
                   const SelectionConstraints& constraints);

/// Independent greedy: homogeneous greedy within each set, with the cost
/// restricted to that set's indices.
SelectionResult igs(const CostOracle& cost, const NoisePartition& noise,
                    const SelectionConstraints& constraints);

/// Independent random selection: M_i uniform draws without replacement per set.
SelectionResult irs(const NoisePartition& noise, const SelectionConstraints& constraints,
                    RngStream& rng);

/// Random selection of M sensors from all of them, resampled (up to 10^4
/// attempts) until the per-set counts happen to hold; falls back to IRS with
/// a warning on stderr otherwise.
SelectionResult rs(const NoisePartition& noise, const SelectionConstraints& constraints,
                   RngStream& rng);

/// Exhaustive search over every feasible combination; ties resolve to the
/// lexicographically smallest kept set.
SelectionResult exhaustive_opt(const CostOracle& cost, const NoisePartition& noise,
                               const SelectionConstraints& constraints,
                               std::uint64_t cap = 10'000'000ull);

// Feasible combination count prod_i C(|S_i|, M_i) (saturating).
double search_space_size(const NoisePartition& noise, const SelectionConstraints& constraints);

}  // namespace hetsel
