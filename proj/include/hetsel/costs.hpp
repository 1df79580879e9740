#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetsel/model.hpp"

namespace hetsel {

/// Noise-to-weight maps w_i = phi(sigma_i). Sigmoid and TanhShifted are
/// centered at the mean per-sensor deviation and produce weights in [0,1].
enum class WeightRule { Reciprocal, ShiftedReciprocal, Sigmoid, TanhShifted, Unit };

WeightRule weight_rule_from_name(const std::string& name);  // recip|shifted|sigmoid|tanh|unit
const char* weight_rule_name(WeightRule rule);

// Equal-weight mean of the N per-sensor deviations (each sensor counted once).
double mean_sigma(const NoisePartition& noise);

std::vector<double> compute_weights(const NoisePartition& noise, WeightRule rule);

/// Precomputed pairwise table G_ij = w_i w_j |<g_i,g_j>|^2 / (|g_i|^2 |g_j|^2).
/// Symmetric by construction, G_ii = w_i^2 exactly, 0 <= G_ij <= w_i w_j.
struct GramTable {
  RMatrix g;
  RVector weights;

  int size() const { return static_cast<int>(g.rows()); }
};

// Weight-free part of the table: squared normalized row correlations.
RMatrix correlation_matrix(const MeasurementModel& model,
                           const std::optional<CVector>& x0 = std::nullopt);

GramTable gram_from_correlation(const RMatrix& corr, const RVector& weights);

GramTable build_gram(const MeasurementModel& model, const std::optional<CVector>& x0,
                     const std::vector<double>& weights);

// WFP(S) = sum_{i,j in S} G_ij (both orderings, diagonal included); WFP({}) = 0.
double wfp(const GramTable& gram, std::span<const int> subset);

// WFC(T) = WFP(N) - WFP(N \ T); WFC({}) = 0.
double wfc(const GramTable& gram, std::span<const int> subset);

// WFC(T u {t}) - WFC(T) where current_complement = N \ T and t is in it.
// O(|complement|).
double wfc_delta(const GramTable& gram, std::span<const int> current_complement, int candidate);

}  // namespace hetsel
