#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hetsel/model.hpp"
#include "hetsel/rng.hpp"

namespace hetsel {

/// Two-set greedy floor before the search-space switch:
/// 1 - (1 - 1/(M1+M2))^m. m = 0 is allowed and gives 0.
double lemma1_bound(int m, int m1, int m2);

/// Two-set worst-case ratio when set i is exhausted at iteration m_s:
/// 1 - (M_i/M_i') sum_{j=0}^{M_i+M_i'-m_s-1} r^j
///   - r^(M_i+M_i'-m_s) (1 - 1/(M_i+M_i'))^m_s,  r = 1 - (1+M_i)/M_i'.
/// Requires M_i' >= M_i + 1 and M_i <= m_s <= M_i+M_i'-1 (DomainViolation
/// otherwise; callers fall back to the 1/2 floor).
double thm2_bound(int m_i, int m_iprime, int m_s);

struct BoundReport {
  double thm1 = 0.5;
  std::optional<double> thm2;
  double combined = 0.5;
  int m_i = 0;
  int m_iprime = 0;
  int m_s = 0;
};

/// combined = max(1/2, thm2 when its domain holds).
BoundReport combined_bound(int m_i, int m_iprime, int m_s);

enum class BoundCurveMode { VarySizes, VaryMs };

struct BoundCurveRow {
  int m1 = 0;
  int m2 = 0;
  int ms = 0;
  double thm1 = 0.5;
  std::optional<double> thm2;
  double combined = 0.5;
};

/// VaryMs: one (M1, M2) pair, rows for every valid m_s.
/// VarySizes: all (M1, M2) grid pairs at m_s = M1+M2-1.
std::vector<BoundCurveRow> bound_curve(BoundCurveMode mode, std::span<const int> m1_values,
                                       std::span<const int> m2_values);

/// gamma = (1 + WFP(N)/WFP(T_OPT)) / 2.
double gamma_factor(double wfp_full, double wfp_opt);

/// Spectrum and weight-mass diagnostics of the (delta, M)-bounded-frame
/// conditions. kappa/zeta are absent when delta >= d.
struct FrameDiagnostics {
  double d = 0.0;
  double delta = 0.0;
  double alpha_max = 0.0;
  double alpha_min = 0.0;
  std::optional<double> gamma;
  std::optional<double> kappa;
  std::optional<double> zeta;
  bool exact_delta = false;
};

struct SampledDelta {
  int n_subsets = 2000;
  RngStream* rng = nullptr;
};

// Exact mode enumerates every M-subset (C(N,M) <= 1e6); sampled mode
// inspects n_subsets random ones and reports a lower estimate of delta.
FrameDiagnostics frame_diagnostics(const MeasurementModel& model, const NoisePartition& noise,
                                   const std::vector<double>& weights, int m_total,
                                   std::optional<SampledDelta> sampled = std::nullopt,
                                   std::optional<double> gamma = std::nullopt);

}  // namespace hetsel
