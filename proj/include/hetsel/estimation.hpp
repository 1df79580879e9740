#pragma once

#include <optional>
#include <span>

#include "hetsel/model.hpp"

namespace hetsel {

struct EstimationReport {
  CVector estimate;
  double empirical_nmse_db = 0.0;
  double closed_form_mse = 0.0;
  std::vector<int> subset;
};

/// WLS estimate plus both error figures for one selection.
EstimationReport estimate_report(const MeasurementModel& model, const NoisePartition& noise,
                                 std::span<const int> subset, const CVector& y,
                                 const CVector& x_true);

/// Weighted least squares on the selected rows:
/// x_hat = (A_T^H Sigma_T^-1 A_T)^-1 A_T^H Sigma_T^-1 y_T, computed through
/// an SVD of the whitened system (no explicit inverse). y is the full
/// N-vector; the subset rows are picked here.
CVector wls_estimate(const MeasurementModel& model, const NoisePartition& noise,
                     std::span<const int> subset, const CVector& y);

/// Trace((A_T^H Sigma_T^-1 A_T)^-1) = sum of reciprocal FIM eigenvalues.
double closed_form_mse(const MeasurementModel& model, const NoisePartition& noise,
                       std::span<const int> subset,
                       const std::optional<CVector>& x0 = std::nullopt);

/// 10 log10(|x - x_hat|^2 / |x|^2); -inf on exact recovery.
double empirical_nmse_db(const CVector& x_true, const CVector& x_hat);

}  // namespace hetsel
