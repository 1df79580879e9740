#pragma once

#include <optional>
#include <span>
#include <string>

#include "hetsel/model.hpp"

namespace hetsel {

/// Fisher information of the selected rows: Phi_T = A_T^H Sigma_T^-1 A_T.
CMatrix fim(const MeasurementModel& model, const NoisePartition& noise,
            const std::optional<CVector>& x0, std::span<const int> subset);

/// CRLB-derived objectives, all oriented for maximization. Evaluated on
/// Phi + eps*I with eps = 1e-8 * d (d = mean squared row norm), so subsets
/// smaller than K stay well-defined.
enum class ProxyKind { TraceCrlb, LogDet, MaxEig, NegMse };

ProxyKind proxy_kind_from_name(const std::string& name);  // trace|logdet|maxeig|negmse
const char* proxy_kind_name(ProxyKind kind);

double proxy_cost(ProxyKind kind, const MeasurementModel& model, const NoisePartition& noise,
                  const std::optional<CVector>& x0, std::span<const int> subset);

}  // namespace hetsel
