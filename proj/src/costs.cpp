#include "hetsel/costs.hpp"

#include <algorithm>
#include <cmath>

#include "hetsel/error.hpp"

namespace hetsel {

WeightRule weight_rule_from_name(const std::string& name) {
  if (name == "recip") return WeightRule::Reciprocal;
  if (name == "shifted") return WeightRule::ShiftedReciprocal;
  if (name == "sigmoid") return WeightRule::Sigmoid;
  if (name == "tanh") return WeightRule::TanhShifted;
  if (name == "unit") return WeightRule::Unit;
  throw Error(ErrorKind::BadConfig, "unknown weight rule '" + name + "'");
}

const char* weight_rule_name(WeightRule rule) {
  switch (rule) {
    case WeightRule::Reciprocal: return "recip";
    case WeightRule::ShiftedReciprocal: return "shifted";
    case WeightRule::Sigmoid: return "sigmoid";
    case WeightRule::TanhShifted: return "tanh";
    case WeightRule::Unit: return "unit";
  }
  return "?";
}

double mean_sigma(const NoisePartition& noise) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < noise.sets.size(); ++i) {
    sum += noise.sigmas[i] * static_cast<double>(noise.sets[i].size());
    n += static_cast<int>(noise.sets[i].size());
  }
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "empty partition");
  return sum / n;
}

std::vector<double> compute_weights(const NoisePartition& noise, WeightRule rule) {
  const int n = noise.sensor_count();
  const std::vector<double> sigma = noise.per_sensor_sigma(n);
  const double bar = (rule == WeightRule::Sigmoid || rule == WeightRule::TanhShifted)
                         ? mean_sigma(noise)
                         : 0.0;
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) {
    const double s = sigma[j];
    switch (rule) {
      case WeightRule::Reciprocal:
        if (!(s > 0.0)) throw Error(ErrorKind::NonpositiveSigma, "1/sigma needs sigma > 0");
        w[j] = 1.0 / s;
        break;
      case WeightRule::ShiftedReciprocal:
        w[j] = 1.0 / (1.0 + s);
        break;
      case WeightRule::Sigmoid:
        // decreasing in sigma: quiet sensors carry the weight mass
        w[j] = 1.0 / (1.0 + std::exp(s - bar));
        break;
      case WeightRule::TanhShifted:
        // (1 + tanh)/2 rather than the bare tanh/2, which can be negative.
        w[j] = 0.5 * (1.0 + std::tanh(bar - s));
        break;
      case WeightRule::Unit:
        w[j] = 1.0;
        break;
    }
  }
  return w;
}

RMatrix correlation_matrix(const MeasurementModel& model, const std::optional<CVector>& x0) {
  const CMatrix rows = model.rows(x0);
  const int n = static_cast<int>(rows.rows());
  RVector norm2(n);
  for (int i = 0; i < n; ++i) {
    norm2(i) = rows.row(i).squaredNorm();
    if (!(norm2(i) > 0.0))
      throw Error(ErrorKind::ZeroRow, "row " + std::to_string(i + 1) + " has zero norm");
  }
  RMatrix corr(n, n);
  for (int i = 0; i < n; ++i) {
    corr(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const Cplx ip = rows.row(i).dot(rows.row(j));  // conjugates the left factor
      const double c = std::min(std::norm(ip) / (norm2(i) * norm2(j)), 1.0);
      corr(i, j) = c;
      corr(j, i) = c;
    }
  }
  return corr;
}

GramTable gram_from_correlation(const RMatrix& corr, const RVector& weights) {
  const int n = static_cast<int>(corr.rows());
  if (weights.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "weights length != sensor count");
  GramTable t;
  t.weights = weights;
  t.g.resize(n, n);
  for (int i = 0; i < n; ++i) {
    t.g(i, i) = weights(i) * weights(i);
    for (int j = i + 1; j < n; ++j) {
      const double v = weights(i) * weights(j) * corr(i, j);
      t.g(i, j) = v;
      t.g(j, i) = v;
    }
  }
  return t;
}

GramTable build_gram(const MeasurementModel& model, const std::optional<CVector>& x0,
                     const std::vector<double>& weights) {
  const RVector w = Eigen::Map<const RVector>(weights.data(), weights.size());
  return gram_from_correlation(correlation_matrix(model, x0), w);
}

namespace {

void check_indices(const GramTable& gram, std::span<const int> subset) {
  for (int i : subset)
    if (i < 0 || i >= gram.size())
      throw Error(ErrorKind::IndexOutOfRange, "sensor index " + std::to_string(i + 1));
}

}  // namespace

double wfp(const GramTable& gram, std::span<const int> subset) {
  check_indices(gram, subset);
  double acc = 0.0;
  for (int i : subset)
    for (int j : subset) acc += gram.g(i, j);
  return acc;
}

double wfc(const GramTable& gram, std::span<const int> subset) {
  check_indices(gram, subset);
  const int n = gram.size();
  std::vector<char> in(n, 0);
  for (int i : subset) in[i] = 1;
  std::vector<int> complement;
  complement.reserve(n - subset.size());
  for (int i = 0; i < n; ++i)
    if (!in[i]) complement.push_back(i);
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return wfp(gram, all) - wfp(gram, complement);
}

double wfc_delta(const GramTable& gram, std::span<const int> current_complement, int candidate) {
  check_indices(gram, current_complement);
  if (candidate < 0 || candidate >= gram.size())
    throw Error(ErrorKind::IndexOutOfRange, "candidate " + std::to_string(candidate + 1));
  bool present = false;
  double sum = 0.0;
  for (int j : current_complement) {
    if (j == candidate) {
      present = true;
      continue;
    }
    sum += gram.g(candidate, j);
  }
  if (!present)
    throw Error(ErrorKind::CandidateNotAvailable,
                "candidate " + std::to_string(candidate + 1) + " not in the complement");
  return 2.0 * sum + gram.g(candidate, candidate);
}

}  // namespace hetsel
