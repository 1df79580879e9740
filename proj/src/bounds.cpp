#include "hetsel/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "hetsel/error.hpp"

namespace hetsel {

double lemma1_bound(int m, int m1, int m2) {
  if (m < 0) throw Error(ErrorKind::DomainViolation, "iteration must be >= 0");
  if (m1 + m2 < 1) throw Error(ErrorKind::DomainViolation, "M1 + M2 must be >= 1");
  return 1.0 - std::pow(1.0 - 1.0 / static_cast<double>(m1 + m2), m);
}

double thm2_bound(int m_i, int m_iprime, int m_s) {
  if (m_i < 1) throw Error(ErrorKind::DomainViolation, "M_i must be >= 1");
  if (m_iprime < m_i + 1)
    throw Error(ErrorKind::DomainViolation, "theorem 2 needs M_i' >= M_i + 1");
  if (m_s < m_i || m_s > m_i + m_iprime - 1)
    throw Error(ErrorKind::DomainViolation, "m_s outside [M_i, M_i + M_i' - 1]");

  const double r = 1.0 - static_cast<double>(1 + m_i) / static_cast<double>(m_iprime);
  const int k = m_i + m_iprime - m_s;  // remaining iterations after the switch
  double geo = 0.0;
  double rj = 1.0;
  for (int j = 0; j < k; ++j) {
    geo += rj;
    rj *= r;
  }
  const double seed = std::pow(1.0 - 1.0 / static_cast<double>(m_i + m_iprime), m_s);
  return 1.0 - static_cast<double>(m_i) / static_cast<double>(m_iprime) * geo -
         std::pow(r, k) * seed;
}

BoundReport combined_bound(int m_i, int m_iprime, int m_s) {
  BoundReport report;
  report.m_i = m_i;
  report.m_iprime = m_iprime;
  report.m_s = m_s;
  try {
    report.thm2 = thm2_bound(m_i, m_iprime, m_s);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DomainViolation) throw;
  }
  report.combined = std::max(0.5, report.thm2.value_or(0.5));
  return report;
}

std::vector<BoundCurveRow> bound_curve(BoundCurveMode mode, std::span<const int> m1_values,
                                       std::span<const int> m2_values) {
  if (m1_values.empty() || m2_values.empty())
    throw Error(ErrorKind::BadConfig, "bound curve grids must be nonempty");
  std::vector<BoundCurveRow> rows;
  auto push = [&rows](int m1, int m2, int ms) {
    const BoundReport rep = combined_bound(m1, m2, ms);
    rows.push_back({m1, m2, ms, rep.thm1, rep.thm2, rep.combined});
  };
  if (mode == BoundCurveMode::VaryMs) {
    if (m1_values.size() != 1 || m2_values.size() != 1)
      throw Error(ErrorKind::BadConfig, "vary_ms takes a single (M1, M2) pair");
    const int m1 = m1_values[0];
    const int m2 = m2_values[0];
    for (int ms = m1; ms <= m1 + m2 - 1; ++ms) push(m1, m2, ms);
  } else {
    for (int m1 : m1_values)
      for (int m2 : m2_values) push(m1, m2, m1 + m2 - 1);
  }
  return rows;
}

double gamma_factor(double wfp_full, double wfp_opt) {
  if (!(wfp_opt > 0.0))
    throw Error(ErrorKind::DegenerateOptimum, "WFP(T_OPT) must be positive");
  if (wfp_full < wfp_opt)
    throw Error(ErrorKind::DomainViolation, "WFP(N) must be >= WFP(T_OPT)");
  return 0.5 * (1.0 + wfp_full / wfp_opt);
}

namespace {

bool next_combination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  for (int i = k - 1; i >= 0; --i) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double spectrum_deviation(const CMatrix& rows, const std::vector<double>& inv_var,
                          const std::vector<int>& subset, double d) {
  const int k = static_cast<int>(rows.cols());
  CMatrix phi = CMatrix::Zero(k, k);
  for (int i : subset) phi.noalias() += rows.row(i).adjoint() * rows.row(i) * inv_var[i];
  phi = ((phi + phi.adjoint()) * 0.5).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(phi, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::NumericalFailure, "subset FIM eigendecomposition failed");
  const RVector lambda = es.eigenvalues();
  return std::max(lambda.maxCoeff() - d, d - lambda.minCoeff());
}

double binom(int n, int k) {
  double c = 1.0;
  for (int j = 0; j < k; ++j) c = c * static_cast<double>(n - j) / static_cast<double>(j + 1);
  return c;
}

}  // namespace

FrameDiagnostics frame_diagnostics(const MeasurementModel& model, const NoisePartition& noise,
                                   const std::vector<double>& weights, int m_total,
                                   std::optional<SampledDelta> sampled,
                                   std::optional<double> gamma) {
  const int n = model.sensor_count();
  const int k = model.parameter_count();
  if (m_total <= k)
    throw Error(ErrorKind::DomainViolation, "(delta, M)-bounded frames need M > K");
  if (m_total > n) throw Error(ErrorKind::DomainViolation, "M exceeds the sensor count");
  if (static_cast<int>(weights.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "weights length != sensor count");

  const CMatrix rows = model.rows();
  const std::vector<double> sigma = noise.per_sensor_sigma(n);
  std::vector<double> inv_var(n);
  for (int i = 0; i < n; ++i) inv_var[i] = 1.0 / (sigma[i] * sigma[i]);

  FrameDiagnostics out;
  double acc = 0.0;
  std::vector<double> mass(n);
  for (int i = 0; i < n; ++i) {
    const double r2 = rows.row(i).squaredNorm();
    acc += r2;
    mass[i] = weights[i] * weights[i] * r2;
  }
  out.d = acc / static_cast<double>(n);

  // alpha extremes decompose per sensor: top-M and bottom-M mass sums.
  std::vector<double> sorted_mass = mass;
  std::sort(sorted_mass.begin(), sorted_mass.end());
  out.alpha_min = std::accumulate(sorted_mass.begin(), sorted_mass.begin() + m_total, 0.0);
  out.alpha_max = std::accumulate(sorted_mass.end() - m_total, sorted_mass.end(), 0.0);

  double delta = 0.0;
  if (!sampled) {
    if (binom(n, m_total) > 1e6)
      throw Error(ErrorKind::SearchSpaceTooLarge, "exact delta needs C(N,M) <= 1e6");
    std::vector<int> comb(m_total);
    std::iota(comb.begin(), comb.end(), 0);
    do {
      delta = std::max(delta, spectrum_deviation(rows, inv_var, comb, out.d));
    } while (next_combination(comb, n));
    out.exact_delta = true;
  } else {
    if (sampled->rng == nullptr)
      throw Error(ErrorKind::BadConfig, "sampled delta mode needs an RngStream");
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (int t = 0; t < sampled->n_subsets; ++t) {
      std::vector<int> pick = sampled->rng->sample_without_replacement(all, m_total);
      delta = std::max(delta, spectrum_deviation(rows, inv_var, pick, out.d));
    }
    out.exact_delta = false;
  }
  out.delta = delta;
  out.gamma = gamma;

  if (delta < out.d) {
    const double ratio = (out.d + delta) / (out.d - delta);
    out.kappa = ratio * ratio * out.alpha_max / out.alpha_min;
    if (gamma) out.zeta = *gamma * *out.kappa;
  }
  return out;
}

}  // namespace hetsel
