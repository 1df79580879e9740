#include "hetsel/fim.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "hetsel/error.hpp"

namespace hetsel {
namespace {

CMatrix accumulate_fim(const CMatrix& rows, const std::vector<double>& sigma,
                       std::span<const int> subset) {
  const int k = static_cast<int>(rows.cols());
  CMatrix phi = CMatrix::Zero(k, k);
  for (int i : subset) {
    if (i < 0 || i >= rows.rows())
      throw Error(ErrorKind::IndexOutOfRange, "sensor index " + std::to_string(i + 1));
    phi.noalias() += rows.row(i).adjoint() * rows.row(i) / (sigma[i] * sigma[i]);
  }
  // keep it exactly Hermitian for the eigensolvers downstream
  phi = ((phi + phi.adjoint()) * 0.5).eval();
  return phi;
}

double mean_squared_row_norm(const CMatrix& rows) {
  double acc = 0.0;
  for (int i = 0; i < rows.rows(); ++i) acc += rows.row(i).squaredNorm();
  return acc / static_cast<double>(rows.rows());
}

}  // namespace

CMatrix fim(const MeasurementModel& model, const NoisePartition& noise,
            const std::optional<CVector>& x0, std::span<const int> subset) {
  if (subset.empty()) throw Error(ErrorKind::EmptySubset, "FIM needs a nonempty subset");
  const CMatrix rows = model.rows(x0);
  const std::vector<double> sigma = noise.per_sensor_sigma(model.sensor_count());
  return accumulate_fim(rows, sigma, subset);
}

ProxyKind proxy_kind_from_name(const std::string& name) {
  if (name == "trace") return ProxyKind::TraceCrlb;
  if (name == "logdet") return ProxyKind::LogDet;
  if (name == "maxeig") return ProxyKind::MaxEig;
  if (name == "negmse") return ProxyKind::NegMse;
  throw Error(ErrorKind::BadConfig, "unknown proxy cost '" + name + "'");
}

const char* proxy_kind_name(ProxyKind kind) {
  switch (kind) {
    case ProxyKind::TraceCrlb: return "trace";
    case ProxyKind::LogDet: return "logdet";
    case ProxyKind::MaxEig: return "maxeig";
    case ProxyKind::NegMse: return "negmse";
  }
  return "?";
}

double proxy_cost(ProxyKind kind, const MeasurementModel& model, const NoisePartition& noise,
                  const std::optional<CVector>& x0, std::span<const int> subset) {
  const CMatrix rows = model.rows(x0);
  const std::vector<double> sigma = noise.per_sensor_sigma(model.sensor_count());
  const double eps = 1e-8 * mean_squared_row_norm(rows);
  CMatrix phi = accumulate_fim(rows, sigma, subset);
  phi.diagonal().array() += eps;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(phi, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::NumericalFailure, "eigendecomposition of the regularized FIM failed");
  const RVector lambda = es.eigenvalues();
  if (!(lambda.minCoeff() > 0.0))
    throw Error(ErrorKind::NumericalFailure, "regularized FIM not positive definite");

  switch (kind) {
    case ProxyKind::TraceCrlb:
    case ProxyKind::NegMse:
      return -lambda.cwiseInverse().sum();
    case ProxyKind::LogDet:
      return lambda.array().log().sum();
    case ProxyKind::MaxEig:
      return -1.0 / lambda.minCoeff();
  }
  throw Error(ErrorKind::NumericalFailure, "unreachable proxy kind");
}

}  // namespace hetsel
