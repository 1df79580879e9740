#include "hetsel/estimation.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "hetsel/error.hpp"
#include "hetsel/fim.hpp"

namespace hetsel {

CVector wls_estimate(const MeasurementModel& model, const NoisePartition& noise,
                     std::span<const int> subset, const CVector& y) {
  if (subset.empty()) throw Error(ErrorKind::EmptySubset, "estimation needs a nonempty subset");
  if (!model.is_linear())
    throw Error(ErrorKind::BadConfig, "wls_estimate requires a linear model");
  const CMatrix& a = model.matrix();
  if (y.size() != a.rows())
    throw Error(ErrorKind::DimensionMismatch, "measurement vector length != N");
  const std::vector<double> sigma = noise.per_sensor_sigma(model.sensor_count());

  const int m = static_cast<int>(subset.size());
  const int k = model.parameter_count();
  CMatrix b(m, k);
  CVector z(m);
  for (int r = 0; r < m; ++r) {
    const int i = subset[r];
    if (i < 0 || i >= a.rows())
      throw Error(ErrorKind::IndexOutOfRange, "sensor index " + std::to_string(i + 1));
    const double inv = 1.0 / sigma[i];
    b.row(r) = a.row(i) * inv;
    z(r) = y(i) * inv;
  }

  Eigen::BDCSVD<CMatrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double d = b.squaredNorm() / static_cast<double>(m);
  const double smin = svd.singularValues().size() == k ? svd.singularValues()(k - 1) : 0.0;
  if (!(smin > 1e-10 * std::sqrt(d)))
    throw Error(ErrorKind::RankDeficient,
                "smallest singular value " + std::to_string(smin) + " below threshold");
  return svd.solve(z);
}

double closed_form_mse(const MeasurementModel& model, const NoisePartition& noise,
                       std::span<const int> subset, const std::optional<CVector>& x0) {
  const CMatrix phi = fim(model, noise, x0, subset);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(phi, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::NumericalFailure, "FIM eigendecomposition failed");
  const RVector lambda = es.eigenvalues();
  const CMatrix rows = model.rows(x0);
  double d = 0.0;
  for (int i = 0; i < rows.rows(); ++i) d += rows.row(i).squaredNorm();
  d /= static_cast<double>(rows.rows());
  if (!(lambda.minCoeff() > 1e-20 * d))
    throw Error(ErrorKind::RankDeficient,
                "smallest singular value " + std::to_string(std::sqrt(std::max(lambda.minCoeff(), 0.0))) +
                    " below threshold");
  return lambda.cwiseInverse().sum();
}

double empirical_nmse_db(const CVector& x_true, const CVector& x_hat) {
  if (x_true.size() != x_hat.size())
    throw Error(ErrorKind::DimensionMismatch, "estimate length != reference length");
  const double ref = x_true.squaredNorm();
  if (!(ref > 0.0)) throw Error(ErrorKind::ZeroReference, "reference vector has zero norm");
  const double err = (x_true - x_hat).squaredNorm();
  if (err == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(err / ref);
}

}  // namespace hetsel
