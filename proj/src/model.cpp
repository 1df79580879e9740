#include "hetsel/model.hpp"

#include <algorithm>
#include <numeric>

#include "hetsel/error.hpp"

namespace hetsel {

MeasurementModel MeasurementModel::linear(CMatrix a) {
  MeasurementModel m;
  m.linear_ = true;
  m.sensors_ = static_cast<int>(a.rows());
  m.params_ = static_cast<int>(a.cols());
  m.a_ = std::move(a);
  return m;
}

MeasurementModel MeasurementModel::nonlinear(int sensors, int params, JacobianFn jacobian,
                                             CVector nominal, ForwardFn forward) {
  if (!jacobian) throw Error(ErrorKind::BadConfig, "nonlinear model needs a Jacobian provider");
  if (nominal.size() != params)
    throw Error(ErrorKind::DimensionMismatch, "nominal parameter vector length != P");
  MeasurementModel m;
  m.linear_ = false;
  m.sensors_ = sensors;
  m.params_ = params;
  m.jacobian_ = std::move(jacobian);
  m.forward_ = std::move(forward);
  m.nominal_ = std::move(nominal);
  return m;
}

const CMatrix& MeasurementModel::matrix() const {
  if (!linear_) throw Error(ErrorKind::BadConfig, "matrix() called on a nonlinear model");
  return a_;
}

CMatrix MeasurementModel::rows(const std::optional<CVector>& x0) const {
  if (linear_) return a_;
  const CVector& at = x0 ? *x0 : nominal_;
  if (at.size() != params_)
    throw Error(ErrorKind::DimensionMismatch, "x0 length != parameter count");
  CMatrix j = jacobian_(at);
  if (j.rows() != sensors_ || j.cols() != params_)
    throw Error(ErrorKind::DimensionMismatch, "Jacobian provider returned wrong shape");
  return j;
}

const CVector& MeasurementModel::nominal() const {
  if (linear_) throw Error(ErrorKind::BadConfig, "nominal() called on a linear model");
  return nominal_;
}

CVector MeasurementModel::forward(const CVector& x) const {
  if (linear_) return a_ * x;
  if (!forward_) throw Error(ErrorKind::BadConfig, "nonlinear model has no forward map");
  return forward_(x);
}

bool MeasurementModel::real_valued() const {
  if (!linear_) return false;
  return a_.imag().isZero(0.0);
}

int NoisePartition::sensor_count() const {
  int n = 0;
  for (const auto& s : sets) n += static_cast<int>(s.size());
  return n;
}

std::vector<double> NoisePartition::per_sensor_sigma(int n) const {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (int j : sets[i]) {
      if (j < 0 || j >= n) throw Error(ErrorKind::IndexOutOfRange, "sensor index outside universe");
      out[j] = sigmas[i];
    }
  return out;
}

std::vector<int> NoisePartition::set_of_sensor(int n) const {
  std::vector<int> out(n, -1);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (int j : sets[i]) {
      if (j < 0 || j >= n) throw Error(ErrorKind::IndexOutOfRange, "sensor index outside universe");
      out[j] = static_cast<int>(i);
    }
  return out;
}

int SelectionConstraints::total() const {
  return std::accumulate(keep.begin(), keep.end(), 0);
}

std::vector<int> SelectionResult::kept_union() const {
  std::vector<int> out;
  for (const auto& s : kept) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> SelectionResult::objective_union() const {
  std::vector<int> out;
  out.reserve(trajectory.size());
  for (const auto& st : trajectory) out.push_back(st.sensor);
  std::sort(out.begin(), out.end());
  return out;
}

void validate_partition(const NoisePartition& noise, const SelectionConstraints& constraints,
                        int n) {
  const int l = noise.set_count();
  if (l < 1) throw Error(ErrorKind::DimensionMismatch, "partition needs at least one set");
  if (static_cast<int>(noise.sigmas.size()) != l)
    throw Error(ErrorKind::DimensionMismatch, "sets and sigmas lengths differ");
  if (static_cast<int>(constraints.keep.size()) != l)
    throw Error(ErrorKind::DimensionMismatch, "keep counts length != number of sets");
  for (double s : noise.sigmas)
    if (!(s > 0.0)) throw Error(ErrorKind::NonpositiveSigma, "every sigma must be > 0");

  std::vector<int> owner(n, -1);
  int covered = 0;
  for (int i = 0; i < l; ++i) {
    for (int j : noise.sets[i]) {
      if (j < 0 || j >= n)
        throw Error(ErrorKind::PartitionIncomplete, "set entry outside {1..N}");
      if (owner[j] != -1)
        throw Error(ErrorKind::PartitionNotDisjoint,
                    "sensor " + std::to_string(j + 1) + " appears in more than one set");
      owner[j] = i;
      ++covered;
    }
  }
  if (covered != n)
    throw Error(ErrorKind::PartitionIncomplete, "union of sets does not cover {1..N}");

  for (int i = 0; i < l; ++i) {
    const int m = constraints.keep[i];
    const int size = static_cast<int>(noise.sets[i].size());
    if (m < 0 || m > size)
      throw Error(ErrorKind::ConstraintExceedsSet,
                  "keep count " + std::to_string(m) + " outside [0, " + std::to_string(size) +
                      "] for set " + std::to_string(i + 1));
  }
  if (constraints.total() < 1)
    throw Error(ErrorKind::ConstraintExceedsSet, "total keep count must be at least 1");
}

void validate_instance(const MeasurementModel& model, const NoisePartition& noise,
                       const SelectionConstraints& constraints) {
  const int n = model.sensor_count();
  const int k = model.parameter_count();
  if (n < k)
    throw Error(ErrorKind::DimensionMismatch,
                "need at least as many sensors as parameters (N >= K)");
  validate_partition(noise, constraints, n);
  const CMatrix rows = model.rows();
  for (int i = 0; i < n; ++i)
    if (!(rows.row(i).norm() > 0.0))
      throw Error(ErrorKind::ZeroRow, "row " + std::to_string(i + 1) + " has zero norm");
}

}  // namespace hetsel
