#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace hetsel {

using Cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Sensing map of an instance: either a fixed N x K matrix (rows = sensors)
/// or, for nonlinear maps, a Jacobian provider evaluated at a nominal
/// parameter vector carried with the model. Real-valued systems are stored
/// as complex with zero imaginary part.
class MeasurementModel {
 public:
  using JacobianFn = std::function<CMatrix(const CVector&)>;
  using ForwardFn = std::function<CVector(const CVector&)>;

  static MeasurementModel linear(CMatrix a);

  // forward may be empty; it is only needed by SNR-driven noise generation.
  static MeasurementModel nonlinear(int sensors, int params, JacobianFn jacobian,
                                    CVector nominal, ForwardFn forward = nullptr);

  bool is_linear() const { return linear_; }
  int sensor_count() const { return sensors_; }
  int parameter_count() const { return params_; }

  const CMatrix& matrix() const;

  // Sensing rows: A, or the Jacobian at x0 (default: the embedded nominal).
  CMatrix rows(const std::optional<CVector>& x0 = std::nullopt) const;

  const CVector& nominal() const;

  bool has_forward() const { return static_cast<bool>(forward_); }
  CVector forward(const CVector& x) const;

  // True when every stored entry has zero imaginary part (linear models).
  bool real_valued() const;

 private:
  MeasurementModel() = default;

  bool linear_ = true;
  int sensors_ = 0;
  int params_ = 0;
  CMatrix a_;
  JacobianFn jacobian_;
  ForwardFn forward_;
  CVector nominal_;
};

/// Disjoint sensor sets S_1..S_L covering {1..N}, each with its noise
/// standard deviation. Indices are 0-based internally, 1-based in files.
struct NoisePartition {
  std::vector<std::vector<int>> sets;
  std::vector<double> sigmas;

  int set_count() const { return static_cast<int>(sets.size()); }
  int sensor_count() const;

  // sigma for each sensor, by set membership; length n.
  std::vector<double> per_sensor_sigma(int n) const;

  // set index of each sensor; -1 where uncovered; length n.
  std::vector<int> set_of_sensor(int n) const;
};

/// Number of sensors to keep from each set.
struct SelectionConstraints {
  std::vector<int> keep;

  int total() const;
};

struct GreedyStep {
  int iteration = 0;  // 1-based
  int sensor = 0;     // 0-based
  double gain = 0.0;
};

/// Outcome of any selector. `kept` always holds the kept sensors per set.
/// For complement-mode costs the optimizer builds the discard set, so the
/// trajectory lists discards and final_cost is the cost of that discard set.
struct SelectionResult {
  std::vector<std::vector<int>> kept;
  std::vector<GreedyStep> trajectory;
  std::vector<int> switch_iterations;
  double final_cost = 0.0;
  bool complement_mode = false;
  bool feasible = true;  // GS over a partition may break per-set counts

  std::vector<int> kept_union() const;
  std::vector<int> objective_union() const;  // trajectory sensors, sorted
};

/// Checks every type invariant of (model, noise, constraints) jointly and
/// throws the Error naming the first violated one.
void validate_instance(const MeasurementModel& model, const NoisePartition& noise,
                       const SelectionConstraints& constraints);

// Partition/constraint consistency against a plain universe {0..n-1};
// used by selectors that never see the model.
void validate_partition(const NoisePartition& noise, const SelectionConstraints& constraints,
                        int n);

}  // namespace hetsel
