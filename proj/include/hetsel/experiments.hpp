#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hetsel/costs.hpp"
#include "hetsel/fim.hpp"
#include "hetsel/model.hpp"
#include "hetsel/rng.hpp"
#include "hetsel/selectors.hpp"

namespace hetsel {

/// N x N orthonormal DCT-II matrix with K columns drawn uniformly without
/// replacement (kept in ascending original index order).
MeasurementModel make_dct_model(int n, int k, RngStream& rng);

RMatrix dct_matrix(int n);
std::vector<int> pick_dct_columns(int n, int k, RngStream& rng);
MeasurementModel make_dct_model_with_columns(int n, const std::vector<int>& columns);

/// Far-field steering model y_n = sum_k alpha_k exp(-j 2 pi / lambda d_n sin
/// theta_k), parameters ordered [theta_1..theta_K, alpha_1..alpha_K]. The
/// nominal point [theta; alpha] is embedded for Jacobian evaluation.
MeasurementModel make_doa_model(const std::vector<double>& thetas,
                                const std::vector<double>& alphas,
                                const std::vector<double>& positions, double lambda);

/// sigma_i^2 = sum_{j in S_i} |[A(x_ref)]_j|^2 / (N_i 10^(snr_db_i / 10)).
std::vector<double> snr_to_sigma(const MeasurementModel& model, const CVector& x_ref,
                                 const std::vector<std::vector<int>>& sets,
                                 const std::vector<double>& snr_db);

/// Uniform midrise quantizer on [-R, R]: step 2R/2^Q, complex inputs
/// quantized per real/imag part.
double quantize(double y, int bits, double range);
Cplx quantize(Cplx y, int bits, double range);
CVector quantize(const CVector& y, int bits, double range);

// --- Monte-Carlo experiment harness -------------------------------------

struct DctSpec {
  int n = 0;
  int k = 0;
};

struct DoaSpec {
  int sources = 0;
  double wavelength = 0.0;
  std::optional<std::vector<double>> positions;  // absent: uniform-random [0,1]
  std::optional<std::vector<double>> thetas;     // absent: uniform-random [-pi, pi]
  std::optional<std::vector<double>> alphas;     // absent: N(0, 25)
};

/// Per-set level entry: a fixed number, the sweep value, the average of two
/// other sets, or linear interpolation by index between resolved neighbors.
struct SetLevel {
  enum class Kind { Fixed, Sweep, Avg, Auto } kind = Kind::Fixed;
  double value = 0.0;
  int avg_a = 0, avg_b = 0;  // 1-based set indices for Avg
};

struct NoiseSpec {
  enum class Kind { SnrDb, Sigma, Quantizer } kind = Kind::SnrDb;
  std::vector<double> sweep;
  std::vector<SetLevel> per_set;
  double quant_range = 0.0;  // 0: max |noise-free measurement| per part
};

struct XSpec {
  enum class Kind { Gaussian, Uniform } kind = Kind::Gaussian;
  double variance = 25.0;  // Gaussian
  double low = -1.0, high = 1.0;  // Uniform
};

struct ExperimentConfig {
  std::variant<DctSpec, DoaSpec> model;
  std::vector<int> set_sizes;
  std::vector<int> keep;
  bool placement_per_trial = true;
  NoiseSpec noise;
  enum class Randomize { NoiseOnly, XOnly } randomize = Randomize::NoiseOnly;
  XSpec x;
  int trials = 1000;
  std::uint64_t seed = 0;
  std::vector<Method> methods;
  enum class Cost { Wfc, Trace, LogDet, MaxEig, NegMse } cost = Cost::Wfc;
  WeightRule weight = WeightRule::Sigmoid;
  std::uint64_t opt_cap = 10'000'000ull;
  bool emit_trials = false;
};

struct MethodTrial {
  std::vector<std::vector<int>> kept;
  double wfc = 0.0;
  double error_ratio = 0.0;  // |x-xhat|^2/|x|^2, or traceCRLB/|x0|^2 for DoA
  bool ok = true;
  std::string failure;
};

struct TrialRecord {
  int sweep_index = 0;
  double sweep_value = 0.0;
  int trial = 0;
  std::uint64_t stream = 0;
  std::map<std::string, MethodTrial> methods;
};

struct SummaryRow {
  double sweep_value = 0.0;
  std::string method;
  double mean_nmse_db = 0.0;
  double mean_wfc = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
  std::optional<double> wfc_ratio_to_opt;
};

struct ExperimentOutput {
  std::vector<SummaryRow> summary;
  std::vector<TrialRecord> trials;
  bool doa = false;
};

/// Runs the full sweep; trials are independent and distributed over
/// `threads` workers (results are identical for any worker count).
ExperimentOutput run_experiment(const ExperimentConfig& config, int threads = 1);

std::string summary_csv(const ExperimentOutput& out);

// Recomputes summary rows from trial records; used to check the
// aggregation identity.
std::vector<SummaryRow> summarize_trials(const std::vector<TrialRecord>& trials,
                                         const std::vector<std::string>& methods);

}  // namespace hetsel
