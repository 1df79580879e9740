#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hetsel/error.hpp"
#include "hetsel/experiments.hpp"
#include "hetsel/json_io.hpp"

using namespace hetsel;

TEST_CASE("full DCT is orthonormal and column-subsets keep unit norms") {
  RngStream rng(21, 0);
  const MeasurementModel full = make_dct_model(8, 8, rng);
  const CMatrix a = full.matrix();
  CHECK((a.adjoint() * a - CMatrix::Identity(8, 8)).norm() < 1e-12);

  RngStream rng2(21, 1);
  const MeasurementModel sub = make_dct_model(16, 5, rng2);
  for (int j = 0; j < 5; ++j) CHECK(sub.matrix().col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("DCT column choice is deterministic in the stream") {
  RngStream a(4242, 9), b(4242, 9);
  CHECK(pick_dct_columns(12, 4, a) == pick_dct_columns(12, 4, b));
  const std::vector<int> cols = pick_dct_columns(12, 4, a);
  CHECK(std::is_sorted(cols.begin(), cols.end()));
}

TEST_CASE("doa model special cases") {
  // all sensors at the origin: y_n = sum alpha, zero theta-derivatives
  const MeasurementModel at_origin =
      make_doa_model({0.3, -0.8}, {2.0, 1.0}, {0.0, 0.0, 0.0}, 0.5);
  const CVector y = at_origin.forward(at_origin.nominal());
  for (int n = 0; n < 3; ++n) CHECK(std::abs(y(n) - Cplx(3.0, 0.0)) < 1e-12);
  const CMatrix j = at_origin.rows();
  for (int n = 0; n < 3; ++n) {
    CHECK(std::abs(j(n, 0)) < 1e-12);
    CHECK(std::abs(j(n, 1)) < 1e-12);
  }

  // single source at broadside: flat response, pure imaginary theta-slope
  const double lambda = 0.25;
  const MeasurementModel broadside = make_doa_model({0.0}, {1.5}, {0.0, 0.3, 0.9}, lambda);
  const CVector yb = broadside.forward(broadside.nominal());
  const CMatrix jb = broadside.rows();
  for (int n = 0; n < 3; ++n) {
    CHECK(std::abs(yb(n) - Cplx(1.5, 0.0)) < 1e-12);
    const double expected = -2.0 * M_PI / lambda * std::vector<double>{0.0, 0.3, 0.9}[n] * 1.5;
    CHECK(jb(n, 0).real() == doctest::Approx(0.0));
    CHECK(jb(n, 0).imag() == doctest::Approx(expected));
    CHECK(std::abs(jb(n, 1) - Cplx(1.0, 0.0)) < 1e-12);
  }
}

TEST_CASE("doa jacobian matches central finite differences") {
  RngStream rng(23, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const int k = 1 + rng.next_below(4);
    const int n = 6 + rng.next_below(10);
    std::vector<double> thetas(k), alphas(k), pos(n);
    for (auto& t : thetas) t = -1.2 + 2.4 * rng.next_unit();
    for (auto& a : alphas) a = 0.5 + 2.0 * rng.next_unit();
    for (auto& p : pos) p = rng.next_unit();
    const MeasurementModel model = make_doa_model(thetas, alphas, pos, 0.1);

    const CMatrix j = model.rows();
    const CVector x0 = model.nominal();
    const double h = 1e-6;
    for (int p = 0; p < 2 * k; ++p) {
      CVector hi = x0, lo = x0;
      hi(p) += h;
      lo(p) -= h;
      const CVector fd = (model.forward(hi) - model.forward(lo)) / (2.0 * h);
      const double scale = std::max(j.col(p).norm(), 1e-12);
      CHECK((fd - j.col(p)).norm() / scale < 1e-5);
    }
  }
}

TEST_CASE("snr to sigma closed forms") {
  CMatrix a(1, 1);
  a << Cplx(1, 0);
  const MeasurementModel unit = MeasurementModel::linear(a);
  CVector x(1);
  x << Cplx(1, 0);
  CHECK(snr_to_sigma(unit, x, {{0}}, {0.0})[0] == doctest::Approx(1.0));
  CHECK(snr_to_sigma(unit, x, {{0}}, {20.0})[0] == doctest::Approx(0.1));

  CMatrix two(2, 1);
  two << Cplx(1, 0), Cplx(std::sqrt(3.0), 0);
  const MeasurementModel pair = MeasurementModel::linear(two);
  const double sigma = snr_to_sigma(pair, x, {{0, 1}}, {10.0})[0];
  CHECK(sigma * sigma == doctest::Approx(0.2).epsilon(1e-12));

  CMatrix zero(1, 1);
  zero << Cplx(1, 0);
  CVector x0 = CVector::Zero(1);
  CHECK_THROWS_AS(snr_to_sigma(MeasurementModel::linear(zero), x0, {{0}}, {0.0}), Error);
}

TEST_CASE("empirical snr of generated data matches the configured value") {
  RngStream rng(24, 0);
  CMatrix a(6, 2);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = Cplx(rng.next_gaussian(), 0.0);
  const MeasurementModel model = MeasurementModel::linear(a);
  CVector x(2);
  x << Cplx(2.0, 0), Cplx(-1.0, 0);
  const std::vector<std::vector<int>> sets{{0, 1, 2}, {3, 4, 5}};
  const std::vector<double> target{12.0, 3.0};
  const std::vector<double> sigma = snr_to_sigma(model, x, sets, target);
  const CVector y0 = model.forward(x);

  for (int s = 0; s < 2; ++s) {
    double signal = 0.0;
    for (int j : sets[s]) signal += std::norm(y0(j));
    double noise_acc = 0.0;
    const int draws = 10000;
    RngStream nrng(25, static_cast<std::uint64_t>(s));
    for (int t = 0; t < draws; ++t)
      for (std::size_t j = 0; j < sets[s].size(); ++j) {
        const double e = sigma[s] * nrng.next_gaussian();
        noise_acc += e * e;
      }
    const double measured =
        10.0 * std::log10(signal / (noise_acc / draws));
    CHECK(std::abs(measured - target[s]) < 0.2);
  }
}

TEST_CASE("midrise quantizer") {
  CHECK(quantize(0.3, 1, 1.0) == doctest::Approx(0.5));
  CHECK(quantize(-0.3, 1, 1.0) == doctest::Approx(-0.5));
  CHECK(quantize(1.0, 1, 1.0) == doctest::Approx(0.5));    // clamped top level
  CHECK(quantize(-1.0, 1, 1.0) == doctest::Approx(-0.5));

  RngStream rng(26, 0);
  for (int rep = 0; rep < 2000; ++rep) {
    const int bits = 1 + rng.next_below(10);
    const double range = 0.5 + 4.0 * rng.next_unit();
    const double y = -range + 2.0 * range * rng.next_unit();
    const double q = quantize(y, bits, range);
    const double step = 2.0 * range / std::pow(2.0, bits);
    CHECK(std::abs(y - q) <= step / 2.0 + 1e-12);
    CHECK(quantize(q, bits, range) == q);  // idempotent
  }

  const Cplx qc = quantize(Cplx(0.3, -0.3), 1, 1.0);
  CHECK(qc.real() == doctest::Approx(0.5));
  CHECK(qc.imag() == doctest::Approx(-0.5));
}

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.model = DctSpec{10, 3};
  cfg.set_sizes = {4, 6};
  cfg.keep = {2, 3};
  cfg.noise.kind = NoiseSpec::Kind::SnrDb;
  cfg.noise.sweep = {10.0, 30.0};
  cfg.noise.per_set = {SetLevel{SetLevel::Kind::Fixed, 40.0, 0, 0},
                       SetLevel{SetLevel::Kind::Sweep, 0.0, 0, 0}};
  cfg.trials = 6;
  cfg.seed = 31337;
  cfg.methods = {Method::Jgs, Method::Igs, Method::Irs};
  return cfg;
}

}  // namespace

TEST_CASE("noiseless runs recover the parameters almost exactly") {
  ExperimentConfig cfg = tiny_config();
  cfg.noise.sweep = {300.0};
  cfg.noise.per_set = {SetLevel{SetLevel::Kind::Fixed, 300.0, 0, 0},
                       SetLevel{SetLevel::Kind::Sweep, 0.0, 0, 0}};
  const ExperimentOutput out = run_experiment(cfg, 1);
  for (const auto& row : out.summary) {
    CHECK(row.trials_failed == 0);
    CHECK(row.mean_nmse_db < -200.0);
  }
}

TEST_CASE("experiment output is identical under different worker counts") {
  const ExperimentConfig cfg = tiny_config();
  const ExperimentOutput a = run_experiment(cfg, 1);
  const ExperimentOutput b = run_experiment(cfg, 4);
  CHECK(summary_csv(a) == summary_csv(b));
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i)
    CHECK(trial_record_to_json(a.trials[i]).dump() == trial_record_to_json(b.trials[i]).dump());
}

TEST_CASE("summary recomputed from trial records reproduces the CSV") {
  const ExperimentConfig cfg = tiny_config();
  const ExperimentOutput out = run_experiment(cfg, 2);

  // round-trip every record through JSON, then re-aggregate
  std::vector<TrialRecord> restored;
  for (const auto& rec : out.trials)
    restored.push_back(trial_record_from_json(trial_record_to_json(rec)));
  ExperimentOutput rebuilt;
  rebuilt.summary = summarize_trials(restored, {"jgs", "igs", "irs"});
  rebuilt.doa = out.doa;
  CHECK(summary_csv(rebuilt) == summary_csv(out));
}

TEST_CASE("x-only randomization redraws x and keeps the placement") {
  ExperimentConfig cfg = tiny_config();
  cfg.randomize = ExperimentConfig::Randomize::XOnly;
  cfg.placement_per_trial = false;
  cfg.noise.kind = NoiseSpec::Kind::Sigma;
  cfg.noise.sweep = {0.05};
  cfg.noise.per_set = {SetLevel{SetLevel::Kind::Fixed, 0.01, 0, 0},
                       SetLevel{SetLevel::Kind::Sweep, 0.0, 0, 0}};
  cfg.x.kind = XSpec::Kind::Uniform;
  const ExperimentOutput out = run_experiment(cfg, 1);
  for (const auto& row : out.summary) CHECK(row.trials_ok == cfg.trials);
}

TEST_CASE("quantizer sweep runs end to end") {
  ExperimentConfig cfg = tiny_config();
  cfg.noise.kind = NoiseSpec::Kind::Quantizer;
  cfg.noise.sweep = {2.0, 8.0};
  cfg.noise.per_set = {SetLevel{SetLevel::Kind::Fixed, 12.0, 0, 0},
                       SetLevel{SetLevel::Kind::Sweep, 0.0, 0, 0}};
  const ExperimentOutput out = run_experiment(cfg, 1);
  double coarse = 0.0, fine = 0.0;
  for (const auto& row : out.summary) {
    if (row.method != "jgs") continue;
    if (row.sweep_value == 2.0) coarse = row.mean_nmse_db;
    if (row.sweep_value == 8.0) fine = row.mean_nmse_db;
  }
  CHECK(fine < coarse);  // more bits, less error
}
