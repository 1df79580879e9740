#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hetsel/bounds.hpp"
#include "hetsel/costs.hpp"
#include "hetsel/error.hpp"
#include "hetsel/selectors.hpp"
#include "hetsel/selfcheck.hpp"

using namespace hetsel;

TEST_CASE("lemma 1 values") {
  CHECK(lemma1_bound(0, 3, 7) == 0.0);
  CHECK(lemma1_bound(1, 1, 0) == doctest::Approx(1.0));
  CHECK(lemma1_bound(10, 3, 7) == doctest::Approx(0.6513215599).epsilon(1e-12));
}

TEST_CASE("theorem 2 closed form against frozen rational values") {
  // exact-rational oracle: 5288056577 / 9000000000
  CHECK(thm2_bound(1, 9, 9) == doctest::Approx(0.58756184188888894).epsilon(1e-14));
  // at m_s = M_i + M_i' - 1 the sum has exactly one term
  const double r = 1.0 - 2.0 / 9.0;
  const double direct = 1.0 - (1.0 / 9.0) - r * std::pow(0.9, 9);
  CHECK(thm2_bound(1, 9, 9) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("theorem 2 domain rules") {
  CHECK_THROWS_AS(thm2_bound(3, 3, 4), Error);
  CHECK_THROWS_AS(thm2_bound(3, 2, 4), Error);
  CHECK_THROWS_AS(thm2_bound(2, 9, 1), Error);    // m_s below M_i
  CHECK_THROWS_AS(thm2_bound(2, 9, 11), Error);   // m_s above M_i + M_i' - 1
  CHECK_NOTHROW(thm2_bound(2, 3, 2));
}

TEST_CASE("closed form equals the recursion unrolled from the lemma 1 seed") {
  for (int mi = 1; mi <= 6; ++mi)
    for (int mip = mi + 1; mip <= 40; ++mip)
      for (int ms = mi; ms <= mi + mip - 1; ++ms) {
        const double r = 1.0 - static_cast<double>(1 + mi) / mip;
        double b = lemma1_bound(ms, mi, mip);
        for (int step = 0; step < mi + mip - ms; ++step) b = 1.0 / mip + r * b;
        CHECK(thm2_bound(mi, mip, ms) == doctest::Approx(b).epsilon(1e-12));
      }
}

TEST_CASE("combined bound") {
  const BoundReport two_sets = combined_bound(1, 9, 9);
  CHECK(two_sets.thm1 == 0.5);
  REQUIRE(two_sets.thm2.has_value());
  CHECK(two_sets.combined == doctest::Approx(0.58756184188888894));

  const BoundReport degenerate = combined_bound(4, 4, 5);
  CHECK_FALSE(degenerate.thm2.has_value());
  CHECK(degenerate.combined == 0.5);

  // low m_s can push theorem 2 below 1/2; the floor wins
  const BoundReport floor = combined_bound(1, 9, 1);
  REQUIRE(floor.thm2.has_value());
  CHECK(*floor.thm2 < 0.5);
  CHECK(floor.combined == 0.5);
}

TEST_CASE("bound curve over m_s is monotone non-decreasing") {
  const std::vector<int> m1{1}, m2{9};
  const auto rows = bound_curve(BoundCurveMode::VaryMs, m1, m2);
  REQUIRE(rows.size() == 9);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].ms == 1 + static_cast<int>(i));
    REQUIRE(rows[i].thm2.has_value());
    if (i > 0) CHECK(*rows[i].thm2 >= *rows[i - 1].thm2 - 1e-15);
    CHECK(rows[i].combined >= 0.5);
    CHECK(rows[i].combined <= 1.0);
  }
  CHECK(*rows.back().thm2 == doctest::Approx(0.58756184188888894));
}

TEST_CASE("bound curve over sizes approaches 1 - 1/e") {
  const std::vector<int> m1{1};
  const std::vector<int> m2{10, 100, 1000, 10000};
  const auto rows = bound_curve(BoundCurveMode::VarySizes, m1, m2);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].combined > rows[i - 1].combined);
  CHECK(std::abs(rows.back().combined - (1.0 - 1.0 / std::exp(1.0))) < 1e-3);

  const std::vector<int> one{9};
  const auto point = bound_curve(BoundCurveMode::VarySizes, m1, one);
  REQUIRE(point.size() == 1);
  CHECK(point[0].combined == doctest::Approx(combined_bound(1, 9, 9).combined));
}

TEST_CASE("gamma factor") {
  CHECK(gamma_factor(2.0, 2.0) == doctest::Approx(1.0));
  CHECK(gamma_factor(6.0, 2.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(gamma_factor(1.0, 0.0), Error);

  // identity Gram, N=4, keep 2: WFP(N) = 4, every kept pair has WFP 2
  const GramTable eye = gram_from_correlation(RMatrix::Identity(4, 4), RVector::Ones(4));
  std::vector<int> all{0, 1, 2, 3};
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) best = std::min(best, wfp(eye, std::vector<int>{a, b}));
  CHECK(gamma_factor(wfp(eye, all), best) == doctest::Approx(1.5));
}

TEST_CASE("frame diagnostics on a flat-spectrum model") {
  // repeated identity blocks with sigma = sqrt(N/K) give Phi = d*I for the
  // full selection: delta = 0 and kappa collapses to the alpha ratio
  CMatrix rows(4, 2);
  rows << Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0), Cplx(1, 0), Cplx(0, 0), Cplx(0, 0),
      Cplx(1, 0);
  const MeasurementModel model = MeasurementModel::linear(rows);
  NoisePartition flat{{{0, 1, 2, 3}}, {std::sqrt(2.0)}};
  const std::vector<double> w{1.0, 1.0, 1.0, 1.0};
  const FrameDiagnostics diag = frame_diagnostics(model, flat, w, 4);
  CHECK(diag.exact_delta);
  CHECK(diag.d == doctest::Approx(1.0));
  CHECK(diag.delta == doctest::Approx(0.0));
  // unit rows, unit weights: both alpha sums equal M
  CHECK(diag.alpha_max == doctest::Approx(4.0));
  CHECK(diag.alpha_min == doctest::Approx(4.0));
  REQUIRE(diag.kappa.has_value());
  CHECK(*diag.kappa == doctest::Approx(diag.alpha_max / diag.alpha_min));

  // with sigma = 1 and M = 3 the subset spectra span {1, 2}: delta reaches d
  NoisePartition unit{{{0, 1, 2, 3}}, {1.0}};
  const FrameDiagnostics tight = frame_diagnostics(model, unit, w, 3);
  CHECK(tight.delta == doctest::Approx(1.0));
  CHECK_FALSE(tight.kappa.has_value());
}

TEST_CASE("exact delta matches a closed-form 2x2 eigenvalue sweep") {
  RngStream rng(77, 0);
  CMatrix rows(6, 2);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 2; ++j) rows(i, j) = rng.next_complex_gaussian();
  const MeasurementModel model = MeasurementModel::linear(rows);
  NoisePartition part{{{0, 1, 2}, {3, 4, 5}}, {1.2, 1.5}};
  const std::vector<double> sigma = part.per_sensor_sigma(6);
  std::vector<double> w(6, 1.0);

  double d = 0.0;
  for (int i = 0; i < 6; ++i) d += rows.row(i).squaredNorm();
  d /= 6.0;
  double expected = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b)
      for (int c = b + 1; c < 6; ++c) {
        CMatrix phi = CMatrix::Zero(2, 2);
        for (int i : {a, b, c})
          phi += rows.row(i).adjoint() * rows.row(i) / (sigma[i] * sigma[i]);
        // closed-form eigenvalues of a 2x2 Hermitian matrix
        const double tr = phi.trace().real();
        const double det = (phi(0, 0) * phi(1, 1) - phi(0, 1) * phi(1, 0)).real();
        const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
        const double lo = 0.5 * (tr - disc), hi = 0.5 * (tr + disc);
        expected = std::max({expected, hi - d, d - lo});
      }

  const FrameDiagnostics diag = frame_diagnostics(model, part, w, 3);
  CHECK(diag.delta == doctest::Approx(expected).epsilon(1e-10));

  // sampling never overshoots the exact maximum
  RngStream srng(78, 0);
  SampledDelta sampled{64, &srng};
  const FrameDiagnostics partial = frame_diagnostics(model, part, w, 3, sampled);
  CHECK_FALSE(partial.exact_delta);
  CHECK(partial.delta <= diag.delta + 1e-12);
}

TEST_CASE("kappa and zeta compose when delta < d") {
  // near-orthogonal rows with sigma calibrated so the spectrum hugs d
  const double s = std::sqrt(2.0);
  CMatrix rows(4, 2);
  rows << Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0), Cplx(0.9701425, 0), Cplx(0.2425356, 0),
      Cplx(-0.2425356, 0), Cplx(0.9701425, 0);
  const MeasurementModel model = MeasurementModel::linear(rows);
  NoisePartition part{{{0, 1, 2, 3}}, {s}};
  const std::vector<double> w{0.8, 0.9, 1.0, 0.7};
  const FrameDiagnostics diag = frame_diagnostics(model, part, w, 3, std::nullopt, 1.25);
  REQUIRE(diag.kappa.has_value());
  CHECK(*diag.kappa >= 1.0);
  REQUIRE(diag.zeta.has_value());
  CHECK(*diag.zeta == doctest::Approx(1.25 * *diag.kappa));
  CHECK(diag.gamma == 1.25);
}
