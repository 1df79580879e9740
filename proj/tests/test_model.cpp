#include <doctest.h>

#include "hetsel/error.hpp"
#include "hetsel/model.hpp"
#include "hetsel/selfcheck.hpp"

using namespace hetsel;

namespace {

MeasurementModel four_by_two() {
  CMatrix a(4, 2);
  a << Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0), Cplx(1, 0), Cplx(1, 0), Cplx(1, 0),
      Cplx(-1, 0);
  return MeasurementModel::linear(a);
}

}  // namespace

TEST_CASE("validate accepts a well-formed instance") {
  NoisePartition noise{{{0, 1}, {2, 3}}, {1.0, 2.0}};
  SelectionConstraints cons{{1, 1}};
  CHECK_NOTHROW(validate_instance(four_by_two(), noise, cons));
}

TEST_CASE("overlapping sets are rejected") {
  NoisePartition noise{{{0, 1}, {1, 2, 3}}, {1.0, 2.0}};
  SelectionConstraints cons{{1, 1}};
  try {
    validate_instance(four_by_two(), noise, cons);
    FAIL("expected PartitionNotDisjoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PartitionNotDisjoint);
  }
}

TEST_CASE("keep count above the set size is rejected") {
  NoisePartition noise{{{0, 1}, {2, 3}}, {1.0, 2.0}};
  SelectionConstraints cons{{3, 1}};
  try {
    validate_instance(four_by_two(), noise, cons);
    FAIL("expected ConstraintExceedsSet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstraintExceedsSet);
  }
}

TEST_CASE("incomplete cover and bad sigmas are rejected") {
  NoisePartition missing{{{0, 1}, {2}}, {1.0, 2.0}};
  SelectionConstraints cons{{1, 1}};
  CHECK_THROWS_AS(validate_instance(four_by_two(), missing, cons), Error);

  NoisePartition bad_sigma{{{0, 1}, {2, 3}}, {1.0, 0.0}};
  try {
    validate_instance(four_by_two(), bad_sigma, cons);
    FAIL("expected NonpositiveSigma");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonpositiveSigma);
  }
}

TEST_CASE("nonlinear wrapper of a linear map reproduces its rows") {
  const CMatrix a = four_by_two().matrix();
  auto jac = [a](const CVector&) { return a; };
  CVector x0 = CVector::Zero(2);
  const MeasurementModel wrapped = MeasurementModel::nonlinear(4, 2, jac, x0);
  const CMatrix rows = wrapped.rows();
  CHECK((rows - a).norm() / a.norm() < 1e-12);
}

TEST_CASE("validate_instance agrees with a direct invariant re-check") {
  const ValidateReport rep = run_validate_agreement(300, 2024);
  CHECK(rep.checks == 300);
  CHECK(rep.disagreements == 0);
}
