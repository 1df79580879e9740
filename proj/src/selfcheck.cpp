#include "hetsel/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hetsel/error.hpp"
#include "hetsel/model.hpp"

namespace hetsel {

GramTable random_gram(RngStream& rng, int n_max) {
  const int n = 2 + rng.next_below(n_max - 1);
  const int k = 1 + rng.next_below(n);
  CMatrix rows(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) rows(i, j) = rng.next_complex_gaussian();
  RVector w(n);
  for (int i = 0; i < n; ++i) w(i) = rng.next_unit();
  const MeasurementModel model = MeasurementModel::linear(rows);
  return gram_from_correlation(correlation_matrix(model), w);
}

void verify_wfc_properties(const GramTable& gram, PropertyReport& report) {
  const int n = gram.size();
  const std::uint32_t full = (n >= 32) ? ~0u : ((1u << n) - 1u);
  if (n > 20) throw Error(ErrorKind::SearchSpaceTooLarge, "exhaustive check limited to n <= 20");

  // subset-sum table: wfp over bitmasks, built directly from G
  std::vector<double> wfp_of(full + 1, 0.0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int j = __builtin_ctz(s);
    const std::uint32_t rest = s & (s - 1);
    double cross = 0.0;
    for (int i = 0; i < n; ++i)
      if (rest & (1u << i)) cross += gram.g(i, j);
    wfp_of[s] = wfp_of[rest] + 2.0 * cross + gram.g(j, j);
  }
  const double wfp_full = wfp_of[full];
  const double slack = 1e-12 * wfp_full;
  auto wfc_of = [&](std::uint32_t s) { return wfp_full - wfp_of[full & ~s]; };

  // library wfc() must agree with the table on every subset;
  // the empty set must give exactly zero
  for (std::uint32_t s = 0; s <= full; ++s) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i)
      if (s & (1u << i)) subset.push_back(i);
    const double lib = wfc(gram, subset);
    if (s == 0 && lib != 0.0) report.normalization_violations += 1;
    if (std::abs(lib - wfc_of(s)) > slack + 1e-12 * std::abs(wfc_of(s)))
      report.wfc_mismatches += 1;
  }

  // monotonicity: wfc(S) <= wfc(T) for every S subseteq T
  for (std::uint32_t t = 0; t <= full; ++t) {
    for (std::uint32_t s = t;; s = (s - 1) & t) {
      report.monotonicity_pairs += 1;
      const double excess = wfc_of(s) - wfc_of(t);
      if (excess > slack) {
        report.monotonicity_violations += 1;
        report.worst_excess = std::max(report.worst_excess, excess);
      }
      if (s == 0) break;
    }
  }

  // submodularity: gain_j(S) >= gain_j(T) for S subseteq T, j notin T
  for (int j = 0; j < n; ++j) {
    const std::uint32_t without = full & ~(1u << j);
    for (std::uint32_t t = without;; t = (t - 1) & without) {
      const double gain_t = wfc_of(t | (1u << j)) - wfc_of(t);
      for (std::uint32_t s = t;; s = (s - 1) & t) {
        report.submodularity_triples += 1;
        const double gain_s = wfc_of(s | (1u << j)) - wfc_of(s);
        const double excess = gain_t - gain_s;
        if (excess > slack) {
          report.submodularity_violations += 1;
          report.worst_excess = std::max(report.worst_excess, excess);
        }
        if (s == 0) break;
      }
      if (t == 0) break;
    }
  }
  report.instances += 1;
}

PropertyReport run_wfc_property_suite(int instances, int n_max, std::uint64_t seed) {
  PropertyReport report;
  for (int i = 0; i < instances; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    const GramTable gram = random_gram(rng, n_max);
    verify_wfc_properties(gram, report);
  }
  return report;
}

DeltaReport run_delta_consistency(int instances, int n_max, std::uint64_t seed) {
  DeltaReport report;
  for (int i = 0; i < instances; ++i) {
    RngStream rng(seed, 1'000'000ull + i);
    const GramTable gram = random_gram(rng, n_max);
    const int n = gram.size();
    std::vector<int> complement(n);
    std::iota(complement.begin(), complement.end(), 0);
    std::vector<int> chosen;
    while (static_cast<int>(complement.size()) > 1) {
      const int pick = complement[rng.next_below(static_cast<int>(complement.size()))];
      const double delta = wfc_delta(gram, complement, pick);
      std::vector<int> grown = chosen;
      grown.push_back(pick);
      const double batch = wfc(gram, grown) - wfc(gram, chosen);
      const double scale = std::max({std::abs(batch), std::abs(delta), 1e-30});
      const double rel = std::abs(delta - batch) / scale;
      report.checks += 1;
      report.worst_relative = std::max(report.worst_relative, rel);
      if (rel > 1e-9) report.violations += 1;
      chosen.push_back(pick);
      complement.erase(std::find(complement.begin(), complement.end(), pick));
    }
  }
  return report;
}

namespace {

// straight-line re-check of every invariant, independent of validate_instance
bool plainly_valid(const MeasurementModel& model, const NoisePartition& noise,
                   const SelectionConstraints& cons) {
  const int n = model.sensor_count();
  if (n < model.parameter_count()) return false;
  if (noise.sets.empty() || noise.sets.size() != noise.sigmas.size()) return false;
  if (cons.keep.size() != noise.sets.size()) return false;
  for (double s : noise.sigmas)
    if (!(s > 0.0)) return false;
  std::vector<int> hits(n, 0);
  for (const auto& set : noise.sets)
    for (int j : set) {
      if (j < 0 || j >= n) return false;
      hits[j] += 1;
    }
  for (int h : hits)
    if (h != 1) return false;
  int total = 0;
  for (std::size_t i = 0; i < cons.keep.size(); ++i) {
    if (cons.keep[i] < 0 || cons.keep[i] > static_cast<int>(noise.sets[i].size())) return false;
    total += cons.keep[i];
  }
  if (total < 1) return false;
  const CMatrix rows = model.rows();
  for (int i = 0; i < n; ++i)
    if (!(rows.row(i).norm() > 0.0)) return false;
  return true;
}

}  // namespace

ValidateReport run_validate_agreement(int instances, std::uint64_t seed) {
  ValidateReport report;
  for (int i = 0; i < instances; ++i) {
    RngStream rng(seed, 2'000'000ull + i);
    const int n = 2 + rng.next_below(11);
    const int k = 1 + rng.next_below(n);
    CMatrix rows(n, k);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < k; ++c) rows(r, c) = rng.next_complex_gaussian();
    MeasurementModel model = MeasurementModel::linear(rows);

    const int l = 1 + rng.next_below(std::min(3, n));
    NoisePartition noise;
    noise.sets.assign(l, {});
    for (int j = 0; j < n; ++j) noise.sets[rng.next_below(l)].push_back(j);
    for (int s = 0; s < l; ++s) noise.sigmas.push_back(0.1 + rng.next_unit());
    SelectionConstraints cons;
    for (int s = 0; s < l; ++s)
      cons.keep.push_back(noise.sets[s].empty() ? 0
                                                : rng.next_below(static_cast<int>(noise.sets[s].size()) + 1));

    // random mutation: half the instances are corrupted somehow
    switch (rng.next_below(8)) {
      case 0:
        if (!noise.sets[0].empty()) noise.sets[l - 1].push_back(noise.sets[0][0]);
        break;
      case 1:
        if (!noise.sets[l - 1].empty()) noise.sets[l - 1].pop_back();
        break;
      case 2:
        noise.sigmas[0] = -noise.sigmas[0];
        break;
      case 3:
        cons.keep[0] = static_cast<int>(noise.sets[0].size()) + 1;
        break;
      default:
        break;
    }

    bool accepted = true;
    try {
      validate_instance(model, noise, cons);
    } catch (const Error&) {
      accepted = false;
    }
    report.checks += 1;
    if (accepted != plainly_valid(model, noise, cons)) report.disagreements += 1;
  }
  return report;
}

}  // namespace hetsel
