#include "hetsel/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "hetsel/error.hpp"

namespace hetsel {

Method method_from_name(const std::string& name) {
  if (name == "jgs") return Method::Jgs;
  if (name == "gs") return Method::Gs;
  if (name == "igs") return Method::Igs;
  if (name == "irs") return Method::Irs;
  if (name == "rs") return Method::Rs;
  if (name == "opt") return Method::Opt;
  throw Error(ErrorKind::BadConfig, "unknown method '" + name + "'");
}

const char* method_name(Method method) {
  switch (method) {
    case Method::Jgs: return "jgs";
    case Method::Gs: return "gs";
    case Method::Igs: return "igs";
    case Method::Irs: return "irs";
    case Method::Rs: return "rs";
    case Method::Opt: return "opt";
  }
  return "?";
}

namespace {

struct GreedyRun {
  std::vector<std::vector<int>> chosen;  // per pool, in pick order
  std::vector<GreedyStep> steps;
  std::vector<int> pool_done_at;  // iteration at which each pool's quota filled
  double total = 0.0;
};

// Core greedy loop shared by greedy_homogeneous / jgs / gs. Candidates come
// from pools whose quota is not yet met. Tie rule: keep the lowest-indexed
// sensors, i.e. prefer the lowest candidate in direct mode and the highest
// discard in complement mode.
GreedyRun run_greedy(const CostOracle& cost, const std::vector<std::vector<int>>& pools,
                     const std::vector<int>& quotas) {
  const bool prefer_high = cost.complement_mode();
  const std::size_t l = pools.size();
  GreedyRun run;
  run.chosen.resize(l);
  run.pool_done_at.assign(l, 0);

  int total_quota = 0;
  for (std::size_t i = 0; i < l; ++i) {
    if (quotas[i] < 0 || quotas[i] > static_cast<int>(pools[i].size()))
      throw Error(ErrorKind::NotEnoughCandidates,
                  "quota " + std::to_string(quotas[i]) + " exceeds pool of size " +
                      std::to_string(pools[i].size()));
    total_quota += quotas[i];
  }

  std::vector<char> taken(cost.universe_size(), 0);
  auto cursor = cost.make_cursor();

  for (int m = 1; m <= total_quota; ++m) {
    int best = -1;
    int best_pool = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < l; ++i) {
      if (static_cast<int>(run.chosen[i].size()) >= quotas[i]) continue;
      for (int t : pools[i]) {
        if (taken[t]) continue;
        const double g = cursor->gain(t);
        bool better;
        if (best < 0)
          better = true;
        else if (g != best_gain)
          better = g > best_gain;
        else
          better = prefer_high ? (t > best) : (t < best);
        if (better) {
          best = t;
          best_pool = static_cast<int>(i);
          best_gain = g;
        }
      }
    }
    if (best < 0) throw Error(ErrorKind::NotEnoughCandidates, "candidate pool exhausted");
    cursor->add(best);
    taken[best] = 1;
    run.chosen[best_pool].push_back(best);
    run.steps.push_back({m, best, best_gain});
    if (static_cast<int>(run.chosen[best_pool].size()) == quotas[best_pool])
      run.pool_done_at[best_pool] = m;
  }
  run.total = cursor->value();
  return run;
}

std::vector<int> sorted_difference(const std::vector<int>& universe,
                                   const std::vector<int>& removed) {
  std::vector<char> gone(1 + *std::max_element(universe.begin(), universe.end()), 0);
  for (int t : removed) gone[t] = 1;
  std::vector<int> out;
  out.reserve(universe.size() - removed.size());
  for (int t : universe)
    if (!gone[t]) out.push_back(t);
  return out;
}

SelectionResult result_from_run(const CostOracle& cost, GreedyRun run,
                                const std::vector<std::vector<int>>& pools) {
  SelectionResult r;
  r.complement_mode = cost.complement_mode();
  r.kept.resize(pools.size());
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (r.complement_mode) {
      std::vector<int> sorted_pool = pools[i];
      std::sort(sorted_pool.begin(), sorted_pool.end());
      r.kept[i] = run.chosen[i].empty() ? sorted_pool : sorted_difference(sorted_pool, run.chosen[i]);
    } else {
      r.kept[i] = run.chosen[i];
      std::sort(r.kept[i].begin(), r.kept[i].end());
    }
  }
  r.trajectory = std::move(run.steps);
  r.switch_iterations = std::move(run.pool_done_at);
  r.final_cost = run.total;
  return r;
}

}  // namespace

SelectionResult greedy_homogeneous(const CostOracle& cost, std::span<const int> ground_set,
                                   int m) {
  if (m < 0 || m > static_cast<int>(ground_set.size()))
    throw Error(ErrorKind::NotEnoughCandidates,
                "cannot select " + std::to_string(m) + " from " +
                    std::to_string(ground_set.size()) + " candidates");
  std::vector<std::vector<int>> pools{std::vector<int>(ground_set.begin(), ground_set.end())};
  std::sort(pools[0].begin(), pools[0].end());
  const int quota = cost.complement_mode() ? static_cast<int>(ground_set.size()) - m : m;
  GreedyRun run = run_greedy(cost, pools, {quota});
  return result_from_run(cost, std::move(run), pools);
}

SelectionResult jgs(const CostOracle& cost, const NoisePartition& noise,
                    const SelectionConstraints& constraints) {
  validate_partition(noise, constraints, cost.universe_size());
  const std::size_t l = noise.sets.size();
  std::vector<std::vector<int>> pools(l);
  std::vector<int> quotas(l);
  for (std::size_t i = 0; i < l; ++i) {
    pools[i] = noise.sets[i];
    std::sort(pools[i].begin(), pools[i].end());
    quotas[i] = cost.complement_mode()
                    ? static_cast<int>(pools[i].size()) - constraints.keep[i]
                    : constraints.keep[i];
  }
  GreedyRun run = run_greedy(cost, pools, quotas);
  return result_from_run(cost, std::move(run), pools);
}

SelectionResult gs(const CostOracle& cost, const NoisePartition& noise,
                   const SelectionConstraints& constraints) {
  validate_partition(noise, constraints, cost.universe_size());
  std::vector<int> all(cost.universe_size());
  std::iota(all.begin(), all.end(), 0);
  SelectionResult flat = greedy_homogeneous(cost, all, constraints.total());

  // split the kept union back onto the partition and flag infeasibility
  const std::vector<int> owner = noise.set_of_sensor(cost.universe_size());
  SelectionResult r;
  r.complement_mode = flat.complement_mode;
  r.trajectory = std::move(flat.trajectory);
  r.final_cost = flat.final_cost;
  r.kept.assign(noise.sets.size(), {});
  for (int t : flat.kept[0]) r.kept[owner[t]].push_back(t);
  r.switch_iterations.assign(noise.sets.size(), 0);
  for (const auto& step : r.trajectory) r.switch_iterations[owner[step.sensor]] = step.iteration;
  r.feasible = true;
  for (std::size_t i = 0; i < noise.sets.size(); ++i)
    if (static_cast<int>(r.kept[i].size()) != constraints.keep[i]) r.feasible = false;
  return r;
}

SelectionResult igs(const CostOracle& cost, const NoisePartition& noise,
                    const SelectionConstraints& constraints) {
  validate_partition(noise, constraints, cost.universe_size());
  SelectionResult r;
  r.complement_mode = cost.complement_mode();
  r.kept.resize(noise.sets.size());
  r.switch_iterations.assign(noise.sets.size(), 0);
  double total = 0.0;
  int iteration = 0;
  for (std::size_t i = 0; i < noise.sets.size(); ++i) {
    std::vector<int> ground = noise.sets[i];
    std::sort(ground.begin(), ground.end());
    std::unique_ptr<CostOracle> restricted = cost.restrict_to(ground);
    const CostOracle& local = restricted ? *restricted : cost;
    SelectionResult part = greedy_homogeneous(local, ground, constraints.keep[i]);
    r.kept[i] = part.kept[0];
    for (const auto& step : part.trajectory)
      r.trajectory.push_back({++iteration, step.sensor, step.gain});
    r.switch_iterations[i] = iteration;
    total += part.final_cost;
  }
  r.final_cost = total;
  return r;
}

SelectionResult irs(const NoisePartition& noise, const SelectionConstraints& constraints,
                    RngStream& rng) {
  validate_partition(noise, constraints, noise.sensor_count());
  SelectionResult r;
  r.kept.resize(noise.sets.size());
  r.switch_iterations.assign(noise.sets.size(), 0);
  int iteration = 0;
  for (std::size_t i = 0; i < noise.sets.size(); ++i) {
    std::vector<int> pool = noise.sets[i];
    std::sort(pool.begin(), pool.end());
    std::vector<int> picks = rng.sample_without_replacement(pool, constraints.keep[i]);
    for (int t : picks) r.trajectory.push_back({++iteration, t, 0.0});
    r.switch_iterations[i] = iteration;
    std::sort(picks.begin(), picks.end());
    r.kept[i] = std::move(picks);
  }
  return r;
}

SelectionResult rs(const NoisePartition& noise, const SelectionConstraints& constraints,
                   RngStream& rng) {
  validate_partition(noise, constraints, noise.sensor_count());
  const int n = noise.sensor_count();
  const int m = constraints.total();
  const std::vector<int> owner = noise.set_of_sensor(n);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);

  constexpr int kMaxAttempts = 10'000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<int> draw = rng.sample_without_replacement(all, m);
    std::vector<int> counts(noise.sets.size(), 0);
    for (int t : draw) counts[owner[t]] += 1;
    bool ok = true;
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i] != constraints.keep[i]) ok = false;
    if (!ok) continue;

    SelectionResult r;
    r.kept.assign(noise.sets.size(), {});
    r.switch_iterations.assign(noise.sets.size(), 0);
    std::vector<int> level(noise.sets.size(), 0);
    int iteration = 0;
    for (int t : draw) {
      r.trajectory.push_back({++iteration, t, 0.0});
      r.kept[owner[t]].push_back(t);
      if (++level[owner[t]] == constraints.keep[owner[t]])
        r.switch_iterations[owner[t]] = iteration;
    }
    for (auto& s : r.kept) std::sort(s.begin(), s.end());
    return r;
  }
  std::cerr << "hetsel: rs could not satisfy per-set counts after " << kMaxAttempts
            << " attempts; falling back to irs\n";
  return irs(noise, constraints, rng);
}

double search_space_size(const NoisePartition& noise, const SelectionConstraints& constraints) {
  double total = 1.0;
  for (std::size_t i = 0; i < noise.sets.size(); ++i) {
    const int n = static_cast<int>(noise.sets[i].size());
    const int k = constraints.keep[i];
    double c = 1.0;
    for (int j = 0; j < k; ++j) c = c * static_cast<double>(n - j) / static_cast<double>(j + 1);
    total *= c;
    if (!std::isfinite(total)) return std::numeric_limits<double>::infinity();
  }
  return total;
}

namespace {

// Advances a k-combination of {0..n-1} in lexicographic order.
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

}  // namespace

SelectionResult exhaustive_opt(const CostOracle& cost, const NoisePartition& noise,
                               const SelectionConstraints& constraints, std::uint64_t cap) {
  validate_partition(noise, constraints, cost.universe_size());
  const double space = search_space_size(noise, constraints);
  if (!(space <= static_cast<double>(cap)))
    throw Error(ErrorKind::SearchSpaceTooLarge,
                "feasible combinations: " + std::to_string(space) + " > cap " +
                    std::to_string(cap));

  const std::size_t l = noise.sets.size();
  std::vector<std::vector<int>> sets(l);
  for (std::size_t i = 0; i < l; ++i) {
    sets[i] = noise.sets[i];
    std::sort(sets[i].begin(), sets[i].end());
  }

  // per-set position combinations, iterated odometer-style
  std::vector<std::vector<int>> pos(l);
  for (std::size_t i = 0; i < l; ++i) {
    pos[i].resize(constraints.keep[i]);
    std::iota(pos[i].begin(), pos[i].end(), 0);
  }

  std::vector<int> best_kept;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> best_per_set;

  std::vector<int> kept, objective;
  while (true) {
    kept.clear();
    for (std::size_t i = 0; i < l; ++i)
      for (int p : pos[i]) kept.push_back(sets[i][p]);

    if (cost.complement_mode()) {
      objective.clear();
      for (std::size_t i = 0; i < l; ++i) {
        std::vector<char> used(sets[i].size(), 0);
        for (int p : pos[i]) used[p] = 1;
        for (std::size_t p = 0; p < sets[i].size(); ++p)
          if (!used[p]) objective.push_back(sets[i][p]);
      }
    } else {
      objective = kept;
    }
    const double v = cost.value(objective);

    std::vector<int> kept_sorted = kept;
    std::sort(kept_sorted.begin(), kept_sorted.end());
    if (v > best_value || (v == best_value && kept_sorted < best_kept)) {
      best_value = v;
      best_kept = kept_sorted;
      best_per_set.assign(l, {});
      for (std::size_t i = 0; i < l; ++i) {
        for (int p : pos[i]) best_per_set[i].push_back(sets[i][p]);
        std::sort(best_per_set[i].begin(), best_per_set[i].end());
      }
    }

    // odometer step over the per-set combinations
    std::size_t axis = l;
    while (axis > 0) {
      if (next_combination(pos[axis - 1], static_cast<int>(sets[axis - 1].size()))) break;
      std::iota(pos[axis - 1].begin(), pos[axis - 1].end(), 0);
      --axis;
    }
    if (axis == 0) break;
  }

  SelectionResult r;
  r.complement_mode = cost.complement_mode();
  r.kept = std::move(best_per_set);
  r.final_cost = best_value;
  r.switch_iterations.assign(l, 0);

  // prefix marginals over the objective set give a consistent trajectory
  std::vector<int> obj;
  if (r.complement_mode) {
    std::vector<char> keep_mask(cost.universe_size(), 0);
    for (int t : best_kept) keep_mask[t] = 1;
    for (std::size_t i = 0; i < l; ++i)
      for (int t : sets[i])
        if (!keep_mask[t]) obj.push_back(t);
  } else {
    obj = best_kept;
  }
  std::sort(obj.begin(), obj.end());
  const std::vector<int> owner = noise.set_of_sensor(cost.universe_size());
  std::vector<int> level(l, 0);
  std::vector<int> goal(l);
  for (std::size_t i = 0; i < l; ++i)
    goal[i] = r.complement_mode
                  ? static_cast<int>(sets[i].size()) - constraints.keep[i]
                  : constraints.keep[i];
  double prev = 0.0;
  for (std::size_t m = 0; m < obj.size(); ++m) {
    const double cur = cost.value(std::span<const int>(obj.data(), m + 1));
    r.trajectory.push_back({static_cast<int>(m + 1), obj[m], cur - prev});
    prev = cur;
    const int s = owner[obj[m]];
    if (++level[s] == goal[s]) r.switch_iterations[s] = static_cast<int>(m + 1);
  }
  return r;
}

}  // namespace hetsel
