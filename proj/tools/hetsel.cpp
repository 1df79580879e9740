// hetsel: joint greedy sensor selection for heterogeneous sensor networks.
// Subcommands: select, bounds, experiment, check. Exit codes: 0 success,
// 1 validation error, 2 numerical failure, 3 search-space cap.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <thread>

#include "hetsel/bounds.hpp"
#include "hetsel/error.hpp"
#include "hetsel/estimation.hpp"
#include "hetsel/json_io.hpp"
#include "hetsel/selfcheck.hpp"

namespace {

using namespace hetsel;

double wfc_of_kept_union(const GramTable& gram, const SelectionResult& result) {
  std::vector<int> all(gram.size());
  for (int i = 0; i < gram.size(); ++i) all[i] = i;
  return wfp(gram, all) - wfp(gram, result.kept_union());
}

int worker_count() {
  const char* env = std::getenv("HETSEL_THREADS");
  if (env != nullptr) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::size_t at = 0;
  while (at < csv.size()) {
    std::size_t comma = csv.find(',', at);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(std::stoi(csv.substr(at, comma - at)));
    at = comma + 1;
  }
  if (out.empty()) throw Error(ErrorKind::BadConfig, "empty integer list");
  return out;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_select(const std::string& instance_path, const std::string& method_name_str,
               const std::string& cost_name, const std::string& weight_name,
               std::uint64_t seed, const std::string& out_path) {
  const Instance inst = load_instance(instance_path);
  validate_instance(inst.model, inst.noise, inst.constraints);

  const Method method = method_from_name(method_name_str);
  const std::vector<double> weights = compute_weights(inst.noise, weight_rule_from_name(weight_name));
  GramTable gram = build_gram(inst.model, std::nullopt, weights);

  std::unique_ptr<CostOracle> oracle;
  if (cost_name == "wfc")
    oracle = std::make_unique<WfcOracle>(gram);
  else
    oracle = std::make_unique<ProxyOracle>(proxy_kind_from_name(cost_name), inst.model, inst.noise);

  const auto start = std::chrono::steady_clock::now();
  SelectionResult result;
  RngStream rng(seed, 0);
  switch (method) {
    case Method::Jgs: result = jgs(*oracle, inst.noise, inst.constraints); break;
    case Method::Gs: result = gs(*oracle, inst.noise, inst.constraints); break;
    case Method::Igs: result = igs(*oracle, inst.noise, inst.constraints); break;
    case Method::Opt: result = exhaustive_opt(*oracle, inst.noise, inst.constraints); break;
    case Method::Rs: {
      RngStream r = rng.substream(3);
      result = rs(inst.noise, inst.constraints, r);
      break;
    }
    case Method::Irs: {
      RngStream r = rng.substream(4);
      result = irs(inst.noise, inst.constraints, r);
      break;
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(stop - start).count();

  nlohmann::json out = selection_to_json(result);
  out["method"] = method_name(method);
  out["cost"] = cost_name;
  out["weight"] = weight_name;
  out["seed"] = seed;
  // global WFC of the kept union, reported for every method
  out["wfc_of_kept"] = wfc_of_kept_union(gram, result);
  if (!out_path.empty()) {
    write_text_file(out_path, out.dump(2) + "\n");
  } else {
    std::cout << out.dump(2) << "\n";
  }
  // wall time goes to stderr so output files stay hash-reproducible
  std::fprintf(stderr, "hetsel select: %.2f ms\n", ms);
  return 0;
}

int run_bounds(std::optional<std::string> m1_csv, std::optional<std::string> m2_csv,
               std::optional<int> ms, bool sweep_ms, bool sweep_sizes,
               const std::string& out_path) {
  if (!m1_csv || !m2_csv) throw Error(ErrorKind::BadConfig, "--m1 and --m2 are required");
  const std::vector<int> m1s = parse_int_list(*m1_csv);
  const std::vector<int> m2s = parse_int_list(*m2_csv);

  if (!sweep_ms && !sweep_sizes) {
    if (m1s.size() != 1 || m2s.size() != 1 || !ms)
      throw Error(ErrorKind::BadConfig, "point evaluation takes single --m1, --m2 and --ms");
    const BoundReport rep = combined_bound(m1s[0], m2s[0], *ms);
    std::printf("%.10f\n", rep.combined);
    if (!out_path.empty()) {
      std::string csv = "M1,M2,ms,thm1,thm2,combined\n";
      csv += std::to_string(rep.m_i) + "," + std::to_string(rep.m_iprime) + "," +
             std::to_string(rep.m_s) + "," + format_g17(rep.thm1) + "," +
             (rep.thm2 ? format_g17(*rep.thm2) : "") + "," + format_g17(rep.combined) + "\n";
      write_text_file(out_path, csv);
    }
    return 0;
  }

  const BoundCurveMode mode = sweep_ms ? BoundCurveMode::VaryMs : BoundCurveMode::VarySizes;
  const std::vector<BoundCurveRow> rows = bound_curve(mode, m1s, m2s);
  std::string csv = "M1,M2,ms,thm1,thm2,combined\n";
  for (const auto& row : rows)
    csv += std::to_string(row.m1) + "," + std::to_string(row.m2) + "," + std::to_string(row.ms) +
           "," + format_g17(row.thm1) + "," + (row.thm2 ? format_g17(*row.thm2) : "") + "," +
           format_g17(row.combined) + "\n";
  if (!out_path.empty())
    write_text_file(out_path, csv);
  else
    std::cout << csv;
  return 0;
}

int run_experiment_cmd(const std::string& config_path, std::optional<int> trials,
                       std::optional<std::uint64_t> seed, const std::string& out_dir,
                       bool emit_trials) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (trials) cfg.trials = *trials;
  if (seed) cfg.seed = *seed;
  if (emit_trials) cfg.emit_trials = true;

  std::filesystem::create_directories(out_dir);
  const ExperimentOutput out = run_experiment(cfg, worker_count());
  write_text_file(out_dir + "/summary.csv", summary_csv(out));
  if (cfg.emit_trials) {
    std::string lines;
    for (const auto& rec : out.trials) lines += trial_record_to_json(rec).dump() + "\n";
    write_text_file(out_dir + "/trials.jsonl", lines);
  }
  std::fprintf(stderr, "hetsel experiment: wrote %s/summary.csv (%zu rows)\n", out_dir.c_str(),
               out.summary.size());
  return 0;
}

int run_check(std::uint64_t seed, int instances) {
  const PropertyReport props = run_wfc_property_suite(instances, 10, seed);
  std::printf("[%s] wfc properties: %d instances, %lld monotonicity pairs, %lld submodularity triples, worst excess %.3e\n",
              props.ok() ? "ok" : "FAIL", props.instances, props.monotonicity_pairs,
              props.submodularity_triples, props.worst_excess);
  const DeltaReport delta = run_delta_consistency(std::max(1, instances / 2), 12, seed);
  std::printf("[%s] wfc_delta vs batch: %d checks, worst relative %.3e\n",
              delta.violations == 0 ? "ok" : "FAIL", delta.checks, delta.worst_relative);
  const ValidateReport val = run_validate_agreement(std::max(1, instances * 4), seed);
  std::printf("[%s] validate_instance agreement: %d checks, %d disagreements\n",
              val.disagreements == 0 ? "ok" : "FAIL", val.checks, val.disagreements);
  const bool ok = props.ok() && delta.violations == 0 && val.disagreements == 0;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy sensor selection for heterogeneous sensor networks"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "emit machine-readable errors on stderr");

  auto* sel = app.add_subcommand("select", "run one selector on an instance file");
  std::string instance_path, method = "jgs", cost = "wfc", weight = "sigmoid", out_path;
  std::uint64_t seed = 42;
  sel->add_option("--instance", instance_path, "instance JSON file")->required();
  sel->add_option("--method", method, "jgs|gs|igs|rs|irs|opt");
  sel->add_option("--cost", cost, "wfc|trace|logdet|maxeig");
  sel->add_option("--weight", weight, "recip|shifted|sigmoid|tanh|unit");
  sel->add_option("--seed", seed, "rng seed (rs/irs)");
  sel->add_option("--out", out_path, "result JSON path (stdout if omitted)");

  auto* bnd = app.add_subcommand("bounds", "evaluate the worst-case bounds");
  std::optional<std::string> m1_csv, m2_csv;
  std::optional<int> ms;
  bool sweep_ms = false, sweep_sizes = false;
  std::string bounds_out;
  bnd->add_option("--m1", m1_csv, "M1 (comma list for --sweep-sizes)");
  bnd->add_option("--m2", m2_csv, "M2 (comma list for --sweep-sizes)");
  bnd->add_option("--ms", ms, "switch iteration m_s");
  bnd->add_flag("--sweep-ms", sweep_ms, "rows for every valid m_s");
  bnd->add_flag("--sweep-sizes", sweep_sizes, "rows for the (M1,M2) grid at m_s = M1+M2-1");
  bnd->add_option("--out", bounds_out, "CSV output path");

  auto* exp = app.add_subcommand("experiment", "run a Monte-Carlo experiment config");
  std::string config_path, out_dir = "results";
  std::optional<int> trials_override;
  std::optional<std::uint64_t> seed_override;
  bool emit_trials = false;
  exp->add_option("--config", config_path, "experiment config JSON")->required();
  exp->add_option("--trials", trials_override, "override config trial count");
  exp->add_option("--seed", seed_override, "override config seed");
  exp->add_option("--out-dir", out_dir, "output directory");
  exp->add_flag("--emit-trials", emit_trials, "also write trials.jsonl");

  auto* chk = app.add_subcommand("check", "run the invariant/property suites");
  std::uint64_t check_seed = 1;
  int check_instances = 50;
  chk->add_option("--seed", check_seed, "suite seed");
  chk->add_option("--instances", check_instances, "instances per suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // unknown flags and bad values are validation errors
  }

  try {
    if (*sel) return run_select(instance_path, method, cost, weight, seed, out_path);
    if (*bnd) return run_bounds(m1_csv, m2_csv, ms, sweep_ms, sweep_sizes, bounds_out);
    if (*exp)
      return run_experiment_cmd(config_path, trials_override, seed_override, out_dir, emit_trials);
    if (*chk) return run_check(check_seed, check_instances);
  } catch (const hetsel::Error& e) {
    if (json_errors) {
      nlohmann::json err{{"error", hetsel::error_kind_name(e.kind())}, {"message", e.detail()}};
      std::cerr << err.dump() << "\n";
    } else {
      std::cerr << "hetsel: " << e.what() << "\n";
    }
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "hetsel: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
