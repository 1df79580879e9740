#include "hetsel/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hetsel/error.hpp"

namespace hetsel {

using nlohmann::json;

namespace {

std::vector<int> to_zero_based(const json& arr, const char* what) {
  std::vector<int> out;
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<long long>() < 1)
      throw Error(ErrorKind::BadConfig, std::string(what) + " entries must be integers >= 1");
    out.push_back(v.get<int>() - 1);
  }
  return out;
}

json to_one_based(const std::vector<int>& v) {
  json arr = json::array();
  for (int i : v) arr.push_back(i + 1);
  return arr;
}

}  // namespace

namespace {
Instance parse_instance_impl(const json& j);
ExperimentConfig parse_experiment_config_impl(const json& j);
}  // namespace

Instance parse_instance(const json& j) {
  try {
    return parse_instance_impl(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadConfig, "instance error: " + std::string(e.what()));
  }
}

ExperimentConfig parse_experiment_config(const json& j) {
  try {
    return parse_experiment_config_impl(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadConfig, "config error: " + std::string(e.what()));
  }
}

namespace {

Instance parse_instance_impl(const json& j) {
  Instance inst;
  if (!j.contains("sets") || !j.contains("sigmas") || !j.contains("keep"))
    throw Error(ErrorKind::BadConfig, "instance needs sets, sigmas and keep");

  for (const auto& s : j.at("sets")) inst.noise.sets.push_back(to_zero_based(s, "sets"));
  inst.noise.sigmas = j.at("sigmas").get<std::vector<double>>();
  for (const auto& k : j.at("keep")) {
    if (!k.is_number_integer() || k.get<long long>() < 0)
      throw Error(ErrorKind::BadConfig, "keep entries must be non-negative integers");
    inst.constraints.keep.push_back(k.get<int>());
  }
  // N is the largest referenced sensor; disjointness/coverage are checked
  // by validate_instance, not here
  int n = 0;
  for (const auto& s : inst.noise.sets)
    for (int j : s) n = std::max(n, j + 1);

  const int model_keys = static_cast<int>(j.contains("matrix")) +
                         static_cast<int>(j.contains("dct")) + static_cast<int>(j.contains("doa"));
  if (model_keys != 1)
    throw Error(ErrorKind::BadConfig, "instance needs exactly one of matrix, dct, doa");

  if (j.contains("matrix")) {
    const json& m = j.at("matrix");
    if (n == 0 || m.size() % n != 0)
      throw Error(ErrorKind::BadConfig, "matrix entry count must be a multiple of N");
    const int k = static_cast<int>(m.size()) / n;
    CMatrix a(n, k);
    int idx = 0;
    for (const auto& e : m) {
      if (!e.is_array() || e.size() != 2)
        throw Error(ErrorKind::BadConfig, "matrix entries must be [re, im] pairs");
      a(idx / k, idx % k) = Cplx(e[0].get<double>(), e[1].get<double>());
      ++idx;
    }
    inst.model = MeasurementModel::linear(std::move(a));
  } else if (j.contains("dct")) {
    const json& d = j.at("dct");
    const int dn = d.at("n").get<int>();
    inst.model = make_dct_model_with_columns(dn, to_zero_based(d.at("columns"), "dct columns"));
  } else {
    const json& d = j.at("doa");
    inst.model = make_doa_model(d.at("theta").get<std::vector<double>>(),
                                d.at("alpha").get<std::vector<double>>(),
                                d.at("positions").get<std::vector<double>>(),
                                d.at("wavelength").get<double>());
  }
  return inst;
}

}  // namespace

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadConfig, "cannot open instance file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadConfig, "instance JSON parse error: " + std::string(e.what()));
  }
  return parse_instance(j);
}

json selection_to_json(const SelectionResult& result) {
  json out;
  json kept = json::array();
  for (const auto& s : result.kept) kept.push_back(to_one_based(s));
  out["kept"] = kept;
  json traj = json::array();
  for (const auto& step : result.trajectory)
    traj.push_back({{"iteration", step.iteration}, {"sensor", step.sensor + 1},
                    {"gain", step.gain}});
  out["trajectory"] = traj;
  out["switch_iterations"] = result.switch_iterations;
  out["final_cost"] = result.final_cost;
  out["complement_mode"] = result.complement_mode;
  out["feasible"] = result.feasible;
  return out;
}

namespace {

SetLevel parse_level(const json& v) {
  SetLevel level;
  if (v.is_number()) {
    level.kind = SetLevel::Kind::Fixed;
    level.value = v.get<double>();
  } else if (v.is_string() && v.get<std::string>() == "sweep") {
    level.kind = SetLevel::Kind::Sweep;
  } else if (v.is_string() && v.get<std::string>() == "auto") {
    level.kind = SetLevel::Kind::Auto;
  } else if (v.is_object() && v.contains("avg")) {
    level.kind = SetLevel::Kind::Avg;
    const auto pair = v.at("avg").get<std::vector<int>>();
    if (pair.size() != 2) throw Error(ErrorKind::BadConfig, "avg needs two set indices");
    level.avg_a = pair[0];
    level.avg_b = pair[1];
  } else {
    throw Error(ErrorKind::BadConfig, "noise level must be a number, \"sweep\", \"auto\" or {\"avg\":[i,j]}");
  }
  return level;
}

ExperimentConfig parse_experiment_config_impl(const json& j) {
  ExperimentConfig cfg;
  const json& model = j.at("model");
  if (model.contains("dct")) {
    DctSpec spec;
    spec.n = model.at("dct").at("n").get<int>();
    spec.k = model.at("dct").at("k").get<int>();
    cfg.model = spec;
  } else if (model.contains("doa")) {
    DoaSpec spec;
    const json& d = model.at("doa");
    spec.sources = d.at("sources").get<int>();
    spec.wavelength = d.at("wavelength").get<double>();
    if (d.contains("positions") && d.at("positions").is_array())
      spec.positions = d.at("positions").get<std::vector<double>>();
    if (d.contains("theta") && d.at("theta").is_array())
      spec.thetas = d.at("theta").get<std::vector<double>>();
    if (d.contains("alpha") && d.at("alpha").is_array())
      spec.alphas = d.at("alpha").get<std::vector<double>>();
    cfg.model = spec;
  } else {
    throw Error(ErrorKind::BadConfig, "model must contain dct or doa");
  }

  cfg.set_sizes = j.at("sets").get<std::vector<int>>();
  cfg.keep = j.at("keep").get<std::vector<int>>();
  const std::string placement = j.value("placement", "random-per-trial");
  if (placement == "random-per-trial")
    cfg.placement_per_trial = true;
  else if (placement == "fixed")
    cfg.placement_per_trial = false;
  else
    throw Error(ErrorKind::BadConfig, "placement must be random-per-trial or fixed");

  const json& noise = j.at("noise");
  const int noise_keys = static_cast<int>(noise.contains("snr_db")) +
                         static_cast<int>(noise.contains("sigma")) +
                         static_cast<int>(noise.contains("quantizer"));
  if (noise_keys != 1)
    throw Error(ErrorKind::BadConfig, "noise needs exactly one of snr_db, sigma, quantizer");
  const json* body = nullptr;
  if (noise.contains("snr_db")) {
    cfg.noise.kind = NoiseSpec::Kind::SnrDb;
    body = &noise.at("snr_db");
  } else if (noise.contains("sigma")) {
    cfg.noise.kind = NoiseSpec::Kind::Sigma;
    body = &noise.at("sigma");
  } else {
    cfg.noise.kind = NoiseSpec::Kind::Quantizer;
    body = &noise.at("quantizer");
    cfg.noise.quant_range = body->value("range", 0.0);
  }
  cfg.noise.sweep = body->at("sweep").get<std::vector<double>>();
  const json& sets = body->contains("sets") ? body->at("sets") : body->at("bits");
  for (const auto& v : sets) cfg.noise.per_set.push_back(parse_level(v));

  const std::string randomize = j.value("randomize", "noise-only");
  if (randomize == "noise-only")
    cfg.randomize = ExperimentConfig::Randomize::NoiseOnly;
  else if (randomize == "x-only")
    cfg.randomize = ExperimentConfig::Randomize::XOnly;
  else
    throw Error(ErrorKind::BadConfig, "randomize must be noise-only or x-only");

  if (j.contains("x")) {
    const json& x = j.at("x");
    const std::string dist = x.at("dist").get<std::string>();
    if (dist == "gaussian") {
      cfg.x.kind = XSpec::Kind::Gaussian;
      cfg.x.variance = x.value("variance", 25.0);
    } else if (dist == "uniform") {
      cfg.x.kind = XSpec::Kind::Uniform;
      cfg.x.low = x.value("low", -1.0);
      cfg.x.high = x.value("high", 1.0);
    } else {
      throw Error(ErrorKind::BadConfig, "x dist must be gaussian or uniform");
    }
  } else if (cfg.randomize == ExperimentConfig::Randomize::XOnly) {
    cfg.x.kind = XSpec::Kind::Uniform;
  }

  cfg.trials = j.value("trials", 1000);
  cfg.seed = j.value("seed", 0ull);
  for (const auto& m : j.at("methods"))
    cfg.methods.push_back(method_from_name(m.get<std::string>()));
  const std::string cost = j.value("cost", "wfc");
  if (cost == "wfc") cfg.cost = ExperimentConfig::Cost::Wfc;
  else if (cost == "trace") cfg.cost = ExperimentConfig::Cost::Trace;
  else if (cost == "logdet") cfg.cost = ExperimentConfig::Cost::LogDet;
  else if (cost == "maxeig") cfg.cost = ExperimentConfig::Cost::MaxEig;
  else if (cost == "negmse") cfg.cost = ExperimentConfig::Cost::NegMse;
  else throw Error(ErrorKind::BadConfig, "unknown cost '" + cost + "'");
  cfg.weight = weight_rule_from_name(j.value("weight", "sigmoid"));
  cfg.opt_cap = j.value("opt_cap", 10'000'000ull);
  cfg.emit_trials = j.value("emit_trials", false);
  return cfg;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadConfig, "cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadConfig, "config JSON parse error: " + std::string(e.what()));
  }
  try {
    return parse_experiment_config(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadConfig, "config error: " + std::string(e.what()));
  }
}

json trial_record_to_json(const TrialRecord& record) {
  json methods;
  for (const auto& [name, mt] : record.methods) {
    json m;
    json kept = json::array();
    for (const auto& s : mt.kept) kept.push_back(to_one_based(s));
    m["kept"] = kept;
    m["ok"] = mt.ok;
    if (mt.ok) {
      m["wfc"] = mt.wfc;
      m["ratio"] = mt.error_ratio;
      if (mt.error_ratio == 0.0)
        m["nmse_db"] = "-inf";
      else
        m["nmse_db"] = 10.0 * std::log10(mt.error_ratio);
    } else {
      m["failure"] = mt.failure;
    }
    methods[name] = m;
  }
  return json{{"trial", record.trial},
              {"sweep_index", record.sweep_index},
              {"sweep_value", record.sweep_value},
              {"stream", record.stream},
              {"methods", methods}};
}

TrialRecord trial_record_from_json(const json& j) {
  TrialRecord rec;
  rec.trial = j.at("trial").get<int>();
  rec.sweep_index = j.at("sweep_index").get<int>();
  rec.sweep_value = j.at("sweep_value").get<double>();
  rec.stream = j.at("stream").get<std::uint64_t>();
  for (const auto& [name, m] : j.at("methods").items()) {
    MethodTrial mt;
    mt.ok = m.at("ok").get<bool>();
    if (mt.ok) {
      mt.wfc = m.at("wfc").get<double>();
      mt.error_ratio = m.at("ratio").get<double>();
    } else {
      mt.failure = m.at("failure").get<std::string>();
    }
    for (const auto& s : m.at("kept")) mt.kept.push_back(to_zero_based(s, "kept"));
    rec.methods.emplace(name, std::move(mt));
  }
  return rec;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::BadConfig, "cannot write " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::BadConfig, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hetsel
