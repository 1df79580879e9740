#include "hetsel/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <thread>

#include "hetsel/error.hpp"
#include "hetsel/estimation.hpp"

namespace hetsel {

RMatrix dct_matrix(int n) {
  RMatrix t(n, n);
  for (int row = 0; row < n; ++row)
    for (int k = 0; k < n; ++k) {
      const double scale = (k == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
      t(row, k) = scale * std::cos(M_PI * (2.0 * row + 1.0) * k / (2.0 * n));
    }
  return t;
}

std::vector<int> pick_dct_columns(int n, int k, RngStream& rng) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> cols = rng.sample_without_replacement(all, k);
  std::sort(cols.begin(), cols.end());
  return cols;
}

MeasurementModel make_dct_model_with_columns(int n, const std::vector<int>& columns) {
  const RMatrix full = dct_matrix(n);
  CMatrix a(n, static_cast<int>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] < 0 || columns[j] >= n)
      throw Error(ErrorKind::IndexOutOfRange, "DCT column " + std::to_string(columns[j] + 1));
    a.col(static_cast<int>(j)) = full.col(columns[j]).cast<Cplx>();
  }
  return MeasurementModel::linear(std::move(a));
}

MeasurementModel make_dct_model(int n, int k, RngStream& rng) {
  if (k > n) throw Error(ErrorKind::DimensionMismatch, "K must be <= N");
  return make_dct_model_with_columns(n, pick_dct_columns(n, k, rng));
}

MeasurementModel make_doa_model(const std::vector<double>& thetas,
                                const std::vector<double>& alphas,
                                const std::vector<double>& positions, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::BadConfig, "wavelength must be positive");
  const int k = static_cast<int>(thetas.size());
  if (k < 1 || static_cast<int>(alphas.size()) != k)
    throw Error(ErrorKind::DimensionMismatch, "thetas and alphas must have equal length >= 1");
  const int n = static_cast<int>(positions.size());
  const double wave = 2.0 * M_PI / lambda;
  const std::vector<double> d = positions;

  auto steering = [wave, d, k, n](const CVector& x) {
    // x = [theta_1..theta_K, alpha_1..alpha_K], real-valued entries
    CMatrix s(n, k);
    for (int row = 0; row < n; ++row)
      for (int c = 0; c < k; ++c) {
        const double phase = -wave * d[row] * std::sin(x(c).real());
        s(row, c) = std::polar(1.0, phase);
      }
    return s;
  };

  auto forward = [steering, k, n](const CVector& x) {
    const CMatrix s = steering(x);
    CVector y = CVector::Zero(n);
    for (int c = 0; c < k; ++c) y += s.col(c) * x(k + c);
    return y;
  };

  auto jacobian = [steering, wave, d, k, n](const CVector& x) {
    const CMatrix s = steering(x);
    CMatrix j(n, 2 * k);
    for (int row = 0; row < n; ++row)
      for (int c = 0; c < k; ++c) {
        const Cplx e = s(row, c);
        const double cos_t = std::cos(x(c).real());
        j(row, c) = Cplx(0.0, -wave * d[row] * cos_t) * x(k + c) * e;
        j(row, k + c) = e;
      }
    return j;
  };

  CVector nominal(2 * k);
  for (int c = 0; c < k; ++c) {
    nominal(c) = thetas[c];
    nominal(k + c) = alphas[c];
  }
  return MeasurementModel::nonlinear(n, 2 * k, jacobian, nominal, forward);
}

std::vector<double> snr_to_sigma(const MeasurementModel& model, const CVector& x_ref,
                                 const std::vector<std::vector<int>>& sets,
                                 const std::vector<double>& snr_db) {
  if (sets.size() != snr_db.size())
    throw Error(ErrorKind::DimensionMismatch, "one SNR per set required");
  const CVector y0 = model.forward(x_ref);
  std::vector<double> sigma(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    double energy = 0.0;
    for (int j : sets[i]) {
      if (j < 0 || j >= y0.size())
        throw Error(ErrorKind::IndexOutOfRange, "sensor index " + std::to_string(j + 1));
      energy += std::norm(y0(j));
    }
    if (!(energy > 0.0))
      throw Error(ErrorKind::ZeroSignalPower, "set " + std::to_string(i + 1) + " has zero signal energy");
    const double var = energy / (static_cast<double>(sets[i].size()) *
                                 std::pow(10.0, snr_db[i] / 10.0));
    sigma[i] = std::sqrt(var);
  }
  return sigma;
}

double quantize(double y, int bits, double range) {
  if (bits < 1) throw Error(ErrorKind::BadConfig, "quantizer needs at least 1 bit");
  if (!(range > 0.0)) throw Error(ErrorKind::BadConfig, "quantizer range must be positive");
  const double step = 2.0 * range / std::pow(2.0, bits);
  double clamped = std::min(std::max(y, -range), std::nextafter(range, -range));
  return step * (std::floor(clamped / step) + 0.5);
}

Cplx quantize(Cplx y, int bits, double range) {
  return {quantize(y.real(), bits, range), quantize(y.imag(), bits, range)};
}

CVector quantize(const CVector& y, int bits, double range) {
  CVector out(y.size());
  for (int i = 0; i < y.size(); ++i) out(i) = quantize(y(i), bits, range);
  return out;
}

namespace {

std::vector<double> resolve_levels(const std::vector<SetLevel>& spec, double sweep_value) {
  const int l = static_cast<int>(spec.size());
  std::vector<double> out(l, 0.0);
  std::vector<char> done(l, 0);
  for (int i = 0; i < l; ++i) {
    if (spec[i].kind == SetLevel::Kind::Fixed) {
      out[i] = spec[i].value;
      done[i] = 1;
    } else if (spec[i].kind == SetLevel::Kind::Sweep) {
      out[i] = sweep_value;
      done[i] = 1;
    }
  }
  for (int i = 0; i < l; ++i) {
    if (spec[i].kind != SetLevel::Kind::Avg) continue;
    const int a = spec[i].avg_a - 1, b = spec[i].avg_b - 1;
    if (a < 0 || a >= l || b < 0 || b >= l || !done[a] || !done[b])
      throw Error(ErrorKind::BadConfig, "avg refers to unresolved or invalid sets");
    out[i] = 0.5 * (out[a] + out[b]);
    done[i] = 1;
  }
  for (int i = 0; i < l; ++i) {
    if (spec[i].kind != SetLevel::Kind::Auto) continue;
    int lo = i - 1;
    while (lo >= 0 && !done[lo]) --lo;
    int hi = i + 1;
    while (hi < l && !done[hi]) ++hi;
    if (lo < 0 || hi >= l)
      throw Error(ErrorKind::BadConfig, "auto level needs resolved neighbors on both sides");
    const double t = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
    out[i] = out[lo] + t * (out[hi] - out[lo]);
  }
  for (int i = 0; i < l; ++i)
    if (spec[i].kind == SetLevel::Kind::Auto) done[i] = 1;
  return out;
}

struct RunContext {
  const ExperimentConfig* config = nullptr;
  MeasurementModel model = MeasurementModel::linear(CMatrix::Identity(1, 1));
  bool doa = false;
  bool real_model = true;
  int n = 0;
  CVector x_fixed;
  CVector y0_fixed;
  RMatrix corr;
  std::vector<std::vector<int>> fixed_sets;
  double quant_range = 0.0;
};

std::vector<std::vector<int>> random_placement(const std::vector<int>& sizes, int n,
                                               RngStream rng) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> perm = rng.sample_without_replacement(all, n);
  std::vector<std::vector<int>> sets(sizes.size());
  int at = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    sets[i].assign(perm.begin() + at, perm.begin() + at + sizes[i]);
    std::sort(sets[i].begin(), sets[i].end());
    at += sizes[i];
  }
  return sets;
}

std::vector<std::vector<int>> block_placement(const std::vector<int>& sizes) {
  std::vector<std::vector<int>> sets(sizes.size());
  int at = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    sets[i].resize(sizes[i]);
    std::iota(sets[i].begin(), sets[i].end(), at);
    at += sizes[i];
  }
  return sets;
}

CVector draw_x(const XSpec& spec, int k, RngStream rng) {
  CVector x(k);
  if (spec.kind == XSpec::Kind::Gaussian) {
    const double sd = std::sqrt(spec.variance);
    for (int i = 0; i < k; ++i) x(i) = sd * rng.next_gaussian();
  } else {
    for (int i = 0; i < k; ++i) x(i) = spec.low + (spec.high - spec.low) * rng.next_unit();
  }
  return x;
}

double wfc_of_kept(const GramTable& gram, const std::vector<int>& kept) {
  std::vector<int> all(gram.size());
  std::iota(all.begin(), all.end(), 0);
  return wfp(gram, all) - wfp(gram, kept);
}

TrialRecord run_trial(const RunContext& ctx, int sweep_index, double sweep_value, int trial) {
  const ExperimentConfig& cfg = *ctx.config;
  TrialRecord rec;
  rec.sweep_index = sweep_index;
  rec.trial = trial;
  rec.sweep_value = sweep_value;
  rec.stream = (static_cast<std::uint64_t>(sweep_index + 1) << 32) |
               static_cast<std::uint64_t>(trial);
  RngStream rng(cfg.seed, rec.stream);

  NoisePartition part;
  part.sets = cfg.placement_per_trial ? random_placement(cfg.set_sizes, ctx.n, rng.substream(0))
                                      : ctx.fixed_sets;
  SelectionConstraints cons{cfg.keep};

  const std::vector<double> levels = resolve_levels(cfg.noise.per_set, sweep_value);
  std::vector<int> bits;
  if (cfg.noise.kind == NoiseSpec::Kind::SnrDb) {
    part.sigmas = snr_to_sigma(ctx.model, ctx.x_fixed, part.sets, levels);
  } else if (cfg.noise.kind == NoiseSpec::Kind::Sigma) {
    part.sigmas = levels;
  } else {
    bits.resize(levels.size());
    part.sigmas.resize(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
      bits[i] = static_cast<int>(std::llround(levels[i]));
      if (bits[i] < 1) throw Error(ErrorKind::BadConfig, "quantizer bits must be >= 1");
      const double step = 2.0 * ctx.quant_range / std::pow(2.0, bits[i]);
      part.sigmas[i] = step / std::sqrt(12.0);
    }
  }

  const CVector x = (cfg.randomize == ExperimentConfig::Randomize::XOnly)
                        ? draw_x(cfg.x, ctx.model.parameter_count(), rng.substream(1))
                        : ctx.x_fixed;

  CVector y;
  if (!ctx.doa) {
    CVector y0 = (cfg.randomize == ExperimentConfig::Randomize::XOnly)
                     ? CVector(ctx.model.matrix() * x)
                     : ctx.y0_fixed;
    if (cfg.noise.kind == NoiseSpec::Kind::Quantizer) {
      y.resize(y0.size());
      const std::vector<int> owner = part.set_of_sensor(ctx.n);
      for (int j = 0; j < y0.size(); ++j) y(j) = quantize(y0(j), bits[owner[j]], ctx.quant_range);
    } else {
      RngStream noise_rng = rng.substream(2);
      const std::vector<double> sigma = part.per_sensor_sigma(ctx.n);
      y = y0;
      for (int j = 0; j < y.size(); ++j) {
        if (ctx.real_model)
          y(j) += sigma[j] * noise_rng.next_gaussian();
        else
          y(j) += sigma[j] * noise_rng.next_complex_gaussian();
      }
    }
  }

  const std::vector<double> weights = compute_weights(part, cfg.weight);
  const RVector w = Eigen::Map<const RVector>(weights.data(), weights.size());
  const GramTable gram = gram_from_correlation(ctx.corr, w);

  std::unique_ptr<CostOracle> oracle;
  if (cfg.cost == ExperimentConfig::Cost::Wfc) {
    oracle = std::make_unique<WfcOracle>(gram);
  } else {
    ProxyKind kind = ProxyKind::TraceCrlb;
    if (cfg.cost == ExperimentConfig::Cost::LogDet) kind = ProxyKind::LogDet;
    if (cfg.cost == ExperimentConfig::Cost::MaxEig) kind = ProxyKind::MaxEig;
    if (cfg.cost == ExperimentConfig::Cost::NegMse) kind = ProxyKind::NegMse;
    oracle = std::make_unique<ProxyOracle>(kind, ctx.model, part);
  }

  for (Method method : cfg.methods) {
    MethodTrial mt;
    try {
      SelectionResult sel;
      switch (method) {
        case Method::Jgs: sel = jgs(*oracle, part, cons); break;
        case Method::Gs: sel = gs(*oracle, part, cons); break;
        case Method::Igs: sel = igs(*oracle, part, cons); break;
        case Method::Opt: sel = exhaustive_opt(*oracle, part, cons, cfg.opt_cap); break;
        case Method::Rs: {
          RngStream r = rng.substream(3);
          sel = rs(part, cons, r);
          break;
        }
        case Method::Irs: {
          RngStream r = rng.substream(4);
          sel = irs(part, cons, r);
          break;
        }
      }
      mt.kept = sel.kept;
      const std::vector<int> kept = sel.kept_union();
      mt.wfc = wfc_of_kept(gram, kept);
      if (ctx.doa) {
        mt.error_ratio = closed_form_mse(ctx.model, part, kept) / ctx.x_fixed.squaredNorm();
      } else {
        const CVector xhat = wls_estimate(ctx.model, part, kept, y);
        mt.error_ratio = (x - xhat).squaredNorm() / x.squaredNorm();
      }
    } catch (const Error& e) {
      mt.ok = false;
      mt.failure = error_kind_name(e.kind());
    }
    rec.methods.emplace(method_name(method), std::move(mt));
  }
  return rec;
}

}  // namespace

std::vector<SummaryRow> summarize_trials(const std::vector<TrialRecord>& trials,
                                         const std::vector<std::string>& methods) {
  // group by sweep index, preserve first-seen order
  std::vector<int> sweep_ids;
  for (const auto& t : trials)
    if (std::find(sweep_ids.begin(), sweep_ids.end(), t.sweep_index) == sweep_ids.end())
      sweep_ids.push_back(t.sweep_index);
  std::sort(sweep_ids.begin(), sweep_ids.end());

  std::vector<SummaryRow> rows;
  for (int sid : sweep_ids) {
    std::map<std::string, double> mean_wfc;
    for (const std::string& m : methods) {
      SummaryRow row;
      row.method = m;
      double ratio_sum = 0.0, wfc_sum = 0.0;
      for (const auto& t : trials) {
        if (t.sweep_index != sid) continue;
        row.sweep_value = t.sweep_value;
        const auto it = t.methods.find(m);
        if (it == t.methods.end()) continue;
        if (!it->second.ok) {
          row.trials_failed += 1;
          continue;
        }
        ratio_sum += it->second.error_ratio;
        wfc_sum += it->second.wfc;
        row.trials_ok += 1;
      }
      row.mean_nmse_db = row.trials_ok > 0
                             ? 10.0 * std::log10(ratio_sum / row.trials_ok)
                             : std::numeric_limits<double>::quiet_NaN();
      row.mean_wfc = row.trials_ok > 0 ? wfc_sum / row.trials_ok
                                       : std::numeric_limits<double>::quiet_NaN();
      mean_wfc[m] = row.mean_wfc;
      rows.push_back(std::move(row));
    }
    if (mean_wfc.count("opt")) {
      const double opt_wfc = mean_wfc["opt"];
      for (auto it = rows.end() - static_cast<std::ptrdiff_t>(methods.size()); it != rows.end();
           ++it)
        it->wfc_ratio_to_opt = it->mean_wfc / opt_wfc;
    }
  }
  return rows;
}

ExperimentOutput run_experiment(const ExperimentConfig& config, int threads) {
  if (config.set_sizes.size() != config.keep.size() ||
      config.set_sizes.size() != config.noise.per_set.size())
    throw Error(ErrorKind::BadConfig, "sets, keep and noise levels must have equal lengths");
  if (config.trials < 1) throw Error(ErrorKind::BadConfig, "trials must be >= 1");
  if (config.noise.sweep.empty()) throw Error(ErrorKind::BadConfig, "sweep list is empty");
  if (config.methods.empty()) throw Error(ErrorKind::BadConfig, "methods list is empty");
  if (config.randomize == ExperimentConfig::Randomize::XOnly &&
      config.noise.kind != NoiseSpec::Kind::Sigma)
    throw Error(ErrorKind::BadConfig, "x-only randomization requires direct sigma noise");

  RunContext ctx;
  ctx.config = &config;
  ctx.n = std::accumulate(config.set_sizes.begin(), config.set_sizes.end(), 0);

  RngStream root(config.seed, 0);
  if (std::holds_alternative<DctSpec>(config.model)) {
    const DctSpec& spec = std::get<DctSpec>(config.model);
    if (spec.n != ctx.n)
      throw Error(ErrorKind::BadConfig, "DCT size must equal the sum of set sizes");
    RngStream cols = root.substream(0);
    ctx.model = make_dct_model(spec.n, spec.k, cols);
    ctx.doa = false;
  } else {
    const DoaSpec& spec = std::get<DoaSpec>(config.model);
    RngStream gen = root.substream(0);
    std::vector<double> positions =
        spec.positions ? *spec.positions : std::vector<double>(ctx.n);
    if (!spec.positions)
      for (auto& p : positions) p = gen.next_unit();
    RngStream tgen = root.substream(5);
    std::vector<double> thetas = spec.thetas ? *spec.thetas : std::vector<double>(spec.sources);
    if (!spec.thetas)
      for (auto& t : thetas) t = -M_PI + 2.0 * M_PI * tgen.next_unit();
    RngStream agen = root.substream(6);
    std::vector<double> alphas = spec.alphas ? *spec.alphas : std::vector<double>(spec.sources);
    if (!spec.alphas)
      for (auto& a : alphas) a = 5.0 * agen.next_gaussian();
    if (static_cast<int>(positions.size()) != ctx.n)
      throw Error(ErrorKind::BadConfig, "DoA positions must cover all sensors");
    ctx.model = make_doa_model(thetas, alphas, positions, spec.wavelength);
    ctx.doa = true;
  }
  ctx.real_model = ctx.model.real_valued();

  if (ctx.doa) {
    ctx.x_fixed = ctx.model.nominal();
  } else {
    ctx.x_fixed = draw_x(config.x, ctx.model.parameter_count(), root.substream(1));
  }
  ctx.y0_fixed = ctx.model.forward(ctx.x_fixed);
  ctx.corr = correlation_matrix(ctx.model);
  if (!config.placement_per_trial) ctx.fixed_sets = block_placement(config.set_sizes);

  if (config.noise.kind == NoiseSpec::Kind::Quantizer) {
    if (ctx.doa) throw Error(ErrorKind::BadConfig, "quantizer experiments need a linear model");
    if (config.noise.quant_range > 0.0) {
      ctx.quant_range = config.noise.quant_range;
    } else {
      double r = 0.0;
      for (int j = 0; j < ctx.y0_fixed.size(); ++j)
        r = std::max({r, std::abs(ctx.y0_fixed(j).real()), std::abs(ctx.y0_fixed(j).imag())});
      if (!(r > 0.0)) throw Error(ErrorKind::ZeroSignalPower, "all noise-free measurements are 0");
      ctx.quant_range = r;
    }
  }

  const int sweeps = static_cast<int>(config.noise.sweep.size());
  std::vector<TrialRecord> records(static_cast<std::size_t>(sweeps) * config.trials);

  const int workers = std::max(1, threads);
  std::atomic<int> next{0};
  const int total = sweeps * config.trials;
  auto work = [&]() {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= total) return;
      const int si = task / config.trials;
      const int t = task % config.trials;
      records[task] = run_trial(ctx, si, config.noise.sweep[si], t);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<std::string> method_names;
  for (Method m : config.methods) method_names.push_back(method_name(m));

  ExperimentOutput out;
  out.doa = ctx.doa;
  out.trials = std::move(records);
  out.summary = summarize_trials(out.trials, method_names);
  return out;
}

std::string summary_csv(const ExperimentOutput& out) {
  const bool with_ratio =
      std::any_of(out.summary.begin(), out.summary.end(),
                  [](const SummaryRow& r) { return r.wfc_ratio_to_opt.has_value(); });
  std::string s = "sweep_value,method,mean_nmse_db,mean_wfc,trials_ok,trials_failed";
  if (with_ratio) s += ",wfc_ratio_to_opt";
  s += "\n";
  char buf[512];
  for (const auto& row : out.summary) {
    std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%d,%d", row.sweep_value,
                  row.method.c_str(), row.mean_nmse_db, row.mean_wfc, row.trials_ok,
                  row.trials_failed);
    s += buf;
    if (with_ratio) {
      if (row.wfc_ratio_to_opt) {
        std::snprintf(buf, sizeof buf, ",%.17g", *row.wfc_ratio_to_opt);
        s += buf;
      } else {
        s += ",";
      }
    }
    s += "\n";
  }
  return s;
}

}  // namespace hetsel
