#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hetsel/costs.hpp"
#include "hetsel/fim.hpp"
#include "hetsel/model.hpp"

namespace hetsel {

/// Incremental view of a cost during one selection run. gain() must agree
/// with value(S u {t}) - value(S) recomputed from scratch (1e-9 relative).
class CostCursor {
 public:
  virtual ~CostCursor() = default;
  virtual double gain(int candidate) const = 0;
  virtual void add(int candidate) = 0;
  virtual double value() const = 0;
};

/// Set function C maximized by the selectors. When complement_mode() is
/// true the selectors optimize the discard set (of sizes |S_i| - M_i) and
/// report the kept sensors as its complement.
class CostOracle {
 public:
  virtual ~CostOracle() = default;

  virtual int universe_size() const = 0;
  virtual bool complement_mode() const { return false; }
  virtual double value(std::span<const int> objective_set) const = 0;
  virtual std::unique_ptr<CostCursor> make_cursor() const;

  // Restriction for independent per-set selection; nullptr means the
  // restriction is the identity (the cost never looks outside the subset
  // it is evaluated on).
  virtual std::unique_ptr<CostOracle> restrict_to(std::span<const int> ground) const {
    return nullptr;
  }
};

/// WFC over a ground set (all sensors by default): value(D) =
/// WFP(ground) - WFP(ground \ D) for a discard set D. The GramTable must
/// outlive the oracle.
class WfcOracle final : public CostOracle {
 public:
  explicit WfcOracle(const GramTable& gram);
  WfcOracle(const GramTable& gram, std::vector<int> ground);

  int universe_size() const override;
  bool complement_mode() const override { return true; }
  double value(std::span<const int> discard) const override;
  std::unique_ptr<CostCursor> make_cursor() const override;
  std::unique_ptr<CostOracle> restrict_to(std::span<const int> ground) const override;

  const std::vector<int>& ground() const { return ground_; }

 private:
  const GramTable* gram_;
  std::vector<int> ground_;
  double wfp_ground_;
};

/// CRLB-style costs on kept subsets (direct mode), shifted so the empty
/// set scores zero (the shift never changes a greedy decision but keeps
/// trajectory increments summable).
class ProxyOracle final : public CostOracle {
 public:
  ProxyOracle(ProxyKind kind, const MeasurementModel& model, const NoisePartition& noise,
              std::optional<CVector> x0 = std::nullopt);

  int universe_size() const override;
  double value(std::span<const int> subset) const override;
  std::unique_ptr<CostCursor> make_cursor() const override;

 private:
  friend class ProxyCursor;
  ProxyKind kind_;
  CMatrix rows_;
  std::vector<double> inv_var_;
  double eps_;
  double empty_value_ = 0.0;
};

/// Modular cost c(S) = sum of per-sensor values; greedy is exact on it.
class ModularOracle final : public CostOracle {
 public:
  explicit ModularOracle(std::vector<double> values);

  int universe_size() const override;
  double value(std::span<const int> subset) const override;

 private:
  std::vector<double> values_;
};

}  // namespace hetsel
