#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "walras/demand_analysis.hpp"
#include "walras/market.hpp"

namespace walras {

/// Where the own-price floor for the neutral price S is read.
enum class SupOAnchor {
  /// q_a >= sup O_a(q_{-a}) at each candidate point of the box.
  Query,
  /// q_a >= sup O_a(p_{-a}) at the base prices.
  Base,
};

/// Own-price range scanned for inf U_a.
enum class InfUScan {
  /// [0, H] plus the open cell just above H. Demand is constant in p_a beyond H,
  /// so this is the infimum over all p_a >= 0.
  ThroughCap,
  /// [0, H] only; inf U_a can be undefined.
  WithinCap,
};

/// How an undefined inf U_a(q_{-a}) constrains the box search for I.
enum class MissingInfU {
  /// Treated as +infinity: that q_{-a} contributes nothing.
  Exclude,
  /// Treated as satisfied for every q_a.
  Vacuous,
};

struct TippingOptions {
  Minimality minimality = Minimality::InclusionMinimal;
  SupOAnchor sup_o_anchor = SupOAnchor::Query;
  InfUScan inf_u_scan = InfUScan::ThroughCap;
  MissingInfU missing_inf_u = MissingInfU::Exclude;
  /// Predicate evaluations allowed per neutral-price search.
  std::uint64_t budget = 50'000'000;
};

struct TippingProfile {
  std::size_t good = 0;
  std::vector<Ticks> base;  // p_{-a}
  Ticks sup_o = 0;
  std::optional<Ticks> inf_u;
  Ticks s = 0;
  Ticks i = 0;
};

/// Exact grid search for the tipping prices sup O_a, inf U_a and the neutral
/// prices S_a, I_a of one market.
///
/// Results are memoized per (good, p_{-a}) and per price point, so one evaluator
/// should serve a whole run on one thread. Cached values are pure functions of
/// their keys.
class TippingEvaluator {
 public:
  explicit TippingEvaluator(const Market& market, TippingOptions options = {});

  const Market& market() const { return market_; }
  const TippingOptions& options() const { return options_; }

  /// Largest own price at which `good` is minimally overdemanded, or 0.
  /// Includes open grid cells: a cell where the property holds contributes its right end.
  Ticks sup_o(std::size_t good, std::span<const Ticks> others);
  /// Smallest own price at which `good` is minimally underdemanded; cells contribute their left end.
  std::optional<Ticks> inf_u(std::size_t good, std::span<const Ticks> others);
  /// inf_u with "none" mapped to H + 1 tick.
  Ticks inf_u_or_sentinel(std::size_t good, std::span<const Ticks> others);

  Ticks neutral_s(std::size_t good, std::span<const Ticks> others);
  Ticks neutral_i(std::size_t good, std::span<const Ticks> others);

  TippingProfile profile(std::size_t good, std::span<const Ticks> others);

  bool no_overdemand(const PriceVector& p);
  bool no_underdemand(const PriceVector& p);

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<Ticks>& key) const;
  };
  struct PointSets {
    GoodSet over;
    GoodSet under;
  };
  using Cache = std::unordered_map<std::vector<Ticks>, Ticks, KeyHash>;

  void check_others(std::size_t good, std::span<const Ticks> others) const;
  std::vector<Ticks> key(std::size_t good, std::span<const Ticks> others) const;
  /// Minimal-set membership at prices in half-ticks.
  const PointSets& point_sets(std::vector<Ticks> half_ticks);
  const PointSets& at_grid(std::size_t good, std::span<const Ticks> others, Ticks own);
  const PointSets& at_cell(std::size_t good, std::span<const Ticks> others, Ticks left);
  /// Calls visit(q_{-a}) over the box [others, H]^(m-1) in lexicographic order until it returns true.
  template <typename Visit>
  bool scan_box(std::span<const Ticks> others, Visit&& visit);

  Market market_;
  TippingOptions options_;
  std::unordered_map<std::vector<Ticks>, PointSets, KeyHash> points_;
  std::unordered_map<std::vector<Ticks>, bool, KeyHash> no_over_;
  std::unordered_map<std::vector<Ticks>, bool, KeyHash> no_under_;
  Cache sup_o_;
  std::unordered_map<std::vector<Ticks>, std::optional<Ticks>, KeyHash> inf_u_;
  Cache s_;
  Cache i_;
};

nlohmann::json tipping_json(const Market& market, const TippingProfile& profile);

}  // namespace walras
