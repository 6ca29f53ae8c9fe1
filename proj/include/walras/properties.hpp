#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "walras/generator.hpp"
#include "walras/market.hpp"
#include "walras/price_map.hpp"

namespace walras {

/// A failing instance, serialized so it can be replayed from the CLI.
struct Counterexample {
  std::string property;
  nlohmann::json market;
  nlohmann::json prices;
  std::string detail;
};

struct PropertyTally {
  PropertyTally() = default;
  explicit PropertyTally(std::string property) : name(std::move(property)) {}

  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  std::optional<Counterexample> first;

  bool passed() const { return violations == 0; }
  void record(bool ok, const std::function<Counterexample()>& describe);
  void merge(const PropertyTally& other);
};

// Each check adds to `tally`; random checks draw from `rng`.

/// inf U_a(p_{-a}) >= sup O_a(p_{-a}) at `samples` random grid points, every good.
void check_fact(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally);
/// sup O_a is monotone in p_{-a} on `pairs` random ordered pairs.
void check_sup_o_monotone(PriceMap& map, std::mt19937_64& rng, std::size_t pairs, PropertyTally& tally);
/// S_a and I_a are monotone in p_{-a} on `pairs` random ordered pairs, every good.
void check_neutral_monotone(PriceMap& map, std::mt19937_64& rng, std::size_t pairs, PropertyTally& tally);
/// f_a is monotone in its own price for `samples` random (p_{-a}, l <= h).
void check_own_price_monotone(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally);
/// f(p) <= f(q) on `pairs` random ordered pairs.
void check_map_monotone_random(PriceMap& map, std::mt19937_64& rng, std::size_t pairs, PropertyTally& tally);
/// f(p) <= f(q) for every comparable pair of grid points; every unordered pair counts as a check.
void check_map_monotone_exhaustive(PriceMap& map, PropertyTally& tally);
/// f maps [0,H]^m into itself at `samples` random points.
void check_self_map(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally);
/// Along every own price for `samples` random p_{-a}: uniformly Inverted, or
/// BelowS -> Neutral -> AboveI without going back.
void check_region_order(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally);
/// f_a(p) = p_a for every grid p_a in [S, I], on `samples` random p_{-a}.
void check_neutral_fixed(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally);
/// check_we == check_we_by_characterization at every grid point.
void check_characterization(const Market& market, PropertyTally& tally);
/// Hall-based over/underdemand verdicts == subset enumeration at every grid point.
void check_hall_vs_enumeration(const Market& market, PropertyTally& tally);
/// check_we == exhaustive allocation search at every grid point.
void check_we_vs_allocation_search(const Market& market, PropertyTally& tally);
/// Fixed-point set == WE set.
void check_fixed_points_are_we(PriceMap& map, PropertyTally& tally);
/// Meet/join closure of the WE set with its extremes attained (`closure`), and Tarski
/// extremes == the componentwise min/max of the WE set (`extremes`).
void check_lattice(PriceMap& map, PropertyTally& closure, PropertyTally& extremes);
/// Bottom and top iterations converge within m * H / tick steps along monotone traces.
void check_iteration_bound(PriceMap& map, PropertyTally& tally);

struct SelfcheckConfig {
  std::size_t trials = 200;
  std::uint64_t seed = 7;
  MarketShape caps{3, 3, 6, Rational(1, 2)};
  /// Random grid points per market for the pointwise properties.
  std::size_t samples = 50;
  /// Random ordered pairs per market for the monotonicity properties.
  std::size_t pairs = 10;
  /// The lattice property runs on the first this-many markets.
  std::size_t lattice_markets = 50;
  /// Hall-vs-enumeration runs on markets with at most this many goods.
  std::size_t hall_max_goods = 4;
  TippingOptions options;
  /// Markets are checked in parallel; tallies are merged in suite order.
  unsigned jobs = 1;
};

/// Property names in the order run_selfcheck reports them.
const std::vector<std::string>& selfcheck_properties();

/// Runs every property on a seeded random suite.
std::vector<PropertyTally> run_selfcheck(const SelfcheckConfig& config);

nlohmann::json tally_json(const PropertyTally& tally);

}  // namespace walras
