#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

#include "walras/market.hpp"
#include "walras/price_map.hpp"

namespace walras {

enum class Direction { None, Ascending, Descending, Mixed };

const char* to_string(Direction d);

struct IterationTrace {
  /// iterates.front() is the start; iterates.back() is the last vector computed.
  std::vector<PriceVector> iterates;
  std::size_t steps = 0;
  Direction direction = Direction::None;
  bool converged = false;

  const PriceVector& start() const { return iterates.front(); }
  const PriceVector& last() const { return iterates.back(); }
};

/// Applies f until p = f(p) or `max_steps` applications have not reached one.
/// Never throws on non-convergence; check `converged`.
IterationTrace iterate_from(PriceMap& map, const PriceVector& start, std::size_t max_steps);

/// Tarski extremes: iteration from the bottom (0,...,0) and the top (H,...,H).
/// Throw ConvergenceError when max_steps runs out.
PriceVector least_fixed_point(PriceMap& map, std::size_t max_steps = 100'000);
PriceVector greatest_fixed_point(PriceMap& map, std::size_t max_steps = 100'000);

struct EnumerationLimits {
  /// Largest grid ((H / tick) + 1)^m that may be enumerated.
  std::uint64_t max_points = 1'000'000;
  /// Worker threads; results do not depend on this.
  unsigned jobs = 1;
};

/// ((H / tick) + 1)^m, saturating.
std::uint64_t grid_size(const Market& market);
/// Every grid vector in lexicographic order. Throws BudgetExceeded past the limit.
std::vector<PriceVector> grid_points(const Market& market, const EnumerationLimits& limits = {});

/// All grid p with f(p) = p, sorted.
std::vector<PriceVector> enumerate_fixed_points(PriceMap& map, const EnumerationLimits& limits = {});
/// All grid p passing check_we, sorted. Never touches the price map.
std::vector<PriceVector> enumerate_we(const Market& market, const EnumerationLimits& limits = {});

struct Prop2Report {
  std::vector<PriceVector> fixed_points;
  std::vector<PriceVector> we_points;
  /// Fixed points that are not WE prices, and WE prices that are not fixed.
  std::vector<PriceVector> fixed_not_we;
  std::vector<PriceVector> we_not_fixed;
  /// How many entries of the two differences have every coordinate at a whole price.
  std::size_t integer_discrepancies = 0;
  std::size_t off_integer_discrepancies = 0;

  bool equivalent() const { return fixed_not_we.empty() && we_not_fixed.empty(); }
};

Prop2Report fixed_point_we_equivalence(PriceMap& map, const EnumerationLimits& limits = {});

struct LatticeCertificate {
  std::size_t pairs_checked = 0;
  std::vector<std::pair<PriceVector, PriceVector>> meet_failures;
  std::vector<std::pair<PriceVector, PriceVector>> join_failures;
  std::optional<PriceVector> min_we;  // componentwise min of the sample
  std::optional<PriceVector> max_we;
  bool min_attained = false;
  bool max_attained = false;
  PriceVector least_fixed_point;
  PriceVector greatest_fixed_point;
  bool extremes_match = false;

  bool closed() const { return meet_failures.empty() && join_failures.empty(); }
  bool certified() const { return closed() && min_attained && max_attained && extremes_match; }
};

/// Meet/join closure of a WE sample under check_we, attainment of its componentwise
/// extremes, and agreement of those extremes with the Tarski iteration from bottom and top.
LatticeCertificate lattice_check(PriceMap& map, std::span<const PriceVector> sample,
                                 std::size_t max_steps = 100'000);

struct EquilibriumReport {
  Rational tick;
  std::vector<PriceVector> fixed_points;
  std::vector<PriceVector> we_points;
  std::optional<PriceVector> min_we;
  std::optional<PriceVector> max_we;
  bool lattice_certified = false;
  /// Symmetric difference of the two sets, then any meet/join closure failures.
  std::vector<PriceVector> counterexamples;
  LatticeCertificate lattice;
};

EquilibriumReport equilibrium_report(PriceMap& map, const EnumerationLimits& limits = {});

nlohmann::json trace_json(const Market& market, const IterationTrace& trace);
/// One row per step per good: step,good,price.
std::string trace_table(const Market& market, const IterationTrace& trace);
nlohmann::json lattice_json(const Market& market, const LatticeCertificate& cert);
nlohmann::json report_json(const Market& market, const EquilibriumReport& report);
nlohmann::json points_json(const Market& market, std::span<const PriceVector> points);

}  // namespace walras
