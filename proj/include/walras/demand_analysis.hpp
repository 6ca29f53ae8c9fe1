#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

#include "walras/market.hpp"

namespace walras {

/// Demand correspondence plus the positively priced goods M+(p) at one price point.
/// Every set-level question in this module is a function of this pair only.
struct DemandState {
  DemandProfile demand;
  GoodSet positive;
  std::size_t goods = 0;
};

DemandState demand_state(const Market& market, const PriceVector& p);
/// Prices in units of tick/scale (see demand_scaled).
DemandState demand_state_scaled(const Market& market, std::span<const Ticks> prices, Ticks scale);

enum class Strictness { Strict, Weak };

/// U(S,p): buyers whose demand meets S.
std::vector<std::size_t> demanders(const DemandState& state, GoodSet goods);
/// O(S,p): buyers whose whole demand lies inside S.
std::vector<std::size_t> exclusive_demanders(const DemandState& state, GoodSet goods);

std::vector<std::size_t> demanders(const Market& market, const PriceVector& p, GoodSet goods);
std::vector<std::size_t> exclusive_demanders(const Market& market, const PriceVector& p, GoodSet goods);

/// |O(S,p)| > |S| (strict) or >= (weak). The empty set is never overdemanded.
bool is_overdemanded(const DemandState& state, GoodSet goods, Strictness strictness = Strictness::Strict);
/// S within M+(p) and |U(S,p)| < |S| (strict) or <= (weak). The empty set is never underdemanded.
bool is_underdemanded(const DemandState& state, GoodSet goods, Strictness strictness = Strictness::Strict);

enum class Verdict { None, Over, Under };

const char* to_string(Verdict v);

struct DemandCertificate {
  Verdict verdict = Verdict::None;
  GoodSet witness_goods;
  std::vector<std::size_t> witness_buyers;
  /// (buyer, good) pairs of the maximum matching used by the Hall test.
  std::vector<std::pair<std::size_t, std::size_t>> matching;
};

/// Hall test on buyers that do not demand the dummy good. On failure the witness is
/// S = N(A) for the alternating-reachable violator A, and witness_buyers = O(S,p).
DemandCertificate exists_overdemanded(const DemandState& state);
/// Dual Hall test on M+(p). On failure witness_buyers = U(S,p).
DemandCertificate exists_underdemanded(const DemandState& state);

/// Which sets count as "minimal" when asking whether a good is minimally
/// over/underdemanded.
enum class Minimality {
  /// S is over/underdemanded and has no over/underdemanded proper subset at all.
  InclusionMinimal,
  /// S is over/underdemanded and no proper subset that still contains the good is.
  ContainingGood,
};

/// Largest market size accepted by the subset enumerations.
inline constexpr std::size_t kMaxEnumeratedGoods = 16;

/// Every over- and underdemanded subset at one price point, indexed by bitmask.
/// Throws BudgetExceeded above kMaxEnumeratedGoods goods.
class SubsetTable {
 public:
  explicit SubsetTable(const DemandState& state);

  bool over(GoodSet s) const { return over_[s.bits()]; }
  bool under(GoodSet s) const { return under_[s.bits()]; }

  /// First witness in cardinality-then-mask order, or nullopt.
  std::optional<GoodSet> minimal_over(std::size_t good, Minimality minimality) const;
  std::optional<GoodSet> minimal_under(std::size_t good, Minimality minimality) const;

  /// All goods that are minimally over/underdemanded under the given reading.
  GoodSet minimally_over_goods(Minimality minimality) const;
  GoodSet minimally_under_goods(Minimality minimality) const;

 private:
  std::optional<GoodSet> minimal(const std::vector<bool>& flags, const std::vector<bool>& has_sub,
                                 std::size_t good, Minimality minimality) const;

  std::size_t goods_;
  std::vector<bool> over_;
  std::vector<bool> under_;
  std::vector<bool> over_below_;   // some proper subset is overdemanded
  std::vector<bool> under_below_;  // some proper subset is underdemanded
  std::vector<std::uint64_t> order_;
};

std::optional<GoodSet> minimally_overdemanded(const DemandState& state, std::size_t good,
                                              Minimality minimality = Minimality::InclusionMinimal);
std::optional<GoodSet> minimally_underdemanded(const DemandState& state, std::size_t good,
                                               Minimality minimality = Minimality::InclusionMinimal);

struct WeCheck {
  bool is_we = false;
  std::optional<Allocation> allocation;
};

/// Constructs an allocation meeting WE-1 and WE-2 when one exists: saturate the
/// buyers that reject the dummy good, then extend to cover M+(p) by alternating
/// paths that never unmatch a saturated vertex.
WeCheck check_we(const DemandState& state);
WeCheck check_we(const Market& market, const PriceVector& p);

/// No set is overdemanded and no set is underdemanded.
bool check_we_by_characterization(const DemandState& state);
bool check_we_by_characterization(const Market& market, const PriceVector& p);

/// Good set from ids; throws InputError on an unknown id.
GoodSet goods_from_ids(const Market& market, std::span<const std::string> ids);

nlohmann::json certificate_json(const Market& market, const DemandCertificate& cert);

}  // namespace walras
