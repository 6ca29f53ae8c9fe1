#pragma once

// Brute-force reference implementations. Everything here works straight from the
// definitions (pairwise utility comparison, subset enumeration, allocation search)
// and shares no code path with the matching-based analysis or the price map.

#include <cstddef>
#include <optional>
#include <vector>

#include "walras/demand_analysis.hpp"
#include "walras/market.hpp"

namespace walras::oracle {

/// x is demanded iff its surplus is at least every alternative's, compared pairwise.
DemandProfile demand(const Market& market, const PriceVector& p);

/// All non-empty overdemanded / underdemanded subsets, in mask order.
std::vector<GoodSet> overdemanded_sets(const Market& market, const PriceVector& p);
std::vector<GoodSet> underdemanded_sets(const Market& market, const PriceVector& p);

bool any_overdemanded(const Market& market, const PriceVector& p);
bool any_underdemanded(const Market& market, const PriceVector& p);

/// Goods lying in some over/underdemanded set that is minimal under `minimality`.
GoodSet minimally_over_goods(const Market& market, const PriceVector& p, Minimality minimality);
GoodSet minimally_under_goods(const Market& market, const PriceVector& p, Minimality minimality);

/// Exhaustive search over all (n)-tuples in (M ∪ {0}) for an allocation meeting WE-1 and WE-2.
std::optional<Allocation> find_we_allocation(const Market& market, const PriceVector& p);

/// Every grid point of [0,H]^m in lexicographic order.
std::vector<PriceVector> grid(const Market& market);

/// All grid price vectors with a Walrasian allocation, found by allocation search.
std::vector<PriceVector> walrasian_prices(const Market& market);

}  // namespace walras::oracle
