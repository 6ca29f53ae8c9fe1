#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "walras/market.hpp"

namespace walras {

struct MarketShape {
  std::size_t buyers = 3;
  std::size_t goods = 2;
  std::int64_t max_value = 6;
  Rational tick{1, 2};
};

/// Uniform integer valuations in [0, max_value] for a fixed shape.
Market random_market(const MarketShape& shape, std::uint64_t seed);

/// Suite of `count` markets whose buyer and good counts are drawn uniformly from
/// [1, caps.buyers] and [1, caps.goods]. Instance k depends only on (seed, k).
std::vector<Market> random_suite(std::size_t count, std::uint64_t seed, const MarketShape& caps);

/// Uniform grid vector in [0, H]^m.
PriceVector random_prices(const Market& market, std::mt19937_64& rng);
/// q drawn uniformly from the box [p, H]^m, so p <= q.
PriceVector random_above(const Market& market, const PriceVector& p, std::mt19937_64& rng);

}  // namespace walras
