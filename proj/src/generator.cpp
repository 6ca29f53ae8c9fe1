#include "walras/generator.hpp"

#include <string>

namespace walras {

namespace {

// a, b, ..., z, a1, b1, ...
std::string good_id(std::size_t x) {
  std::string id(1, static_cast<char>('a' + x % 26));
  if (x >= 26) id += std::to_string(x / 26);
  return id;
}

Market build(std::size_t n, std::size_t m, std::int64_t max_value, Rational tick, std::mt19937_64& rng,
             std::string name) {
  std::uniform_int_distribution<std::int64_t> value(0, max_value);
  std::vector<std::string> buyers;
  std::vector<std::string> goods;
  for (std::size_t i = 0; i < n; ++i) buyers.push_back(std::to_string(i + 1));
  for (std::size_t x = 0; x < m; ++x) goods.push_back(good_id(x));
  std::vector<std::vector<Rational>> rows(n);
  for (auto& row : rows) {
    for (std::size_t x = 0; x < m; ++x) row.emplace_back(value(rng));
  }
  return Market(std::move(name), std::move(buyers), std::move(goods), rows, std::nullopt, tick);
}

}  // namespace

Market random_market(const MarketShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return build(shape.buyers, shape.goods, shape.max_value, shape.tick, rng,
               "random-" + std::to_string(seed));
}

std::vector<Market> random_suite(std::size_t count, std::uint64_t seed, const MarketShape& caps) {
  std::vector<Market> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(k)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> buyers(1, caps.buyers);
    std::uniform_int_distribution<std::size_t> goods(1, caps.goods);
    const std::size_t n = buyers(rng);
    const std::size_t m = goods(rng);
    out.push_back(build(n, m, caps.max_value, caps.tick, rng,
                        "suite-" + std::to_string(seed) + "-" + std::to_string(k)));
  }
  return out;
}

PriceVector random_prices(const Market& market, std::mt19937_64& rng) {
  std::uniform_int_distribution<Ticks> price(0, market.cap());
  PriceVector p = PriceVector::uniform(market.goods(), 0);
  for (std::size_t x = 0; x < market.goods(); ++x) p[x] = price(rng);
  return p;
}

PriceVector random_above(const Market& market, const PriceVector& p, std::mt19937_64& rng) {
  PriceVector q = p;
  for (std::size_t x = 0; x < market.goods(); ++x) {
    q[x] = std::uniform_int_distribution<Ticks>(p[x], market.cap())(rng);
  }
  return q;
}

}  // namespace walras
