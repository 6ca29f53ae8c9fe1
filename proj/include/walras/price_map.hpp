#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"

#include "walras/market.hpp"
#include "walras/tipping.hpp"

namespace walras {

/// Which case of the price-adjusting function applies to one coordinate.
enum class Region {
  AboveI,    // p_a > I >= S: pulled down to I ("red")
  Neutral,   // S <= p_a <= I: unchanged ("yellow")
  BelowS,    // p_a < S <= I: pushed up to S ("green")
  Inverted,  // I < S: midpoint of S and I for every p_a ("blue")
};

const char* to_string(Region r);
const char* colour(Region r);

/// Case selection from the neutral prices alone.
Region classify(Ticks own, Ticks s, Ticks i);
/// Coordinate update from the neutral prices alone; case IV floors (S + I) / 2 to the grid.
Ticks adjust(Ticks own, Ticks s, Ticks i);

struct CoordinateStep {
  std::size_t good = 0;
  Ticks input = 0;
  Ticks s = 0;
  Ticks i = 0;
  Region region = Region::Neutral;
  Ticks output = 0;
};

/// The price-adjusting function f on the tick grid of one market.
/// Every coordinate of f(p) reads its neutral prices at the same input p_{-a}.
class PriceMap {
 public:
  explicit PriceMap(const Market& market, TippingOptions options = {});

  const Market& market() const { return tipping_.market(); }
  const TippingOptions& options() const { return tipping_.options(); }
  TippingEvaluator& tipping() { return tipping_; }

  CoordinateStep step(std::size_t good, const PriceVector& p);
  Region classify_region(std::size_t good, const PriceVector& p) { return step(good, p).region; }
  Ticks apply_coord(std::size_t good, const PriceVector& p) { return step(good, p).output; }
  PriceVector apply(const PriceVector& p);

 private:
  TippingEvaluator tipping_;
};

Region classify_region(const Market& market, std::size_t good, const PriceVector& p);
Ticks apply_f_coord(const Market& market, std::size_t good, const PriceVector& p);
PriceVector apply_f(const Market& market, const PriceVector& p);

nlohmann::json map_json(const Market& market, const PriceVector& input, const std::vector<CoordinateStep>& steps);

}  // namespace walras
