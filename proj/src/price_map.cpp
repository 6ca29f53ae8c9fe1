#include "walras/price_map.hpp"

#include "walras/errors.hpp"

namespace walras {

const char* to_string(Region r) {
  switch (r) {
    case Region::AboveI:
      return "above_I";
    case Region::Neutral:
      return "neutral";
    case Region::BelowS:
      return "below_S";
    case Region::Inverted:
      return "inverted";
  }
  return "neutral";
}

const char* colour(Region r) {
  switch (r) {
    case Region::AboveI:
      return "red";
    case Region::Neutral:
      return "yellow";
    case Region::BelowS:
      return "green";
    case Region::Inverted:
      return "blue";
  }
  return "yellow";
}

Region classify(Ticks own, Ticks s, Ticks i) {
  if (i < s) return Region::Inverted;
  if (own > i) return Region::AboveI;
  if (own < s) return Region::BelowS;
  return Region::Neutral;
}

Ticks adjust(Ticks own, Ticks s, Ticks i) {
  switch (classify(own, s, i)) {
    case Region::AboveI:
      return i;
    case Region::Neutral:
      return own;
    case Region::BelowS:
      return s;
    case Region::Inverted:
      return (s + i) / 2;  // both non-negative, so this floors
  }
  return own;
}

PriceMap::PriceMap(const Market& market, TippingOptions options) : tipping_(market, options) {}

CoordinateStep PriceMap::step(std::size_t good, const PriceVector& p) {
  validate_prices(market(), p);
  if (good >= market().goods()) throw InputError("unknown good index");
  const auto others = p.without(good);
  CoordinateStep out;
  out.good = good;
  out.input = p[good];
  out.s = tipping_.neutral_s(good, others);
  out.i = tipping_.neutral_i(good, others);
  out.region = classify(out.input, out.s, out.i);
  out.output = adjust(out.input, out.s, out.i);
  return out;
}

PriceVector PriceMap::apply(const PriceVector& p) {
  PriceVector out = p;
  for (std::size_t a = 0; a < p.size(); ++a) out[a] = apply_coord(a, p);
  return out;
}

Region classify_region(const Market& market, std::size_t good, const PriceVector& p) {
  return PriceMap(market).classify_region(good, p);
}

Ticks apply_f_coord(const Market& market, std::size_t good, const PriceVector& p) {
  return PriceMap(market).apply_coord(good, p);
}

PriceVector apply_f(const Market& market, const PriceVector& p) { return PriceMap(market).apply(p); }

nlohmann::json map_json(const Market& market, const PriceVector& input, const std::vector<CoordinateStep>& steps) {
  nlohmann::json j;
  j["input"] = prices_json(market, input.ticks());
  nlohmann::json goods = nlohmann::json::array();
  std::vector<Ticks> output;
  for (const auto& s : steps) {
    goods.push_back({{"good", market.good_ids()[s.good]},
                     {"region", to_string(s.region)},
                     {"colour", colour(s.region)},
                     {"S", price_json(market, s.s)},
                     {"I", price_json(market, s.i)},
                     {"output", price_json(market, s.output)}});
    output.push_back(s.output);
  }
  j["goods"] = std::move(goods);
  j["output"] = prices_json(market, output);
  return j;
}

}  // namespace walras
