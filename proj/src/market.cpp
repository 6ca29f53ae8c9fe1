#include "walras/market.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "walras/errors.hpp"

namespace walras {

namespace {

std::string id_from_json(const nlohmann::json& j, std::string_view field) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw InputError(std::string(field) + ": ids must be strings or integers");
}

Rational rational_from_json(const nlohmann::json& j, std::string_view field) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return Rational::from_double(j.get<double>());
  throw InputError(std::string(field) + ": expected a number");
}

}  // namespace

std::vector<std::size_t> GoodSet::indices() const {
  std::vector<std::size_t> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  }
  return out;
}

bool Allocation::feasible() const {
  std::vector<std::size_t> used;
  for (const auto& a : assignment) {
    if (a) used.push_back(*a);
  }
  std::sort(used.begin(), used.end());
  return std::adjacent_find(used.begin(), used.end()) == used.end();
}

Market::Market(std::string name, std::vector<std::string> buyers, std::vector<std::string> goods,
               const std::vector<std::vector<Rational>>& valuations, std::optional<Rational> h_override,
               Rational tick)
    : name_(std::move(name)), buyers_(std::move(buyers)), goods_(std::move(goods)), tick_(tick) {
  if (buyers_.empty()) throw InputError("market needs at least one buyer");
  if (goods_.empty()) throw InputError("market needs at least one good");
  if (goods_.size() > GoodSet::kMaxGoods) throw InputError("at most 64 goods are supported");
  if (!tick_.positive()) throw InputError("tick must be positive");
  if (valuations.size() != buyers_.size()) {
    throw InputError("valuations must have one row per buyer");
  }
  values_.reserve(buyers_.size() * goods_.size());
  Rational max_value(0);
  for (const auto& row : valuations) {
    if (row.size() != goods_.size()) throw InputError("valuations must have one column per good");
    for (const Rational& v : row) {
      if (v < Rational(0)) throw InputError("negative valuation");
      if (!v.is_integer()) throw InputError("non-integer valuation " + v.to_string());
      values_.push_back(v.exact_multiple_of(tick_, "valuation"));
      if (max_value < v) max_value = v;
    }
  }
  max_value_ = max_value.exact_multiple_of(tick_, "valuation");
  if (h_override) {
    if (*h_override < max_value) {
      throw InputError("H " + h_override->to_string() + " is below the maximum valuation " +
                       max_value.to_string());
    }
    cap_ = h_override->exact_multiple_of(tick_, "H");
    cap_overridden_ = cap_ != max_value_;
  } else {
    cap_ = max_value_;
  }
  auto dup = [](std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    return std::adjacent_find(ids.begin(), ids.end()) != ids.end();
  };
  if (dup(buyers_)) throw InputError("duplicate buyer id");
  if (dup(goods_)) throw InputError("duplicate good id");
}

std::size_t Market::good_index(std::string_view id) const {
  auto it = std::find(goods_.begin(), goods_.end(), id);
  if (it == goods_.end()) throw InputError("unknown good '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - goods_.begin());
}

Market Market::with_tick(Rational tick) const {
  std::vector<std::vector<Rational>> rows(buyers());
  for (std::size_t i = 0; i < buyers(); ++i) {
    for (std::size_t x = 0; x < goods(); ++x) rows[i].push_back(to_price(value(i, x)));
  }
  std::optional<Rational> h;
  if (cap_overridden_) h = to_price(cap_);
  return Market(name_, buyers_, goods_, rows, h, tick);
}

std::vector<Ticks> PriceVector::without(std::size_t good) const {
  std::vector<Ticks> out;
  out.reserve(ticks_.size() - 1);
  for (std::size_t x = 0; x < ticks_.size(); ++x) {
    if (x != good) out.push_back(ticks_[x]);
  }
  return out;
}

PriceVector PriceVector::with(std::span<const Ticks> others, std::size_t good, Ticks own) {
  std::vector<Ticks> out;
  out.reserve(others.size() + 1);
  out.insert(out.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(good));
  out.push_back(own);
  out.insert(out.end(), others.begin() + static_cast<std::ptrdiff_t>(good), others.end());
  return PriceVector(std::move(out));
}

bool PriceVector::leq(const PriceVector& other) const {
  if (size() != other.size()) throw InputError("price vector dimension mismatch");
  for (std::size_t x = 0; x < size(); ++x) {
    if (ticks_[x] > other.ticks_[x]) return false;
  }
  return true;
}

PriceVector meet(const PriceVector& p, const PriceVector& q) {
  if (p.size() != q.size()) throw InputError("price vector dimension mismatch");
  PriceVector out = p;
  for (std::size_t x = 0; x < p.size(); ++x) out[x] = std::min(p[x], q[x]);
  return out;
}

PriceVector join(const PriceVector& p, const PriceVector& q) {
  if (p.size() != q.size()) throw InputError("price vector dimension mismatch");
  PriceVector out = p;
  for (std::size_t x = 0; x < p.size(); ++x) out[x] = std::max(p[x], q[x]);
  return out;
}

Ticks price_cap(const Market& market) { return market.max_value(); }

void validate_prices(const Market& market, const PriceVector& p) {
  if (p.size() != market.goods()) {
    throw InputError("expected " + std::to_string(market.goods()) + " prices, got " +
                     std::to_string(p.size()));
  }
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] < 0 || p[x] > market.cap()) {
      throw InputError("price of good '" + market.good_ids()[x] + "' is outside [0, H]");
    }
  }
}

DemandProfile demand(const Market& market, const PriceVector& p) {
  validate_prices(market, p);
  return demand_scaled(market, p.ticks(), 1);
}

DemandProfile demand_scaled(const Market& market, std::span<const Ticks> prices, Ticks scale) {
  DemandProfile out(market.buyers());
  for (std::size_t i = 0; i < market.buyers(); ++i) {
    Ticks best = 0;  // surplus of the dummy good
    for (std::size_t x = 0; x < market.goods(); ++x) {
      best = std::max(best, market.value(i, x) * scale - prices[x]);
    }
    DemandSet& d = out[i];
    d.dummy = best == 0;
    for (std::size_t x = 0; x < market.goods(); ++x) {
      if (market.value(i, x) * scale - prices[x] == best) d.goods.insert(x);
    }
  }
  return out;
}

Market load_market(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("market document must be an object");
  for (const char* field : {"buyers", "goods", "valuations"}) {
    if (!doc.contains(field) || !doc.at(field).is_array()) {
      throw InputError(std::string("market document needs array field '") + field + "'");
    }
  }
  std::string name;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) throw InputError("name must be a string");
    name = doc.at("name").get<std::string>();
  }
  std::vector<std::string> buyers;
  for (const auto& b : doc.at("buyers")) buyers.push_back(id_from_json(b, "buyers"));
  std::vector<std::string> goods;
  for (const auto& g : doc.at("goods")) goods.push_back(id_from_json(g, "goods"));

  std::vector<std::vector<Rational>> rows;
  for (const auto& row : doc.at("valuations")) {
    if (!row.is_array()) throw InputError("valuations must be an array of arrays");
    auto& out = rows.emplace_back();
    for (const auto& v : row) {
      if (!v.is_number()) throw InputError("valuations must be numbers");
      const Rational r = rational_from_json(v, "valuations");
      if (r < Rational(0)) throw InputError("negative valuation");
      out.push_back(r);
    }
  }
  std::optional<Rational> h;
  if (doc.contains("h_override") && !doc.at("h_override").is_null()) {
    h = rational_from_json(doc.at("h_override"), "h_override");
  }
  Rational tick(1, 2);
  if (doc.contains("tick") && !doc.at("tick").is_null()) {
    tick = rational_from_json(doc.at("tick"), "tick");
  }
  return Market(std::move(name), std::move(buyers), std::move(goods), rows, h, tick);
}

Market load_market_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open market file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("market file " + path.string() + " is not valid JSON: " + e.what());
  }
  return load_market(doc);
}

nlohmann::json market_to_json(const Market& market) {
  nlohmann::json doc;
  if (!market.name().empty()) doc["name"] = market.name();
  doc["buyers"] = market.buyer_ids();
  doc["goods"] = market.good_ids();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < market.buyers(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t x = 0; x < market.goods(); ++x) row.push_back(price_json(market, market.value(i, x)));
    rows.push_back(std::move(row));
  }
  doc["valuations"] = std::move(rows);
  if (market.cap_overridden()) doc["h_override"] = price_json(market, market.cap());
  doc["tick"] = market.tick().to_string();
  return doc;
}

std::vector<Ticks> parse_price_list(const Market& market, std::string_view csv) {
  std::vector<Ticks> out;
  if (csv.find_first_not_of(' ') == std::string_view::npos) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = csv.find(',', start);
    const std::string_view item = csv.substr(start, comma == std::string_view::npos ? csv.npos : comma - start);
    const Rational value = Rational::parse(item);
    if (value < Rational(0)) throw InputError("negative price " + value.to_string());
    out.push_back(value.exact_multiple_of(market.tick(), "price"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

nlohmann::json price_json(const Market& market, Ticks t) {
  const Rational v = market.to_price(t);
  if (v.is_integer()) return v.num();
  if (v.is_dyadic()) return v.to_double();
  return v.to_string();
}

nlohmann::json prices_json(const Market& market, std::span<const Ticks> ticks) {
  nlohmann::json out = nlohmann::json::array();
  for (Ticks t : ticks) out.push_back(price_json(market, t));
  return out;
}

std::string format_prices(const Market& market, std::span<const Ticks> ticks) {
  std::ostringstream os;
  os << '(';
  for (std::size_t x = 0; x < ticks.size(); ++x) {
    if (x) os << ',';
    os << market.to_price(ticks[x]).to_string();
  }
  os << ')';
  return os.str();
}

}  // namespace walras
