#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "walras/rational.hpp"

namespace walras {

/// A price or valuation expressed as a whole number of grid ticks.
using Ticks = std::int64_t;

/// Subset of the real goods M (the dummy good is never a member). Bit x is good x.
class GoodSet {
 public:
  static constexpr std::size_t kMaxGoods = 64;

  constexpr GoodSet() = default;
  constexpr explicit GoodSet(std::uint64_t bits) : bits_(bits) {}
  static GoodSet single(std::size_t x) { return GoodSet(std::uint64_t{1} << x); }
  static GoodSet all(std::size_t m) {
    return GoodSet(m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
  }

  std::uint64_t bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool contains(std::size_t x) const { return (bits_ >> x) & 1U; }
  bool subset_of(GoodSet other) const { return (bits_ & ~other.bits_) == 0; }
  bool intersects(GoodSet other) const { return (bits_ & other.bits_) != 0; }
  void insert(std::size_t x) { bits_ |= std::uint64_t{1} << x; }
  void erase(std::size_t x) { bits_ &= ~(std::uint64_t{1} << x); }

  std::vector<std::size_t> indices() const;

  friend GoodSet operator|(GoodSet a, GoodSet b) { return GoodSet(a.bits_ | b.bits_); }
  friend GoodSet operator&(GoodSet a, GoodSet b) { return GoodSet(a.bits_ & b.bits_); }
  friend bool operator==(GoodSet, GoodSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// One buyer's demand D_i(p): a set of real goods plus whether the dummy good 0 is optimal.
struct DemandSet {
  GoodSet goods;
  bool dummy = false;

  bool empty() const { return goods.empty() && !dummy; }
  friend bool operator==(const DemandSet&, const DemandSet&) = default;
};

using DemandProfile = std::vector<DemandSet>;

/// Per-buyer assignment; std::nullopt is the dummy good.
struct Allocation {
  std::vector<std::optional<std::size_t>> assignment;

  /// No real good is assigned twice.
  bool feasible() const;
};

/// Unit-demand assignment market with quasilinear integer valuations.
///
/// Valuations and the price cap are held in ticks, so every comparison in the
/// core is integer arithmetic.
class Market {
 public:
  /// `valuations[i][x]` is buyer i's value for good x in price units (not ticks).
  /// Throws InputError on any invariant violation.
  Market(std::string name, std::vector<std::string> buyers, std::vector<std::string> goods,
         const std::vector<std::vector<Rational>>& valuations, std::optional<Rational> h_override,
         Rational tick);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& buyer_ids() const { return buyers_; }
  const std::vector<std::string>& good_ids() const { return goods_; }
  std::size_t buyers() const { return buyers_.size(); }
  std::size_t goods() const { return goods_.size(); }
  const Rational& tick() const { return tick_; }

  /// v_i(x) in ticks.
  Ticks value(std::size_t buyer, std::size_t good) const { return values_[buyer * goods_.size() + good]; }
  /// H in ticks.
  Ticks cap() const { return cap_; }
  /// max_i max_x v_i(x) in ticks.
  Ticks max_value() const { return max_value_; }
  bool cap_overridden() const { return cap_overridden_; }

  std::size_t good_index(std::string_view id) const;

  /// Logical price of a tick count.
  Rational to_price(Ticks t) const { return Rational(t) * tick_; }
  /// Same market on a different tick; throws InputError if the tick does not divide H and v.
  Market with_tick(Rational tick) const;

 private:
  std::string name_;
  std::vector<std::string> buyers_;
  std::vector<std::string> goods_;
  std::vector<Ticks> values_;
  Ticks cap_ = 0;
  Ticks max_value_ = 0;
  bool cap_overridden_ = false;
  Rational tick_{1, 2};
};

/// Grid price vector for the real goods, in ticks. p_0 = 0 is implicit.
class PriceVector {
 public:
  PriceVector() = default;
  explicit PriceVector(std::vector<Ticks> ticks) : ticks_(std::move(ticks)) {}
  static PriceVector uniform(std::size_t m, Ticks value) { return PriceVector(std::vector<Ticks>(m, value)); }

  std::size_t size() const { return ticks_.size(); }
  Ticks operator[](std::size_t x) const { return ticks_[x]; }
  Ticks& operator[](std::size_t x) { return ticks_[x]; }
  std::span<const Ticks> ticks() const { return ticks_; }

  /// Copy with coordinate `good` removed (p_{-a}).
  std::vector<Ticks> without(std::size_t good) const;
  /// Rebuild a full vector from p_{-a} and an own price.
  static PriceVector with(std::span<const Ticks> others, std::size_t good, Ticks own);

  /// Componentwise partial order.
  bool leq(const PriceVector& other) const;

  friend bool operator==(const PriceVector&, const PriceVector&) = default;
  friend auto operator<=>(const PriceVector& a, const PriceVector& b) { return a.ticks_ <=> b.ticks_; }

 private:
  std::vector<Ticks> ticks_;
};

PriceVector meet(const PriceVector& p, const PriceVector& q);
PriceVector join(const PriceVector& p, const PriceVector& q);

/// H = max_i max_x v_i(x), in ticks.
Ticks price_cap(const Market& market);

/// Throws InputError unless p has one entry per good and 0 <= p_x <= H.
void validate_prices(const Market& market, const PriceVector& p);

/// D_i(p) for every buyer, ties included.
DemandProfile demand(const Market& market, const PriceVector& p);

/// Demand at prices expressed in units of tick/scale. With scale 2 this evaluates
/// the midpoint of a grid cell exactly.
DemandProfile demand_scaled(const Market& market, std::span<const Ticks> prices, Ticks scale);

// --- structured text I/O -------------------------------------------------

Market load_market(const nlohmann::json& document);
Market load_market_file(const std::filesystem::path& path);
nlohmann::json market_to_json(const Market& market);

/// Comma-separated decimals, each an exact tick multiple. Empty text is the empty vector.
std::vector<Ticks> parse_price_list(const Market& market, std::string_view csv);

/// JSON number for the logical value of a tick count (string "p/q" when not dyadic).
nlohmann::json price_json(const Market& market, Ticks t);
nlohmann::json prices_json(const Market& market, std::span<const Ticks> ticks);
std::string format_prices(const Market& market, std::span<const Ticks> ticks);

}  // namespace walras
