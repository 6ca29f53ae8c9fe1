#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "walras/market.hpp"
#include "walras/oracle.hpp"

namespace walras {

inline void PrintTo(const PriceVector& p, std::ostream* os) {
  *os << '(';
  for (std::size_t x = 0; x < p.size(); ++x) *os << (x ? "," : "") << p[x];
  *os << ") ticks";
}

}  // namespace walras

namespace walras::testing {

inline Market e1(std::optional<Rational> h = std::nullopt, Rational tick = Rational(1, 2)) {
  return Market("e1", {"1", "2"}, {"a"}, {{Rational(5)}, {Rational(3)}}, h, tick);
}

inline Market e2(Rational tick = Rational(1, 2)) {
  return Market("e2", {"1", "2"}, {"a", "b"}, {{Rational(4), Rational(1)}, {Rational(3), Rational(2)}},
                std::nullopt, tick);
}

inline Market from_rows(const std::vector<std::vector<int>>& rows, std::optional<int> h = std::nullopt) {
  std::vector<std::string> buyers;
  std::vector<std::string> goods;
  for (std::size_t i = 0; i < rows.size(); ++i) buyers.push_back(std::to_string(i + 1));
  for (std::size_t x = 0; x < rows.front().size(); ++x) goods.push_back(std::string(1, static_cast<char>('a' + x)));
  std::vector<std::vector<Rational>> values;
  for (const auto& row : rows) {
    values.emplace_back();
    for (int v : row) values.back().emplace_back(v);
  }
  std::optional<Rational> cap;
  if (h) cap = Rational(*h);
  return Market("m", buyers, goods, values, cap, Rational(1, 2));
}

/// Prices given in whole tick counts of the market.
inline PriceVector ticks(std::vector<Ticks> t) { return PriceVector(std::move(t)); }

/// Prices given as decimals, e.g. {3.5, 0.5}.
inline PriceVector at(const Market& m, const std::vector<double>& prices) {
  std::vector<Ticks> t;
  for (double p : prices) t.push_back(Rational::from_double(p).exact_multiple_of(m.tick(), "price"));
  return PriceVector(std::move(t));
}

// Reference tipping prices computed on a grid four times finer than the market's,
// using only the brute-force oracle. Every breakpoint of the own-price demand lies
// on the market grid, so the max (min) fine point with the property, rounded up
// (down) to the market grid, is the exact sup (inf).
inline Market refined(const Market& m, Ticks extra_fine_ticks = 0) {
  const Rational tick = m.tick() / Rational(4);
  std::vector<std::vector<Rational>> rows(m.buyers());
  for (std::size_t i = 0; i < m.buyers(); ++i) {
    for (std::size_t x = 0; x < m.goods(); ++x) rows[i].push_back(m.to_price(m.value(i, x)));
  }
  const Rational cap = Rational(4 * m.cap() + extra_fine_ticks) * tick;
  return Market(m.name(), m.buyer_ids(), m.good_ids(), rows, cap, tick);
}

inline Ticks ref_sup_o(const Market& m, std::size_t a, const std::vector<Ticks>& others,
                       Minimality minimality = Minimality::InclusionMinimal) {
  const Market fine = refined(m);
  std::vector<Ticks> fine_others;
  for (Ticks t : others) fine_others.push_back(4 * t);
  Ticks best = 0;
  for (Ticks g = 0; g <= fine.cap(); ++g) {
    const PriceVector p = PriceVector::with(fine_others, a, g);
    if (oracle::minimally_over_goods(fine, p, minimality).contains(a)) best = g;
  }
  return (best + 3) / 4;
}

/// Scans own prices up to H plus one fine tick, which stands for the cell above H.
inline std::optional<Ticks> ref_inf_u(const Market& m, std::size_t a, const std::vector<Ticks>& others,
                                      Minimality minimality = Minimality::InclusionMinimal) {
  const Market fine = refined(m, 1);
  std::vector<Ticks> fine_others;
  for (Ticks t : others) fine_others.push_back(4 * t);
  for (Ticks g = 0; g <= fine.cap(); ++g) {
    const PriceVector p = PriceVector::with(fine_others, a, g);
    if (oracle::minimally_under_goods(fine, p, minimality).contains(a)) return g / 4;
  }
  return std::nullopt;
}

}  // namespace walras::testing
