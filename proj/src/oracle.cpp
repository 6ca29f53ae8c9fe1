#include "walras/oracle.hpp"

#include <set>

#include "walras/errors.hpp"

namespace walras::oracle {

namespace {

constexpr int kDummy = -1;

// Demand as plain sets of option ids, dummy = -1.
std::vector<std::set<int>> option_sets(const Market& market, const PriceVector& p) {
  const auto m = static_cast<int>(market.goods());
  auto surplus = [&](std::size_t i, int option) -> Ticks {
    return option == kDummy ? 0 : market.value(i, static_cast<std::size_t>(option)) - p[static_cast<std::size_t>(option)];
  };
  std::vector<std::set<int>> out(market.buyers());
  for (std::size_t i = 0; i < market.buyers(); ++i) {
    for (int x = kDummy; x < m; ++x) {
      bool best = true;
      for (int y = kDummy; y < m && best; ++y) best = surplus(i, x) >= surplus(i, y);
      if (best) out[i].insert(x);
    }
  }
  return out;
}

std::set<int> members(std::uint64_t mask, std::size_t m) {
  std::set<int> s;
  for (std::size_t x = 0; x < m; ++x) {
    if ((mask >> x) & 1U) s.insert(static_cast<int>(x));
  }
  return s;
}

GoodSet minimal_union(const std::vector<GoodSet>& sets, Minimality minimality) {
  GoodSet out;
  for (const GoodSet& s : sets) {
    bool minimal = true;
    if (minimality == Minimality::InclusionMinimal) {
      for (const GoodSet& t : sets) {
        if (t != s && t.subset_of(s)) minimal = false;
      }
    }
    if (minimal) out = out | s;
  }
  return out;
}

void check_size(const Market& market) {
  if (market.goods() > kMaxEnumeratedGoods) throw BudgetExceeded("oracle subset scan needs m <= 16");
}

}  // namespace

DemandProfile demand(const Market& market, const PriceVector& p) {
  validate_prices(market, p);
  DemandProfile out(market.buyers());
  const auto sets = option_sets(market, p);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (int x : sets[i]) {
      if (x == kDummy) {
        out[i].dummy = true;
      } else {
        out[i].goods.insert(static_cast<std::size_t>(x));
      }
    }
  }
  return out;
}

std::vector<GoodSet> overdemanded_sets(const Market& market, const PriceVector& p) {
  check_size(market);
  validate_prices(market, p);
  const auto d = option_sets(market, p);
  std::vector<GoodSet> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << market.goods()); ++mask) {
    const auto s = members(mask, market.goods());
    std::size_t exclusive = 0;
    for (const auto& di : d) {
      bool inside = true;
      for (int x : di) inside = inside && s.count(x) > 0;
      if (inside) ++exclusive;
    }
    if (exclusive > s.size()) out.emplace_back(mask);
  }
  return out;
}

std::vector<GoodSet> underdemanded_sets(const Market& market, const PriceVector& p) {
  check_size(market);
  validate_prices(market, p);
  const auto d = option_sets(market, p);
  std::vector<GoodSet> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << market.goods()); ++mask) {
    const auto s = members(mask, market.goods());
    bool priced = true;
    for (int x : s) priced = priced && p[static_cast<std::size_t>(x)] > 0;
    if (!priced) continue;
    std::size_t touching = 0;
    for (const auto& di : d) {
      bool meets = false;
      for (int x : di) meets = meets || s.count(x) > 0;
      if (meets) ++touching;
    }
    if (touching < s.size()) out.emplace_back(mask);
  }
  return out;
}

bool any_overdemanded(const Market& market, const PriceVector& p) { return !overdemanded_sets(market, p).empty(); }

bool any_underdemanded(const Market& market, const PriceVector& p) {
  return !underdemanded_sets(market, p).empty();
}

GoodSet minimally_over_goods(const Market& market, const PriceVector& p, Minimality minimality) {
  return minimal_union(overdemanded_sets(market, p), minimality);
}

GoodSet minimally_under_goods(const Market& market, const PriceVector& p, Minimality minimality) {
  return minimal_union(underdemanded_sets(market, p), minimality);
}

std::optional<Allocation> find_we_allocation(const Market& market, const PriceVector& p) {
  validate_prices(market, p);
  const auto d = option_sets(market, p);
  const std::size_t n = market.buyers();
  std::vector<std::vector<int>> choices(n);
  for (std::size_t i = 0; i < n; ++i) choices[i].assign(d[i].begin(), d[i].end());

  // Odometer over WE-1-compatible assignments.
  std::vector<std::size_t> digit(n, 0);
  while (true) {
    std::vector<int> owner(market.goods(), -1);
    bool feasible = true;
    for (std::size_t i = 0; i < n && feasible; ++i) {
      const int x = choices[i][digit[i]];
      if (x == kDummy) continue;
      if (owner[static_cast<std::size_t>(x)] != -1) feasible = false;
      owner[static_cast<std::size_t>(x)] = static_cast<int>(i);
    }
    if (feasible) {
      bool cleared = true;
      for (std::size_t x = 0; x < market.goods(); ++x) {
        if (owner[x] == -1 && p[x] != 0) cleared = false;
      }
      if (cleared) {
        Allocation a;
        a.assignment.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          const int x = choices[i][digit[i]];
          if (x != kDummy) a.assignment[i] = static_cast<std::size_t>(x);
        }
        return a;
      }
    }
    std::size_t k = 0;
    while (k < n && ++digit[k] == choices[k].size()) digit[k++] = 0;
    if (k == n) return std::nullopt;
  }
}

std::vector<PriceVector> grid(const Market& market) {
  const std::size_t m = market.goods();
  std::vector<PriceVector> out;
  PriceVector p = PriceVector::uniform(m, 0);
  while (true) {
    out.push_back(p);
    std::size_t k = m;
    while (k > 0) {
      --k;
      if (p[k] < market.cap()) {
        ++p[k];
        break;
      }
      p[k] = 0;
      if (k == 0) return out;
    }
  }
}

std::vector<PriceVector> walrasian_prices(const Market& market) {
  std::vector<PriceVector> out;
  for (const auto& p : grid(market)) {
    if (find_we_allocation(market, p)) out.push_back(p);
  }
  return out;
}

}  // namespace walras::oracle
