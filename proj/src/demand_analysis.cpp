#include "walras/demand_analysis.hpp"

#include <algorithm>
#include <deque>

#include "bipartite.hpp"
#include "walras/errors.hpp"

namespace walras {

using detail::BipartiteMatcher;
using detail::kUnmatched;

namespace {

void require_known(const DemandState& state, GoodSet goods) {
  if (!goods.subset_of(GoodSet::all(state.goods))) throw InputError("unknown good in set");
}

GoodSet positive_goods(std::span<const Ticks> prices) {
  GoodSet out;
  for (std::size_t x = 0; x < prices.size(); ++x) {
    if (prices[x] > 0) out.insert(x);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> buyer_good_pairs(const BipartiteMatcher& m,
                                                                  std::size_t buyers, bool buyers_left) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (buyers_left) {
    for (std::size_t i = 0; i < buyers; ++i) {
      if (m.mate_of_left(i) != kUnmatched) out.emplace_back(i, m.mate_of_left(i));
    }
  } else {
    for (std::size_t i = 0; i < buyers; ++i) {
      if (m.mate_of_right(i) != kUnmatched) out.emplace_back(i, m.mate_of_right(i));
    }
  }
  return out;
}

}  // namespace

DemandState demand_state(const Market& market, const PriceVector& p) {
  DemandState s;
  s.demand = demand(market, p);
  s.positive = positive_goods(p.ticks());
  s.goods = market.goods();
  return s;
}

DemandState demand_state_scaled(const Market& market, std::span<const Ticks> prices, Ticks scale) {
  DemandState s;
  s.demand = demand_scaled(market, prices, scale);
  s.positive = positive_goods(prices);
  s.goods = market.goods();
  return s;
}

std::vector<std::size_t> demanders(const DemandState& state, GoodSet goods) {
  require_known(state, goods);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < state.demand.size(); ++i) {
    if (state.demand[i].goods.intersects(goods)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> exclusive_demanders(const DemandState& state, GoodSet goods) {
  require_known(state, goods);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < state.demand.size(); ++i) {
    const DemandSet& d = state.demand[i];
    if (!d.dummy && d.goods.subset_of(goods)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> demanders(const Market& market, const PriceVector& p, GoodSet goods) {
  return demanders(demand_state(market, p), goods);
}

std::vector<std::size_t> exclusive_demanders(const Market& market, const PriceVector& p, GoodSet goods) {
  return exclusive_demanders(demand_state(market, p), goods);
}

bool is_overdemanded(const DemandState& state, GoodSet goods, Strictness strictness) {
  if (goods.empty()) return false;
  const std::size_t o = exclusive_demanders(state, goods).size();
  return strictness == Strictness::Strict ? o > goods.size() : o >= goods.size();
}

bool is_underdemanded(const DemandState& state, GoodSet goods, Strictness strictness) {
  if (goods.empty() || !goods.subset_of(state.positive)) return false;
  const std::size_t u = demanders(state, goods).size();
  return strictness == Strictness::Strict ? u < goods.size() : u <= goods.size();
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::None:
      return "none";
    case Verdict::Over:
      return "over";
    case Verdict::Under:
      return "under";
  }
  return "none";
}

DemandCertificate exists_overdemanded(const DemandState& state) {
  const std::size_t n = state.demand.size();
  BipartiteMatcher matcher(n, state.goods);
  std::vector<std::size_t> rejecting;  // buyers with 0 not in D_i
  for (std::size_t i = 0; i < n; ++i) {
    if (state.demand[i].dummy) continue;
    rejecting.push_back(i);
    for (std::size_t x : state.demand[i].goods.indices()) matcher.add_edge(i, x);
  }
  std::vector<std::size_t> unsaturated;
  for (std::size_t i : rejecting) {
    if (!matcher.augment(i)) unsaturated.push_back(i);
  }
  DemandCertificate cert;
  cert.matching = buyer_good_pairs(matcher, n, true);
  if (unsaturated.empty()) return cert;

  std::vector<bool> left;
  std::vector<bool> right;
  matcher.alternating_reach(unsaturated, left, right);
  for (std::size_t x = 0; x < state.goods; ++x) {
    if (right[x]) cert.witness_goods.insert(x);
  }
  cert.verdict = Verdict::Over;
  cert.witness_buyers = exclusive_demanders(state, cert.witness_goods);
  return cert;
}

DemandCertificate exists_underdemanded(const DemandState& state) {
  const std::size_t n = state.demand.size();
  BipartiteMatcher matcher(state.goods, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x : state.demand[i].goods.indices()) {
      if (state.positive.contains(x)) matcher.add_edge(x, i);
    }
  }
  std::vector<std::size_t> unsaturated;
  for (std::size_t x : state.positive.indices()) {
    if (!matcher.augment(x)) unsaturated.push_back(x);
  }
  DemandCertificate cert;
  cert.matching = buyer_good_pairs(matcher, n, false);
  if (unsaturated.empty()) return cert;

  std::vector<bool> left;
  std::vector<bool> right;
  matcher.alternating_reach(unsaturated, left, right);
  for (std::size_t x = 0; x < state.goods; ++x) {
    if (left[x]) cert.witness_goods.insert(x);
  }
  cert.verdict = Verdict::Under;
  cert.witness_buyers = demanders(state, cert.witness_goods);
  return cert;
}

SubsetTable::SubsetTable(const DemandState& state) : goods_(state.goods) {
  if (goods_ > kMaxEnumeratedGoods) {
    throw BudgetExceeded("subset enumeration is limited to " + std::to_string(kMaxEnumeratedGoods) +
                         " goods");
  }
  const std::uint64_t count = std::uint64_t{1} << goods_;
  over_.assign(count, false);
  under_.assign(count, false);
  over_below_.assign(count, false);
  under_below_.assign(count, false);
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    const GoodSet s(mask);
    std::size_t o = 0;
    std::size_t u = 0;
    for (const DemandSet& d : state.demand) {
      if (!d.dummy && d.goods.subset_of(s)) ++o;
      if (d.goods.intersects(s)) ++u;
    }
    over_[mask] = o > s.size();
    under_[mask] = s.subset_of(state.positive) && u < s.size();
    for (std::uint64_t b = mask; b != 0; b &= b - 1) {
      const std::uint64_t sub = mask & ~(b & -b);
      over_below_[mask] = over_below_[mask] || over_[sub] || over_below_[sub];
      under_below_[mask] = under_below_[mask] || under_[sub] || under_below_[sub];
    }
  }
  order_.resize(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) order_[mask] = mask;
  std::stable_sort(order_.begin(), order_.end(), [](std::uint64_t a, std::uint64_t b) {
    return std::popcount(a) < std::popcount(b);
  });
}

std::optional<GoodSet> SubsetTable::minimal(const std::vector<bool>& flags, const std::vector<bool>& has_sub,
                                            std::size_t good, Minimality minimality) const {
  // Scanning by increasing cardinality, the first flagged set containing the good
  // has no flagged proper subset containing it.
  for (std::uint64_t mask : order_) {
    if (!flags[mask] || !GoodSet(mask).contains(good)) continue;
    if (minimality == Minimality::InclusionMinimal && has_sub[mask]) continue;
    return GoodSet(mask);
  }
  return std::nullopt;
}

std::optional<GoodSet> SubsetTable::minimal_over(std::size_t good, Minimality minimality) const {
  return minimal(over_, over_below_, good, minimality);
}

std::optional<GoodSet> SubsetTable::minimal_under(std::size_t good, Minimality minimality) const {
  return minimal(under_, under_below_, good, minimality);
}

GoodSet SubsetTable::minimally_over_goods(Minimality minimality) const {
  GoodSet out;
  for (std::uint64_t mask = 1; mask < over_.size(); ++mask) {
    if (over_[mask] && (minimality == Minimality::ContainingGood || !over_below_[mask])) {
      out = out | GoodSet(mask);
    }
  }
  return out;
}

GoodSet SubsetTable::minimally_under_goods(Minimality minimality) const {
  GoodSet out;
  for (std::uint64_t mask = 1; mask < under_.size(); ++mask) {
    if (under_[mask] && (minimality == Minimality::ContainingGood || !under_below_[mask])) {
      out = out | GoodSet(mask);
    }
  }
  return out;
}

std::optional<GoodSet> minimally_overdemanded(const DemandState& state, std::size_t good,
                                              Minimality minimality) {
  if (good >= state.goods) throw InputError("unknown good index");
  return SubsetTable(state).minimal_over(good, minimality);
}

std::optional<GoodSet> minimally_underdemanded(const DemandState& state, std::size_t good,
                                               Minimality minimality) {
  if (good >= state.goods) throw InputError("unknown good index");
  return SubsetTable(state).minimal_under(good, minimality);
}

WeCheck check_we(const DemandState& state) {
  const std::size_t n = state.demand.size();
  const std::size_t m = state.goods;
  BipartiteMatcher matcher(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x : state.demand[i].goods.indices()) matcher.add_edge(i, x);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!state.demand[i].dummy && !matcher.augment(i)) return {};
  }

  // Cover each unmatched positive good by an alternating path that ends either at a
  // free buyer (augment) or at a matched good with zero price (release it).
  std::vector<std::vector<std::size_t>> demanded_by(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x : state.demand[i].goods.indices()) demanded_by[x].push_back(i);
  }
  for (std::size_t y : state.positive.indices()) {
    if (matcher.mate_of_right(y) != kUnmatched) continue;
    std::vector<std::size_t> good_parent(m, kUnmatched);  // buyer that led to this good
    std::vector<std::size_t> buyer_parent(n, kUnmatched);  // good that led to this buyer
    std::vector<bool> good_seen(m, false);
    std::deque<std::size_t> queue{y};
    good_seen[y] = true;
    std::size_t end_buyer = kUnmatched;
    std::size_t released_good = kUnmatched;
    while (!queue.empty() && end_buyer == kUnmatched) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t i : demanded_by[x]) {
        if (buyer_parent[i] != kUnmatched || matcher.mate_of_left(i) == x) continue;
        buyer_parent[i] = x;
        const std::size_t next = matcher.mate_of_left(i);
        if (next == kUnmatched || !state.positive.contains(next)) {
          end_buyer = i;
          released_good = next;
          break;
        }
        if (!good_seen[next]) {
          good_seen[next] = true;
          good_parent[next] = i;
          queue.push_back(next);
        }
      }
    }
    if (end_buyer == kUnmatched) return {};
    if (released_good != kUnmatched) matcher.unmatch_right(released_good);
    for (std::size_t i = end_buyer; i != kUnmatched;) {
      const std::size_t x = buyer_parent[i];
      const std::size_t previous = good_parent[x];
      matcher.set_pair(i, x);
      i = previous;
    }
  }

  Allocation alloc;
  alloc.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matcher.mate_of_left(i) != kUnmatched) alloc.assignment[i] = matcher.mate_of_left(i);
  }
  return {true, std::move(alloc)};
}

WeCheck check_we(const Market& market, const PriceVector& p) { return check_we(demand_state(market, p)); }

bool check_we_by_characterization(const DemandState& state) {
  return exists_overdemanded(state).verdict == Verdict::None &&
         exists_underdemanded(state).verdict == Verdict::None;
}

bool check_we_by_characterization(const Market& market, const PriceVector& p) {
  return check_we_by_characterization(demand_state(market, p));
}

GoodSet goods_from_ids(const Market& market, std::span<const std::string> ids) {
  GoodSet out;
  for (const auto& id : ids) out.insert(market.good_index(id));
  return out;
}

nlohmann::json certificate_json(const Market& market, const DemandCertificate& cert) {
  nlohmann::json j;
  j["verdict"] = to_string(cert.verdict);
  nlohmann::json goods = nlohmann::json::array();
  for (std::size_t x : cert.witness_goods.indices()) goods.push_back(market.good_ids()[x]);
  j["witness_goods"] = std::move(goods);
  nlohmann::json buyers = nlohmann::json::array();
  for (std::size_t i : cert.witness_buyers) buyers.push_back(market.buyer_ids()[i]);
  j["witness_buyers"] = std::move(buyers);
  nlohmann::json matching = nlohmann::json::array();
  for (auto [i, x] : cert.matching) {
    matching.push_back({{"buyer", market.buyer_ids()[i]}, {"good", market.good_ids()[x]}});
  }
  j["matching"] = std::move(matching);
  return j;
}

}  // namespace walras
