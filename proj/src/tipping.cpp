#include "walras/tipping.hpp"

#include <stdexcept>

#include "walras/errors.hpp"

namespace walras {

std::size_t TippingEvaluator::KeyHash::operator()(const std::vector<Ticks>& key) const {
  std::size_t h = key.size();
  for (Ticks t : key) h ^= std::hash<Ticks>{}(t) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

TippingEvaluator::TippingEvaluator(const Market& market, TippingOptions options)
    : market_(market), options_(options) {}

void TippingEvaluator::check_others(std::size_t good, std::span<const Ticks> others) const {
  if (good >= market_.goods()) throw InputError("unknown good index");
  if (others.size() + 1 != market_.goods()) {
    throw InputError("expected " + std::to_string(market_.goods() - 1) + " prices for the other goods");
  }
  for (Ticks t : others) {
    if (t < 0 || t > market_.cap()) throw InputError("price outside [0, H]");
  }
}

std::vector<Ticks> TippingEvaluator::key(std::size_t good, std::span<const Ticks> others) const {
  std::vector<Ticks> k;
  k.reserve(others.size() + 1);
  k.push_back(static_cast<Ticks>(good));
  k.insert(k.end(), others.begin(), others.end());
  return k;
}

const TippingEvaluator::PointSets& TippingEvaluator::point_sets(std::vector<Ticks> half_ticks) {
  auto it = points_.find(half_ticks);
  if (it != points_.end()) return it->second;
  const SubsetTable table(demand_state_scaled(market_, half_ticks, 2));
  PointSets sets{table.minimally_over_goods(options_.minimality),
                 table.minimally_under_goods(options_.minimality)};
  return points_.emplace(std::move(half_ticks), sets).first->second;
}

const TippingEvaluator::PointSets& TippingEvaluator::at_grid(std::size_t good, std::span<const Ticks> others,
                                                             Ticks own) {
  std::vector<Ticks> half;
  half.reserve(others.size() + 1);
  const PriceVector p = PriceVector::with(others, good, own);
  for (Ticks t : p.ticks()) half.push_back(2 * t);
  return point_sets(std::move(half));
}

const TippingEvaluator::PointSets& TippingEvaluator::at_cell(std::size_t good, std::span<const Ticks> others,
                                                             Ticks left) {
  std::vector<Ticks> half;
  half.reserve(others.size() + 1);
  const PriceVector p = PriceVector::with(others, good, left);
  for (Ticks t : p.ticks()) half.push_back(2 * t);
  half[good] += 1;
  return point_sets(std::move(half));
}

Ticks TippingEvaluator::sup_o(std::size_t good, std::span<const Ticks> others) {
  check_others(good, others);
  auto k = key(good, others);
  if (auto it = sup_o_.find(k); it != sup_o_.end()) return it->second;
  Ticks best = 0;
  for (Ticks g = market_.cap(); g >= 0; --g) {
    if (g < market_.cap() && at_cell(good, others, g).over.contains(good)) {
      best = g + 1;
      break;
    }
    if (at_grid(good, others, g).over.contains(good)) {
      best = g;
      break;
    }
  }
  sup_o_.emplace(std::move(k), best);
  return best;
}

std::optional<Ticks> TippingEvaluator::inf_u(std::size_t good, std::span<const Ticks> others) {
  check_others(good, others);
  auto k = key(good, others);
  if (auto it = inf_u_.find(k); it != inf_u_.end()) return it->second;
  std::optional<Ticks> best;
  for (Ticks g = 0; g <= market_.cap() && !best; ++g) {
    if (g > 0 && at_cell(good, others, g - 1).under.contains(good)) {
      best = g - 1;
    } else if (at_grid(good, others, g).under.contains(good)) {
      best = g;
    }
  }
  if (!best && options_.inf_u_scan == InfUScan::ThroughCap &&
      at_cell(good, others, market_.cap()).under.contains(good)) {
    best = market_.cap();
  }
  inf_u_.emplace(std::move(k), best);
  return best;
}

Ticks TippingEvaluator::inf_u_or_sentinel(std::size_t good, std::span<const Ticks> others) {
  return inf_u(good, others).value_or(market_.cap() + 1);
}

bool TippingEvaluator::no_overdemand(const PriceVector& p) {
  std::vector<Ticks> k(p.ticks().begin(), p.ticks().end());
  if (auto it = no_over_.find(k); it != no_over_.end()) return it->second;
  const bool v = exists_overdemanded(demand_state(market_, p)).verdict == Verdict::None;
  no_over_.emplace(std::move(k), v);
  return v;
}

bool TippingEvaluator::no_underdemand(const PriceVector& p) {
  std::vector<Ticks> k(p.ticks().begin(), p.ticks().end());
  if (auto it = no_under_.find(k); it != no_under_.end()) return it->second;
  const bool v = exists_underdemanded(demand_state(market_, p)).verdict == Verdict::None;
  no_under_.emplace(std::move(k), v);
  return v;
}

template <typename Visit>
bool TippingEvaluator::scan_box(std::span<const Ticks> others, Visit&& visit) {
  std::vector<Ticks> q(others.begin(), others.end());
  while (true) {
    if (visit(std::span<const Ticks>(q))) return true;
    std::size_t k = q.size();
    while (true) {
      if (k == 0) return false;
      --k;
      if (q[k] < market_.cap()) {
        ++q[k];
        break;
      }
      q[k] = others[k];
    }
  }
}

Ticks TippingEvaluator::neutral_s(std::size_t good, std::span<const Ticks> others) {
  check_others(good, others);
  auto k = key(good, others);
  if (auto it = s_.find(k); it != s_.end()) return it->second;
  std::uint64_t evaluations = 0;
  const Ticks base_floor = options_.sup_o_anchor == SupOAnchor::Base ? sup_o(good, others) : 0;
  std::optional<Ticks> found;
  for (Ticks own = base_floor; own <= market_.cap() && !found; ++own) {
    const bool hit = scan_box(others, [&](std::span<const Ticks> q) {
      if (++evaluations > options_.budget) {
        throw BudgetExceeded("neutral price S search exceeded " + std::to_string(options_.budget) +
                             " evaluations");
      }
      if (options_.sup_o_anchor == SupOAnchor::Query && own < sup_o(good, q)) return false;
      return no_overdemand(PriceVector::with(q, good, own));
    });
    if (hit) found = own;
  }
  // (H, ..., H) always qualifies: every buyer demands the dummy good there.
  if (!found) throw std::logic_error("neutral price S search found no feasible point");
  s_.emplace(std::move(k), *found);
  return *found;
}

Ticks TippingEvaluator::neutral_i(std::size_t good, std::span<const Ticks> others) {
  check_others(good, others);
  auto k = key(good, others);
  if (auto it = i_.find(k); it != i_.end()) return it->second;
  std::uint64_t evaluations = 0;
  Ticks result = market_.cap();
  for (Ticks own = 0; own < market_.cap(); ++own) {
    const bool hit = scan_box(others, [&](std::span<const Ticks> q) {
      if (++evaluations > options_.budget) {
        throw BudgetExceeded("neutral price I search exceeded " + std::to_string(options_.budget) +
                             " evaluations");
      }
      const auto floor = inf_u(good, q);
      const bool allowed = floor ? own >= *floor : options_.missing_inf_u == MissingInfU::Vacuous;
      return allowed && no_underdemand(PriceVector::with(q, good, own));
    });
    if (hit) {
      result = own;
      break;
    }
  }
  i_.emplace(std::move(k), result);
  return result;
}

TippingProfile TippingEvaluator::profile(std::size_t good, std::span<const Ticks> others) {
  TippingProfile out;
  out.good = good;
  out.base.assign(others.begin(), others.end());
  out.sup_o = sup_o(good, others);
  out.inf_u = inf_u(good, others);
  out.s = neutral_s(good, others);
  out.i = neutral_i(good, others);
  return out;
}

nlohmann::json tipping_json(const Market& market, const TippingProfile& profile) {
  nlohmann::json j;
  j["good"] = market.good_ids()[profile.good];
  j["base_prices"] = prices_json(market, profile.base);
  j["sup_O"] = price_json(market, profile.sup_o);
  j["inf_U"] = profile.inf_u ? price_json(market, *profile.inf_u) : nlohmann::json(nullptr);
  j["S"] = price_json(market, profile.s);
  j["I"] = price_json(market, profile.i);
  return j;
}

}  // namespace walras
