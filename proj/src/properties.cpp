#include "walras/properties.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "walras/demand_analysis.hpp"
#include "walras/fixed_point.hpp"
#include "walras/oracle.hpp"

namespace walras {

namespace {

Counterexample make(const std::string& property, const Market& market, const PriceVector& p, std::string detail) {
  return {property, market_to_json(market), prices_json(market, p.ticks()), std::move(detail)};
}

std::string show(const Market& market, const PriceVector& p) { return format_prices(market, p.ticks()); }
std::string show(const Market& market, Ticks t) { return market.to_price(t).to_string(); }

int rank(Region r) {
  switch (r) {
    case Region::BelowS:
      return 0;
    case Region::Neutral:
      return 1;
    case Region::AboveI:
      return 2;
    case Region::Inverted:
      return 3;
  }
  return 3;
}

}  // namespace

void PropertyTally::record(bool ok, const std::function<Counterexample()>& describe) {
  ++checks;
  if (ok) return;
  ++violations;
  if (!first) first = describe();
}

void PropertyTally::merge(const PropertyTally& other) {
  checks += other.checks;
  violations += other.violations;
  if (!first && other.first) first = other.first;
}

void check_fact(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally) {
  const Market& market = map.market();
  auto& tipping = map.tipping();
  for (std::size_t k = 0; k < samples; ++k) {
    const PriceVector p = random_prices(market, rng);
    for (std::size_t a = 0; a < market.goods(); ++a) {
      const auto others = p.without(a);
      const auto iu = tipping.inf_u(a, others);
      const Ticks so = tipping.sup_o(a, others);
      tally.record(!iu || *iu >= so, [&] {
        return make("fact", market, p,
                    "good " + market.good_ids()[a] + ": inf_U " + show(market, *iu) + " < sup_O " + show(market, so));
      });
    }
  }
}

void check_sup_o_monotone(PriceMap& map, std::mt19937_64& rng, std::size_t pairs, PropertyTally& tally) {
  const Market& market = map.market();
  auto& tipping = map.tipping();
  for (std::size_t k = 0; k < pairs; ++k) {
    const PriceVector p = random_prices(market, rng);
    const PriceVector q = random_above(market, p, rng);
    for (std::size_t a = 0; a < market.goods(); ++a) {
      const Ticks lo = tipping.sup_o(a, p.without(a));
      const Ticks hi = tipping.sup_o(a, q.without(a));
      tally.record(lo <= hi, [&] {
        return make("sup_o_monotone", market, p,
                    "good " + market.good_ids()[a] + ": sup_O " + show(market, lo) + " at p > " + show(market, hi) +
                        " at q = " + show(market, q));
      });
    }
  }
}

void check_neutral_monotone(PriceMap& map, std::mt19937_64& rng, std::size_t pairs, PropertyTally& tally) {
  const Market& market = map.market();
  auto& tipping = map.tipping();
  for (std::size_t k = 0; k < pairs; ++k) {
    const PriceVector p = random_prices(market, rng);
    const PriceVector q = random_above(market, p, rng);
    for (std::size_t a = 0; a < market.goods(); ++a) {
      const auto po = p.without(a);
      const auto qo = q.without(a);
      const Ticks sp = tipping.neutral_s(a, po);
      const Ticks sq = tipping.neutral_s(a, qo);
      const Ticks ip = tipping.neutral_i(a, po);
      const Ticks iq = tipping.neutral_i(a, qo);
      tally.record(sp <= sq && ip <= iq, [&] {
        std::ostringstream os;
        os << "good " << market.good_ids()[a] << ": S " << show(market, sp) << " -> " << show(market, sq) << ", I "
           << show(market, ip) << " -> " << show(market, iq) << " with q = " << show(market, q);
        return make("neutral_monotone", market, p, os.str());
      });
    }
  }
}

void check_own_price_monotone(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally) {
  const Market& market = map.market();
  std::uniform_int_distribution<std::size_t> good(0, market.goods() - 1);
  std::uniform_int_distribution<Ticks> price(0, market.cap());
  for (std::size_t k = 0; k < samples; ++k) {
    PriceVector low = random_prices(market, rng);
    const std::size_t a = good(rng);
    Ticks l = price(rng);
    Ticks h = price(rng);
    if (h < l) std::swap(l, h);
    low[a] = l;
    PriceVector high = low;
    high[a] = h;
    const Ticks fl = map.apply_coord(a, low);
    const Ticks fh = map.apply_coord(a, high);
    tally.record(fl <= fh, [&] {
      return make("own_price_monotone", market, low,
                  "good " + market.good_ids()[a] + ": f_a " + show(market, fl) + " at own price " + show(market, l) +
                      " > " + show(market, fh) + " at " + show(market, h));
    });
  }
}

void check_map_monotone_random(PriceMap& map, std::mt19937_64& rng, std::size_t pairs, PropertyTally& tally) {
  const Market& market = map.market();
  for (std::size_t k = 0; k < pairs; ++k) {
    const PriceVector p = random_prices(market, rng);
    const PriceVector q = random_above(market, p, rng);
    const PriceVector fp = map.apply(p);
    const PriceVector fq = map.apply(q);
    tally.record(fp.leq(fq), [&] {
      return make("map_monotone", market, p,
                  "f(p) = " + show(market, fp) + " not <= f(q) = " + show(market, fq) + " for q = " + show(market, q));
    });
  }
}

void check_map_monotone_exhaustive(PriceMap& map, PropertyTally& tally) {
  const Market& market = map.market();
  const auto points = grid_points(market);
  std::vector<PriceVector> images;
  images.reserve(points.size());
  for (const auto& p : points) images.push_back(map.apply(p));
  for (std::size_t u = 0; u < points.size(); ++u) {
    for (std::size_t v = u; v < points.size(); ++v) {
      bool ok = true;
      if (points[u].leq(points[v])) ok = images[u].leq(images[v]);
      if (points[v].leq(points[u])) ok = ok && images[v].leq(images[u]);
      tally.record(ok, [&] {
        return make("map_monotone", market, points[u],
                    "f not monotone between " + show(market, points[u]) + " and " + show(market, points[v]));
      });
    }
  }
}

void check_self_map(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally) {
  const Market& market = map.market();
  for (std::size_t k = 0; k < samples; ++k) {
    const PriceVector p = random_prices(market, rng);
    const PriceVector fp = map.apply(p);
    bool inside = true;
    for (Ticks t : fp.ticks()) inside = inside && t >= 0 && t <= market.cap();
    tally.record(inside, [&] { return make("self_map", market, p, "f(p) = " + show(market, fp)); });
  }
}

void check_region_order(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally) {
  const Market& market = map.market();
  std::uniform_int_distribution<std::size_t> good(0, market.goods() - 1);
  for (std::size_t k = 0; k < samples; ++k) {
    PriceVector p = random_prices(market, rng);
    const std::size_t a = good(rng);
    std::vector<Region> regions;
    for (Ticks own = 0; own <= market.cap(); ++own) {
      p[a] = own;
      regions.push_back(map.classify_region(a, p));
    }
    const bool all_inverted =
        std::all_of(regions.begin(), regions.end(), [](Region r) { return r == Region::Inverted; });
    const bool none_inverted =
        std::none_of(regions.begin(), regions.end(), [](Region r) { return r == Region::Inverted; });
    const bool ordered = std::is_sorted(regions.begin(), regions.end(),
                                        [](Region x, Region y) { return rank(x) < rank(y); });
    tally.record(all_inverted || (none_inverted && ordered), [&] {
      std::string seq;
      for (Region r : regions) seq += std::string(colour(r)) + " ";
      p[a] = 0;
      return make("region_order", market, p, "good " + market.good_ids()[a] + " along own price: " + seq);
    });
  }
}

void check_neutral_fixed(PriceMap& map, std::mt19937_64& rng, std::size_t samples, PropertyTally& tally) {
  const Market& market = map.market();
  std::uniform_int_distribution<std::size_t> good(0, market.goods() - 1);
  for (std::size_t k = 0; k < samples; ++k) {
    PriceVector p = random_prices(market, rng);
    const std::size_t a = good(rng);
    const auto others = p.without(a);
    const Ticks s = map.tipping().neutral_s(a, others);
    const Ticks i = map.tipping().neutral_i(a, others);
    for (Ticks own = s; own <= i; ++own) {
      p[a] = own;
      const Ticks out = map.apply_coord(a, p);
      tally.record(out == own, [&] {
        return make("neutral_fixed", market, p, "good " + market.good_ids()[a] + " moved to " + show(market, out));
      });
    }
  }
}

void check_characterization(const Market& market, PropertyTally& tally) {
  for (const auto& p : grid_points(market)) {
    const auto state = demand_state(market, p);
    const bool direct = check_we(state).is_we;
    const bool characterized = check_we_by_characterization(state);
    tally.record(direct == characterized, [&] {
      return make("characterization", market, p,
                  std::string("check_we ") + (direct ? "true" : "false") + " vs characterization " +
                      (characterized ? "true" : "false"));
    });
  }
}

void check_hall_vs_enumeration(const Market& market, PropertyTally& tally) {
  for (const auto& p : grid_points(market)) {
    const auto state = demand_state(market, p);
    const auto over = exists_overdemanded(state);
    const auto under = exists_underdemanded(state);
    const bool over_ok = (over.verdict == Verdict::Over) == oracle::any_overdemanded(market, p) &&
                         (over.verdict != Verdict::Over || is_overdemanded(state, over.witness_goods));
    const bool under_ok = (under.verdict == Verdict::Under) == oracle::any_underdemanded(market, p) &&
                          (under.verdict != Verdict::Under || is_underdemanded(state, under.witness_goods));
    tally.record(over_ok && under_ok, [&] {
      return make("hall_vs_enumeration", market, p,
                  std::string("over ") + to_string(over.verdict) + ", under " + to_string(under.verdict) +
                      " disagree with subset enumeration");
    });
  }
}

void check_we_vs_allocation_search(const Market& market, PropertyTally& tally) {
  for (const auto& p : grid_points(market)) {
    const auto fast = check_we(market, p);
    const bool slow = oracle::find_we_allocation(market, p).has_value();
    bool ok = fast.is_we == slow;
    if (ok && fast.allocation) {
      const auto d = demand(market, p);
      const auto& mu = fast.allocation->assignment;
      ok = fast.allocation->feasible();
      std::vector<bool> sold(market.goods(), false);
      for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i]) {
          ok = ok && d[i].goods.contains(*mu[i]);
          sold[*mu[i]] = true;
        } else {
          ok = ok && d[i].dummy;
        }
      }
      for (std::size_t x = 0; x < market.goods(); ++x) ok = ok && (sold[x] || p[x] == 0);
    }
    tally.record(ok, [&] {
      return make("we_vs_allocation_search", market, p,
                  std::string("check_we ") + (fast.is_we ? "true" : "false") + ", allocation search " +
                      (slow ? "true" : "false"));
    });
  }
}

void check_fixed_points_are_we(PriceMap& map, PropertyTally& tally) {
  const Market& market = map.market();
  const auto report = fixed_point_we_equivalence(map);
  tally.record(report.equivalent(), [&] {
    const bool spurious = !report.fixed_not_we.empty();
    const PriceVector& p = spurious ? report.fixed_not_we.front() : report.we_not_fixed.front();
    std::ostringstream os;
    os << report.fixed_not_we.size() << " fixed points are not WE, " << report.we_not_fixed.size()
       << " WE prices are not fixed; first: " << show(market, p) << (spurious ? " (fixed, not WE)" : " (WE, not fixed)");
    return make("fixed_points_are_we", market, p, os.str());
  });
}

void check_lattice(PriceMap& map, PropertyTally& closure, PropertyTally& extremes) {
  const Market& market = map.market();
  const auto we = enumerate_we(market);
  const auto cert = lattice_check(map, we);
  closure.record(cert.closed() && cert.min_attained && cert.max_attained, [&] {
    if (!cert.meet_failures.empty()) {
      const auto& [p, q] = cert.meet_failures.front();
      return make("lattice", market, meet(p, q), "meet of " + show(market, p) + " and " + show(market, q) + " is not WE");
    }
    if (!cert.join_failures.empty()) {
      const auto& [p, q] = cert.join_failures.front();
      return make("lattice", market, join(p, q), "join of " + show(market, p) + " and " + show(market, q) + " is not WE");
    }
    return make("lattice", market, cert.min_we.value_or(PriceVector::uniform(market.goods(), 0)),
                "componentwise extreme of the WE set is not attained");
  });
  extremes.record(cert.extremes_match, [&] {
    std::ostringstream os;
    os << "iteration reaches " << show(market, cert.least_fixed_point) << " / "
       << show(market, cert.greatest_fixed_point) << ", WE extremes "
       << (cert.min_we ? show(market, *cert.min_we) : "none") << " / "
       << (cert.max_we ? show(market, *cert.max_we) : "none");
    return make("tarski_extremes", market, cert.greatest_fixed_point, os.str());
  });
}

void check_iteration_bound(PriceMap& map, PropertyTally& tally) {
  const Market& market = map.market();
  const std::size_t bound = market.goods() * static_cast<std::size_t>(market.cap());
  const PriceVector bottom = PriceVector::uniform(market.goods(), 0);
  const PriceVector top = PriceVector::uniform(market.goods(), market.cap());
  const auto up = iterate_from(map, bottom, bound);
  tally.record(up.converged && (up.direction == Direction::None || up.direction == Direction::Ascending), [&] {
    return make("iteration_bound", market, bottom,
                "from bottom: " + std::to_string(up.steps) + " steps, " + to_string(up.direction) +
                    (up.converged ? "" : ", not converged"));
  });
  const auto down = iterate_from(map, top, bound);
  tally.record(down.converged && (down.direction == Direction::None || down.direction == Direction::Descending), [&] {
    return make("iteration_bound", market, top,
                "from top: " + std::to_string(down.steps) + " steps, " + to_string(down.direction) +
                    (down.converged ? "" : ", not converged"));
  });
}

const std::vector<std::string>& selfcheck_properties() {
  static const std::vector<std::string> names = {
      "fact",          "sup_o_monotone",       "neutral_monotone",        "own_price_monotone",
      "map_monotone",         "self_map",             "region_order",  "neutral_fixed",
      "characterization", "hall_vs_enumeration", "we_vs_allocation_search", "fixed_points_are_we",
      "lattice",       "tarski_extremes",      "iteration_bound"};
  return names;
}

std::vector<PropertyTally> run_selfcheck(const SelfcheckConfig& config) {
  const auto suite = random_suite(config.trials, config.seed, config.caps);
  const auto& names = selfcheck_properties();
  std::vector<std::vector<PropertyTally>> per_market(suite.size());
  std::vector<std::exception_ptr> errors(suite.size());

  auto run_one = [&](std::size_t k) {
    try {
      const Market& market = suite[k];
      std::vector<PropertyTally> t(names.size());
      for (std::size_t j = 0; j < names.size(); ++j) t[j].name = names[j];
      PriceMap map(market, config.options);
      std::seed_seq seq{config.seed, static_cast<std::uint64_t>(k), std::uint64_t{1}};
      std::mt19937_64 rng(seq);
      check_fact(map, rng, config.samples, t[0]);
      check_sup_o_monotone(map, rng, config.pairs, t[1]);
      check_neutral_monotone(map, rng, config.pairs, t[2]);
      check_own_price_monotone(map, rng, config.pairs, t[3]);
      check_map_monotone_random(map, rng, config.pairs, t[4]);
      check_self_map(map, rng, config.pairs, t[5]);
      check_region_order(map, rng, config.pairs, t[6]);
      check_neutral_fixed(map, rng, config.pairs, t[7]);
      check_characterization(market, t[8]);
      if (market.goods() <= config.hall_max_goods) check_hall_vs_enumeration(market, t[9]);
      if (market.goods() <= 6 && market.buyers() <= 6) check_we_vs_allocation_search(market, t[10]);
      check_fixed_points_are_we(map, t[11]);
      if (k < config.lattice_markets) {
        check_lattice(map, t[12], t[13]);
      }
      check_iteration_bound(map, t[14]);
      per_market[k] = std::move(t);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };

  const unsigned jobs = std::max(1U, config.jobs);
  if (jobs == 1) {
    for (std::size_t k = 0; k < suite.size(); ++k) run_one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < suite.size(); k = next++) run_one(k);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<PropertyTally> total(names.size());
  for (std::size_t j = 0; j < names.size(); ++j) total[j].name = names[j];
  for (const auto& t : per_market) {
    for (std::size_t j = 0; j < names.size(); ++j) total[j].merge(t[j]);
  }
  return total;
}

nlohmann::json tally_json(const PropertyTally& tally) {
  nlohmann::json j;
  j["property"] = tally.name;
  j["checks"] = tally.checks;
  j["violations"] = tally.violations;
  j["passed"] = tally.passed();
  if (tally.first) {
    j["counterexample"] = {{"market", tally.first->market},
                           {"prices", tally.first->prices},
                           {"detail", tally.first->detail}};
  }
  return j;
}

}  // namespace walras
