// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "walras/fixed_point.hpp"
#include "walras/generator.hpp"
#include "walras/market.hpp"
#include "walras/oracle.hpp"
#include "walras/properties.hpp"

namespace {

using namespace walras;

constexpr std::size_t kSuiteSize = 200;
constexpr std::uint64_t kSuiteSeed = 7;
constexpr std::size_t kLatticeMarkets = 50;

Market e1() { return Market("e1", {"1", "2"}, {"a"}, {{Rational(5)}, {Rational(3)}}, std::nullopt, Rational(1, 2)); }

Market e2(Rational tick) {
  return Market("e2", {"1", "2"}, {"a", "b"}, {{Rational(4), Rational(1)}, {Rational(3), Rational(2)}},
                std::nullopt, tick);
}

PriceVector at(const Market& m, std::vector<Rational> prices) {
  std::vector<Ticks> t;
  for (const auto& p : prices) t.push_back(p.exact_multiple_of(m.tick(), "price"));
  return PriceVector(std::move(t));
}

/// Merges a tally into a criterion-level tally under the criterion's name.
void add(PropertyTally& into, const PropertyTally& from) {
  PropertyTally renamed = from;
  renamed.name = into.name;
  into.merge(renamed);
}

/// Records an exact set comparison as one check.
void expect_set(PropertyTally& tally, const Market& m, const std::vector<PriceVector>& got,
                const std::vector<PriceVector>& want, const std::string& what) {
  tally.record(got == want, [&] {
    std::string detail = what + ": got {";
    for (const auto& p : got) detail += format_prices(m, p.ticks());
    detail += "} want {";
    for (const auto& p : want) detail += format_prices(m, p.ticks());
    return Counterexample{tally.name, market_to_json(m), nullptr, detail + "}"};
  });
}

class Reporter {
 public:
  using Notes = std::vector<std::string>;

  void run(int number, const std::string& name, const std::function<void(PropertyTally&)>& body) {
    run(number, name, [&](PropertyTally& t, Notes&) { body(t); });
  }

  void run(int number, const std::string& name, const std::function<void(PropertyTally&, Notes&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    PropertyTally tally{name};
    Notes notes;
    body(tally, notes);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %-36s %s  checks=%llu violations=%llu  %.1fs\n", number, name.c_str(),
                tally.passed() ? "PASS" : "FAIL", static_cast<unsigned long long>(tally.checks),
                static_cast<unsigned long long>(tally.violations), seconds);
    if (tally.first) {
      std::printf("    first counterexample: %s\n      market: %s\n      prices: %s\n", tally.first->detail.c_str(),
                  tally.first->market.dump().c_str(), tally.first->prices.dump().c_str());
    }
    for (const auto& note : notes) std::printf("    %s\n", note.c_str());
    std::fflush(stdout);
    failed_ = failed_ || !tally.passed();
  }
  bool failed() const { return failed_; }

 private:
  bool failed_ = false;
};

}  // namespace

int main() {
  const MarketShape caps{3, 3, 6, Rational(1, 2)};
  const auto suite = random_suite(kSuiteSize, kSuiteSeed, caps);
  std::printf("suite: %zu markets, seed %llu, n,m <= %zu, values <= %lld, tick %s\n", suite.size(),
              static_cast<unsigned long long>(kSuiteSeed), caps.buyers, static_cast<long long>(caps.max_value),
              caps.tick.to_string().c_str());

  // One map per market so the memoized tipping prices are shared across criteria.
  std::vector<PriceMap> maps;
  maps.reserve(suite.size());
  for (const Market& m : suite) maps.emplace_back(m);
  auto rng_for = [](std::size_t k, std::uint64_t stream) {
    std::seed_seq seq{kSuiteSeed, static_cast<std::uint64_t>(k), stream};
    return std::mt19937_64(seq);
  };

  Reporter report;

  report.run(1, "fact inf_U >= sup_O", [&](PropertyTally& t) {
    for (std::size_t k = 0; k < suite.size(); ++k) {
      auto rng = rng_for(k, 1);
      check_fact(maps[k], rng, 50, t);
    }
  });

  report.run(2, "neutral prices monotone", [&](PropertyTally& t) {
    // 10 ordered pairs per market: 2,000 pairs, each checked for S and I on every good.
    for (std::size_t k = 0; k < suite.size(); ++k) {
      auto rng = rng_for(k, 2);
      check_neutral_monotone(maps[k], rng, 10, t);
    }
  });

  report.run(3, "price map monotone", [&](PropertyTally& t) {
    PriceMap m1(e1());
    PriceMap m2(e2(Rational(1, 2)));
    PropertyTally exhaustive{"exhaustive"};
    check_map_monotone_exhaustive(m1, exhaustive);
    check_map_monotone_exhaustive(m2, exhaustive);
    add(t, exhaustive);
    for (std::size_t k = 0; k < suite.size(); ++k) {
      auto rng = rng_for(k, 3);
      check_map_monotone_random(maps[k], rng, 10, t);
    }
  });

  report.run(4, "region order along own price", [&](PropertyTally& t) {
    for (std::size_t k = 0; k < suite.size(); ++k) {
      auto rng = rng_for(k, 4);
      check_region_order(maps[k], rng, 10, t);
    }
  });

  report.run(5, "fixed points == WE prices", [&](PropertyTally& t, Reporter::Notes& notes) {
    PropertyTally worked{"worked"};
    const Market m1 = e1();
    PriceMap f1(m1);
    std::vector<PriceVector> e1_want;
    for (int twice = 6; twice <= 10; ++twice) e1_want.push_back(at(m1, {Rational(twice, 2)}));
    expect_set(worked, m1, enumerate_fixed_points(f1), e1_want, "e1 fixed points");
    expect_set(worked, m1, oracle::walrasian_prices(m1), e1_want, "e1 WE prices");

    const Market m2 = e2(Rational(1));
    PriceMap f2(m2);
    std::vector<PriceVector> e2_want;
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; b <= 2; ++b) {
        if (a - b >= 1 && a - b <= 3) e2_want.push_back(at(m2, {Rational(a), Rational(b)}));
      }
    }
    expect_set(worked, m2, enumerate_fixed_points(f2), e2_want, "e2 fixed points");
    expect_set(worked, m2, oracle::walrasian_prices(m2), e2_want, "e2 WE prices");
    add(t, worked);

    PropertyTally random{"random"};
    std::size_t spurious = 0;
    std::size_t with_inverted = 0;
    std::size_t missing = 0;
    for (std::size_t k = 0; k < suite.size(); ++k) {
      check_fixed_points_are_we(maps[k], random);
      const auto r = fixed_point_we_equivalence(maps[k]);
      spurious += r.fixed_not_we.size();
      missing += r.we_not_fixed.size();
      for (const auto& p : r.fixed_not_we) {
        bool inverted = false;
        for (std::size_t a = 0; a < p.size(); ++a) inverted = inverted || maps[k].step(a, p).region == Region::Inverted;
        with_inverted += inverted ? 1 : 0;
      }
    }
    add(t, random);
    notes.push_back("E1 and E2 sets: " + std::to_string(worked.checks - worked.violations) + "/" +
                    std::to_string(worked.checks) + " exact matches");
    notes.push_back("random suite: " + std::to_string(random.violations) + "/" + std::to_string(random.checks) +
                    " markets differ; " + std::to_string(spurious) + " fixed points are not WE (" +
                    std::to_string(with_inverted) + " with a rounded inverted coordinate, " +
                    std::to_string(spurious - with_inverted) + " with every coordinate neutral); " +
                    std::to_string(missing) + " WE prices are not fixed");
  });

  report.run(6, "WE lattice and Tarski extremes", [&](PropertyTally& t, Reporter::Notes& notes) {
    PropertyTally closure{"closure"};
    PropertyTally extremes{"extremes"};
    PriceMap f1(e1());
    PriceMap f2(e2(Rational(1, 2)));
    check_lattice(f1, closure, extremes);
    check_lattice(f2, closure, extremes);
    for (std::size_t k = 0; k < kLatticeMarkets; ++k) check_lattice(maps[k], closure, extremes);
    add(t, closure);
    add(t, extremes);
    notes.push_back("meet/join closure: " + std::to_string(closure.violations) + " of " +
                    std::to_string(closure.checks) + " markets fail");
    notes.push_back("Tarski extremes == WE extremes: " + std::to_string(extremes.violations) + " of " +
                    std::to_string(extremes.checks) + " markets fail");

    const Market m1 = e1();
    const Market m2 = e2(Rational(1, 2));
    expect_set(t, m1, {least_fixed_point(f1), greatest_fixed_point(f1)},
               {at(m1, {Rational(3)}), at(m1, {Rational(5)})}, "e1 extremes");
    expect_set(t, m2, {least_fixed_point(f2), greatest_fixed_point(f2)},
               {at(m2, {Rational(1), Rational(0)}), at(m2, {Rational(4), Rational(2)})}, "e2 extremes");
  });

  report.run(7, "WE check == characterization", [&](PropertyTally& t) {
    check_characterization(e1(), t);
    check_characterization(e2(Rational(1, 2)), t);
    for (const Market& m : suite) check_characterization(m, t);
  });

  report.run(8, "Hall tests == subset scan", [&](PropertyTally& t) {
    check_hall_vs_enumeration(e1(), t);
    check_hall_vs_enumeration(e2(Rational(1, 2)), t);
    for (const Market& m : suite) {
      if (m.goods() <= 4) check_hall_vs_enumeration(m, t);
    }
  });

  report.run(9, "iteration bound and monotone trace", [&](PropertyTally& t) {
    for (auto& map : maps) check_iteration_bound(map, t);
  });

  return report.failed() ? 1 : 0;
}
