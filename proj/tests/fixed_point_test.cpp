#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"
#include "walras/errors.hpp"
#include "walras/fixed_point.hpp"
#include "walras/generator.hpp"
#include "walras/oracle.hpp"

namespace walras {
namespace {

using testing::e1;
using testing::e2;
using testing::ticks;

std::vector<PriceVector> e1_interval() {
  return {ticks({6}), ticks({7}), ticks({8}), ticks({9}), ticks({10})};
}

// {(pa, pb) : 1 <= pa - pb <= 3, 0 <= pb <= 2, pa <= 4} on the integers, sorted.
std::vector<PriceVector> e2_integer_we() {
  std::vector<PriceVector> out;
  for (Ticks a = 0; a <= 4; ++a) {
    for (Ticks b = 0; b <= 2; ++b) {
      if (a - b >= 1 && a - b <= 3) out.push_back(ticks({a, b}));
    }
  }
  return out;
}

TEST(Iterate, FromBottomOfE1) {
  PriceMap map(e1());
  const auto trace = iterate_from(map, ticks({0}), 100);
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.steps, 1U);
  EXPECT_EQ(trace.last(), ticks({6}));
  EXPECT_EQ(trace.direction, Direction::Ascending);
  ASSERT_EQ(trace.iterates.size(), 2U);
}

TEST(Iterate, NeutralStartDoesNotMove) {
  PriceMap map(e1());
  const auto trace = iterate_from(map, ticks({10}), 100);
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.steps, 0U);
  EXPECT_EQ(trace.direction, Direction::None);
  EXPECT_EQ(iterate_from(map, ticks({8}), 100).steps, 0U);
}

TEST(Iterate, ReportsExhaustedStepBudget) {
  PriceMap map(e2());
  const auto trace = iterate_from(map, ticks({0, 0}), 0);
  EXPECT_FALSE(trace.converged);
  EXPECT_THROW(least_fixed_point(map, 0), ConvergenceError);
}

TEST(Extremes, WorkedExamples) {
  PriceMap m1(e1());
  EXPECT_EQ(least_fixed_point(m1), ticks({6}));
  EXPECT_EQ(greatest_fixed_point(m1), ticks({10}));
  PriceMap m2(e2());
  EXPECT_EQ(least_fixed_point(m2), ticks({2, 0}));
  EXPECT_EQ(greatest_fixed_point(m2), ticks({8, 4}));
  PriceMap zero(testing::from_rows({{0}}));
  EXPECT_EQ(least_fixed_point(zero), ticks({0}));
  EXPECT_EQ(greatest_fixed_point(zero), ticks({0}));
}

TEST(Enumerate, E1FixedPointsAndEquilibria) {
  PriceMap map(e1());
  EXPECT_EQ(enumerate_fixed_points(map), e1_interval());
  EXPECT_EQ(enumerate_we(e1()), e1_interval());
  EXPECT_EQ(oracle::walrasian_prices(e1()), e1_interval());
}

TEST(Enumerate, E2OnTheIntegerGrid) {
  const Market m = e2(Rational(1));
  PriceMap map(m);
  EXPECT_EQ(enumerate_fixed_points(map), e2_integer_we());
  EXPECT_EQ(enumerate_we(m), e2_integer_we());
  EXPECT_EQ(oracle::walrasian_prices(m), e2_integer_we());
  EXPECT_EQ(e2_integer_we().size(), 8U);
}

TEST(Enumerate, AllZeroMarketHasOnlyTheZeroVector) {
  const Market m = testing::from_rows({{0, 0}, {0, 0}});
  PriceMap map(m);
  EXPECT_EQ(enumerate_fixed_points(map), (std::vector<PriceVector>{ticks({0, 0})}));
  EXPECT_EQ(enumerate_we(m), (std::vector<PriceVector>{ticks({0, 0})}));
}

TEST(Enumerate, RespectsGridBudget) {
  PriceMap map(e2());
  EXPECT_EQ(grid_size(e2()), 81U);
  EXPECT_THROW(enumerate_fixed_points(map, EnumerationLimits{80, 1}), BudgetExceeded);
  EXPECT_THROW(enumerate_we(e2(), EnumerationLimits{80, 1}), BudgetExceeded);
}

TEST(Enumerate, ResultsDoNotDependOnWorkerCount) {
  for (const Market& m : random_suite(15, 71, MarketShape{3, 3, 4, Rational(1, 2)})) {
    PriceMap serial(m);
    PriceMap threaded(m);
    EXPECT_EQ(enumerate_fixed_points(serial, {1'000'000, 1}), enumerate_fixed_points(threaded, {1'000'000, 4}));
    EXPECT_EQ(enumerate_we(m, {1'000'000, 1}), enumerate_we(m, {1'000'000, 3}));
  }
}

TEST(Enumerate, WeSetMatchesAllocationSearch) {
  for (const Market& m : random_suite(40, 73, MarketShape{3, 3, 4, Rational(1, 2)})) {
    EXPECT_EQ(enumerate_we(m), oracle::walrasian_prices(m)) << m.name();
  }
}

TEST(FixedPointsVsWe, EquivalentOnHandMarkets) {
  PriceMap m1(e1());
  EXPECT_TRUE(fixed_point_we_equivalence(m1).equivalent());
  PriceMap m2(e2(Rational(1)));
  EXPECT_TRUE(fixed_point_we_equivalence(m2).equivalent());
  PriceMap m2h(e2());
  EXPECT_TRUE(fixed_point_we_equivalence(m2h).equivalent());
}

TEST(FixedPointsVsWe, SingleBuyerTwoGoodsHasFixedPointsThatAreNotEquilibria) {
  // One buyer values a at 6 and b at 3. With p_b > 0 both goods cannot be sold,
  // so every q with q_b >= p_b > 0 has underdemand and I falls back to H for both
  // goods; the tie point (3.5, 0.5) is then neutral in both coordinates.
  const Market m = testing::from_rows({{6, 3}});
  PriceMap map(m);
  const PriceVector p = ticks({7, 1});
  EXPECT_EQ(map.apply(p), p);
  EXPECT_FALSE(check_we(m, p).is_we);
  EXPECT_FALSE(oracle::find_we_allocation(m, p).has_value());
  const auto report = fixed_point_we_equivalence(map);
  EXPECT_FALSE(report.equivalent());
  EXPECT_TRUE(std::binary_search(report.fixed_not_we.begin(), report.fixed_not_we.end(), p));
  EXPECT_TRUE(report.we_not_fixed.empty());
}

TEST(Lattice, WorkedPairs) {
  const Market m = e2(Rational(1));
  EXPECT_TRUE(check_we(m, meet(ticks({1, 0}), ticks({4, 2}))).is_we);
  EXPECT_TRUE(check_we(m, join(ticks({1, 0}), ticks({4, 2}))).is_we);
  EXPECT_EQ(meet(ticks({3, 0}), ticks({2, 1})), ticks({2, 0}));
  EXPECT_EQ(join(ticks({3, 0}), ticks({2, 1})), ticks({3, 1}));
  EXPECT_TRUE(check_we(m, ticks({2, 0})).is_we);
  EXPECT_TRUE(check_we(m, ticks({3, 1})).is_we);
}

TEST(Lattice, CertifiesHandMarkets) {
  for (const Market& m : {e1(), e2(), e2(Rational(1))}) {
    PriceMap map(m);
    const auto we = enumerate_we(m);
    const auto cert = lattice_check(map, we);
    EXPECT_TRUE(cert.certified()) << m.name();
    EXPECT_EQ(cert.pairs_checked, we.size() * (we.size() + 1) / 2);
  }
  PriceMap map(e2());
  const auto cert = lattice_check(map, enumerate_we(e2()));
  EXPECT_EQ(*cert.min_we, ticks({2, 0}));
  EXPECT_EQ(*cert.max_we, ticks({8, 4}));
}

TEST(Lattice, SinglePointIsIdempotent) {
  PriceMap map(e2(Rational(1)));
  const std::vector<PriceVector> one{ticks({2, 1})};
  const auto cert = lattice_check(map, one);
  EXPECT_TRUE(cert.closed());
  EXPECT_TRUE(cert.min_attained);
  EXPECT_FALSE(cert.extremes_match);
}

TEST(Lattice, WeSetIsClosedOnRandomMarkets) {
  for (const Market& m : random_suite(40, 79, MarketShape{3, 3, 5, Rational(1, 2)})) {
    PriceMap map(m);
    const auto cert = lattice_check(map, enumerate_we(m));
    EXPECT_TRUE(cert.closed()) << m.name();
    EXPECT_TRUE(cert.min_attained && cert.max_attained) << m.name();
  }
}

TEST(FixedPointsVsWe, RoundedMidpointCanBeFixed) {
  // Three identical buyers and two goods. At (4.5, 3.5) good a is inverted with
  // S = 5 and I = 4.5; the midpoint 4.75 rounds down onto the input price.
  const Market m = testing::from_rows({{5, 4}, {5, 4}, {5, 4}});
  PriceMap map(m);
  const PriceVector p = ticks({9, 7});
  const auto step = map.step(0, p);
  EXPECT_EQ(step.region, Region::Inverted);
  EXPECT_EQ(step.s, 10);
  EXPECT_EQ(step.i, 9);
  EXPECT_EQ(map.apply(p), p);
  EXPECT_FALSE(check_we(m, p).is_we);
  // Iteration from the bottom stops there, below the only WE vector (5, 4).
  EXPECT_EQ(least_fixed_point(map), p);
  EXPECT_EQ(enumerate_we(m), (std::vector<PriceVector>{ticks({10, 8})}));
}

TEST(Report, SerializesEverything) {
  const Market m = e1();
  PriceMap map(m);
  const auto report = equilibrium_report(map);
  EXPECT_TRUE(report.lattice_certified);
  EXPECT_TRUE(report.counterexamples.empty());
  const auto j = report_json(m, report);
  EXPECT_EQ(j.at("fixed_points"), nlohmann::json::parse("[[3],[3.5],[4],[4.5],[5]]"));
  EXPECT_EQ(j.at("min_we"), nlohmann::json::array({3}));
  EXPECT_EQ(j.at("lattice_certified"), true);
}

TEST(Trace, TableHasOneRowPerStepPerGood) {
  const Market m = e2();
  PriceMap map(m);
  const auto trace = iterate_from(map, ticks({0, 0}), 100);
  EXPECT_EQ(trace_table(m, trace), "step,good,price\n0,a,0\n0,b,0\n1,a,1\n1,b,0\n");
  const auto j = trace_json(m, trace);
  EXPECT_EQ(j.at("final"), nlohmann::json::array({1, 0}));
  EXPECT_EQ(j.at("converged"), true);
}

}  // namespace
}  // namespace walras
