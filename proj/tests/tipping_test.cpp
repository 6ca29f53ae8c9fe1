#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "walras/errors.hpp"
#include "walras/generator.hpp"
#include "walras/oracle.hpp"
#include "walras/tipping.hpp"

namespace walras {
namespace {

using testing::e1;
using testing::e2;
using Others = std::vector<Ticks>;

const Others kNone{};

TEST(SupO, WorkedExamples) {
  TippingEvaluator t1(e1());
  EXPECT_EQ(t1.sup_o(0, kNone), 6);
  TippingEvaluator t2(e2());
  EXPECT_EQ(t2.sup_o(0, Others{0}), 2);
  EXPECT_EQ(t2.sup_o(1, Others{0}), 0);
}

TEST(InfU, WorkedExamples) {
  TippingEvaluator t1(e1());
  EXPECT_EQ(t1.inf_u(0, kNone), 10);
  TippingEvaluator t2(e2());
  EXPECT_EQ(t2.inf_u(0, Others{0}), 6);
  EXPECT_EQ(t2.inf_u(1, Others{2}), 0);
}

TEST(InfU, WithinCapScanCanBeUndefined) {
  TippingOptions options;
  options.inf_u_scan = InfUScan::WithinCap;
  TippingEvaluator t(e1(), options);
  EXPECT_FALSE(t.inf_u(0, kNone).has_value());
  EXPECT_EQ(t.inf_u_or_sentinel(0, kNone), 11);
  // The neutral price I is capped at H either way.
  EXPECT_EQ(t.neutral_i(0, kNone), 10);
}

TEST(Neutral, WorkedExamples) {
  TippingEvaluator t1(e1());
  EXPECT_EQ(t1.neutral_s(0, kNone), 6);
  EXPECT_EQ(t1.neutral_i(0, kNone), 10);
  TippingEvaluator t2(e2());
  EXPECT_EQ(t2.neutral_s(0, Others{0}), 2);
  EXPECT_EQ(t2.neutral_s(1, Others{0}), 0);
  EXPECT_EQ(t2.neutral_i(0, Others{0}), 6);
}

TEST(Neutral, DegenerateMarket) {
  TippingEvaluator t(testing::from_rows({{0}}));
  EXPECT_EQ(t.sup_o(0, kNone), 0);
  EXPECT_EQ(t.inf_u(0, kNone), 0);
  EXPECT_EQ(t.neutral_s(0, kNone), 0);
  EXPECT_EQ(t.neutral_i(0, kNone), 0);
}

TEST(Profile, SerializesWithNullForMissingInfU) {
  const Market m = e1();
  TippingEvaluator t(m);
  const auto j = tipping_json(m, t.profile(0, kNone));
  EXPECT_EQ(j.at("sup_O"), 3);
  EXPECT_EQ(j.at("inf_U"), 5);
  EXPECT_EQ(j.at("S"), 3);
  EXPECT_EQ(j.at("I"), 5);
  EXPECT_EQ(j.at("good"), "a");

  TippingOptions within;
  within.inf_u_scan = InfUScan::WithinCap;
  TippingEvaluator w(m, within);
  EXPECT_TRUE(tipping_json(m, w.profile(0, kNone)).at("inf_U").is_null());
}

TEST(Tipping, RejectsMalformedBasePrices) {
  TippingEvaluator t(e2());
  EXPECT_THROW(t.sup_o(0, Others{}), InputError);
  EXPECT_THROW(t.sup_o(0, Others{9}), InputError);
  EXPECT_THROW(t.neutral_s(2, Others{0}), InputError);
}

TEST(Tipping, BudgetIsEnforced) {
  TippingOptions options;
  options.budget = 3;
  TippingEvaluator t(e2(), options);
  EXPECT_THROW(t.neutral_s(0, Others{0}), BudgetExceeded);
}

// Box search for S and I written directly from the definitions with the oracle.
Ticks ref_neutral_s(const Market& m, std::size_t a, const Others& base) {
  for (Ticks own = 0; own <= m.cap(); ++own) {
    for (const PriceVector& q : oracle::grid(m)) {
      if (q[a] != own) continue;
      const Others q_others = q.without(a);
      bool above = true;
      for (std::size_t k = 0; k < base.size(); ++k) above = above && q_others[k] >= base[k];
      if (!above) continue;
      if (own >= testing::ref_sup_o(m, a, q_others) && !oracle::any_overdemanded(m, q)) return own;
    }
  }
  ADD_FAILURE() << "no feasible point";
  return -1;
}

Ticks ref_neutral_i(const Market& m, std::size_t a, const Others& base) {
  for (Ticks own = 0; own < m.cap(); ++own) {
    for (const PriceVector& q : oracle::grid(m)) {
      if (q[a] != own) continue;
      const Others q_others = q.without(a);
      bool above = true;
      for (std::size_t k = 0; k < base.size(); ++k) above = above && q_others[k] >= base[k];
      if (!above) continue;
      const auto floor = testing::ref_inf_u(m, a, q_others);
      if (floor && own >= *floor && !oracle::any_underdemanded(m, q)) return own;
    }
  }
  return m.cap();
}

TEST(Tipping, MatchesReferenceOnRandomMarkets) {
  std::mt19937_64 rng(17);
  for (const Market& m : random_suite(40, 31, MarketShape{3, 2, 4, Rational(1, 2)})) {
    TippingEvaluator t(m);
    for (int k = 0; k < 4; ++k) {
      const PriceVector p = random_prices(m, rng);
      for (std::size_t a = 0; a < m.goods(); ++a) {
        const Others base = p.without(a);
        ASSERT_EQ(t.sup_o(a, base), testing::ref_sup_o(m, a, base)) << m.name();
        ASSERT_EQ(t.inf_u(a, base), testing::ref_inf_u(m, a, base)) << m.name();
        ASSERT_EQ(t.neutral_s(a, base), ref_neutral_s(m, a, base)) << m.name();
        ASSERT_EQ(t.neutral_i(a, base), ref_neutral_i(m, a, base)) << m.name();
      }
    }
  }
}

TEST(Tipping, ContainingGoodReadingMatchesReference) {
  TippingOptions options;
  options.minimality = Minimality::ContainingGood;
  std::mt19937_64 rng(19);
  for (const Market& m : random_suite(30, 37, MarketShape{3, 2, 4, Rational(1, 2)})) {
    TippingEvaluator t(m, options);
    const PriceVector p = random_prices(m, rng);
    for (std::size_t a = 0; a < m.goods(); ++a) {
      const Others base = p.without(a);
      EXPECT_EQ(t.sup_o(a, base), testing::ref_sup_o(m, a, base, Minimality::ContainingGood));
      EXPECT_EQ(t.inf_u(a, base), testing::ref_inf_u(m, a, base, Minimality::ContainingGood));
    }
  }
}

TEST(Tipping, NeutralPricesDominateTippingPrices) {
  std::mt19937_64 rng(29);
  for (const Market& m : random_suite(60, 41, MarketShape{3, 3, 6, Rational(1, 2)})) {
    TippingEvaluator t(m);
    for (int k = 0; k < 5; ++k) {
      const PriceVector p = random_prices(m, rng);
      for (std::size_t a = 0; a < m.goods(); ++a) {
        const auto prof = t.profile(a, p.without(a));
        EXPECT_GE(prof.s, prof.sup_o);
        EXPECT_LE(prof.s, m.cap());
        EXPECT_LE(prof.i, m.cap());
        EXPECT_GE(prof.i, std::min(t.inf_u_or_sentinel(a, p.without(a)), m.cap()));
        if (prof.inf_u) {
          EXPECT_GE(*prof.inf_u, prof.sup_o);
        }
      }
    }
  }
}

TEST(Tipping, SCoversSupOUnderBothAnchors) {
  TippingOptions base;
  base.sup_o_anchor = SupOAnchor::Base;
  std::mt19937_64 rng(43);
  for (const Market& m : random_suite(40, 47, MarketShape{3, 3, 6, Rational(1, 2)})) {
    TippingEvaluator query(m);
    TippingEvaluator anchored(m, base);
    const PriceVector p = random_prices(m, rng);
    for (std::size_t a = 0; a < m.goods(); ++a) {
      EXPECT_GE(anchored.neutral_s(a, p.without(a)), anchored.sup_o(a, p.without(a)));
      EXPECT_GE(query.neutral_s(a, p.without(a)), query.sup_o(a, p.without(a)));
    }
  }
}

}  // namespace
}  // namespace walras
