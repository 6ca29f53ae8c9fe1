// Command-line front end for the assignment-market equilibrium tools.
//
// Exit codes: 0 success, 1 budget or convergence failure, 2 usage or input
// error, 3 property failure in selfcheck.

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "walras/demand_analysis.hpp"
#include "walras/errors.hpp"
#include "walras/fixed_point.hpp"
#include "walras/generator.hpp"
#include "walras/market.hpp"
#include "walras/price_map.hpp"
#include "walras/properties.hpp"
#include "walras/tipping.hpp"

namespace {

using nlohmann::json;
using namespace walras;

constexpr const char* kToolVersion = "0.1.0";

enum class Format { Json, Table };

struct RunConfig {
  std::string market_path;
  std::string price;
  bool price_given = false;
  std::string good;
  std::string delta;
  std::string from = "bottom";
  std::size_t trials = 200;
  std::uint64_t seed = 7;
  std::size_t buyers = 3;
  std::size_t goods = 3;
  std::int64_t max_value = 6;
  std::size_t samples = 50;
  std::size_t pairs = 10;
  std::string out;
  Format format = Format::Json;
  std::size_t max_steps = 100'000;
  unsigned jobs = 1;
  std::uint64_t max_points = 1'000'000;
  std::uint64_t budget = 50'000'000;
  Minimality minimality = Minimality::InclusionMinimal;
  SupOAnchor sup_o_anchor = SupOAnchor::Query;
  InfUScan inf_u_scan = InfUScan::ThroughCap;
  MissingInfU missing_inf_u = MissingInfU::Exclude;
};

/// Thrown to leave with a specific exit code after output has been written.
struct Exit {
  int code;
};

std::string sha256_hex(const std::string& text) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_Digest(text.data(), text.size(), digest.data(), &length, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int k = 0; k < length; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", digest[k]);
    hex += buf;
  }
  return hex;
}

TippingOptions tipping_options(const RunConfig& c) {
  TippingOptions o;
  o.minimality = c.minimality;
  o.sup_o_anchor = c.sup_o_anchor;
  o.inf_u_scan = c.inf_u_scan;
  o.missing_inf_u = c.missing_inf_u;
  o.budget = c.budget;
  return o;
}

EnumerationLimits limits(const RunConfig& c) { return {c.max_points, c.jobs}; }

Market load(const RunConfig& c) {
  if (c.market_path.empty()) throw InputError("--market is required");
  Market market = load_market_file(c.market_path);
  if (!c.delta.empty()) market = market.with_tick(Rational::parse(c.delta));
  return market;
}

PriceVector full_prices(const Market& market, const RunConfig& c) {
  if (!c.price_given) throw InputError("--price is required");
  PriceVector p(parse_price_list(market, c.price));
  validate_prices(market, p);
  return p;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(c.out);
  if (!file) throw InputError("cannot write " + c.out);
  file << text;
}

void emit_json(const RunConfig& c, const std::string& command, const std::optional<Market>& market, json result) {
  json doc;
  doc["tool_version"] = kToolVersion;
  doc["market_digest"] = market ? json(sha256_hex(market_to_json(*market).dump())) : json(nullptr);
  doc["command"] = command;
  doc["result"] = std::move(result);
  emit(c, doc.dump(2) + "\n");
}

void require_json(const RunConfig& c, const std::string& command) {
  if (c.format == Format::Table) throw InputError("--format table is not available for " + command);
}

std::string points_table(const Market& market, const std::vector<PriceVector>& points) {
  std::ostringstream os;
  for (std::size_t x = 0; x < market.goods(); ++x) os << (x ? "," : "") << market.good_ids()[x];
  os << '\n';
  for (const auto& p : points) {
    for (std::size_t x = 0; x < market.goods(); ++x) os << (x ? "," : "") << market.to_price(p[x]).to_string();
    os << '\n';
  }
  return os.str();
}

json demand_json(const Market& market, const DemandProfile& d) {
  json rows = json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    json goods = json::array();
    for (std::size_t x : d[i].goods.indices()) goods.push_back(market.good_ids()[x]);
    rows.push_back({{"buyer", market.buyer_ids()[i]}, {"goods", goods}, {"dummy", d[i].dummy}});
  }
  return rows;
}

json allocation_json(const Market& market, const std::optional<Allocation>& a) {
  if (!a) return nullptr;
  json out = json::array();
  for (std::size_t i = 0; i < a->assignment.size(); ++i) {
    const auto& x = a->assignment[i];
    out.push_back({{"buyer", market.buyer_ids()[i]}, {"good", x ? json(market.good_ids()[*x]) : json(nullptr)}});
  }
  return out;
}

json goodset_json(const Market& market, const std::optional<GoodSet>& s) {
  if (!s) return nullptr;
  json out = json::array();
  for (std::size_t x : s->indices()) out.push_back(market.good_ids()[x]);
  return out;
}

void cmd_demand(const RunConfig& c) {
  const Market market = load(c);
  const PriceVector p = full_prices(market, c);
  const auto d = demand(market, p);
  if (c.format == Format::Table) {
    std::ostringstream os;
    os << "buyer,demand\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
      os << market.buyer_ids()[i] << ',';
      std::string sep;
      for (std::size_t x : d[i].goods.indices()) {
        os << sep << market.good_ids()[x];
        sep = " ";
      }
      if (d[i].dummy) os << sep << "0";
      os << '\n';
    }
    emit(c, os.str());
    return;
  }
  emit_json(c, "demand", market, {{"prices", prices_json(market, p.ticks())}, {"demand", demand_json(market, d)}});
}

void cmd_analyze(const RunConfig& c) {
  require_json(c, "analyze");
  const Market market = load(c);
  const PriceVector p = full_prices(market, c);
  const auto state = demand_state(market, p);
  const auto over = exists_overdemanded(state);
  const auto under = exists_underdemanded(state);
  const auto we = check_we(state);
  json minimal = json::array();
  if (market.goods() <= kMaxEnumeratedGoods) {
    const SubsetTable table(state);
    for (std::size_t x = 0; x < market.goods(); ++x) {
      minimal.push_back({{"good", market.good_ids()[x]},
                         {"minimally_overdemanded", goodset_json(market, table.minimal_over(x, c.minimality))},
                         {"minimally_underdemanded", goodset_json(market, table.minimal_under(x, c.minimality))}});
    }
  }
  json result;
  result["prices"] = prices_json(market, p.ticks());
  result["verdict"] = over.verdict != Verdict::None ? "over" : (under.verdict != Verdict::None ? "under" : "none");
  result["overdemand"] = certificate_json(market, over);
  result["underdemand"] = certificate_json(market, under);
  result["minimal"] = std::move(minimal);
  result["walrasian"] = we.is_we;
  result["walrasian_by_characterization"] = over.verdict == Verdict::None && under.verdict == Verdict::None;
  result["allocation"] = allocation_json(market, we.allocation);
  emit_json(c, "analyze", market, std::move(result));
}

std::vector<std::size_t> selected_goods(const Market& market, const RunConfig& c) {
  if (!c.good.empty()) return {market.good_index(c.good)};
  std::vector<std::size_t> all;
  for (std::size_t x = 0; x < market.goods(); ++x) all.push_back(x);
  return all;
}

void cmd_tipping(const RunConfig& c) {
  require_json(c, "tipping");
  const Market market = load(c);
  if (c.good.empty()) throw InputError("--good is required");
  const std::size_t a = market.good_index(c.good);
  auto prices = parse_price_list(market, c.price);
  std::vector<Ticks> others;
  if (prices.size() == market.goods()) {
    validate_prices(market, PriceVector(prices));
    others = PriceVector(prices).without(a);
  } else if (prices.size() + 1 == market.goods()) {
    others = prices;
  } else {
    throw InputError("--price needs either all " + std::to_string(market.goods()) + " prices or the " +
                     std::to_string(market.goods() - 1) + " prices of the other goods");
  }
  TippingEvaluator tipping(market, tipping_options(c));
  emit_json(c, "tipping", market, tipping_json(market, tipping.profile(a, others)));
}

void cmd_map(const RunConfig& c) {
  require_json(c, "map");
  const Market market = load(c);
  const PriceVector p = full_prices(market, c);
  PriceMap map(market, tipping_options(c));
  std::vector<CoordinateStep> steps;
  for (std::size_t a = 0; a < market.goods(); ++a) steps.push_back(map.step(a, p));
  emit_json(c, "map", market, map_json(market, p, steps));
}

void cmd_region(const RunConfig& c) {
  require_json(c, "region");
  const Market market = load(c);
  const PriceVector p = full_prices(market, c);
  PriceMap map(market, tipping_options(c));
  json rows = json::array();
  for (std::size_t a : selected_goods(market, c)) {
    const auto s = map.step(a, p);
    rows.push_back({{"good", market.good_ids()[a]},
                    {"region", to_string(s.region)},
                    {"colour", colour(s.region)},
                    {"S", price_json(market, s.s)},
                    {"I", price_json(market, s.i)}});
  }
  emit_json(c, "region", market, {{"prices", prices_json(market, p.ticks())}, {"regions", rows}});
}

void cmd_iterate(const RunConfig& c) {
  const Market market = load(c);
  PriceVector start;
  if (c.from == "bottom") {
    start = PriceVector::uniform(market.goods(), 0);
  } else if (c.from == "top") {
    start = PriceVector::uniform(market.goods(), market.cap());
  } else {
    start = PriceVector(parse_price_list(market, c.from));
    validate_prices(market, start);
  }
  PriceMap map(market, tipping_options(c));
  const auto trace = iterate_from(map, start, c.max_steps);
  const std::string summary = trace.converged
                                  ? "fixed point reached in " + std::to_string(trace.steps) + " steps"
                                  : "no fixed point within " + std::to_string(trace.steps) + " steps";
  if (c.format == Format::Table) {
    emit(c, trace_table(market, trace));
  } else {
    json result = trace_json(market, trace);
    result["summary"] = summary;
    emit_json(c, "iterate", market, std::move(result));
  }
  std::cerr << summary << '\n';
  if (!trace.converged) throw Exit{1};
}

void cmd_fixpoints(const RunConfig& c) {
  const Market market = load(c);
  PriceMap map(market, tipping_options(c));
  const auto points = enumerate_fixed_points(map, limits(c));
  if (c.format == Format::Table) {
    emit(c, points_table(market, points));
    return;
  }
  json result;
  result["tick"] = market.tick().to_string();
  result["count"] = points.size();
  result["fixed_points"] = points_json(market, points);
  result["least_fixed_point"] = prices_json(market, least_fixed_point(map, c.max_steps).ticks());
  result["greatest_fixed_point"] = prices_json(market, greatest_fixed_point(map, c.max_steps).ticks());
  emit_json(c, "fixpoints", market, std::move(result));
}

void cmd_equilibria(const RunConfig& c) {
  const Market market = load(c);
  const auto points = enumerate_we(market, limits(c));
  if (c.format == Format::Table) {
    emit(c, points_table(market, points));
    return;
  }
  PriceMap map(market, tipping_options(c));
  const auto cert = lattice_check(map, points, c.max_steps);
  json result;
  result["tick"] = market.tick().to_string();
  result["count"] = points.size();
  result["we_points"] = points_json(market, points);
  result["min_we"] = cert.min_we ? prices_json(market, cert.min_we->ticks()) : json(nullptr);
  result["max_we"] = cert.max_we ? prices_json(market, cert.max_we->ticks()) : json(nullptr);
  result["lattice_certified"] = cert.certified();
  result["lattice"] = lattice_json(market, cert);
  emit_json(c, "equilibria", market, std::move(result));
}

void cmd_lattice_check(const RunConfig& c) {
  require_json(c, "lattice-check");
  const Market market = load(c);
  PriceMap map(market, tipping_options(c));
  emit_json(c, "lattice-check", market, report_json(market, equilibrium_report(map, limits(c))));
}

void cmd_gen(const RunConfig& c) {
  require_json(c, "gen");
  MarketShape shape;
  shape.buyers = c.buyers;
  shape.goods = c.goods;
  shape.max_value = c.max_value;
  if (!c.delta.empty()) shape.tick = Rational::parse(c.delta);
  if (shape.buyers == 0 || shape.goods == 0) throw InputError("--buyers and --goods must be positive");
  if (shape.max_value < 0) throw InputError("--max-value must be non-negative");
  emit(c, market_to_json(random_market(shape, c.seed)).dump(2) + "\n");
}

void cmd_selfcheck(const RunConfig& c) {
  SelfcheckConfig config;
  config.trials = c.trials;
  config.seed = c.seed;
  config.caps.buyers = c.buyers;
  config.caps.goods = c.goods;
  config.caps.max_value = c.max_value;
  if (!c.delta.empty()) config.caps.tick = Rational::parse(c.delta);
  config.samples = c.samples;
  config.pairs = c.pairs;
  config.options = tipping_options(c);
  config.jobs = c.jobs;
  if (config.caps.buyers == 0 || config.caps.goods == 0) throw InputError("--buyers and --goods must be positive");
  const auto tallies = run_selfcheck(config);
  bool ok = true;
  for (const auto& t : tallies) ok = ok && t.passed();
  if (c.format == Format::Table) {
    std::ostringstream os;
    os << "property,checks,violations,passed\n";
    for (const auto& t : tallies) {
      os << t.name << ',' << t.checks << ',' << t.violations << ',' << (t.passed() ? "yes" : "no") << '\n';
    }
    emit(c, os.str());
  } else {
    json props = json::array();
    for (const auto& t : tallies) props.push_back(tally_json(t));
    json result;
    result["trials"] = c.trials;
    result["seed"] = c.seed;
    result["caps"] = {{"buyers", c.buyers}, {"goods", c.goods}, {"max_value", c.max_value}};
    result["properties"] = std::move(props);
    result["passed"] = ok;
    emit_json(c, "selfcheck", std::nullopt, std::move(result));
  }
  if (!ok) throw Exit{3};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Walrasian equilibria of unit-demand assignment markets via a monotone price map"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  RunConfig c;

  const std::map<std::string, Format> formats{{"json", Format::Json}, {"table", Format::Table}};
  const std::map<std::string, Minimality> minimality{{"inclusion", Minimality::InclusionMinimal},
                                                     {"containing", Minimality::ContainingGood}};
  const std::map<std::string, SupOAnchor> anchors{{"query", SupOAnchor::Query}, {"base", SupOAnchor::Base}};
  const std::map<std::string, InfUScan> scans{{"through-cap", InfUScan::ThroughCap},
                                              {"within-cap", InfUScan::WithinCap}};
  const std::map<std::string, MissingInfU> missing{{"exclude", MissingInfU::Exclude},
                                                   {"vacuous", MissingInfU::Vacuous}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "Write output to PATH instead of stdout");
    sub->add_option("--format", c.format, "json or table")->transform(CLI::CheckedTransformer(formats));
  };
  auto with_market = [&](CLI::App* sub) {
    sub->add_option("--market", c.market_path, "Market document (JSON)")->required();
    sub->add_option("--delta", c.delta, "Grid tick override, e.g. 1/2 or 0.25");
    common(sub);
  };
  auto with_price = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
        "--price", [&](const std::string& v) { c.price = v; c.price_given = true; }, "Comma-separated prices");
  };
  auto with_readings = [&](CLI::App* sub) {
    sub->add_option("--minimality", c.minimality, "inclusion (default) or containing")
        ->transform(CLI::CheckedTransformer(minimality));
    sub->add_option("--sup-o-anchor", c.sup_o_anchor, "query (default) or base")
        ->transform(CLI::CheckedTransformer(anchors));
    sub->add_option("--inf-u-scan", c.inf_u_scan, "through-cap (default) or within-cap")
        ->transform(CLI::CheckedTransformer(scans));
    sub->add_option("--missing-inf-u", c.missing_inf_u, "exclude (default) or vacuous")
        ->transform(CLI::CheckedTransformer(missing));
    sub->add_option("--budget", c.budget, "Predicate evaluations allowed per neutral-price search");
  };
  auto with_enumeration = [&](CLI::App* sub) {
    sub->add_option("--max-points", c.max_points, "Largest grid that may be enumerated");
    sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1U, 256U));
    sub->add_option("--max-steps", c.max_steps, "Iteration step limit");
  };

  auto* demand_cmd = app.add_subcommand("demand", "Demand sets at a price vector");
  with_market(demand_cmd);
  with_price(demand_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Over/underdemand certificates and the WE check");
  with_market(analyze_cmd);
  with_price(analyze_cmd);
  analyze_cmd->add_option("--minimality", c.minimality, "inclusion (default) or containing")
      ->transform(CLI::CheckedTransformer(minimality));

  auto* tipping_cmd = app.add_subcommand("tipping", "Tipping and neutral prices of one good");
  with_market(tipping_cmd);
  with_price(tipping_cmd);
  tipping_cmd->add_option("--good", c.good, "Good id")->required();
  with_readings(tipping_cmd);

  auto* map_cmd = app.add_subcommand("map", "One application of the price-adjusting function");
  with_market(map_cmd);
  with_price(map_cmd);
  with_readings(map_cmd);

  auto* region_cmd = app.add_subcommand("region", "Region of each coordinate");
  with_market(region_cmd);
  with_price(region_cmd);
  region_cmd->add_option("--good", c.good, "Restrict to one good");
  with_readings(region_cmd);

  auto* iterate_cmd = app.add_subcommand("iterate", "Iterate the price map to a fixed point");
  with_market(iterate_cmd);
  iterate_cmd->add_option("--from", c.from, "bottom, top, or a comma-separated price vector");
  iterate_cmd->add_option("--max-steps", c.max_steps, "Iteration step limit");
  with_readings(iterate_cmd);

  auto* fix_cmd = app.add_subcommand("fixpoints", "Every grid fixed point of the price map");
  with_market(fix_cmd);
  with_readings(fix_cmd);
  with_enumeration(fix_cmd);

  auto* eq_cmd = app.add_subcommand("equilibria", "Every grid Walrasian price vector");
  with_market(eq_cmd);
  with_readings(eq_cmd);
  with_enumeration(eq_cmd);

  auto* lattice_cmd = app.add_subcommand("lattice-check", "Fixed points vs WE prices and lattice certificate");
  with_market(lattice_cmd);
  with_readings(lattice_cmd);
  with_enumeration(lattice_cmd);

  auto* gen_cmd = app.add_subcommand("gen", "Generate a random market document");
  gen_cmd->add_option("--buyers", c.buyers, "Number of buyers");
  gen_cmd->add_option("--goods", c.goods, "Number of goods");
  gen_cmd->add_option("--max-value", c.max_value, "Largest valuation");
  gen_cmd->add_option("--seed", c.seed, "Random seed");
  gen_cmd->add_option("--delta", c.delta, "Grid tick of the generated market");
  common(gen_cmd);

  auto* self_cmd = app.add_subcommand("selfcheck", "Run the property suites on seeded random markets");
  self_cmd->add_option("--trials", c.trials, "Number of random markets");
  self_cmd->add_option("--seed", c.seed, "Random seed");
  self_cmd->add_option("--buyers", c.buyers, "Largest buyer count");
  self_cmd->add_option("--goods", c.goods, "Largest good count");
  self_cmd->add_option("--max-value", c.max_value, "Largest valuation");
  self_cmd->add_option("--samples", c.samples, "Random points per market");
  self_cmd->add_option("--pairs", c.pairs, "Random ordered pairs per market");
  self_cmd->add_option("--delta", c.delta, "Grid tick of the random markets");
  self_cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1U, 256U));
  with_readings(self_cmd);
  common(self_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*demand_cmd) cmd_demand(c);
    if (*analyze_cmd) cmd_analyze(c);
    if (*tipping_cmd) cmd_tipping(c);
    if (*map_cmd) cmd_map(c);
    if (*region_cmd) cmd_region(c);
    if (*iterate_cmd) cmd_iterate(c);
    if (*fix_cmd) cmd_fixpoints(c);
    if (*eq_cmd) cmd_equilibria(c);
    if (*lattice_cmd) cmd_lattice_check(c);
    if (*gen_cmd) cmd_gen(c);
    if (*self_cmd) cmd_selfcheck(c);
  } catch (const Exit& e) {
    return e.code;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
