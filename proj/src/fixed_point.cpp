#include "walras/fixed_point.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "walras/demand_analysis.hpp"
#include "walras/errors.hpp"

namespace walras {

namespace {

Direction step_direction(const PriceVector& from, const PriceVector& to) {
  if (from == to) return Direction::None;
  if (from.leq(to)) return Direction::Ascending;
  if (to.leq(from)) return Direction::Descending;
  return Direction::Mixed;
}

Direction combine(Direction acc, Direction step) {
  if (step == Direction::None) return acc;
  if (acc == Direction::None || acc == step) return step;
  return Direction::Mixed;
}

/// Evaluates `keep` over the grid in `jobs` contiguous chunks, preserving grid order.
template <typename MakeWorker>
std::vector<PriceVector> filter_grid(const std::vector<PriceVector>& points, unsigned jobs, MakeWorker&& make) {
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(points.size(), 1))));
  std::vector<std::vector<PriceVector>> parts(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  const std::size_t chunk = (points.size() + jobs - 1) / jobs;
  auto run = [&](unsigned w) {
    try {
      auto keep = make(w);
      const std::size_t lo = std::min(points.size(), w * chunk);
      const std::size_t hi = std::min(points.size(), lo + chunk);
      for (std::size_t k = lo; k < hi; ++k) {
        if (keep(points[k])) parts[w].push_back(points[k]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) workers.emplace_back(run, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<PriceVector> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

bool whole_prices(const Market& market, const PriceVector& p) {
  for (Ticks t : p.ticks()) {
    if (!market.to_price(t).is_integer()) return false;
  }
  return true;
}

}  // namespace

const char* to_string(Direction d) {
  switch (d) {
    case Direction::None:
      return "none";
    case Direction::Ascending:
      return "ascending";
    case Direction::Descending:
      return "descending";
    case Direction::Mixed:
      return "mixed";
  }
  return "none";
}

IterationTrace iterate_from(PriceMap& map, const PriceVector& start, std::size_t max_steps) {
  validate_prices(map.market(), start);
  IterationTrace trace;
  trace.iterates.push_back(start);
  while (true) {
    PriceVector next = map.apply(trace.last());
    if (next == trace.last()) {
      trace.converged = true;
      return trace;
    }
    if (trace.steps == max_steps) return trace;
    trace.direction = combine(trace.direction, step_direction(trace.last(), next));
    trace.iterates.push_back(std::move(next));
    ++trace.steps;
  }
}

PriceVector least_fixed_point(PriceMap& map, std::size_t max_steps) {
  auto trace = iterate_from(map, PriceVector::uniform(map.market().goods(), 0), max_steps);
  if (!trace.converged) throw ConvergenceError("iteration from the bottom did not converge");
  return trace.last();
}

PriceVector greatest_fixed_point(PriceMap& map, std::size_t max_steps) {
  auto trace = iterate_from(map, PriceVector::uniform(map.market().goods(), map.market().cap()), max_steps);
  if (!trace.converged) throw ConvergenceError("iteration from the top did not converge");
  return trace.last();
}

std::uint64_t grid_size(const Market& market) {
  const auto side = static_cast<std::uint64_t>(market.cap()) + 1;
  std::uint64_t total = 1;
  for (std::size_t x = 0; x < market.goods(); ++x) {
    if (total > std::numeric_limits<std::uint64_t>::max() / side) return std::numeric_limits<std::uint64_t>::max();
    total *= side;
  }
  return total;
}

std::vector<PriceVector> grid_points(const Market& market, const EnumerationLimits& limits) {
  const std::uint64_t size = grid_size(market);
  if (size > limits.max_points) {
    throw BudgetExceeded("grid has " + std::to_string(size) + " points; enumeration limit is " +
                         std::to_string(limits.max_points));
  }
  std::vector<PriceVector> out;
  out.reserve(size);
  PriceVector p = PriceVector::uniform(market.goods(), 0);
  for (std::uint64_t k = 0; k < size; ++k) {
    out.push_back(p);
    for (std::size_t x = market.goods(); x-- > 0;) {
      if (p[x] < market.cap()) {
        ++p[x];
        break;
      }
      p[x] = 0;
    }
  }
  return out;
}

std::vector<PriceVector> enumerate_fixed_points(PriceMap& map, const EnumerationLimits& limits) {
  const auto points = grid_points(map.market(), limits);
  std::vector<PriceMap> extra;
  extra.reserve(limits.jobs);
  for (unsigned w = 1; w < limits.jobs; ++w) extra.emplace_back(map.market(), map.options());
  return filter_grid(points, limits.jobs, [&](unsigned w) {
    PriceMap* worker = w == 0 ? &map : &extra[w - 1];
    return [worker](const PriceVector& p) { return worker->apply(p) == p; };
  });
}

std::vector<PriceVector> enumerate_we(const Market& market, const EnumerationLimits& limits) {
  const auto points = grid_points(market, limits);
  return filter_grid(points, limits.jobs, [&](unsigned) {
    return [&market](const PriceVector& p) { return check_we(market, p).is_we; };
  });
}

Prop2Report fixed_point_we_equivalence(PriceMap& map, const EnumerationLimits& limits) {
  Prop2Report r;
  r.fixed_points = enumerate_fixed_points(map, limits);
  r.we_points = enumerate_we(map.market(), limits);
  std::set_difference(r.fixed_points.begin(), r.fixed_points.end(), r.we_points.begin(), r.we_points.end(),
                      std::back_inserter(r.fixed_not_we));
  std::set_difference(r.we_points.begin(), r.we_points.end(), r.fixed_points.begin(), r.fixed_points.end(),
                      std::back_inserter(r.we_not_fixed));
  for (const auto* diff : {&r.fixed_not_we, &r.we_not_fixed}) {
    for (const auto& p : *diff) {
      if (whole_prices(map.market(), p)) {
        ++r.integer_discrepancies;
      } else {
        ++r.off_integer_discrepancies;
      }
    }
  }
  return r;
}

LatticeCertificate lattice_check(PriceMap& map, std::span<const PriceVector> sample, std::size_t max_steps) {
  const Market& market = map.market();
  LatticeCertificate cert;
  for (std::size_t a = 0; a < sample.size(); ++a) {
    for (std::size_t b = a; b < sample.size(); ++b) {
      ++cert.pairs_checked;
      if (!check_we(market, meet(sample[a], sample[b])).is_we) cert.meet_failures.emplace_back(sample[a], sample[b]);
      if (!check_we(market, join(sample[a], sample[b])).is_we) cert.join_failures.emplace_back(sample[a], sample[b]);
    }
  }
  if (!sample.empty()) {
    PriceVector lo = sample.front();
    PriceVector hi = sample.front();
    for (const auto& p : sample) {
      lo = meet(lo, p);
      hi = join(hi, p);
    }
    cert.min_attained = std::find(sample.begin(), sample.end(), lo) != sample.end();
    cert.max_attained = std::find(sample.begin(), sample.end(), hi) != sample.end();
    cert.min_we = lo;
    cert.max_we = hi;
  }
  cert.least_fixed_point = least_fixed_point(map, max_steps);
  cert.greatest_fixed_point = greatest_fixed_point(map, max_steps);
  cert.extremes_match = cert.min_we && cert.least_fixed_point == *cert.min_we &&
                        cert.greatest_fixed_point == *cert.max_we;
  return cert;
}

EquilibriumReport equilibrium_report(PriceMap& map, const EnumerationLimits& limits) {
  EquilibriumReport report;
  report.tick = map.market().tick();
  auto fixed_points_are_we = fixed_point_we_equivalence(map, limits);
  report.fixed_points = std::move(fixed_points_are_we.fixed_points);
  report.we_points = std::move(fixed_points_are_we.we_points);
  report.lattice = lattice_check(map, report.we_points);
  report.min_we = report.lattice.min_we;
  report.max_we = report.lattice.max_we;
  report.counterexamples = fixed_points_are_we.fixed_not_we;
  report.counterexamples.insert(report.counterexamples.end(), fixed_points_are_we.we_not_fixed.begin(), fixed_points_are_we.we_not_fixed.end());
  for (const auto& [p, q] : report.lattice.meet_failures) report.counterexamples.push_back(meet(p, q));
  for (const auto& [p, q] : report.lattice.join_failures) report.counterexamples.push_back(join(p, q));
  report.lattice_certified = report.lattice.certified() && fixed_points_are_we.equivalent();
  return report;
}

nlohmann::json points_json(const Market& market, std::span<const PriceVector> points) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : points) out.push_back(prices_json(market, p.ticks()));
  return out;
}

nlohmann::json trace_json(const Market& market, const IterationTrace& trace) {
  nlohmann::json j;
  j["start"] = prices_json(market, trace.start().ticks());
  j["iterates"] = points_json(market, trace.iterates);
  j["steps"] = trace.steps;
  j["direction"] = to_string(trace.direction);
  j["converged"] = trace.converged;
  j["final"] = prices_json(market, trace.last().ticks());
  return j;
}

std::string trace_table(const Market& market, const IterationTrace& trace) {
  std::ostringstream os;
  os << "step,good,price\n";
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    for (std::size_t x = 0; x < market.goods(); ++x) {
      os << k << ',' << market.good_ids()[x] << ',' << market.to_price(trace.iterates[k][x]).to_string() << '\n';
    }
  }
  return os.str();
}

nlohmann::json lattice_json(const Market& market, const LatticeCertificate& cert) {
  auto pairs = [&](const std::vector<std::pair<PriceVector, PriceVector>>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [p, q] : v) out.push_back({prices_json(market, p.ticks()), prices_json(market, q.ticks())});
    return out;
  };
  nlohmann::json j;
  j["pairs_checked"] = cert.pairs_checked;
  j["meet_failures"] = pairs(cert.meet_failures);
  j["join_failures"] = pairs(cert.join_failures);
  j["min_we"] = cert.min_we ? prices_json(market, cert.min_we->ticks()) : nlohmann::json(nullptr);
  j["max_we"] = cert.max_we ? prices_json(market, cert.max_we->ticks()) : nlohmann::json(nullptr);
  j["min_attained"] = cert.min_attained;
  j["max_attained"] = cert.max_attained;
  j["least_fixed_point"] = prices_json(market, cert.least_fixed_point.ticks());
  j["greatest_fixed_point"] = prices_json(market, cert.greatest_fixed_point.ticks());
  j["extremes_match"] = cert.extremes_match;
  j["closed_under_meet_join"] = cert.closed();
  j["certified"] = cert.certified();
  return j;
}

nlohmann::json report_json(const Market& market, const EquilibriumReport& report) {
  nlohmann::json j;
  j["tick"] = report.tick.to_string();
  j["fixed_points"] = points_json(market, report.fixed_points);
  j["we_points"] = points_json(market, report.we_points);
  j["min_we"] = report.min_we ? prices_json(market, report.min_we->ticks()) : nlohmann::json(nullptr);
  j["max_we"] = report.max_we ? prices_json(market, report.max_we->ticks()) : nlohmann::json(nullptr);
  j["lattice_certified"] = report.lattice_certified;
  j["counterexamples"] = points_json(market, report.counterexamples);
  j["lattice"] = lattice_json(market, report.lattice);
  return j;
}

}  // namespace walras
