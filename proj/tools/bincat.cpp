// bincat: mean extinction times of colonies under binomial catastrophes.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bincat/closed_forms.hpp"
#include "bincat/comparator.hpp"
#include "bincat/errors.hpp"
#include "bincat/simulator.hpp"

using namespace bincat;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kOutOfRegime = 3, kIndeterminate = 4 };

struct ExitWith {
  int code;
};

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Table of string cells; numeric cells also kept as doubles for JSON.
struct Cell {
  std::string text;
  std::optional<double> number;
};

Cell num(double x) { return {fmt(x), std::isfinite(x) ? std::optional<double>(x) : std::nullopt}; }
Cell txt(std::string s) { return {std::move(s), std::nullopt}; }
Cell integer(long long v) { return {std::to_string(v), static_cast<double>(v)}; }

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json extra = json::object();

  void write(std::ostream& out, bool as_json) const {
    if (as_json) {
      json doc{{"schema", 1}, {"command", command}, {"rows", json::array()}};
      for (std::size_t r = 0; r < rows.size(); ++r) {
        json row = json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) {
          const Cell& cell = rows[r][c];
          // integers stay integers, everything else keeps 17 digits via the text form
          if (cell.number && std::floor(*cell.number) == *cell.number && std::fabs(*cell.number) < 1e15) {
            row[columns[c]] = static_cast<long long>(*cell.number);
          } else if (cell.number) {
            row[columns[c]] = *cell.number;
          } else {
            row[columns[c]] = cell.text;
          }
        }
        if (r < extra.size() && extra.is_array()) row.update(extra[r]);
        doc["rows"].push_back(row);
      }
      out << doc.dump(2) << "\n";
      return;
    }
    out << "# schema=1\n";
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c].text;
      out << "\n";
    }
  }
};

ModelParams parse_params(const std::string& lambda, const std::string& p) {
  return ModelParams(parse_rational(lambda), parse_rational(p));
}

Topology parse_model(const std::string& model) {
  if (model == "A") return Topology::no_dispersion();
  if (model == "d2" || model == "2") return Topology::tree(2);
  if (model == "d3" || model == "3") return Topology::tree(3);
  if (model == "star" || model == "*") return Topology::free();
  throw InvalidParams("unknown model '" + model + "'");
}

std::string d_label(const Topology& t) { return t.kind() == Topology::Kind::Free ? "star" : std::to_string(t.d()); }
std::string tau_label(const Topology& t) { return t.kind() == Topology::Kind::Free ? "*" : std::to_string(t.d()); }

std::string regime_text(Regime r) {
  switch (r) {
    case Regime::SubcriticalFiniteMean:
      return "finite";
    case Regime::CriticalInfiniteMean:
      return "infinite (critical)";
    case Regime::SupercriticalSurvival:
      break;
  }
  return "survives-with-positive-probability";
}

CertifiedInterval dispersion_mean(const ModelParams& m, const Topology& t) {
  CertifiedInterval rhs;
  if (t.kind() == Topology::Kind::Free) {
    rhs = comparison_rhs_free(m);
  } else if (t.d() == 2) {
    rhs = comparison_rhs_tree2(m);
  } else {
    rhs = comparison_rhs_tree3(m);
  }
  return interval::div(interval::sub(rhs, {1, 1}), m.lambda_enclosure());
}

std::pair<double, double> outward(const CertifiedInterval& x) {
  return {interval::lower_double(x.lo), interval::upper_double(x.hi)};
}

std::pair<double, double> range_arg(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidParams(std::string(what) + " must be lo:hi");
  const auto lo = parse_rational(text.substr(0, colon));
  const auto hi = parse_rational(text.substr(colon + 1));
  return {static_cast<double>(to_long_double(lo)), static_cast<double>(to_long_double(hi))};
}

void emit(const Table& table, bool as_json, const std::string& out_file) {
  if (out_file.empty()) {
    table.write(std::cout, as_json);
    return;
  }
  std::ofstream f(out_file);
  if (!f) throw InvalidParams("cannot open '" + out_file + "' for writing");
  table.write(f, as_json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean extinction times under binomial catastrophes"};
  app.require_subcommand(1);
  std::string format = "csv";
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string model, lambda_text, p_text, d_text;
  std::optional<int> terms;
  int max_terms = kDefaultMaxTerms;
  bool strict = false;

  auto* eval = app.add_subcommand("eval", "mean extinction time of one model");
  eval->add_option("--model", model, "A, d2, d3 or star")->required();
  eval->add_option("--lambda", lambda_text)->required();
  eval->add_option("--p", p_text)->required();
  eval->add_option("--M", terms, "fixed truncation index for model A");

  auto* cmp = app.add_subcommand("compare", "certified comparison of E[tau_A] and E[tau_d]");
  cmp->add_option("--d", d_text, "2, 3 or star")->required();
  cmp->add_option("--lambda", lambda_text)->required();
  cmp->add_option("--p", p_text)->required();
  cmp->add_option("--M-max,--M", max_terms, "largest truncation index tried");
  cmp->add_flag("--strict", strict, "exit 4 on an indeterminate verdict");

  std::string lambda_range = "0.05:10", p_range = "0.005:0.995", out_file;
  int steps = 200;
  std::optional<int> lambda_steps, p_steps;
  auto* scan = app.add_subcommand("scan", "region map over a (lambda, p) grid");
  scan->add_option("--d", d_text, "2, 3 or star")->required();
  scan->add_option("--lambda-range", lambda_range, "lo:hi");
  scan->add_option("--p-range", p_range, "lo:hi");
  scan->add_option("--steps", steps, "grid points per axis");
  scan->add_option("--lambda-steps", lambda_steps);
  scan->add_option("--p-steps", p_steps);
  scan->add_option("--M-max", max_terms);
  scan->add_option("--out", out_file, "write rows here instead of stdout");

  double tol = 5e-3;
  auto* trace = app.add_subcommand("trace", "crossing points p_l, p_u at fixed lambda");
  trace->add_option("--d", d_text, "2, 3 or star")->required();
  trace->add_option("--lambda", lambda_text)->required();
  trace->add_option("--tol", tol);
  trace->add_option("--M-max", max_terms);
  trace->add_flag("--strict", strict, "exit 4 when a crossing stays indeterminate");

  std::int64_t replicates = 100000;
  std::uint64_t seed = 0;
  double time_cap = 1e4;
  std::string clock = "branching";
  std::optional<std::int64_t> colony_cap;
  std::string trace_file;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of the mean extinction time");
  sim->add_option("--model", model, "A, d2, d3 or star")->required();
  sim->add_option("--lambda", lambda_text)->required();
  sim->add_option("--p", p_text)->required();
  sim->add_option("--replicates", replicates);
  sim->add_option("--seed", seed);
  sim->add_option("--time-cap", time_cap);
  sim->add_option("--colony-cap", colony_cap, "default 1000 when supercritical, 1e7 otherwise");
  sim->add_option("--trace-file", trace_file, "per-replicate CSV");
  sim->add_option("--clock", clock, "branching (independent colony lifetime) or coupled")
      ->check(CLI::IsMember({"branching", "coupled"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }
  const bool as_json = format == "json";

  try {
    Table table;
    if (eval->parsed()) {
      const auto m = parse_params(lambda_text, p_text);
      const auto topo = parse_model(model);
      table = {"eval", {"model", "lambda", "p", "regime", "mean_lo", "mean_hi"}, {}};
      CertifiedInterval mean{std::numeric_limits<long double>::infinity(),
                             std::numeric_limits<long double>::infinity()};
      Regime regime = Regime::SubcriticalFiniteMean;
      if (topo.kind() == Topology::Kind::NoDispersion) {
        ProductPrecision precision;
        if (terms) {
          if (*terms < 0) throw InvalidParams("--M must be >= 0");
          precision.terms = *terms;
        }
        mean = mean_time_no_dispersion(m, precision);
      } else {
        regime = classify(m, topo);
        if (regime == Regime::SubcriticalFiniteMean) mean = dispersion_mean(m, topo);
      }
      const auto [lo, hi] = outward(mean);
      table.rows.push_back({txt(to_string(topo)), num(static_cast<double>(m.lambda())),
                            num(static_cast<double>(m.p())), txt(regime_text(regime)), num(lo), num(hi)});
    } else if (cmp->parsed()) {
      const auto m = parse_params(lambda_text, p_text);
      const auto topo = parse_model(d_text);
      if (topo.kind() == Topology::Kind::NoDispersion) throw InvalidParams("--d must be 2, 3 or star");
      if (max_terms < kInitialTerms) throw InvalidParams("--M-max must be >= 8");
      const auto v = compare(m, topo, max_terms);
      const std::string a = "E[tau_A]", d = "E[tau_" + tau_label(topo) + "]";
      std::string verdict;
      std::string longer;
      switch (v.outcome) {
        case Verdict::NoDispersionShorter:
          verdict = a + " < " + d;
          longer = "dispersion";
          break;
        case Verdict::DispersionShorter:
          verdict = d + " < " + a;
          longer = "no-dispersion";
          break;
        case Verdict::Indeterminate:
          verdict = "indeterminate at M=" + std::to_string(v.terms);
          break;
      }
      // E[tau_A] = (f - 1) / lambda
      const auto lhs = interval::div(interval::sub(v.product, {1, 1}), m.lambda_enclosure());
      const auto rhs = interval::div(interval::sub(v.rhs, {1, 1}), m.lambda_enclosure());
      const auto [lhs_lo, lhs_hi] = outward(lhs);
      const auto [rhs_lo, rhs_hi] = outward(rhs);
      const auto closed = mean_time_dispersion(m, topo).value();
      table = {"compare", {"d", "lambda", "p", "verdict", "lhs_lo", "lhs_hi", "rhs", "M"}, {}};
      table.rows.push_back({txt(d_label(topo)), num(static_cast<double>(m.lambda())), num(static_cast<double>(m.p())),
                            txt(verdict), num(lhs_lo), num(lhs_hi), num(static_cast<double>(closed)),
                            integer(v.terms)});
      table.extra = json::array({json{{"rhs_lo", rhs_lo},
                                      {"rhs_hi", rhs_hi},
                                      {"outcome", to_string(v.outcome)},
                                      {"longer_lived", longer.empty() ? json(nullptr) : json(longer)}}});
      emit(table, as_json, "");
      if (strict && v.outcome == Verdict::Indeterminate) return kIndeterminate;
      return kOk;
    } else if (scan->parsed()) {
      const auto topo = parse_model(d_text);
      if (topo.kind() == Topology::Kind::NoDispersion) throw InvalidParams("--d must be 2, 3 or star");
      const auto [l_lo, l_hi] = range_arg(lambda_range, "--lambda-range");
      const auto [p_lo, p_hi] = range_arg(p_range, "--p-range");
      const GridAxis la{l_lo, l_hi, lambda_steps.value_or(steps)};
      const GridAxis pa{p_lo, p_hi, p_steps.value_or(steps)};
      const auto points = scan_region(la, pa, topo, max_terms);
      table = {"scan", {"lambda", "p", "region"}, {}};
      std::map<std::string, long> counts;
      for (const auto& pt : points) {
        table.rows.push_back({num(pt.lambda), num(pt.p), txt(to_string(pt.region))});
        ++counts[to_string(pt.region)];
      }
      std::cerr << "regions:";
      for (const auto& [name, n] : counts) std::cerr << " " << name << "=" << n;
      std::cerr << "\n";
      emit(table, as_json, out_file);
      return kOk;
    } else if (trace->parsed()) {
      const auto topo = parse_model(d_text);
      if (topo.kind() == Topology::Kind::NoDispersion) throw InvalidParams("--d must be 2, 3 or star");
      const double lambda = static_cast<double>(to_long_double(parse_rational(lambda_text)));
      if (!(lambda > 0)) throw InvalidParams("lambda must be positive");
      if (!(tol > 0)) throw InvalidParams("--tol must be positive");
      table = {"trace", {"d", "lambda", "p_l", "p_u", "tol"}, {}};
      int code = kOk;
      std::vector<Crossing> found;
      try {
        found = trace_crossings(lambda, topo, tol, max_terms);
      } catch (const IndeterminateBand& e) {
        std::cerr << "warning: " << e.what() << "\n";
        if (strict) return kIndeterminate;
        found.push_back({static_cast<double>(e.center()), 0, 0, Verdict::Indeterminate});
        code = kOk;
      }
      if (found.size() < 2) std::cerr << "no crossing pair: " << found.size() << " crossing(s) found\n";
      table.rows.push_back({txt(d_label(topo)), num(lambda),
                            found.size() >= 1 ? num(found[0].p) : txt("none"),
                            found.size() >= 2 ? num(found[1].p) : txt("none"), num(tol)});
      emit(table, as_json, "");
      return code;
    } else if (sim->parsed()) {
      const auto m = parse_params(lambda_text, p_text);
      const auto topo = parse_model(model);
      SimConfig config{m, topo, replicates, seed, time_cap, colony_cap,
                       clock == "coupled" ? ColonyClock::Coupled : ColonyClock::Branching};
      if (auto thr = survival_threshold(m.lambda_exact(), topo)) {
        const double t = static_cast<double>(to_long_double(*thr));
        if (std::fabs(static_cast<double>(m.p()) - t) <= 0.02 * t) {
          std::cerr << "warning: p is within 2% of the survival threshold " << fmt(t)
                    << "; extinction times are heavy tailed\n";
        }
      }
      const auto outcomes = run_replicates(config);
      const auto est = summarize(outcomes);
      if (est.censored_fraction > 0) {
        std::cerr << "warning: " << fmt(est.censored_fraction) << " of replicates censored\n";
      }
      if (!trace_file.empty()) {
        std::ofstream f(trace_file);
        if (!f) throw InvalidParams("cannot open '" + trace_file + "' for writing");
        f << "# schema=1\nreplicate,time,max_colonies,censored\n";
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
          f << i << "," << fmt(outcomes[i].time) << "," << outcomes[i].max_colonies << ","
            << (outcomes[i].status == ReplicateOutcome::Status::Extinct ? 0 : 1) << "\n";
        }
      }
      table = {"simulate",
               {"model", "lambda", "p", "replicates", "seed", "mean", "std_error", "censored_fraction",
                "survival_fraction"},
               {}};
      table.rows.push_back({txt(to_string(topo)), num(static_cast<double>(m.lambda())),
                            num(static_cast<double>(m.p())), integer(replicates), txt(std::to_string(seed)),
                            num(est.mean), num(est.std_error), num(est.censored_fraction),
                            num(est.survival_fraction)});
    }
    emit(table, as_json, "");
    return kOk;
  } catch (const OutOfRegime& e) {
    std::cerr << "out of regime: " << e.what() << "\n";
    return kOutOfRegime;
  } catch (const InvalidParams& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionViolated& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
