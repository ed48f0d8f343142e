// probsched: command-line front end (docs/report-schema.md).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "probsched/analytics/bloom.hpp"
#include "probsched/engine/analysis.hpp"
#include "probsched/fixtures/fixtures.hpp"
#include "probsched/mc/mc.hpp"
#include "probsched/report/report.hpp"
#include "probsched/syntax/erase.hpp"
#include "probsched/syntax/parser.hpp"
#include "probsched/syntax/pretty.hpp"

using namespace probsched;

namespace {

constexpr int kUsage = 2;
constexpr int kResource = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  std::string path;
  std::string fixture;
  std::string predicate;
  std::string scheduler = "round_robin";
  std::optional<std::size_t> horizon;
  std::size_t max_horizon = 1024;
  std::optional<std::string> bound;
  std::optional<std::size_t> memo_limit;
  bool json = false;
};

struct Program {
  std::string name;
  std::string text;
  const Fixture* fixture = nullptr;
  Expr expr;
};

Program load(const Input& in) {
  Program p;
  if (!in.fixture.empty() && !in.path.empty()) throw UsageError("give either a program file or --fixture, not both");
  if (!in.fixture.empty()) {
    try {
      p.fixture = &fixture(in.fixture);
    } catch (const UnknownFixture& e) {
      throw UsageError(std::string("--fixture: ") + e.what());
    }
    p.name = p.fixture->name;
    p.text = p.fixture->source;
  } else if (!in.path.empty()) {
    std::ifstream file(in.path);
    if (!file) throw UsageError("cannot read program file '" + in.path + "'");
    std::stringstream ss;
    ss << file.rdbuf();
    p.name = in.path;
    p.text = ss.str();
  } else {
    throw UsageError("no program: pass a file or --fixture NAME");
  }
  p.expr = parse_core(p.text);
  return p;
}

Predicate predicate_for(const Input& in, const Program& p) {
  std::string text = !in.predicate.empty() ? in.predicate : p.fixture ? p.fixture->predicate : "true";
  try {
    return Predicate::parse(text);
  } catch (const PredicateError& e) {
    throw UsageError(std::string("--predicate: ") + e.what());
  }
}

SchedulerPolicy policy_for(const Input& in) {
  try {
    return parse_policy(in.scheduler);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--scheduler: ") + e.what());
  }
}

std::optional<Rational> bound_for(const Input& in) {
  if (!in.bound) return std::nullopt;
  try {
    Rational r = parse_rational(*in.bound);
    if (!is_probability(r)) throw std::invalid_argument("not in [0,1]");
    return r;
  } catch (const std::invalid_argument& e) {
    throw UsageError("--bound: '" + *in.bound + "' is not a probability");
  }
}

EngineOptions engine_options(const Input& in) {
  EngineOptions opt;
  if (in.memo_limit) opt.node_limit = *in.memo_limit;
  return opt;
}

std::string show(const Value& v) { return pretty(v); }

// Best adversarial chance of reaching a final configuration within h steps.
// A value that repeats before any run can finish says nothing, so horizon
// doubling also waits for this to be positive and unchanged.
Rational finish_mass(const Config& c, std::size_t h, const EngineOptions& opt) {
  EngineOptions o = opt;
  o.witness = false;
  return sup_violation(c, h, Predicate::parse("false"), o).value;
}

json dist_json(const Dist<Value>& d) {
  json out = json::array();
  for (const auto& [v, p] : d) out.push_back(json{{"value", show(v)}, {"p", rational_json(p)}});
  return out;
}

void header(Report& r, const Program& p, const Input& in) {
  r["query"]["program"] = p.name;
  if (in.horizon) r["query"]["horizon"] = *in.horizon;
}

// Doubles the horizon from 8 until `same` holds for two consecutive runs or
// the cap is reached. Returns the final horizon and whether it settled.
template <class Run, class Same>
std::pair<std::size_t, bool> search_horizon(const Input& in, Run&& run, Same&& same, json& trace) {
  if (in.horizon) {
    run(*in.horizon);
    return {*in.horizon, true};
  }
  std::size_t h = std::min<std::size_t>(8, in.max_horizon);
  run(h);
  trace.push_back(h);
  while (h < in.max_horizon) {
    std::size_t next = std::min(h * 2, in.max_horizon);
    bool stable = same(next);
    trace.push_back(next);
    h = next;
    if (stable) return {h, true};
  }
  return {h, false};
}

void horizon_lines(Report& r, std::size_t h, bool stable, const Input& in) {
  r["horizon"] = h;
  if (!in.horizon) {
    r["horizon_stable"] = stable;
    r.line("horizon: " + std::to_string(h) +
           (stable ? " (value unchanged from the previous doubling)" : " (cap reached before the value settled)"));
  } else {
    r.line("horizon: " + std::to_string(h));
  }
}

int cmd_parse(const Input& in, bool dump_config) {
  Program p = load(in);
  Report r("parse");
  header(r, p, in);
  r["program"] = pretty(p.expr);
  r["tape_free"] = tape_free(p.expr);
  r.line(pretty(p.expr));
  if (dump_config) {
    std::string d = dump(initial_config(p.expr));
    r["initial_config"] = d;
    r.line(d);
  }
  std::cout << (in.json ? r.json_text() + "\n" : r.text());
  return 0;
}

int cmd_exact(const Input& in) {
  Program p = load(in);
  SchedulerPolicy pi = policy_for(in);
  ConfigGraph g(initial_config(p.expr), engine_options(in).node_limit);
  std::optional<ValueDistResult> cur;
  auto run = [&](std::size_t h) { cur = value_dist(g, pi, h); };
  auto same = [&](std::size_t h) {
    ValueDistResult prev = *cur;
    run(h);
    return prev.dist == cur->dist && prev.residual == cur->residual && !cur->dist.empty();
  };
  Report r("exact");
  header(r, p, in);
  r["query"]["scheduler"] = pi.name();
  json trace = json::array();
  auto [h, stable] = search_horizon(in, run, same, trace);
  if (!trace.empty()) r["horizon_search"] = trace;
  r.line("program: " + p.name);
  r.line("scheduler: " + pi.name());
  horizon_lines(r, h, stable, in);
  r["distribution"] = dist_json(cur->dist);
  r["residual"] = rational_json(cur->residual);
  r["nodes"] = cur->nodes;
  r.line("distribution: " + render(cur->dist, show));
  r.value_line("residual", cur->residual);
  r.line("configurations: " + std::to_string(cur->nodes));
  std::cout << (in.json ? r.json_text() + "\n" : r.text());
  return 0;
}

json history_json(const std::vector<Rational>& history) {
  json out = json::array();
  for (std::size_t n = 0; n < history.size(); ++n) out.push_back(json{{"horizon", n}, {"value", rational_json(history[n])}});
  return out;
}

// "n: value" at every horizon where the value changes.
std::string history_text(const std::vector<Rational>& history) {
  std::string out;
  for (std::size_t n = 0; n < history.size(); ++n) {
    if (n > 0 && history[n] == history[n - 1]) continue;
    if (!out.empty()) out += ", ";
    out += std::to_string(n) + ": " + to_string(history[n]);
  }
  return out;
}

int cmd_adversary(const Input& in) {
  Program p = load(in);
  Predicate phi = predicate_for(in, p);
  std::optional<Rational> bound = bound_for(in);
  EngineOptions opt = engine_options(in);
  opt.witness = true;
  Config c = initial_config(p.expr);
  std::optional<AdversaryResult> cur;
  Rational finished;
  auto run = [&](std::size_t h) {
    cur = sup_violation(c, h, phi, opt);
    if (!in.horizon) finished = finish_mass(c, h, opt);
  };
  auto same = [&](std::size_t h) {
    Rational prev = cur->value, prev_finished = finished;
    run(h);
    return prev == cur->value && prev_finished == finished && finished > 0;
  };
  Report r("adversary");
  header(r, p, in);
  r["query"]["predicate"] = phi.text();
  json trace = json::array();
  auto [h, stable] = search_horizon(in, run, same, trace);
  if (!trace.empty()) r["horizon_search"] = trace;
  r.line("program: " + p.name);
  r.line("predicate: " + phi.text());
  horizon_lines(r, h, stable, in);
  r["value"] = rational_json(cur->value);
  r.value_line("sup violation", cur->value);
  r["monotone_history"] = history_json(cur->history);
  r.line("history: " + history_text(cur->history));
  const Witness& w = *cur->witness;
  json wj{{"flat", w.flat}, {"script", w.script}, {"flat_prefix", w.flat_prefix}, {"replayed", rational_json(*cur->replayed)}};
  r["witness"] = wj;
  std::string script;
  for (std::size_t t : w.script) script += (script.empty() ? "" : ",") + std::to_string(t);
  r.line("witness script: " + (script.empty() ? std::string("(empty)") : script) +
         (w.flat ? "" : " (choices depend on sampled values after step " + std::to_string(w.flat_prefix) + ")"));
  r.value_line("witness replay", *cur->replayed);
  r["adversary"] = "full view: sees tape contents, so the value bounds every tape-censored scheduler";
  r.line("adversary: full view (sees tape contents); the value upper-bounds every tape-censored scheduler");
  r["nodes"] = cur->nodes;
  r.line("configurations: " + std::to_string(cur->nodes));
  if (bound) {
    bool holds = cur->value <= *bound;
    r["bound"] = json{{"epsilon", rational_json(*bound)}, {"holds", holds}};
    r.line(std::string("bound ") + to_string(*bound) + ": " + (holds ? "holds at this horizon" : "violated"));
  }
  std::cout << (in.json ? r.json_text() + "\n" : r.text());
  return exit_code(r.doc());
}

int cmd_safety(const Input& in) {
  Program p = load(in);
  std::optional<Rational> bound = bound_for(in);
  EngineOptions opt = engine_options(in);
  Config c = initial_config(p.expr);
  std::optional<SafetyResult> cur;
  Rational finished;
  auto run = [&](std::size_t h) {
    cur = min_mass(c, h, opt);
    if (!in.horizon) finished = finish_mass(c, h, opt);
  };
  auto same = [&](std::size_t h) {
    Rational prev = cur->value, prev_finished = finished;
    run(h);
    return prev == cur->value && prev_finished == finished && finished > 0;
  };
  Report r("safety");
  header(r, p, in);
  json trace = json::array();
  auto [h, stable] = search_horizon(in, run, same, trace);
  if (!trace.empty()) r["horizon_search"] = trace;
  r.line("program: " + p.name);
  horizon_lines(r, h, stable, in);
  r["value"] = rational_json(cur->value);
  r.value_line("min mass", cur->value);
  r["monotone_history"] = history_json(cur->history);
  r.line("history: " + history_text(cur->history));
  r["nodes"] = cur->nodes;
  if (bound) {
    bool holds = cur->value >= 1 - *bound;
    r["bound"] = json{{"epsilon", rational_json(*bound)}, {"holds", holds}};
    r.line(std::string("bound: mass >= 1 - ") + to_string(*bound) + ": " + (holds ? "holds" : "violated"));
  }
  std::cout << (in.json ? r.json_text() + "\n" : r.text());
  return exit_code(r.doc());
}

int cmd_mc(const Input& in, McOptions opt) {
  Program p = load(in);
  Predicate phi = predicate_for(in, p);
  SchedulerPolicy pi = policy_for(in);
  std::optional<Rational> bound = bound_for(in);
  if (opt.trials == 0) throw UsageError("--trials must be at least 1");
  if (!(opt.confidence > 0 && opt.confidence < 1)) throw UsageError("--confidence must lie in (0,1)");
  Estimate e = estimate(initial_config(p.expr), pi, phi, opt);
  Report r("mc");
  header(r, p, in);
  r["query"]["predicate"] = phi.text();
  r["query"]["scheduler"] = pi.name();
  r["query"]["seed"] = opt.seed;
  r["query"]["max_steps"] = opt.max_steps;
  r["query"]["timeout_as_violation"] = opt.timeout_as_violation;
  r["estimate"] = json{{"violations", e.violations}, {"trials", e.trials},     {"point", e.point},
                       {"ci_low", e.ci_low},       {"ci_high", e.ci_high},   {"confidence", e.confidence},
                       {"timeouts", e.timeouts},   {"stuck", e.stuck},       {"steps", e.total_steps}};
  r.line("program: " + p.name);
  r.line("predicate: " + phi.text() + ", scheduler: " + pi.name());
  std::ostringstream s;
  s.precision(6);
  s << "violations: " << e.violations << " / " << e.trials << " (point " << e.point << ")";
  r.line(s.str());
  s.str("");
  s << "clopper-pearson " << e.confidence * 100 << "%: [" << e.ci_low << ", " << e.ci_high << "]";
  r.line(s.str());
  r.line("timeouts: " + std::to_string(e.timeouts) + ", stuck: " + std::to_string(e.stuck) +
         (opt.timeout_as_violation ? " (timeouts counted as violations)" : ""));
  if (bound) {
    bool holds = e.ci_low <= to_double(*bound);
    r["bound"] = json{{"epsilon", rational_json(*bound)}, {"holds", holds}};
    r.line(std::string("bound ") + to_string(*bound) + ": " +
           (holds ? "consistent with the interval" : "below the interval (violated)"));
  }
  std::cout << (in.json ? r.json_text() + "\n" : r.text());
  return exit_code(r.doc());
}

int cmd_erase(const Input& in) {
  Program p = load(in);
  Expr erased = erase(p.expr);
  Report r("erase");
  header(r, p, in);
  r["program"] = pretty(erased);
  r.line(pretty(erased));
  std::cout << (in.json ? r.json_text() + "\n" : r.text());
  return 0;
}

int cmd_erase_check(const Input& in) {
  Program p = load(in);
  SchedulerPolicy pi = policy_for(in);
  std::size_t h = in.horizon.value_or(p.fixture ? p.fixture->horizon : 100);
  EngineOptions opt = engine_options(in);
  ValueDistResult a = value_dist(initial_config(p.expr), pi, h, opt);
  // erasure adds a few steps per tape operation
  ValueDistResult b = value_dist(initial_config(erase(p.expr)), pi, 2 * h, opt);
  bool complete = a.residual == 0 && b.residual == 0;
  bool equal = complete ? a.dist == b.dist : a.dist.normalized() == b.dist.normalized();
  Report r("erase-check");
  header(r, p, in);
  r["query"]["scheduler"] = pi.name();
  r["horizon"] = h;
  r["erased_horizon"] = 2 * h;
  r["original"] = json{{"distribution", dist_json(a.dist)}, {"residual", rational_json(a.residual)}};
  r["erased"] = json{{"distribution", dist_json(b.dist)}, {"residual", rational_json(b.residual)}};
  r["compared"] = complete ? "exact" : "normalized";
  r["agree"] = equal;
  r.line("program: " + p.name + ", scheduler: " + pi.name() + ", horizon: " + std::to_string(h) + " (erased " +
         std::to_string(2 * h) + ")");
  r.line("original: " + render(a.dist, show));
  r.value_line("original residual", a.residual);
  r.line("erased:   " + render(b.dist, show));
  r.value_line("erased residual", b.residual);
  r.line(std::string(equal ? "agree" : "DIFFER") + (complete ? " (exact)" : " (after normalizing; mass still pending)"));
  std::cout << (in.json ? r.json_text() + "\n" : r.text());
  return exit_code(r.doc());
}

void check_bloom_args(std::int64_t size, std::int64_t hashes, std::int64_t count, const char* count_flag) {
  if (size < 1) throw UsageError("--size must be at least 1");
  if (hashes < 1) throw UsageError("--hashes must be at least 1");
  if (count < 0) throw UsageError(std::string(count_flag) + " must be non-negative");
}

int cmd_efp(std::int64_t size, std::int64_t hashes, std::int64_t insertions, std::optional<std::int64_t> draws,
            std::int64_t set_bits, bool as_json) {
  check_bloom_args(size, hashes, insertions, "--insertions");
  if (set_bits < 0 || set_bits > size) throw UsageError("--set-bits must lie in 0..size");
  std::int64_t l = draws.value_or(hashes * insertions);
  if (l < 0) throw UsageError("--draws must be non-negative");
  Rational v = efp(l, set_bits, size, hashes);
  Report r("efp");
  r["query"] = json{{"size", size}, {"hashes", hashes}, {"draws", l}, {"set_bits", set_bits}};
  r["value"] = rational_json(v);
  r.line(to_string(v) + " (" + to_decimal(v) + ")");
  std::cout << (as_json ? r.json_text() + "\n" : r.text());
  return 0;
}

int cmd_bloom_oracle(std::int64_t size, std::int64_t hashes, std::int64_t keys, bool as_json) {
  check_bloom_args(size, hashes, keys, "--keys");
  Rational brute = bloom_bruteforce(size, hashes, keys);
  Rational rec = efp(hashes * keys, 0, size, hashes);
  Report r("bloom-oracle");
  r["query"] = json{{"size", size}, {"hashes", hashes}, {"keys", keys}};
  r["value"] = rational_json(brute);
  r["recurrence"] = rational_json(rec);
  r["agree"] = brute == rec;
  r.value_line("enumeration", brute);
  r.value_line("recurrence", rec);
  r.line(brute == rec ? "agree" : "DIFFER");
  std::cout << (as_json ? r.json_text() + "\n" : r.text());
  return exit_code(r.doc());
}

int cmd_fixtures(const std::string& show_name, const std::string& write_dir, bool as_json) {
  if (!show_name.empty()) {
    const Fixture* f = nullptr;
    try {
      f = &fixture(show_name);
    } catch (const UnknownFixture& e) {
      throw UsageError(e.what());
    }
    std::cout << fixture_file_text(*f);
    return 0;
  }
  if (!write_dir.empty()) {
    std::filesystem::create_directories(write_dir);
    for (const auto& f : catalogue()) {
      std::ofstream out(std::filesystem::path(write_dir) / (f.name + ".cpl"));
      out << fixture_file_text(f);
    }
  }
  Report r("fixtures");
  json list = json::array();
  for (const auto& f : catalogue()) {
    json j{{"name", f.name}, {"predicate", f.predicate}, {"horizon", f.horizon}, {"tapes", f.uses_tapes}, {"exact", f.exact}};
    std::string expect;
    switch (f.expect) {
      case Fixture::Expect::Bound:
        j["bound"] = rational_json(f.value);
        expect = "sup_violation <= " + to_string(f.value);
        break;
      case Fixture::Expect::Uniform:
        j["uniform_top"] = f.uniform_top;
        expect = "uniform over 0.." + std::to_string(f.uniform_top);
        break;
      case Fixture::Expect::MinMass:
        j["min_mass"] = rational_json(f.value);
        expect = "min_mass = " + to_string(f.value);
        break;
    }
    list.push_back(j);
    r.line(f.name + "  [" + f.predicate + "]  " + expect + "  H=" + std::to_string(f.horizon) +
           (f.exact ? "" : "  (monte carlo only)"));
  }
  r["fixtures"] = list;
  std::cout << (as_json ? r.json_text() + "\n" : r.text());
  return 0;
}

void program_flags(CLI::App* app, Input& in) {
  app->add_option("file", in.path, "program file (.cpl)");
  app->add_option("--fixture", in.fixture, "catalogue program instead of a file");
  app->add_flag("--json", in.json, "JSON report");
}

void engine_flags(CLI::App* app, Input& in, bool with_bound) {
  app->add_option("--horizon", in.horizon, "step horizon; default: doubling from 8");
  app->add_option("--max-horizon", in.max_horizon, "cap for the doubling search")->check(CLI::PositiveNumber);
  app->add_option("--memo-limit", in.memo_limit, "configuration budget (default PROBSCHED_MEMO_LIMIT or 10^7)")
      ->check(CLI::PositiveNumber);
  if (with_bound) app->add_option("--bound", in.bound, "error budget epsilon, as p/q or decimal");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo analysis of randomized concurrent programs"};
  app.require_subcommand(1);

  Input in;
  bool dump_config = false;
  McOptions mc;
  std::int64_t size = 0, hashes = 0, count = 0, set_bits = 0;
  std::optional<std::int64_t> draws;
  std::string show_name, write_dir;

  auto* parse = app.add_subcommand("parse", "parse, desugar and pretty-print a program");
  program_flags(parse, in);
  parse->add_flag("--dump", dump_config, "also print the initial configuration");

  auto* exact = app.add_subcommand("exact", "value distribution under a scheduler");
  program_flags(exact, in);
  engine_flags(exact, in, false);
  exact->add_option("--scheduler", in.scheduler, "round_robin, uniform_random or scripted:i,j,...");

  auto* adversary = app.add_subcommand("adversary", "worst-case violation probability over thread choices");
  program_flags(adversary, in);
  engine_flags(adversary, in, true);
  adversary->add_option("--predicate", in.predicate, "postcondition on the result (docs/predicates.md)");

  auto* safety = app.add_subcommand("safety", "minimum non-stuck mass over thread choices");
  program_flags(safety, in);
  engine_flags(safety, in, true);

  auto* mcc = app.add_subcommand("mc", "Monte Carlo estimate of the violation probability");
  program_flags(mcc, in);
  mcc->add_option("--predicate", in.predicate, "postcondition on the result");
  mcc->add_option("--scheduler", in.scheduler, "round_robin, uniform_random or scripted:i,j,...");
  mcc->add_option("--trials", mc.trials, "number of trials");
  mcc->add_option("--seed", mc.seed, "base seed");
  mcc->add_option("--max-steps", mc.max_steps, "steps before a trial times out")->check(CLI::PositiveNumber);
  mcc->add_option("--confidence", mc.confidence, "interval confidence in (0,1)");
  mcc->add_flag("--timeout-as-violation", mc.timeout_as_violation, "count timeouts as violations");
  mcc->add_option("--bound", in.bound, "error budget to compare against the interval");

  auto* erase_cmd = app.add_subcommand("erase", "print the program with tapes removed");
  program_flags(erase_cmd, in);

  auto* erase_check = app.add_subcommand("erase-check", "compare the program with its erasure");
  program_flags(erase_check, in);
  erase_check->add_option("--scheduler", in.scheduler, "round_robin, uniform_random or scripted:i,j,...");
  erase_check->add_option("--horizon", in.horizon, "step horizon (default: the fixture's)");
  erase_check->add_option("--memo-limit", in.memo_limit, "configuration budget")->check(CLI::PositiveNumber);

  auto* efp_cmd = app.add_subcommand("efp", "Bloom filter false-positive recurrence");
  efp_cmd->add_option("--size", size, "filter size S")->required();
  efp_cmd->add_option("--hashes", hashes, "hash functions k")->required();
  efp_cmd->add_option("--insertions", count, "inserted keys N (draws = kN)");
  efp_cmd->add_option("--draws", draws, "remaining index draws l, overriding kN");
  efp_cmd->add_option("--set-bits", set_bits, "bits already set b");
  efp_cmd->add_flag("--json", in.json, "JSON report");

  auto* oracle = app.add_subcommand("bloom-oracle", "brute-force enumeration against the recurrence");
  oracle->add_option("--size", size, "filter size S")->required();
  oracle->add_option("--hashes", hashes, "hash functions k")->required();
  oracle->add_option("--keys,--insertions", count, "inserted keys N")->required();
  oracle->add_flag("--json", in.json, "JSON report");

  auto* fixtures = app.add_subcommand("fixtures", "list the fixture catalogue");
  fixtures->add_option("--show", show_name, "print one fixture's source");
  fixtures->add_option("--write", write_dir, "write every fixture as DIR/<name>.cpl");
  fixtures->add_flag("--json", in.json, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*parse) return cmd_parse(in, dump_config);
    if (*exact) return cmd_exact(in);
    if (*adversary) return cmd_adversary(in);
    if (*safety) return cmd_safety(in);
    if (*mcc) return cmd_mc(in, mc);
    if (*erase_cmd) return cmd_erase(in);
    if (*erase_check) return cmd_erase_check(in);
    if (*efp_cmd) return cmd_efp(size, hashes, count, draws, set_bits, in.json);
    if (*oracle) return cmd_bloom_oracle(size, hashes, count, in.json);
    if (*fixtures) return cmd_fixtures(show_name, write_dir, in.json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const ScopeError& e) {
    std::cerr << "scope error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceExhausted& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kResource;
  } catch (const EnumerationTooLarge& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
