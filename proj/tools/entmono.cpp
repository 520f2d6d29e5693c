// entmono command-line tool.
//
// Exit codes: 0 success, 1 a hard expectation failed, 2 invalid input,
// 3 dimension guard.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "entmono/convexroof.hpp"
#include "entmono/io.hpp"
#include "entmono/locc.hpp"
#include "entmono/measures.hpp"
#include "entmono/redfun.hpp"
#include "entmono/registry.hpp"
#include "entmono/verify.hpp"

namespace {

using namespace entmono;

struct RoofFlags {
  std::size_t m = 0;
  std::size_t restarts = 16;
  std::uint64_t seed = 1;
  double tol = 1e-8;

  RoofOptions options() const { return {.m = m, .restarts = restarts, .seed = seed, .tol = tol}; }
};

void add_roof_flags(CLI::App* app, RoofFlags& f) {
  app->add_option("--roof-m", f.m, "Ensemble size of the roof search (0 selects rank^2)");
  app->add_option("--restarts", f.restarts, "Random starts of the roof search");
  app->add_option("--seed", f.seed, "Seed");
  app->add_option("--tol", f.tol, "Stagnation tolerance of the roof search");
}

void print_line(const json& j) { std::cout << j.dump() << "\n"; }

// eval ----------------------------------------------------------------------

struct EvalArgs {
  std::string state, measure, h, partition;
  RoofFlags roof;
};

int run_eval(const EvalArgs& a) {
  AnyState s = load_state(a.state);
  MeasureSpec spec{parse_family(a.measure), parse_reduced_function(a.h)};
  const auto& labels = std::visit([](const auto& v) -> const std::vector<std::string>& { return v.labels(); }, s);
  Partition p = a.partition.empty() ? Partition::singletons(labels) : parse_partition(a.partition, labels);
  json out = {{"family", family_name(spec.family)}, {"h", format_reduced_function(spec.h)},
              {"partition", format_partition(p)}};
  std::optional<RoofResult> roof;
  if (const auto* psi = std::get_if<PureState>(&s)) {
    if (pure_marginal(*psi, p.support()))
      out["value"] = measure_pure(spec, *psi, p);
    else
      roof = convex_roof(spec, DensityOperator::from_pure(*psi), p, a.roof.options());
  } else {
    roof = convex_roof(spec, std::get<DensityOperator>(s), p, a.roof.options());
  }
  if (roof) {
    out["value"] = roof->value;
    out["roof"] = roof_to_json(*roof);
  } else {
    out["roof"] = nullptr;
  }
  print_line(out);
  return 0;
}

// sweep ---------------------------------------------------------------------

struct SweepArgs {
  std::string figure, out = ".";
  std::size_t points = 21;
};

int run_sweep(const SweepArgs& a) {
  Table t;
  if (a.figure == "fig1")
    t = figure1(a.points);
  else if (a.figure == "fig2")
    t = figure2(a.points);
  else
    throw InvalidInput("unknown figure '" + a.figure + "'");
  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  const std::string path = (std::filesystem::path(a.out) / (a.figure + ".csv")).string();
  write_text(path, table_csv(t));
  print_line({{"figure", a.figure}, {"path", path}, {"rows", t.rows.size()}, {"columns", t.columns}});
  return 0;
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::vector<std::string> cases, measures, hs, states, conditions, properties;
  std::size_t trials = 0;
  std::vector<int> dims;
  std::uint64_t seed = 1;
  std::size_t restarts = 4;
};

int verify_reproduce(const VerifyArgs& a) {
  std::vector<std::string> names = a.cases.empty() ? case_names() : a.cases;
  bool ok = true;
  for (const auto& n : names) {
    CaseReport c = reproduce_case(n);
    ok &= c.hard_pass();
    print_line(case_to_json(c));
  }
  return ok ? 0 : 1;
}

int verify_conditions(const VerifyArgs& a) {
  ConditionFilter f;
  for (const auto& m : a.measures) f.families.push_back(parse_family(m));
  for (const auto& h : a.hs) f.hs.push_back(parse_reduced_function(h));
  for (const auto& s : a.states) {
    registry_state(s);
    f.states.push_back(s);
  }
  for (const auto& c : a.conditions) f.conditions.push_back(parse_condition(c));
  CheckOptions opts;
  opts.seed = a.seed;
  opts.roof.seed = a.seed;
  opts.roof.restarts = a.restarts;
  bool ok = true;
  std::size_t mismatches = 0, total = 0;
  for (const auto& o : run_conditions(f, opts)) {
    ++total;
    if (o.mismatch) {
      ok = false;
      ++mismatches;
    }
    print_line(outcome_to_json(o));
  }
  std::cerr << total << " checks, " << mismatches << " hard mismatches\n";
  return ok ? 0 : 1;
}

int verify_scan(const VerifyArgs& a) {
  std::vector<ReducedFunctionSpec> hs;
  for (const auto& h : a.hs) hs.push_back(parse_reduced_function(h));
  if (hs.empty()) hs = catalog();
  std::vector<Property> props;
  for (const auto& p : a.properties) props.push_back(parse_property(p));
  if (props.empty())
    props = {Property::Concavity, Property::StrictConcavity, Property::Subadditivity, Property::Additivity};
  ProbeOptions po;
  po.trials = a.trials == 0 ? 1000 : a.trials;
  po.seed = a.seed;
  if (!a.dims.empty()) po.dims = a.dims;
  bool ok = true;
  for (const auto& h : hs)
    for (auto p : props) {
      ProbeReport r = property_probe(h, p, po);
      json j = probe_to_json(r);
      // Holds marks must show no violation; stated counterexamples must reproduce.
      bool hard = false, mismatch = false;
      if (r.expectation == Mark::Holds) {
        hard = true;
        mismatch = r.total_violations() > 0;
      } else if (r.expectation == Mark::Fails && !known_counterexamples(h, p).items.empty()) {
        hard = true;
        mismatch = r.preloaded_violations == 0;
      }
      j["hard"] = hard;
      j["mismatch"] = mismatch;
      ok &= !mismatch;
      print_line(j);
    }
  return ok ? 0 : 1;
}

int verify_locc(const VerifyArgs& a) {
  std::vector<Family> fams;
  for (const auto& m : a.measures) fams.push_back(parse_family(m));
  if (fams.empty()) fams = {Family::Sum, Family::GSum, Family::Max, Family::GMax};
  std::vector<ReducedFunctionSpec> hs;
  for (const auto& h : a.hs) hs.push_back(parse_reduced_function(h));
  if (hs.empty())
    for (const auto& h : catalog())
      if (property_marks(h).concave == Mark::Holds) hs.push_back(h);
  SweepOptions so;
  so.trials = a.trials == 0 ? 1000 : a.trials;
  so.seed = a.seed;
  if (!a.dims.empty()) so.dims = a.dims;
  bool ok = true;
  for (auto f : fams)
    for (const auto& h : hs) {
      SweepReport r = locc_sweep({f, h}, so);
      json j = sweep_to_json(r);
      // Sum-type measures are proven monotone; max-type sweeps are archived only.
      const bool hard = reduction_of(f) == Reduction::Sum && property_marks(h).concave == Mark::Holds;
      j["hard"] = hard;
      j["mismatch"] = hard && r.violations > 0;
      ok &= !(hard && r.violations > 0);
      print_line(j);
    }
  return ok ? 0 : 1;
}

int run_verify(const VerifyArgs& a) {
  if (a.suite == "reproduce") return verify_reproduce(a);
  if (a.suite == "conditions") return verify_conditions(a);
  if (a.suite == "scan") return verify_scan(a);
  if (a.suite == "locc") return verify_locc(a);
  throw InvalidInput("unknown suite '" + a.suite + "'");
}

// registry ------------------------------------------------------------------

struct RegistryArgs {
  std::string name, out;
  std::vector<std::string> params;
};

int run_registry(const RegistryArgs& a) {
  if (a.name.empty()) {
    for (const auto& n : registry_names()) {
      ReferenceState r = registry_state(n);
      print_line({{"name", n}, {"description", r.description}, {"labels", r.state.labels()}, {"dims", r.state.dims()}});
    }
    return 0;
  }
  std::map<std::string, double> params;
  for (const auto& kv : a.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidInput("parameter '" + kv + "' must read key=value");
    try {
      params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw InvalidInput("parameter '" + kv + "' has a non-numeric value");
    }
  }
  const std::string text = canonical_text(state_to_json(registry_state(a.name, params).state));
  if (a.out.empty())
    std::cout << text;
  else
    write_text(a.out, text);
  return 0;
}

// canon ---------------------------------------------------------------------

struct CanonArgs {
  std::string in, out;
};

int run_canon(const CanonArgs& a) {
  const std::string text = canonical_text(state_to_json(load_state(a.in)));
  if (a.out.empty())
    std::cout << text;
  else
    write_text(a.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipartite entanglement measures: evaluation, checks and reproduction suites"};
  app.require_subcommand(1);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a measure on a state file");
  eval->set_help_flag("--help", "Print this help message and exit");
  eval->add_option("--state", ev.state, "State file (JSON)")->required();
  eval->add_option("--measure", ev.measure, "Measure family")->required();
  eval->add_option("--h", ev.h, "Reduced function")->required();
  eval->add_option("--partition", ev.partition, "Partition such as A|BC (default: all singletons)");
  add_roof_flags(eval, ev.roof);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Write figure data as CSV");
  sweep->add_option("--figure", sw.figure, "fig1 or fig2")->required();
  sweep->add_option("--points", sw.points, "Grid points per axis");
  sweep->add_option("--out", sw.out, "Output directory");

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "Run a reproduction or property suite");
  verify->set_help_flag("--help", "Print this help message and exit");
  verify->add_option("--suite", vf.suite, "reproduce, conditions, scan or locc")->required();
  verify->add_option("--case", vf.cases, "Case names (reproduce)");
  verify->add_option("--measure", vf.measures, "Measure families (conditions, locc)");
  verify->add_option("--h", vf.hs, "Reduced functions");
  verify->add_option("--state", vf.states, "Registry states (conditions)");
  verify->add_option("--condition", vf.conditions, "Conditions (conditions)");
  verify->add_option("--property", vf.properties, "Properties (scan)");
  verify->add_option("--trials", vf.trials, "Trials (scan, locc)");
  verify->add_option("--dims", vf.dims, "Local dimensions (scan, locc)");
  verify->add_option("--seed", vf.seed, "Seed");
  verify->add_option("--restarts", vf.restarts, "Roof restarts (conditions)");

  RegistryArgs rg;
  auto* registry = app.add_subcommand("registry", "List reference states or write one as a state file");
  registry->add_option("--name", rg.name, "Registry state");
  registry->add_option("--param", rg.params, "Parameter key=value");
  registry->add_option("--out", rg.out, "Output file (default: standard output)");

  CanonArgs cn;
  auto* canon = app.add_subcommand("canon", "Rewrite a state file in canonical form");
  canon->add_option("--in", cn.in, "Input state file")->required();
  canon->add_option("--out", cn.out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return run_eval(ev);
    if (*sweep) return run_sweep(sw);
    if (*verify) return run_verify(vf);
    if (*registry) return run_registry(rg);
    if (*canon) return run_canon(cn);
  } catch (const DimensionGuard& e) {
    std::cerr << "dimension guard: " << e.what() << "\n";
    return 3;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
