// Command-line front end: runs the worked-example scenarios, config-driven
// verification, witness searches, per-cone property suites, and the full
// selftest. Exit codes: 0 all assertions pass, 1 assertion failure, 2 on
// usage or config errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <conewit/conewit.hpp>

namespace {

using namespace conewit;

struct OutputOptions {
  std::string format = "text";
  std::string csv_path;
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--csv", out.csv_path, "Write assertion rows as CSV to this path");
}

int emit(const Report& report, const OutputOptions& out) {
  if (out.format == "json") {
    std::cout << to_json(report).dump(2) << "\n";
  } else {
    std::cout << to_text(report);
  }
  if (!out.csv_path.empty()) {
    std::ofstream csv(out.csv_path);
    if (!csv) {
      std::cerr << "cannot open csv path " << out.csv_path << "\n";
      return 2;
    }
    csv << to_csv(report);
  }
  return report.all_pass() ? 0 : 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::ParseError, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario(const std::string& config_path, const std::uint64_t* seed_flag,
                       const long* budget_flag, const double* tol_flag, std::uint64_t& seed_out) {
  const ConfigFile cfg = parse_config_text(read_file(config_path));
  Scenario sc = scenario_from_config(cfg);
  seed_out = cfg.has("seed")
                 ? static_cast<std::uint64_t>(std::stoull(cfg.get("seed", "0")))
                 : 0;
  // flags win over config values
  if (seed_flag) seed_out = *seed_flag;
  if (budget_flag) sc.budget = *budget_flag;
  if (tol_flag) sc.tol = *tol_flag;
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-one perturbations of cone automorphisms: construction, "
               "positivity checks, and non-positive-inverse witnesses"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  long budget = 10000;
  double tol = 1e-9;
  std::string name, config_path, cone_text;
  OutputOptions out;
  bool timings = false;

  auto* examples = app.add_subcommand("examples", "Run the worked-example scenarios");
  examples->add_option("--name", name, "Run a single named scenario");
  auto* examples_seed = examples->add_option("--seed", seed, "Random seed");
  add_output_flags(examples, out);

  auto* verify = app.add_subcommand("verify", "Run a config-driven scenario");
  verify->add_option("--config", config_path, "Scenario config file")->required();
  auto* verify_seed = verify->add_option("--seed", seed, "Random seed");
  auto* verify_budget = verify->add_option("--budget", budget, "Witness search budget");
  auto* verify_tol = verify->add_option("--tol", tol, "Classification tolerance");
  add_output_flags(verify, out);

  auto* witness = app.add_subcommand("witness", "Search for a non-positive-inverse witness");
  witness->add_option("--config", config_path, "Scenario config file")->required();
  auto* witness_seed = witness->add_option("--seed", seed, "Random seed");
  auto* witness_budget = witness->add_option("--budget", budget, "Witness search budget");
  add_output_flags(witness, out);

  auto* properties = app.add_subcommand("properties", "Run the property suite for one cone");
  properties->add_option("--cone", cone_text, "Cone spec, e.g. orthant:4")->required();
  auto* properties_seed = properties->add_option("--seed", seed, "Random seed");
  add_output_flags(properties, out);

  auto* selftest = app.add_subcommand("selftest", "Run the full default suite");
  auto* selftest_seed = selftest->add_option("--seed", seed, "Random seed");
  selftest->add_flag("--timings", timings, "Print per-suite wall times to stderr");
  add_output_flags(selftest, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 2;
  }

  try {
    if (examples->parsed()) {
      const std::uint64_t s = examples_seed->count() ? seed : 0;
      Report report = run_example_scenarios(s);
      if (!name.empty()) {
        auto one = find_result(report, name);
        if (!one) {  // bare names resolve too, e.g. `spin-factor`
          for (const auto& sr : report.results) {
            const auto slash = sr.scenario.find('/');
            if (slash != std::string::npos && sr.scenario.substr(slash + 1) == name) one = sr;
          }
        }
        if (!one) {
          std::cerr << "unknown scenario '" << name << "'; known names:\n";
          for (const auto& sr : report.results) std::cerr << "  " << sr.scenario << "\n";
          return 2;
        }
        report.results = {*one};
      }
      return emit(report, out);
    }

    if (verify->parsed()) {
      std::uint64_t s = 0;
      const std::uint64_t sv = seed;
      const long bv = budget;
      const double tv = tol;
      Scenario sc = load_scenario(config_path, verify_seed->count() ? &sv : nullptr,
                                  verify_budget->count() ? &bv : nullptr,
                                  verify_tol->count() ? &tv : nullptr, s);
      // configuration errors (u outside the cone, bad f, ...) exit 2
      RngStream validation(s);
      rank_one_perturb(sc.cone, sc.s, sc.f, sc.u, validation.split(1));
      return emit(run_scenario(sc, s), out);
    }

    if (witness->parsed()) {
      std::uint64_t s = 0;
      const std::uint64_t sv = seed;
      const long bv = budget;
      Scenario sc = load_scenario(config_path, witness_seed->count() ? &sv : nullptr,
                                  witness_budget->count() ? &bv : nullptr, nullptr, s);
      RngStream rng(s);
      const RankOnePerturbation t = rank_one_perturb(sc.cone, sc.s, sc.f, sc.u, rng.split(1));
      RngStream wrng = rng.split(2);
      const WitnessReport w = nonpositive_inverse_witness(t.map, sc.cone, wrng, sc.budget);
      if (out.format == "json") {
        std::cout << witness_to_json(w).dump(2) << "\n";
      } else {
        std::cout << "found: " << (w.found ? "true" : "false") << "\n";
        if (w.found) {
          std::cout << "strategy: " << strategy_name(w.strategy) << "\n"
                    << "witness_y: " << fmt_point(*w.witness_y) << "\n"
                    << "preimage_x: " << fmt_point(*w.preimage_x) << "\n"
                    << "y_margin: " << fmt_double(w.y_margin) << "\n"
                    << "x_margin: " << fmt_double(w.x_margin) << "\n";
        }
        std::cout << "attempts: " << w.attempts.total() << "\n";
      }
      bool expected_found = true;
      for (const Expectation& e : sc.expectations)
        if (const auto* ew = std::get_if<ExpectWitness>(&e)) expected_found = ew->found;
      return w.found == expected_found ? 0 : 1;
    }

    if (properties->parsed()) {
      const std::uint64_t s = properties_seed->count() ? seed : 0;
      return emit(run_property_suite(parse_cone(cone_text), s), out);
    }

    // selftest
    const std::uint64_t s = selftest_seed->count() ? seed : 0;
    const SelftestRun run = run_selftest(s);
    if (timings) {
      std::cerr << "examples " << fmt_double(run.timings.examples)
                << "s, properties " << fmt_double(run.timings.properties)
                << "s, inverse " << fmt_double(run.timings.inverse_exactness)
                << "s, positivity " << fmt_double(run.timings.positivity)
                << "s, witness " << fmt_double(run.timings.witness_coverage)
                << "s, scaling " << fmt_double(run.timings.scaling)
                << "s, bisection " << fmt_double(run.timings.bisection)
                << "s, oracle " << fmt_double(run.timings.oracle)
                << "s, total " << fmt_double(run.timings.total) << "s\n";
    }
    return emit(run.report, out);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
