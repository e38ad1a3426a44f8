// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Exits nonzero if any criterion fails.

#include <cstdio>
#include <string>
#include <vector>

#include <conewit/conewit.hpp>

using namespace conewit;

namespace {

struct CriterionOutcome {
  int number;
  std::string title;
  bool pass;
  std::string detail;
};

std::vector<CriterionOutcome> outcomes;

void record(int number, const std::string& title, bool pass, const std::string& detail) {
  outcomes.push_back({number, title, pass, detail});
}

const Assertion* find_assertion(const Report& r, const std::string& scenario,
                                const std::string& name) {
  for (const auto& sr : r.results) {
    if (sr.scenario != scenario) continue;
    for (const auto& a : sr.assertions)
      if (a.name == name) return &a;
  }
  return nullptr;
}

/// All named assertions exist and pass; appends failure details.
bool assertions_pass(const Report& r, const std::string& scenario,
                     const std::vector<std::string>& names, std::string& detail) {
  bool ok = true;
  for (const std::string& name : names) {
    const Assertion* a = find_assertion(r, scenario, name);
    if (!a) {
      ok = false;
      detail += " missing " + scenario + "/" + name + ";";
    } else if (!a->pass) {
      ok = false;
      detail += " " + scenario + "/" + name + " expected " + a->expected + " measured " +
                a->measured + ";";
    }
  }
  return ok;
}

std::string secs(double s) { return fmt_double(s) + "s"; }

}  // namespace

int main() {
  const std::uint64_t seed = 0;
  std::printf("acceptance suite, seed %llu\n", static_cast<unsigned long long>(seed));

  const SelftestRun run = run_selftest(seed);
  const Report& rep = run.report;

  {  // 1. inverse exactness across 200 configurations, both orders, <= 10 s
    std::string detail;
    bool ok = assertions_pass(rep, "suite/inverse-exactness",
                              {"configurations-built", "max-inverse-residual",
                               "max-reverse-residual"},
                              detail);
    const bool in_time = run.timings.inverse_exactness <= 10.0;
    if (!in_time) detail += " runtime over 10s;";
    record(1, "inverse exactness over 200 seeded configurations", ok && in_time,
           detail + " runtime " + secs(run.timings.inverse_exactness));
  }

  {  // 2. positivity of every constructed perturbation over 10^4 samples
    std::string detail;
    const bool ok = assertions_pass(rep, "suite/positivity", {"all-positive-over-10k-samples"},
                                    detail);
    record(2, "every constructed perturbation is positive (10^4 samples, tol 1e-9)", ok, detail);
  }

  {  // 3. witness coverage per family, 25 runs each, budget 10^4, <= 30 s
    std::string detail;
    bool ok = assertions_pass(rep, "suite/witness-coverage",
                              {"family-orthant", "family-lorentz", "family-psd",
                               "family-copositive", "family-grid"},
                              detail);
    const bool in_time = run.timings.witness_coverage <= 30.0;
    if (!in_time) detail += " runtime over 30s;";
    record(3, "non-positive-inverse witnesses found in all 125 seeded runs", ok && in_time,
           detail + " runtime " + secs(run.timings.witness_coverage));
  }

  {  // 4. spin-factor golden values
    std::string detail;
    const bool ok = assertions_pass(rep, "example/spin-factor",
                                    {"margin((xhat,0))", "T((xhat,0))", "Tinv((xhat,1))",
                                     "witness-y-margin", "witness-x-margin"},
                                    detail);
    record(4, "spin-factor golden: T((xhat),0)=((xhat),1), margins (0,-1)", ok, detail);
  }

  {  // 5. grid-functions golden values
    std::string detail;
    const bool ok = assertions_pass(rep, "example/c01-grid",
                                    {"integral-of-x", "margin(x)", "T(x)-node-values",
                                     "margin(T(x))"},
                                    detail);
    record(5, "continuous-functions golden: integral 1, image nodes (1,6,1,0,1)", ok, detail);
  }

  {  // 6. psd/copositive golden values
    std::string detail;
    const bool ok = assertions_pass(rep, "example/psd-copositive",
                                    {"psd-margin(D)", "copositive-margin(D)", "T(D)",
                                     "psd-margin(T(D))", "witness-recovers-D"},
                                    detail);
    record(6, "matrix-cone golden: D margins -1/2, T(D)=D+(3/2)I, witness recovers D", ok,
           detail);
  }

  {  // 7. truncated sequence-space golden values
    std::string detail;
    const bool ok = assertions_pass(rep, "example/lp-truncation",
                                    {"Tinv(e1)", "margin(Tinv(e1))"}, detail);
    record(7, "sequence-space golden: Tinv(e1) = e1 - e2/2, margin -1/2", ok, detail);
  }

  {  // 8. vanishing-at-infinity golden values
    std::string detail;
    const bool ok = assertions_pass(rep, "example/c0-grid",
                                    {"margin(x)", "refined-min(x+u)"}, detail);
    record(8, "decay-grid golden: margin(x) = -1/e, refined min of x+u positive", ok, detail);
  }

  {  // 9. the 2x2 decomposition of [[1,3],[2,4]] must be infeasible with
     //    certificates (6 vs <4) and (1 vs 4) and grid residual > 0.05
    const Mat2 golden{{{1.0, 3.0}, {2.0, 4.0}}};
    const Decomposition2x2 dec = decompose_2x2(golden);
    const GridScan2x2 scan = grid_scan_2x2(golden);
    std::string detail;
    bool ok = true;
    if (!(dec.identity_case.required_product == 6.0 && dec.identity_case.strict_bound == 4.0 &&
          !dec.identity_case.feasible)) {
      ok = false;
      detail += " identity certificate mismatch;";
    }
    if (dec.feasible) {
      ok = false;
      detail += " expected Infeasible, measured feasible via swap case with D=(" +
                fmt_double(dec.diag[0]) + "," + fmt_double(dec.diag[1]) + "), u=(" +
                fmt_double(dec.u[0]) + "," + fmt_double(dec.u[1]) + "), v=(" +
                fmt_double(dec.v[0]) + "," + fmt_double(dec.v[1]) + "), reconstruction error " +
                fmt_double(dec.reconstruction_error) + ";";
    }
    if (!(scan.min_residual > 0.05)) {
      ok = false;
      detail += " expected grid residual > 0.05, measured " + fmt_double(scan.min_residual) +
                " at d=(" + fmt_double(scan.d1) + "," + fmt_double(scan.d2) + ") in the " +
                (scan.swapped ? "swap" : "identity") + " case;";
    }
    record(9, "2x2 decomposition of [[1,3],[2,4]] infeasible with certified constants", ok,
           detail.empty() ? " as stated" : detail);
  }

  {  // 10. negative controls stay witness-free; the orthant control inverts
     //     to diag(1/2, 1, ..., 1) exactly
    std::string detail;
    bool ok = assertions_pass(rep, "control/orthant-automorphism",
                              {"witness-not-found", "Tinv-equals-half-diagonal"}, detail);
    ok = assertions_pass(rep, "control/ray-cone", {"witness-not-found"}, detail) && ok;
    record(10, "negative controls: no witness over the full budget, exact control inverse", ok,
           detail);
  }

  {  // 11. smallest scaling index is 1 on the canonical zero pairings
    std::string detail;
    const bool ok = assertions_pass(rep, "suite/scaling",
                                    {"orthant-smallest-n", "orthant-witness-verified",
                                     "psd-smallest-n", "psd-witness-verified"},
                                    detail);
    record(11, "scaled-family escalation returns N=1 with verified witnesses", ok, detail);
  }

  {  // 12. bisection against the analytic crossings plus the sandwich invariant
    std::string detail;
    const bool ok = assertions_pass(rep, "suite/bisection",
                                    {"orthant-c", "lorentz-c", "psd-c", "crossing-sandwich"},
                                    detail);
    record(12, "boundary bisection: |c - analytic| <= 1e-6 and crossing sandwich", ok, detail);
  }

  {  // 13. copositivity oracle equivalence on 200 instances, <= 20 s
    std::string detail;
    bool ok = assertions_pass(rep, "suite/copositivity-oracle",
                              {"max-face-vs-oracle-gap", "face-below-raw-grid"}, detail);
    const bool in_time = run.timings.oracle <= 20.0;
    if (!in_time) detail += " runtime over 20s;";
    record(13, "face enumeration matches grid minimization within 1e-6", ok && in_time,
           detail + " runtime " + secs(run.timings.oracle));
  }

  {  // 14. property suites across all supported cones at seed 0
    std::string detail;
    bool ok = true;
    long sections = 0;
    for (const auto& sr : rep.results) {
      if (sr.scenario.rfind("properties/", 0) != 0) continue;
      ++sections;
      if (!sr.all_pass()) {
        ok = false;
        for (const auto& a : sr.assertions)
          if (!a.pass) detail += " " + sr.scenario + "/" + a.name + ";";
      }
    }
    if (sections == 0) {
      ok = false;
      detail = " no property sections ran;";
    }
    record(14, "property suites pass with zero failures (seed 0)", ok,
           detail + " " + std::to_string(sections) + " sections");
  }

  {  // 15. the full selftest: every check green, <= 90 s, byte-identical rerun
    std::string detail;
    bool ok = true;
    if (!rep.all_pass()) {
      ok = false;
      detail += " " + std::to_string(rep.failure_count()) + " selftest failure(s);";
    }
    if (run.timings.total > 90.0) {
      ok = false;
      detail += " runtime over 90s;";
    }
    const Report rerun = selftest_report(seed);
    if (to_json(rep).dump() != to_json(rerun).dump() || to_text(rep) != to_text(rerun) ||
        to_csv(rep) != to_csv(rerun)) {
      ok = false;
      detail += " rerun output differs;";
    }
    record(15, "selftest green, within 90 s, byte-identical across reruns", ok,
           detail + " runtime " + secs(run.timings.total));
  }

  int failures = 0;
  for (const auto& c : outcomes) {
    std::printf("[%s] criterion %2d: %s —%s\n", c.pass ? "PASS" : "FAIL", c.number,
                c.title.c_str(), c.detail.c_str());
    if (!c.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(outcomes.size()) - failures,
              outcomes.size());
  return failures == 0 ? 0 : 1;
}
