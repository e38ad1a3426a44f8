#include <doctest.h>

#include <functional>

#include <conewit/textform.hpp>

using namespace conewit;

namespace {
std::string error_text(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an Error");
  return "";
}
}  // namespace

TEST_CASE("cone forms parse and print canonically") {
  for (const char* text : {"orthant:4", "lorentz:3", "psd:3", "copositive:2", "lex",
                           "ray:3:[1,0,0]", "grid:[0,0.25,0.5,0.75,1]"}) {
    const ConeSpec cone = parse_cone(text);
    CHECK(cone_to_text(cone) == text);
  }
  CHECK(error_text([] { parse_cone("orthant"); }).find("ParseError") != std::string::npos);
  CHECK(error_text([] { parse_cone("simplex:3"); }).find("unknown cone") != std::string::npos);
  // ray directions are normalized on input
  const ConeSpec ray = parse_cone("ray:2:[3,4]");
  CHECK(std::get<RayCone>(ray).direction[0] == doctest::Approx(0.6));
}

TEST_CASE("functional forms parse in cone context") {
  const ConeSpec orthant = make_orthant(3);
  CHECK(std::get<DenseCovector>(parse_functional("covector:[1,0,2]", orthant)).values ==
        std::vector<double>{1.0, 0.0, 2.0});
  const ConeSpec lorentz = make_lorentz(2);
  CHECK(std::get<SpinDual>(parse_functional("spindual:[0.6,0.8]", lorentz)).xhat.size() == 2);
  const ConeSpec psd = make_psd(2);
  CHECK(std::holds_alternative<TraceForm>(parse_functional("trace", psd)));
  CHECK(functional_to_text(parse_functional("trace", psd)) == "trace");
  const ConeSpec grid = parse_cone("grid:[0,0.5,1]");
  CHECK(std::holds_alternative<TrapezoidIntegral>(parse_functional("trapezoid", grid)));
  CHECK(std::get<PointEvaluation>(parse_functional("eval@0", grid)).node == 0);
  CHECK(functional_to_text(parse_functional("eval@2", grid)) == "eval@2");
  CHECK(std::holds_alternative<LexFirstCoord>(parse_functional("lexfirst", make_lex())));
  // context guards
  CHECK(error_text([&] { parse_functional("trace", orthant); }).find("matrix cone") !=
        std::string::npos);
  CHECK(error_text([&] { parse_functional("trapezoid", orthant); }).find("grid cone") !=
        std::string::npos);
}

TEST_CASE("map and point forms parse") {
  const ConeSpec orthant = make_orthant(2);
  CHECK(std::holds_alternative<Identity>(parse_map("identity", orthant)));
  const LinearMap pd = parse_map("permdiag:(2,1):(0.5,2)", orthant);
  const Point y = conewit::apply(pd, coords({1.0, 1.0}));
  CHECK(std::get<Coordinates>(y).values == std::vector<double>{2.0, 0.5});
  CHECK(std::holds_alternative<LexTriangular>(parse_map("lextri:(1,5,2)", make_lex())));
  CHECK(std::holds_alternative<Congruence>(
      parse_map("congruence:[[1,0],[1,1]]", make_psd(2))));
  // seeded sample is reproducible
  const LinearMap s1 = parse_map("sample:5", orthant);
  const LinearMap s2 = parse_map("sample:5", orthant);
  CHECK(inf_norm(sub(conewit::apply(s1, coords({1.0, 2.0})),
                     conewit::apply(s2, coords({1.0, 2.0})))) == 0.0);

  CHECK(std::get<Coordinates>(parse_point("point:[0,1]", orthant)).values ==
        std::vector<double>{0.0, 1.0});
  const ConeSpec grid = parse_cone("grid:[0,1]");
  CHECK(std::holds_alternative<GridFunction>(parse_point("point:[1,2]", grid)));
  CHECK(std::holds_alternative<SymMat>(parse_point("mat:[[1,0],[0,1]]", make_psd(2))));
  CHECK(std::holds_alternative<SymMat>(parse_point("unit", make_psd(2))));
  CHECK(error_text([&] { parse_point("point:[1,2]", make_psd(2)); }).find("mat:") !=
        std::string::npos);
}

TEST_CASE("config files parse flat key-value lines") {
  const std::string text =
      "# comment\n"
      "[scenario]\n"
      "name = \"demo\"\n"
      "cone = lorentz:2\n"
      "f = \"spindual:[1,0]\"\n"
      "u = point:[0,0,1]\n"
      "seed = 3\n"
      "budget = 250\n";
  const ConfigFile cfg = parse_config_text(text);
  CHECK(cfg.get("name", "") == "demo");
  CHECK(cfg.get("cone", "") == "lorentz:2");
  CHECK(cfg.entries.at("cone").line == 4);

  const Scenario sc = scenario_from_config(cfg);
  CHECK(sc.name == "demo");
  CHECK(sc.budget == 250);
  CHECK(std::holds_alternative<LorentzCone>(sc.cone));
  CHECK(sc.expectations.size() == 3);  // positive, residual, witness
  const Report r = run_scenario(sc, 3);
  CHECK(r.all_pass());
}

TEST_CASE("config errors carry line and column") {
  const std::string bad_line = error_text([] { parse_config_text("cone lorentz:2\n"); });
  CHECK(bad_line.find("line 1") != std::string::npos);
  const std::string bad_value = error_text([] {
    scenario_from_config(parse_config_text("cone = orthant:2\nf = covector:[oops]\n"));
  });
  CHECK(bad_value.find("line 2") != std::string::npos);
  CHECK(bad_value.find("f (") != std::string::npos);
  const std::string missing = error_text([] {
    scenario_from_config(parse_config_text("cone = orthant:2\n"));
  });
  CHECK(missing.find("'f'") != std::string::npos);
}

TEST_CASE("config expectations control the witness assertion") {
  const Scenario found = scenario_from_config(parse_config_text(
      "cone = orthant:3\nf = covector:[1,1,1]\nu = unit\nexpect = witness-found\n"));
  CHECK(std::get<ExpectWitness>(found.expectations.back()).found);
  const Scenario not_found = scenario_from_config(parse_config_text(
      "cone = orthant:3\nf = covector:[1,0,0]\nu = point:[1,0,0]\nexpect = witness-not-found\n"));
  CHECK(!std::get<ExpectWitness>(not_found.expectations.back()).found);
  const Scenario none = scenario_from_config(parse_config_text(
      "cone = orthant:3\nf = covector:[1,1,1]\nexpect = none\n"));
  CHECK(none.expectations.size() == 2);
}
