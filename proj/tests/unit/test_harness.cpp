#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "xlpc/errors.hpp"
#include "xlpc/harness.hpp"

using namespace xlpc;
namespace fs = std::filesystem;

namespace {

ExperimentSpec tiny(Scenario s) {
  auto spec = make_spec(s);
  spec.draws = 6;
  spec.seed = 4;
  spec.options.op_draws = 40;
  spec.options.grid = 6;
  spec.options.nb_draws = 2;
  spec.options.nb_grid = 4;
  spec.options.queue_draws = 3;
  spec.options.slots = 2000;
  spec.options.horizon_cap = 50;
  if (!spec.options.n_list.empty()) spec.options.n_list = {2, 3};
  if (!spec.options.q_list.empty()) spec.options.q_list = {0.3, 0.7};
  if (!spec.options.b_list.empty()) spec.options.b_list = {0.0, 5e-3};
  if (!spec.options.l_list.empty()) spec.options.l_list = {1, 4};
  if (!spec.options.lambda_fracs.empty()) spec.options.lambda_fracs = {0.5, 1.0};
  return spec;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("default constants") {
    const auto p = defaults();
    CHECK(p.efficiency_c() == 1.0);
    CHECK(p.p_max == 0.1);
    CHECK(p.noise_var == 1e-3);
    CHECK(p.buffer_k == 10);
    CHECK(p.arrival_q == 0.5);
    CHECK(p.b_fixed == 5e-3);
    CHECK(p.nu_max / p.nu_min == doctest::Approx(100.0));
  }

  TEST_CASE("scenario names round-trip") {
    for (auto s : all_scenarios()) CHECK(parse_scenario(to_string(s)) == s);
    CHECK_THROWS_AS(parse_scenario("nope"), DomainError);
  }

  TEST_CASE("overrides are type-checked") {
    auto spec = make_spec(Scenario::Region);
    apply_override(spec, "b_fixed=0");
    apply_override(spec, "arrival_q", "0.999999999");
    CHECK(spec.params == goodman_mode(defaults()));
    apply_override(spec, "n_list=2,3,5");
    CHECK(spec.options.n_list == std::vector<int>{2, 3, 5});
    CHECK(spec.overrides.size() == 3);
    CHECK_THROWS_AS(apply_override(spec, "buffer_k=2.5"), DomainError);
    CHECK_THROWS_AS(apply_override(spec, "noise_var=abc"), DomainError);
    CHECK_THROWS_AS(apply_override(spec, "unknown_key=1"), DomainError);
    CHECK_THROWS_AS(apply_override(spec, "no_equals_sign"), DomainError);
    CHECK_THROWS_AS(apply_override(spec, "n_list=2,x"), DomainError);
  }

  TEST_CASE("invalid specs fail before running") {
    auto spec = tiny(Scenario::TminVsQ);
    spec.options.q_list = {0.5, 1.5};
    CHECK_THROWS_AS(validate_spec(spec), DomainError);
    spec = tiny(Scenario::TminVsB);
    spec.options.b_list.clear();
    CHECK_THROWS_AS(validate_spec(spec), DomainError);
    spec = tiny(Scenario::QueueCompare);
    spec.params.arrival_q = 1.0;
    CHECK_THROWS_AS(validate_spec(spec), DomainError);
    spec = tiny(Scenario::Region);
    spec.params.nu_min = 20.0;
    CHECK_THROWS_AS(validate_spec(spec), DomainError);
    spec = tiny(Scenario::WelfareFrg);
    spec.draws = 0;
    CHECK_THROWS_AS(validate_spec(spec), DomainError);
  }

  TEST_CASE("every scenario runs and replays byte-identically") {
    const fs::path root = fs::temp_directory_path() / "xlpc_harness_test";
    fs::remove_all(root);
    for (auto s : all_scenarios()) {
      CAPTURE(to_string(s));
      auto spec = tiny(s);
      spec.out_dir = (root / "a").string();
      const auto res = run_experiment(spec);
      REQUIRE(res.files.size() >= 2);
      const fs::path csv = root / "a" / (to_string(s) + ".csv");
      const fs::path man = root / "a" / (to_string(s) + ".manifest.json");
      REQUIRE(fs::exists(csv));
      REQUIRE(fs::exists(man));
      CHECK(res.manifest.at("scenario") == to_string(s));
      CHECK(res.manifest.at("seed") == 4);

      auto again = load_manifest(man.string());
      again.out_dir = (root / "b").string();
      run_experiment(again);
      CHECK(slurp(csv) == slurp(root / "b" / (to_string(s) + ".csv")));
      CHECK(run_scenario_csv(again) == slurp(csv));
    }
    fs::remove_all(root);
  }

  TEST_CASE("manifest round-trips overrides and typed params") {
    auto spec = tiny(Scenario::WelfareDrg);
    apply_override(spec, "spreading_l=3");
    apply_override(spec, "lambda_fracs=0.25,1");
    const auto m = manifest_for(spec);
    CHECK(m.at("params").at("spreading_l").is_number_integer());
    CHECK(m.at("params").at("noise_var").is_number_float());
    const auto back = spec_from_manifest(m);
    CHECK(back.params == spec.params);
    CHECK(back.options.lambda_fracs == spec.options.lambda_fracs);
    CHECK(back.overrides == spec.overrides);
    CHECK(back.draws == spec.draws);
  }

  TEST_CASE("threshold sweep reports both models") {
    const auto csv = run_scenario_csv(tiny(Scenario::LambdaVsEta));
    CHECK(csv.find("crosslayer") != std::string::npos);
    CHECK(csv.find("goodman") != std::string::npos);
  }
}
