#include <doctest.h>

#include "kmace/error.hpp"
#include "kmace/mc_check.hpp"

using namespace kmace;

TEST_CASE("zero-scatter configuration is exact on both paths") {
  MomentCheckConfig config;
  config.n = 5;
  config.d = 2;
  config.draws = 100;
  config.rng = RngSpec{1, "zero"};
  config.centers = Matrix(5, 2, 1.0);
  config.spectra.assign(5, {0.0, 0.0});
  const MomentCheckResult r = run_moment_check(config);
  CHECK(r.pass());
  CHECK(r.closed_z.mean == 0.0);
  CHECK(r.closed_y.mean == 0.0);
  CHECK(r.mc_mean_z == 0.0);
  CHECK(r.mc_var_y == 0.0);
}

TEST_CASE("closed forms pass a 1e5-draw simulation on a fixed cluster") {
  MomentCheckConfig config;
  config.n = 20;
  config.d = 2;
  config.draws = 100000;
  config.rng = RngSpec{2, "fixed"};
  config.centers = Matrix(20, 2, 0.0);
  Rng rng(RngSpec{3, "centers"});
  for (double& v : config.centers.storage()) v = rng.normal();
  config.spectra.assign(20, {0.7, 0.7});  // shared isotropic
  const MomentCheckResult r = run_moment_check(config);
  CHECK(r.pass_mean_z);
  CHECK(r.pass_var_z);
  CHECK(r.pass_mean_y);
  CHECK(r.pass_var_y);
}

TEST_CASE("a deliberately perturbed closed form fails the check") {
  MomentCheckConfig config;
  config.n = 20;
  config.d = 2;
  config.draws = 100000;
  config.rng = RngSpec{4, "perturb"};
  config.centers = Matrix(20, 2, 0.0);
  config.spectra.assign(20, {1.0, 1.0});
  config.perturb_factor = 1.1;
  const MomentCheckResult r = run_moment_check(config);
  CHECK(!r.pass());
}

TEST_CASE("randomized configuration families pass") {
  for (int i = 0; i < 4; ++i) {
    const MomentCheckConfig config =
        random_moment_config(i, 40000, RngSpec{5, "batch"});
    const MomentCheckResult r = run_moment_check(config);
    CHECK(r.pass());
  }
}

TEST_CASE("invalid configurations are rejected") {
  MomentCheckConfig config;
  config.n = 0;
  config.d = 1;
  CHECK_THROWS_WITH_AS(run_moment_check(config), doctest::Contains("ConfigInvalid"),
                       Error);
  config.n = 2;
  config.centers = Matrix(2, 1, 0.0);
  config.spectra = {{-1.0}, {1.0}};
  CHECK_THROWS_AS(run_moment_check(config), Error);
}

TEST_CASE("report json carries the aggregate verdict") {
  MomentCheckConfig config;
  config.n = 3;
  config.d = 1;
  config.draws = 2000;
  config.rng = RngSpec{6, "json"};
  config.centers = Matrix(3, 1, 0.0);
  config.spectra.assign(3, {0.5});
  const MomentCheckResult r = run_moment_check(config);
  std::vector<MomentCheckResult> rs{r};
  const std::string json = moment_check_report_json(rs);
  CHECK(json.find("\"pass\": true") != std::string::npos);
}
