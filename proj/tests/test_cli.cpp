#include <doctest.h>

#include "calibkit/commands.hpp"
#include "calibkit/grassmann.hpp"

using namespace calib;
using namespace calib::cli;

namespace {

RunConfig config(const std::string& command, Family f = Family::associative) {
  RunConfig c;
  c.command = command;
  c.calibration.family = f;
  return c;
}

}  // namespace

TEST_CASE("module reports dimensions") {
  const CommandResult r = run(config("module"));
  CHECK(r.exit_code == kOk);
  CHECK(r.report.at("dim_phi") == 7);
  CHECK(r.report.at("dim_stab") == 14);
  CHECK(r.report.at("n") == 7);
  CHECK_FALSE(r.report.contains("basis"));

  RunConfig c = config("module", Family::cartan);
  c.show_basis = true;
  const CommandResult k = run(c);
  CHECK(k.report.at("dim_phi") == 20);
  CHECK(k.report.at("dim_stab") == 8);
  CHECK(k.report.at("basis").size() == 20);

  RunConfig sl = config("module", Family::special_lagrangian);
  sl.calibration.m = 3;
  CHECK(run(sl).report.at("dim_stab") == 8);
}

TEST_CASE("check exit codes") {
  RunConfig c = config("check");
  c.frame = OrientedPlane::coordinate(7, {0, 1, 2}).frame();
  const CommandResult ok = run(c);
  CHECK(ok.exit_code == kOk);
  CHECK(ok.report.at("is_critical") == true);
  CHECK(ok.report.at("value").get<double>() == doctest::Approx(1.0));

  c.frame.reset();
  c.seed = 5;
  CHECK(run(c).exit_code == kNegative);

  c.seed.reset();
  CHECK_THROWS_AS(run(c), UsageError);
  c.frame = Eigen::MatrixXd::Identity(7, 2);
  CHECK_THROWS_AS(run(c), UsageError);
}

TEST_CASE("non-orthonormal frames are repaired with a warning") {
  RunConfig c = config("check");
  Eigen::MatrixXd f = OrientedPlane::coordinate(7, {0, 1, 2}).frame();
  f(0, 0) = 2.0;
  c.frame = f;
  const CommandResult r = run(c);
  CHECK(r.exit_code == kOk);
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("sff and eds exit codes") {
  RunConfig s = config("sff");
  s.frame = OrientedPlane::coordinate(7, {0, 1, 2}).frame();
  const CommandResult ok = run(s);
  CHECK(ok.exit_code == kOk);
  CHECK(ok.report.at("dim") == 12);

  RunConfig z = config("sff", Family::custom);
  z.calibration.form = AltForm::basis(5, {0, 1});
  z.frame = OrientedPlane::coordinate(5, {2, 3}).frame();
  CHECK(run(z).exit_code == kNegative);

  s.frame = Eigen::MatrixXd::Identity(7, 3);
  s.frame->col(2) = Eigen::VectorXd::Unit(7, 3);
  s.frame->col(0) = (Eigen::VectorXd::Unit(7, 0) + Eigen::VectorXd::Unit(7, 6)).normalized();
  CHECK_THROWS_AS(run(s), UsageError);

  RunConfig e = config("eds", Family::coassociative);
  e.seed = 1;
  const CommandResult ce = run(e);
  CHECK(ce.exit_code == kNegative);
  CHECK(ce.report.at("actual_codim") == 4);
  CHECK(ce.report.at("cartan_bound") == 3);

  RunConfig a = config("eds");
  a.frame = OrientedPlane::coordinate(7, {0, 1, 2}).frame();
  const CommandResult ca = run(a);
  CHECK(ca.exit_code == kOk);
  CHECK(ca.report.at("dual_equal") == true);
}

TEST_CASE("comass and spinor") {
  RunConfig c = config("comass", Family::cayley);
  c.params.trials = 5;
  const CommandResult r = run(c);
  CHECK(r.report.at("comass").get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  const CommandResult s = run(config("spinor"));
  CHECK(s.exit_code == kOk);
  CHECK(s.report.at("N") == 7);
}

TEST_CASE("search output is deterministic") {
  RunConfig c = config("search", Family::cartan);
  c.seed = 3;
  c.params.trials = 12;
  c.params.threads = 1;
  const CommandResult a = run(c);
  c.params.threads = 3;
  const CommandResult b = run(c);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.csv == b.csv);
  CHECK(a.report.at("calibration").at("family") == "cartan");
  CHECK_FALSE(a.report.at("params").contains("threads"));
}

TEST_CASE("config files") {
  const RunConfig c = config_from_json(nlohmann::json::parse(R"({"family": "special_lagrangian", "m": 4, "phase": 0.5, "trials": 7,
                                                                 "seed": 9, "tol": 1e-6, "basis": true})"));
  CHECK(c.calibration.family == Family::special_lagrangian);
  CHECK(c.calibration.m == 4);
  CHECK(c.calibration.phase == 0.5);
  CHECK(c.params.trials == 7);
  CHECK(*c.seed == 9);
  CHECK(c.tol == 1e-6);
  CHECK(c.show_basis);

  const RunConfig f = config_from_json(nlohmann::json::parse(R"({"family": "custom", "form": "e12 + e34", "n": 4})"));
  REQUIRE(f.calibration.form);
  CHECK(f.calibration.form->size() == 2);

  CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), UsageError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"family": "nope"})")), UsageError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"m": "three"})")), UsageError);
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(run(config("frobnicate")), UsageError);
  RunConfig sl = config("module", Family::special_lagrangian);
  sl.calibration.m = 7;
  CHECK_THROWS_AS(run(sl), UsageError);
  RunConfig s = config("search");
  s.params.grad_tol = 1.0;
  CHECK_THROWS_AS(run(s), UsageError);
}

TEST_CASE("text formatting") {
  const std::string t = format_text({{"a", 1}, {"frame", {{1, 0}, {0, 1}}}});
  CHECK(t == "a: 1\nframe: 2 entries\n");
}
