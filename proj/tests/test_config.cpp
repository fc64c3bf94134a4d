#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lambdacav/run.hpp"

using namespace lambdacav;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults for a response run") {
  const RunConfig c = parse_config("", Subcommand::response, {{"C", "250"}});
  CHECK(c.params.g == doctest::Approx(std::sqrt(500.0)).epsilon(1e-15));
  CHECK(c.params.Delta_p == 1.1 * c.params.g);
  CHECK(c.params.Gamma_31 == 0.5);
  CHECK(c.params.Gamma_32 == 0.5);
  CHECK(c.params.Delta_1 == 0.0);
  CHECK(c.params.Delta_c == 0.0);
  CHECK(c.params.kappa_A == 0.5);
  CHECK(c.params.kappa_B == 0.5);
  CHECK(c.params.gamma_2 == 0.0);
  CHECK(c.params.gamma_3 == 0.0);
  CHECK(c.drive.c_c == cplx(8.0));
  CHECK(c.drive.c_p == cplx(0.0, -0.8 * std::sqrt(0.5)));
  CHECK(c.grid.size() == 160);
  CHECK(c.grid.front() == 0.25);
  CHECK(c.grid.back() == 40.0);
  CHECK(c.policy.N_start == 8);
  CHECK(c.policy.growth == 1.5);
  CHECK(c.policy.N_max == 120);

  const RunConfig s = parse_config("", Subcommand::spectrum);
  CHECK(s.grid.size() == 281);
  CHECK(s.grid[140] == 0.0);
  const RunConfig r = parse_config("", Subcommand::rcurve);
  CHECK(r.grid == std::vector<double>{0, 10, 25, 50, 85, 100, 150, 200, 250, 350, 500, 750, 1000});
}

TEST_CASE("document values and overrides") {
  const RunConfig c = parse_config("gamma_2 = 0.01  # dephasing\n\ngrowth = 3/2\nkappa_A=0.25\nkappa_B = 0.75\n",
                                   Subcommand::probe, {{"gamma_2", "0.02"}});
  CHECK(c.params.gamma_2 == 0.02);
  CHECK(c.policy.growth == 1.5);
  CHECK(c.drive.c_p == cplx(0.0, -0.4));
  CHECK(parse_config("gamma_2 = 0.01", Subcommand::probe).params.gamma_2 == 0.01);
  CHECK(parse_config("Delta_p = 3", Subcommand::response).params.Delta_p == 3.0);
  CHECK(parse_config("grid = 1, 2.5,4", Subcommand::response).grid == std::vector<double>{1, 2.5, 4});
}

TEST_CASE("strict schema errors") {
  try {
    parse_config("g = 20\nkapa_A = 0.5\n", Subcommand::probe);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "kapa_A");
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("kapa_A") != std::string::npos);
  }
  CHECK(message_of([] { parse_config("g = nan", Subcommand::probe); }).find("finite") != std::string::npos);
  CHECK(message_of([] { parse_config("g = inf", Subcommand::probe); }).find("'g'") != std::string::npos);
  CHECK_THROWS_AS(parse_config("grid = 1,,2", Subcommand::response), ConfigError);
  CHECK_THROWS_AS(parse_config("grid = 3,2", Subcommand::response), ConfigError);
  CHECK_THROWS_AS(parse_config("grid = 3", Subcommand::response), ConfigError);
  CHECK_THROWS_AS(parse_config("g = 1\ng = 2", Subcommand::probe), ConfigError);
  CHECK_THROWS_AS(parse_config("g = 1\nC = 2", Subcommand::probe), ConfigError);
  CHECK_THROWS_AS(parse_config("Delta_p = 1", Subcommand::spectrum), ConfigError);
  CHECK_THROWS_AS(parse_config("kappa_A = 0.7", Subcommand::probe), ConfigError);
  CHECK_THROWS_AS(parse_config("N_max = 400", Subcommand::probe), ConfigError);
  CHECK_THROWS_AS(parse_config("grid_points = 5", Subcommand::probe), ConfigError);
  CHECK_THROWS_AS(parse_config("g 20", Subcommand::probe), ConfigError);
  CHECK_THROWS_AS(parse_config("subcommand = rcurve", Subcommand::probe), ConfigError);
  CHECK_THROWS_AS(parse_config("", Subcommand::probe, {{"wrkers", "2"}}), ConfigError);
  CHECK_THROWS_AS(parse_subcommand("sweep"), ConfigError);
  CHECK_NOTHROW(parse_config("diag.solver = anything", Subcommand::probe));
}

TEST_CASE("shortest round-trip number format") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, double(i % 20) - 10.0);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(250.0) == "250");
}

TEST_CASE("probe with zero drive") {
  const RunConfig c = parse_config("epsilon = 0", Subcommand::probe);
  const RunOutput out = execute(c);
  CHECK(out.exit_status == 0);
  CHECK(out.report.find("n_intracavity = 0\n") != std::string::npos);
  CHECK(out.report.find("n_out = 0\n") != std::string::npos);
  CHECK(out.report.find("absorption = 0\n") != std::string::npos);
  CHECK(out.report.find("g2_zero = undefined") != std::string::npos);
}

TEST_CASE("manifest reproduces the csv") {
  for (auto [sub, doc] : {std::pair{Subcommand::response, "C = 85\ngrid_min = 0.5\ngrid_max = 9\ngrid_points = 7\n"},
                          std::pair{Subcommand::spectrum, "epsilon = 1.5\ngrid = -22, -1, 0, 0.3, 21.5\nc_c_re = 7.5\n"},
                          std::pair{Subcommand::response, "g = 12.5\nDelta_p = 3.7\ngrid = 0.1, 1, 3\n"}}) {
    const RunOutput first = execute(parse_config(doc, sub));
    const RunOutput again = execute(parse_config(first.manifest, sub));
    CHECK(again.csv == first.csv);
    CHECK(again.manifest == first.manifest);
    CHECK(first.manifest.find("diag.point.0.fock_n = ") != std::string::npos);
    CHECK(first.manifest.find("diag.point.0.residual = ") != std::string::npos);
  }
}

TEST_CASE("csv schemas") {
  const RunOutput sp = execute(parse_config("grid = -1, 0, 1", Subcommand::spectrum));
  CHECK(sp.csv.rfind("delta_p,n_intracavity,n_out,g2_zero,absorption,fock_n,residual,error\n", 0) == 0);
  std::istringstream lines(sp.csv);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 4);
  const RunOutput re = execute(parse_config("grid = 1, 2", Subcommand::response));
  CHECK(re.csv.rfind("epsilon_sq,", 0) == 0);
}

TEST_CASE("run writes csv and manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "lambdacav_test_run";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "resp.csv").string();
  std::ostringstream log;
  const RunConfig c = parse_config("grid = 1, 2", Subcommand::response, {{"out", path}});
  CHECK(run(c, log) == 0);
  std::ifstream csv(path), manifest(path + ".manifest");
  CHECK(csv.good());
  CHECK(manifest.good());
  std::stringstream body;
  body << csv.rdbuf();
  CHECK(body.str() == execute(c).csv);

  const RunConfig bad = parse_config("grid = 1, 2", Subcommand::response, {{"out", (dir / "missing" / "x.csv").string()}});
  CHECK(run(bad, log) == 2);
  std::filesystem::remove_all(dir);
}
