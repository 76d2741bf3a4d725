#include "doctest.h"

#include "json.hpp"

#include "wgfd/bench.hpp"
#include "wgfd/flow.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "wgfd_cli_test";

int cli(const std::string& args) {
  const std::string cmd = std::string(WGFD_CLI) + " " + args + " >" + (kRoot / "stdout.txt").string() +
                          " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json summary(const fs::path& p) { return json::parse(slurp(p)); }

struct Scratch {
  Scratch() {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Scratch, "zero iterations report the initial criterion") {
  const fs::path out = kRoot / "zero";
  REQUIRE(cli("run --model so --k 2 --space cube --criterion E --iters 0 --out " + out.string()) ==
          0);
  const fs::path dir = out / "E-so2-cube";
  for (const char* f : {"wgf_trace.csv", "wgf_design.csv", "wgf_summary.json", "wgf.svg"})
    CHECK(fs::exists(dir / f));
  std::ifstream design(dir / "wgf_design.csv");
  const wgfd::DesignMeasure mu = wgfd::read_design_csv(design);
  const double init = wgfd::criterion_value(mu, wgfd::RegressionModel::second_order(2),
                                            wgfd::Criterion::E());
  CHECK(summary(dir / "wgf_summary.json")["final_value"].get<double>() ==
        doctest::Approx(init).epsilon(1e-10));
  CHECK(slurp(dir / "wgf_trace.csv").rfind("iter,value,dirnorm,step\n", 0) == 0);
}

TEST_CASE_FIXTURE(Scratch, "default square E run approaches the reference") {
  const fs::path out = kRoot / "e2";
  REQUIRE(cli("run --model so --k 2 --space cube --criterion E --out " + out.string()) == 0);
  const json j = summary(out / "E-so2-cube" / "wgf_summary.json");
  CHECK(j["reference_value"].get<double>() == doctest::Approx(0.2));
  CHECK(j["final_value"].get<double>() >= 0.19);
  CHECK(j["gap"].get<double>() <= 0.01);
}

TEST_CASE_FIXTURE(Scratch, "runs are reproducible byte for byte") {
  const std::string args = "run --model so --k 2 --space ball --criterion E --iters 80 --seed 7";
  REQUIRE(cli(args + " --out " + (kRoot / "a").string()) == 0);
  REQUIRE(cli(args + " --out " + (kRoot / "b").string()) == 0);
  for (const char* f : {"wgf_trace.csv", "wgf_design.csv"})
    CHECK(slurp(kRoot / "a" / "E-so2-ball" / f) == slurp(kRoot / "b" / "E-so2-ball" / f));
}

TEST_CASE_FIXTURE(Scratch, "bad flags are rejected") {
  CHECK(cli("run --criterion Q") != 0);
  CHECK(cli("run --model cubic") != 0);
  CHECK(cli("run --space ball --bounds 1,2") != 0);
  CHECK(cli("run --criterion c --cvec 1,2") != 0);
  CHECK(cli("run --iters -3") != 0);
  CHECK(cli("") != 0);
  CHECK(cli("run --experiment nope") != 0);
}

TEST_CASE_FIXTURE(Scratch, "config file values, overridden by flags") {
  const fs::path cfg = kRoot / "exp.toml";
  std::ofstream(cfg) << "model = \"so\"\nk = 2\nspace = \"cube\"\ncriterion = \"D\"\n"
                        "bounds = \"2\"\niters = 3\nseed = 4\n";
  const fs::path out = kRoot / "cfg";
  REQUIRE(cli("run --config " + cfg.string() + " --out " + out.string()) == 0);
  const json j = summary(out / "D-so2-cube" / "wgf_summary.json");
  CHECK(j["criterion"] == "D");
  CHECK(j["iterations"] == 3);
  CHECK(j["seed"] == 4);
  CHECK(j["space"].get<std::string>().find('2') != std::string::npos);

  REQUIRE(cli("run --config " + cfg.string() + " --iters 5 --criterion E --out " + out.string()) ==
          0);
  const json k = summary(out / "E-so2-cube" / "wgf_summary.json");
  CHECK(k["criterion"] == "E");
  CHECK(k["iterations"] == 5);
  CHECK(k["seed"] == 4);
}

TEST_CASE_FIXTURE(Scratch, "PSO ensemble artifacts") {
  const fs::path out = kRoot / "pso";
  REQUIRE(cli("pso-ensemble --model so --k 2 --space cube --criterion E --iters 20 --runs 4 "
              "--swarm 10 --out " +
              out.string()) == 0);
  const fs::path dir = out / "E-so2-cube";
  CHECK(fs::exists(dir / "pso" / "trace_000.csv"));
  CHECK(fs::exists(dir / "pso" / "trace_003.csv"));
  CHECK_FALSE(fs::exists(dir / "pso" / "trace_004.csv"));
  CHECK(fs::exists(dir / "pso_design.csv"));
  CHECK(fs::exists(dir / "pso.svg"));
  const json j = summary(dir / "pso_summary.json");
  CHECK(j["runs"] == 4);
  CHECK(j["engine"] == "pso");
}

TEST_CASE_FIXTURE(Scratch, "plot subcommand") {
  const fs::path out = kRoot / "p";
  REQUIRE(cli("run --model so --k 2 --space cube --criterion D --iters 40 --out " + out.string()) ==
          0);
  const fs::path trace = out / "D-so2-cube" / "wgf_trace.csv";
  REQUIRE(cli("plot " + trace.string() + " --smooth 4 --out " + (kRoot / "fig").string()) == 0);
  CHECK(slurp(kRoot / "fig.svg").find("<polyline") != std::string::npos);
  std::ofstream(kRoot / "empty.csv") << "iter,value,dirnorm,step\n";
  CHECK(cli("plot " + (kRoot / "empty.csv").string() + " --out " + (kRoot / "x").string()) != 0);
}

TEST_CASE_FIXTURE(Scratch, "oracle tests subcommand") {
  CHECK(cli("oracle-tests --runs 20") == 0);
  CHECK(slurp(kRoot / "stdout.txt").find("20 cases, 0 failures") != std::string::npos);
  std::ofstream(kRoot / "m.txt") << "2 2\n1 0\n0 2\n0 1\n1 0\n";
  CHECK(cli("oracle-tests --input " + (kRoot / "m.txt").string()) == 0);
}
