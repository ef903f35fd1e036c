#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(DLBIHT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  fs::create_directories(dir);
  const auto path = dir / "run.cfg";
  std::ofstream(path) << body;
  return path;
}

const char* kSmall =
    "m=20\nn=40\nK=30\nT=30\np=0.05\nouter_iterations=3\nmc_trials=2\n"
    "t_values=20,30\nn_values=40,60\nmu_values=0.1,1\n";

}  // namespace

TEST_CASE("subcommands write their outputs and exit 0") {
  const auto dir = fs::temp_directory_path() / "dlbiht_cli_ok";
  fs::remove_all(dir);
  const auto cfg = write_config(dir, kSmall);
  const std::string common = "--config " + cfg.string() + " --seed 5 --out " + (dir / "o").string();
  CHECK(run("sweep-t " + common) == 0);
  CHECK(fs::exists(dir / "o" / "fig2_nmse.csv"));
  CHECK(run("sweep-n " + common + " --variant l2 --no-baseline") == 0);
  CHECK(fs::exists(dir / "o" / "fig3_nmse.csv"));
  CHECK(run("convergence " + common + " --threads 2") == 0);
  CHECK(fs::exists(dir / "o" / "fig1_cost.csv"));
  CHECK(run("single " + common + " --set T=25") == 0);
  CHECK(fs::exists(dir / "o" / "single_trial.csv"));
  fs::remove_all(dir);
}

TEST_CASE("exit codes for bad parameters, I/O errors and divergence") {
  const auto dir = fs::temp_directory_path() / "dlbiht_cli_err";
  fs::remove_all(dir);
  const auto cfg = write_config(dir, kSmall);
  const std::string base = "--config " + cfg.string();

  CHECK(run("sweep-t " + base) == 1);                                   // --seed missing
  CHECK(run("sweep-t " + base + " --seed 1 --variant l7") == 1);        // bad variant
  CHECK(run("sweep-t " + base + " --seed 1 --set bogus=3") == 1);       // unknown key
  CHECK(run("sweep-t " + base + " --seed 1 --set p=2") == 1);           // invalid value
  CHECK(run("") == 1);                                                  // no subcommand

  std::ofstream(dir / "file") << "x";
  CHECK(run("sweep-t " + base + " --seed 1 --out " + (dir / "file").string()) == 3);

  CHECK(run("sweep-t " + base + " --seed 1 --set mu=1e308 --out " + (dir / "d").string()) == 2);
  CHECK(run("convergence " + base + " --seed 1 --set mu_values=1e308 --out " + (dir / "c").string()) == 2);
  CHECK(fs::exists(dir / "c" / "fig1_cost.csv"));
  fs::remove_all(dir);
}
