#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "qcoh/coherence.hpp"
#include "qcoh/instruments.hpp"
#include "qcoh/io.hpp"
#include "support.hpp"

using namespace qcoh;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QCOH_CLI) + " " + args + " 2>/dev/null";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("qcoh_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("").status == 2);
  CHECK(run("measure").status == 2);
  CHECK(run("gen nonsense").status == 3);
  CHECK(run("measure /nonexistent.json /nonexistent.json").status == 2);
  TempDir tmp;
  REQUIRE(run("gen bit-flip --p 0.3 --out " + (tmp / "bf.json")).status == 0);
  REQUIRE(run("gen pure --dim 2 --out " + (tmp / "psi.json")).status == 0);
  CHECK(run("evolve " + (tmp / "bf.json") + " " + (tmp / "psi.json") + " --steps 3").status == 3);
  CHECK(run("verify --trials 2 --dim-max 4").status == 0);
  CHECK(run("verify --trials 2 --dim-max 4 --corrupt").status == 1);
}

TEST_CASE("measure --json matches library calls on a generated instance") {
  TempDir tmp;
  REQUIRE(run("gen state --dim 4 --seed 42 --out " + (tmp / "rho.json")).status == 0);
  REQUIRE(run("gen observable --dim 4 --profile 2,1,1 --seed 43 --out " + (tmp / "r.json")).status == 0);

  const DensityMatrix rho = io::state_from_json(io::read_file(tmp / "rho.json"));
  Rng rng(derive_seed(42, 0));
  CHECK(rho.matrix() == random_density(4, 4, rng).matrix());
  const Observable r = io::observable_from_json(io::read_file(tmp / "r.json"));

  const Run res = run("measure " + (tmp / "rho.json") + " " + (tmp / "r.json") + " --json");
  REQUIRE(res.status == 0);
  const io::json j = io::json::parse(res.out);
  const FineGraining fg = FineGraining::of(r);
  CHECK(j["c_l1"].get<double>() == c_l1_coarse(rho, r, fg));
  CHECK(j["c_re"].get<double>() == c_re_coarse(rho, r));
  CHECK(j["c_l1_fine"].get<double>() == c_l1(rho, fg.basis()));
  CHECK(j["hierarchy_gap"].get<double>() == hierarchy_gap(rho, r, fg));
  const RealVector p = born_probabilities(rho, r);
  for (std::size_t n = 0; n < p.size(); ++n) CHECK(j["probabilities"][n].get<double>() == p[n]);
  CHECK(io::state_from_json(j["luders"]).matrix() == luders(rho, r).matrix());
}

TEST_CASE("evolve writes the dephasing trajectory") {
  TempDir tmp;
  REQUIRE(run("gen phase-damping --p 0.75 --out " + (tmp / "pd.json")).status == 0);
  {
    std::ofstream f(tmp / "plus.json");
    f << io::to_json(pure_state(ComplexVector::Constant(2, 1.0 / std::sqrt(2.0)))).dump();
  }
  const Run res = run("evolve " + (tmp / "pd.json") + " " + (tmp / "plus.json") + " --steps 10");
  REQUIRE(res.status == 0);
  std::istringstream lines(res.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "step,max_offdiag,entropy");
  int rows = 0;
  while (std::getline(lines, line)) {
    int step = 0;
    double off = 0.0;
    double s = 0.0;
    REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf", &step, &off, &s) == 3);
    CHECK(step == rows);
    CHECK(off == doctest::Approx(0.5 * std::pow(0.5, step)).epsilon(1e-12));
    ++rows;
  }
  CHECK(rows == 11);
}

TEST_CASE("classify prints the class") {
  TempDir tmp;
  REQUIRE(run("gen phase-damping --p 0.75 --out " + (tmp / "pd.json")).status == 0);
  REQUIRE(run("gen relabeling --out " + (tmp / "rl.json")).status == 0);
  CHECK(run("classify " + (tmp / "pd.json")).out.find("GIO") != std::string::npos);
  const Run rl = run("classify " + (tmp / "rl.json") + " --json");
  CHECK(io::json::parse(rl.out)["class"] == "IO-not-SIO");
  const Run dl = run("dilate " + (tmp / "pd.json") + " --json");
  REQUIRE(dl.status == 0);
  CHECK(io::json::parse(dl.out)["round_trip_residual"].get<double>() < 1e-12);
}
