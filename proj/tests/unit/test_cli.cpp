#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "floquet_hop/series_io.hpp"

namespace fs = std::filesystem;

namespace {

const char* kConfig = R"([model]
Ed_bar = -2
g = 0.75
omega = 0.3
Gamma = 1
kT = 1
kT_nuc0 = 1
[drive]
A = 0
[run]
t_final = 1
)";

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("floquet_hop_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
};

int run_cli(const std::string& args, const fs::path& err) {
  const std::string cmd = std::string(FLOQUET_HOP_CLI) + " " + args + " >/dev/null 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("CLI exit codes") {
  Sandbox box;
  const fs::path err = box.dir / "stderr.txt";
  const fs::path good = box.write("good.ini", kConfig);

  CHECK(run_cli("run --config " + good.string() + " --method FaQME --out " + (box.dir / "a.csv").string(), err) == 0);
  CHECK(floquet_hop::read_series((box.dir / "a.csv").string()).size() == 11);

  CHECK(run_cli("run --config " + good.string() + " --method FSH --seed 3 --out " + (box.dir / "b.csv").string(), err) == 0);

  CHECK(run_cli("run --config " + good.string(), err) == 2);
  CHECK(slurp(err).rfind("error: config:", 0) == 0);

  std::string typo = kConfig;
  typo.replace(typo.find("Gamma"), 5, "Gama");
  CHECK(run_cli("run --config " + box.write("typo.ini", typo).string() + " --method FQME", err) == 2);
  CHECK(slurp(err).find("did you mean 'Gamma'") != std::string::npos);

  CHECK(run_cli("run --bogus", err) == 2);
  CHECK(slurp(err).rfind("error: usage:", 0) == 0);
  CHECK(run_cli("run --config " + good.string() + " --method XYZ", err) == 2);
  CHECK(run_cli("run --config /nonexistent.ini --method FQME", err) == 2);

  CHECK(run_cli("run --config " + good.string() + " --method FaQME --out /nonexistent/dir/x.csv", err) == 4);
  CHECK(slurp(err).rfind("error: io:", 0) == 0);

  std::string unstable = kConfig;
  unstable += "dt = 2\nbasis_N = 73\noutput_stride = 1\n";
  unstable.replace(unstable.find("t_final = 1"), 11, "t_final = 400");
  CHECK(run_cli("run --config " + box.write("unstable.ini", unstable).string() + " --method FQME", err) == 3);
  CHECK(slurp(err).rfind("error: runtime:", 0) == 0);

  CHECK(run_cli("compare --config " + good.string() + " --methods FaQME,FaSH --out-dir " + (box.dir / "cmp").string(), err) == 0);
  CHECK(fs::exists(box.dir / "cmp" / "summary.csv"));
  CHECK(fs::exists(box.dir / "cmp" / "FaSH.csv"));
}
