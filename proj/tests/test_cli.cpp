#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "netgame/experiments.hpp"

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("netgame_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

// Runs the CLI with the given arguments; stdout goes to out_path (or the
// void), stderr to err_path.  Returns the process exit code.
int run_cli(const std::string& args, const std::string& out_path = "/dev/null",
            const std::string& err_path = "/dev/null") {
  const std::string cmd = std::string("'") + NETGAME_CLI_PATH + "' " + args +
                          " >'" + out_path + "' 2>'" + err_path + "'";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) {
    if (c == '\n') {
      ++n;
    }
  }
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("version and help exit cleanly") {
    TempDir tmp;
    const std::string out = tmp.file("version.txt");
    CHECK(run_cli("--version", out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("netgame 1.0.0") != std::string::npos);
    CHECK(text.find("splitmix64-unit53") != std::string::npos);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("solve --help") == 0);
    CHECK(run_cli("") == 64);
    CHECK(run_cli("scenario") == 64);
    CHECK(run_cli("frobnicate") == 64);
  }

  TEST_CASE("scenario gen writes a valid, reproducible file") {
    TempDir tmp;
    const std::string a = tmp.file("a.json");
    const std::string b = tmp.file("b.json");
    CHECK(run_cli("scenario gen --n 5 --seed 42 --out '" + a + "'") == 0);
    const netgame::SecrecyScenario sc = netgame::load_scenario_file(a);
    CHECK(sc.n_channels() == 5);
    CHECK(sc.p_total_w == 0.05);
    CHECK(sc.p_s_w == 0.01);
    CHECK(run_cli("scenario gen --n 5 --seed 42 --out '" + b + "'") == 0);
    CHECK(slurp(a) == slurp(b));
    // Flags reach the generator.
    const std::string c = tmp.file("c.json");
    CHECK(run_cli("scenario gen --n 2 --seed 1 --p-total 0.08 "
                  "--nonneg-baseline --out '" + c + "'") == 0);
    const netgame::SecrecyScenario sc2 = netgame::load_scenario_file(c);
    CHECK(sc2.p_total_w == 0.08);
    CHECK(sc2.channels[0].g_s >= sc2.channels[0].g_e);
    // Usage errors.
    CHECK(run_cli("scenario gen --seed 1 --out '" + c + "'") == 64);
    CHECK(run_cli("scenario gen --n 0 --seed 1 --out '" + c + "'") == 64);
  }

  TEST_CASE("solve prints machine-readable JSON") {
    TempDir tmp;
    const std::string sc = tmp.file("s.json");
    REQUIRE(run_cli("scenario gen --n 5 --seed 42 --nonneg-baseline --out '" +
                    sc + "'") == 0);
    const std::string out = tmp.file("epr.json");
    CHECK(run_cli("solve --scenario '" + sc + "' --method epr", out) == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("method") == "epr");
    CHECK(j.at("n_channels") == 5);
    const std::vector<double> alloc = j.at("allocation_w");
    REQUIRE(alloc.size() == 5);
    for (double p : alloc) {
      CHECK(p == 0.01);
    }
    CHECK(j.at("converged") == true);
    CHECK(j.at("rounds") == 0);
    CHECK(j.at("final_price").is_null());
    CHECK(j.at("degenerate") == false);
  }

  TEST_CASE("game and expert methods agree through the CLI") {
    TempDir tmp;
    const std::string sc = tmp.file("s.json");
    REQUIRE(run_cli("scenario gen --n 4 --seed 9 --nonneg-baseline --out '" +
                    sc + "'") == 0);
    const std::string game_out = tmp.file("game.json");
    const std::string expert_out = tmp.file("expert.json");
    CHECK(run_cli("solve --scenario '" + sc + "' --method game", game_out) ==
          0);
    CHECK(run_cli("solve --scenario '" + sc + "' --method expert",
                  expert_out) == 0);
    const nlohmann::json jg = nlohmann::json::parse(slurp(game_out));
    const nlohmann::json je = nlohmann::json::parse(slurp(expert_out));
    const double rg = jg.at("sum_secrecy_rate_clipped_bps_hz");
    const double re = je.at("sum_secrecy_rate_clipped_bps_hz");
    CHECK(std::abs(rg - re) <= 1e-6);
    CHECK(jg.at("final_price").is_number());
  }

  TEST_CASE("error paths map to the documented exit codes") {
    TempDir tmp;
    const std::string sc = tmp.file("s.json");
    REQUIRE(run_cli("scenario gen --n 5 --seed 3 --out '" + sc + "'") == 0);
    // Unknown method: usage error.
    CHECK(run_cli("solve --scenario '" + sc + "' --method maddpg") == 64);
    // Grid oracle beyond its guard: usage error.
    CHECK(run_cli("solve --scenario '" + sc + "' --method grid") == 64);
    // Malformed scenario: data error.
    const std::string junk = tmp.file("junk.json");
    spit(junk, "this is not json\n");
    CHECK(run_cli("solve --scenario '" + junk + "' --method epr") == 65);
    // Missing file: I/O error.
    CHECK(run_cli("solve --scenario '" + tmp.file("ghost.json") +
                  "' --method epr") == 2);
    // Unwritable output: I/O error.
    CHECK(run_cli("scenario gen --n 2 --seed 1 --out '" +
                  tmp.file("no/such/dir/x.json") + "'") == 2);
  }

  TEST_CASE("converge writes the per-iteration CSV") {
    TempDir tmp;
    const std::string sc = tmp.file("one.json");
    REQUIRE(run_cli("scenario gen --n 1 --seed 5 --nonneg-baseline --out '" +
                    sc + "'") == 0);
    const std::string csv = tmp.file("conv.csv");
    CHECK(run_cli("converge --scenario '" + sc + "' --out '" + csv + "'") ==
          0);
    const std::string text = slurp(csv);
    CHECK(count_lines(text) == 2);  // header + single iteration
    CHECK(text.rfind("iteration,sum_secrecy_rate_bps_hz\n1,", 0) == 0);
  }

  TEST_CASE("sweep writes the canonical table and reports skips") {
    TempDir tmp;
    const std::string a = tmp.file("a.csv");
    const std::string b = tmp.file("b.csv");
    const std::string args =
        "sweep --n-min 2 --n-max 4 --seeds 3 --methods epr,game,expert "
        "--nonneg-baseline --out '";
    CHECK(run_cli(args + a + "'") == 0);
    const std::string text = slurp(a);
    CHECK(count_lines(text) == 28);  // header + 3*3*3 rows
    CHECK(text.rfind("method,n,seed,sum_secrecy_rate_bps_hz,rounds,converged",
                     0) == 0);
    CHECK(run_cli(args + b + "'") == 0);
    CHECK(slurp(b) == text);
    // Grid rows stop at n=3; the skip notes land on stderr, not in the file.
    const std::string g = tmp.file("g.csv");
    const std::string err = tmp.file("g.err");
    CHECK(run_cli("sweep --n-min 2 --n-max 5 --seeds 1 --methods epr,grid "
                  "--nonneg-baseline --out '" + g + "'",
                  "/dev/null", err) == 0);
    const std::string gtext = slurp(g);
    CHECK(count_lines(gtext) == 7);  // header + 4 epr + 2 grid
    CHECK(gtext.find("skip") == std::string::npos);
    const std::string etext = slurp(err);
    CHECK(etext.find("grid skipped for n=4") != std::string::npos);
    CHECK(etext.find("grid skipped for n=5") != std::string::npos);
    // Usage validation.
    CHECK(run_cli("sweep --n-min 4 --n-max 2 --seeds 3 --methods epr --out '" +
                  tmp.file("x.csv") + "'") == 64);
    CHECK(run_cli("sweep --n-min 2 --n-max 3 --seeds 3 --methods nope "
                  "--out '" + tmp.file("y.csv") + "'") == 64);
  }

  TEST_CASE("serial sweep matches the default parallel sweep byte for byte") {
    TempDir tmp;
    const std::string par = tmp.file("par.csv");
    const std::string ser = tmp.file("ser.csv");
    const std::string tail =
        "--n-min 2 --n-max 5 --seeds 2 --methods game,epr --base-seed 17 "
        "--nonneg-baseline --out '";
    CHECK(run_cli("sweep " + tail + par + "'") == 0);
    CHECK(run_cli("sweep --serial " + tail + ser + "'") == 0);
    CHECK(slurp(par) == slurp(ser));
  }
}
