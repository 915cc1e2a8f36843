#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lmg/commands.hpp"
#include "lmg/errors.hpp"
#include "lmg/spectrum.hpp"

using namespace lmg;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lmg_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("parse_config from flags") {
  auto c = parse_config({"spectrum", "--lambda", "1.5", "--n", "1000", "--out", "s.csv"});
  REQUIRE(c);
  CHECK(c->command == Command::spectrum);
  CHECK(*c->lambda == 1.5);
  CHECK(*c->n == 1000);
  CHECK(c->out == "s.csv");
  CHECK(c->resolution == 256);

  auto preset = parse_config({"scaling", "--preset", "fig1"});
  REQUIRE(preset);
  CHECK(preset->resolution == 2048);
}

TEST_CASE("invalid configuration names the key") {
  auto r = cli({"spectrum", "--lambda", "-1", "--n", "10"});
  CHECK(r.code == 2);
  CHECK(r.err.find("lambda") != std::string::npos);

  r = cli({"spectrum", "--lambda", "1", "--n", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("n") != std::string::npos);

  r = cli({"frobnicate", "--lambda", "1", "--n", "10"});
  CHECK(r.code == 2);
  CHECK(r.err.find("command") != std::string::npos);

  r = cli({"spectrum", "--n", "10"});
  CHECK(r.code == 2);
  CHECK(r.err.find("lambda") != std::string::npos);

  r = cli({"scaling", "--preset", "fig1", "--n-list", "1000,500"});
  CHECK(r.code == 2);
  CHECK(r.err.find("n_list") != std::string::npos);

  r = cli({"spectrum", "--lambda", "1", "--n", "10", "--resolution", "100"});
  CHECK(r.code == 2);
  CHECK(r.err.find("resolution") != std::string::npos);

  auto dir = scratch("badfile");
  std::ofstream(dir / "c.json") << R"({"command": "spectrum", "lambda": 1, "n": 10, "n_list": []})";
  r = cli({"spectrum", "--config", (dir / "c.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("n_list") != std::string::npos);
}

TEST_CASE("config file with flag overrides") {
  auto dir = scratch("sweep");
  std::ofstream(dir / "c.json") << R"({"command": "scaling", "preset": "gap13", "lambda": 1.0, "n_list": [500, 750, 1000], "out": "ignored"})";
  auto c = parse_config({"scaling", "--config", (dir / "c.json").string(), "--out", "d/"});
  REQUIRE(c);
  CHECK(c->n_list == std::vector<int>{500, 750, 1000});
  CHECK(c->out == "d/");
  CHECK(c->preset == "gap13");
}

TEST_CASE("spectrum command") {
  auto r = cli({"spectrum", "--lambda", "0", "--n", "4"});
  REQUIRE(r.code == 0);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"global_index", "sector", "sector_index", "energy", "K"});
  const std::vector<std::string> e{"-2", "-1", "0", "1", "2"};
  for (std::size_t i = 0; i < 5; ++i) CHECK(rows[i + 1][3] == e[i]);
  CHECK(r.out.find("# lmg 1.0.0\n") == 0);
  CHECK(r.out.find("# resolution: 256\n") != std::string::npos);
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("csv round trip at 17 digits") {
  auto r = cli({"spectrum", "--lambda", "1.37", "--n", "61"});
  REQUIRE(r.code == 0);
  auto sp = merged_spectrum(ModelParams(1.37, 61));
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == sp.size() + 1);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    CHECK(std::stod(rows[i + 1][3]) == sp.levels[i].energy);
    CHECK(std::stod(rows[i + 1][4]) == sp.levels[i].scaled_energy);
  }
}

TEST_CASE("table rendering") {
  OutputTable t;
  t.header = {"h"};
  t.columns = {"a", "b"};
  CHECK(render(t) == "# h\na,b\n");
  t.add_row({1LL, 0.1});
  CHECK(render(t) == "# h\na,b\n1,0.10000000000000001\n");
  CHECK_THROWS(t.add_row({1LL}));

  auto dir = scratch("render");
  write_table(t, dir / "a.csv");
  write_table(t, dir / "b.csv");
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK_THROWS_AS(write_table(t, dir / "missing" / "x.csv"), IoError);
}

TEST_CASE("I/O failure exits with 4") {
  auto r = cli({"spectrum", "--lambda", "1", "--n", "4", "--out", "/nonexistent-dir/x/s.csv"});
  CHECK(r.code == 4);
}

TEST_CASE("every command runs") {
  auto dir = scratch("commands");
  CHECK(cli({"eigvec", "--lambda", "1.5", "--n", "40", "--sector", "odd", "--level", "3"}).code == 0);
  CHECK(cli({"eigvec", "--lambda", "1.5", "--n", "40", "--level", "3"}).code == 2);
  CHECK(cli({"classical", "--lambda", "2", "--action-samples", "9", "--out", (dir / "cl").string()}).code == 0);
  CHECK(fs::exists(dir / "cl" / "stationary.csv"));
  CHECK(fs::exists(dir / "cl" / "action.csv"));
  CHECK(cli({"wkb", "--lambda", "0.5", "--n", "100", "--count", "5"}).code == 0);
  CHECK(cli({"localize", "--lambda", "2", "--n", "300"}).code == 0);
  CHECK(cli({"localize", "--lambda", "0.5", "--n", "300"}).code == 2);
  CHECK(cli({"localize", "--lambda", "0.5", "--n", "300", "--sector", "even", "--level", "4"}).code == 0);
  auto dos = cli({"dos", "--lambda", "0", "--n", "400", "--bins", "20"});
  REQUIRE(dos.code == 0);
  CHECK(csv_rows(dos.out).size() == 21);
}

TEST_CASE("sweep presets write a directory and report numerical failure") {
  auto dir = scratch("presets");
  auto r = cli({"scaling", "--preset", "doublet", "--out", (dir / "doublet").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "doublet" / "raw.csv"));
  auto summary = csv_rows(slurp(dir / "doublet" / "summary.csv"));
  REQUIRE(summary.size() == 2);
  CHECK(std::stod(summary[1][1]) < 0.0);

  // ground doublets at these N are below double resolution
  r = cli({"scaling", "--preset", "doublet", "--lambda-list", "1.5,2.5", "--n-list", "300,400,500", "--out",
           (dir / "deep").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("lambda=") != std::string::npos);
  auto text = slurp(dir / "deep" / "summary.csv");
  CHECK(text.find("FAILED") != std::string::npos);
}

TEST_CASE("determinism across runs, workers and echoed config") {
  auto dir = scratch("determinism");
  auto a = cli({"scaling", "--preset", "gap13", "--n-list", "100,200,400", "--out", (dir / "a").string()});
  auto b = cli({"scaling", "--preset", "gap13", "--n-list", "100,200,400", "--threads", "3", "--out",
                (dir / "b").string()});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  for (const char* f : {"raw.csv", "summary.csv"}) CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));

  auto first = cli({"spectrum", "--lambda", "1.25", "--n", "250", "--sector", "odd"});
  auto second = cli({"spectrum", "--lambda", "1.25", "--n", "250", "--sector", "odd"});
  REQUIRE(first.code == 0);
  CHECK(first.out == second.out);

  const std::string marker = "# config: ";
  auto pos = first.out.find(marker);
  REQUIRE(pos != std::string::npos);
  auto end = first.out.find('\n', pos);
  std::ofstream(dir / "echo.json") << first.out.substr(pos + marker.size(), end - pos - marker.size());
  auto rerun = cli({"spectrum", "--config", (dir / "echo.json").string()});
  REQUIRE(rerun.code == 0);
  CHECK(rerun.out == first.out);
}

TEST_CASE("executable") {
  auto dir = scratch("exe");
  const std::string exe = LMG_CLI_PATH;
  const auto out = dir / "s.csv";
  CHECK(std::system((exe + " spectrum --lambda 0.5 --n 30 --out " + out.string()).c_str()) == 0);
  CHECK(fs::exists(out));
  const int status = std::system((exe + " spectrum --lambda -1 --n 30 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
