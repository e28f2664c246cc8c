#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#ifndef TMEP_CLI_PATH
#error "TMEP_CLI_PATH must name the tmep executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(TMEP_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tmep_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

const char* kQuartic = R"('{"n":3,"t":[1,0.925,0.3]}')";

} // namespace

TEST_CASE("analyze writes the report files") {
  const auto dir = scratch("analyze");
  const auto r = run(std::string("analyze --model ") + kQuartic + " --out " + dir.string() + " --points 200");
  REQUIRE(r.code == 0);
  for (const char* f : {"critical_points.json", "dispersion.csv", "unit_count.csv", "eigenvalues.csv", "analyze.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }
  const auto cps = json::parse(slurp(dir / "critical_points.json"));
  const bool has_edge = std::any_of(cps.begin(), cps.end(), [](const json& c) {
    return c["order"] == 4 && c["class"] == "minimum" && c["index"] == 1;
  });
  CHECK(has_edge);

  // Identical inputs give byte-identical outputs.
  const auto again = scratch("analyze2");
  REQUIRE(run(std::string("analyze --model ") + kQuartic + " --out " + again.string() + " --points 200").code == 0);
  for (const char* f : {"critical_points.json", "eigenvalues.csv", "analyze.json"}) {
    CHECK(slurp(dir / f) == slurp(again / f));
  }
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST_CASE("bad input exits with code 2 and writes nothing") {
  const auto dir = scratch("bad");
  CHECK(run("analyze --model '{\"n\":2,\"t\":[1]}' --out " + dir.string()).code == 2);
  CHECK(run("analyze --model '{not json' --out " + dir.string()).code == 2);
  CHECK(run("analyze --model /nonexistent.json --out " + dir.string()).code == 2);
  CHECK(run("design --n 3 --order 5 --location zone_edge").code == 2);
  CHECK_FALSE(fs::exists(dir));
  CHECK(run("frobnicate").code != 0);
}

TEST_CASE("design prints JSON and signals failure") {
  const auto ok = run("design --n 3 --order 6 --location zone_edge");
  REQUIRE(ok.code == 0);
  const auto j = json::parse(ok.out);
  CHECK(j["status"] == "ok");
  CHECK(std::abs(j["model"]["t"][1].get<double>() - 0.4) < 1e-12);

  const auto none = run("design --n 3 --order 3 --location interior --free t3=0.5");
  CHECK(none.code == 1);
  CHECK(json::parse(none.out)["status"] == "no_solution");
}

TEST_CASE("dos writes a curve and a sidecar") {
  const auto dir = scratch("dos");
  const auto r = run(std::string("dos --model ") + kQuartic + " --out " + dir.string() + " --k-step 6.283185307179586e-5");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "dos.csv"));
  const auto side = json::parse(slurp(dir / "dos.json"));
  CHECK(side.contains("grid"));
  CHECK(slurp(dir / "dos.csv").rfind("omega,nu\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("verify exit codes") {
  const std::string base = "verify --models 10 --spectral 20 --scan-samples 200";
  CHECK(run(base).code == 0);
  CHECK(run(base + " --corrupt-transfer").code == 1);
  const auto a = run(base + " --seed 5");
  const auto b = run(base + " --seed 5 --threads 2");
  CHECK(a.out == b.out);
}
