#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CSG_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.output.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

} // namespace

TEST_CASE("enum emits one JSON line per node") {
  const RunResult r = run_cli("enum --n 3");
  CHECK(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 7);
  const auto first = nlohmann::json::parse(lines[0]);
  CHECK(first.at("n") == 3);
  CHECK(first.at("index") == 0);
  CHECK(first.at("past").size() == 3);
  CHECK(first.at("iso_key").is_string());
}

TEST_CASE("classify: analytic verdicts and exit codes") {
  const RunResult extends = run_cli("classify --family percolation --q 0.5+0.0i");
  CHECK(extends.exit_code == 0);
  CHECK(nlohmann::json::parse(extends.output).at("status") == "Extends");

  const RunResult no = run_cli("classify --family explicit --t 1,1i");
  CHECK(no.exit_code == 0);
  CHECK(nlohmann::json::parse(no.output).at("status") == "DoesNotExtend");

  // the open gap case turns strict mode into exit 4
  const RunResult open_case =
      run_cli("classify --family finite_set --terms 2:1:0.4,3:1:1.0 --strict");
  CHECK(open_case.exit_code == 4);
  CHECK(nlohmann::json::parse(open_case.output).at("status") ==
        "Inconclusive");
}

TEST_CASE("zeta: sqrt(2)-1 shows up in the CSV rows") {
  const RunResult r =
      run_cli("zeta --family explicit --t 1,1i --n-max 2 --format csv");
  CHECK(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 4); // header + level-1 row + two level-2 rows
  CHECK(lines[0] ==
        "n,node_index,iso_key,zeta,abs_measure,re_measure,im_measure");
  CHECK(lines[1].find("0.4142135623730949") != std::string::npos);
}

TEST_CASE("config errors exit 2 with a one-line message") {
  CHECK(run_cli("classify --family nope --q 1").exit_code == 2);
  CHECK(run_cli("classify").exit_code == 2);
  CHECK(run_cli("measure --n 3 --family percolation --q bogus").exit_code == 2);
  CHECK(run_cli("enum --n 40").exit_code == 2); // past the default cap
  const RunResult err = run_cli("classify --family percolation --q 0i");
  CHECK(err.exit_code == 2);
  CHECK(err.output.find("error:") != std::string::npos);
}

TEST_CASE("degenerate dynamics exit 3") {
  const RunResult r = run_cli("measure --n 3 --family explicit --t 1,-1");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("stage 1") != std::string::npos);
}

TEST_CASE("unsupported sampling dynamics exit 2") {
  const RunResult r =
      run_cli("sample --n 4 --count 10 --seed 1 --family explicit --t 1,1i");
  CHECK(r.exit_code == 2);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const std::string base =
      "zeta --family percolation --q 0.5+0.2i --n-max 5 --format csv";
  const RunResult a = run_cli(base + " --threads 1");
  const RunResult b = run_cli(base + " --threads 4");
  const RunResult c = run_cli(base + " --threads 1");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output == c.output);

  const std::string agg =
      "sample --n 4 --count 2000 --seed 12 --family percolation "
      "--q 0.6+0.0i --aggregate";
  const RunResult s1 = run_cli(agg + " --threads 1");
  const RunResult s2 = run_cli(agg + " --threads 3");
  CHECK(s1.exit_code == 0);
  CHECK(s1.output == s2.output);
}

TEST_CASE("orig reports the documented fields") {
  const RunResult r =
      run_cli("orig --family percolation --q 0.5+0.0i --n-max 128");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("converged").get<bool>());
  CHECK(j.at("value_re").get<double>() ==
        doctest::Approx(0.2887880950866024).epsilon(1e-8));
  CHECK(!j.at("formal").get<bool>());
  CHECK(!j.at("precluded").get<bool>());

  const RunResult zero = run_cli("orig --family explicit --t 1,0,1i");
  const auto jz = nlohmann::json::parse(zero.output);
  CHECK(jz.at("precluded").get<bool>());
  CHECK(jz.at("value_re").get<double>() == 0.0);
}

TEST_CASE("sample emits causet JSON lines in the catalog schema") {
  const RunResult r = run_cli(
      "sample --n 3 --count 5 --seed 9 --family percolation --q 0.5+0.0i");
  CHECK(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 5);
  for (const auto& line : lines) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("n") == 3);
    CHECK(j.at("past").size() == 3);
    CHECK(j.at("iso_key").is_string());
  }
}

TEST_CASE("config files fill in defaults, flags override") {
  const std::string dir = CSG_TEST_TMPDIR;
  const std::string cfg_path = dir + "/cli_cfg.json";
  {
    std::ofstream out(cfg_path);
    out << R"({"couplings":{"family":"percolation","q":"0.5+0.0i"},"n":2})";
  }
  const RunResult from_cfg = run_cli("enum --n 2 --config " + cfg_path);
  CHECK(from_cfg.exit_code == 0);
  CHECK(lines_of(from_cfg.output).size() == 2);

  // flag wins over the config file
  const RunResult flag_wins = run_cli("enum --n 3 --config " + cfg_path);
  CHECK(lines_of(flag_wins.output).size() == 7);

  // couplings resolved from the config file
  const RunResult classify_cfg = run_cli("classify --config " + cfg_path);
  CHECK(classify_cfg.exit_code == 0);
  CHECK(nlohmann::json::parse(classify_cfg.output).at("status") == "Extends");

  const std::string bad_path = dir + "/cli_bad.json";
  {
    std::ofstream out(bad_path);
    out << R"({"nonsense": 1})";
  }
  CHECK(run_cli("enum --n 2 --config " + bad_path).exit_code == 2);
}

TEST_CASE("--out writes a file") {
  const std::string path = std::string(CSG_TEST_TMPDIR) + "/enum_out.jsonl";
  const RunResult r = run_cli("enum --n 2 --out " + path);
  CHECK(r.exit_code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) ++count;
  CHECK(count == 2);
}

TEST_CASE("--version names the formula set and the sampler rng") {
  const RunResult r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("formula set r1") != std::string::npos);
  CHECK(r.output.find("philox4x32-10") != std::string::npos);
}
