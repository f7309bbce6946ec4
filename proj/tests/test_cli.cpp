#include "tanaka/serialize.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string sh_quote(const std::string& s) { return "'" + s + "'"; }

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string out_file = "cli_out_" + std::to_string(counter++) + ".txt";
  std::string cmd = std::string(TANAKA_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  std::remove(out_file.c_str());
  return res;
}

std::string sample(const std::string& name) {
  return sh_quote(std::string(TANAKA_SAMPLES_DIR) + "/" + name);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("check: valid, invalid and malformed algebra files") {
  CHECK(run_cli("check " + sample("gnla_heisenberg1.json")).exit_code == 0);

  RunResult bad = run_cli("check " + sample("gnla_bad_grading.json"));
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("grading") != std::string::npos);

  RunResult malformed = run_cli("check " + sample("gnla_bad_rational.json"));
  CHECK(malformed.exit_code == 2);

  CHECK(run_cli("check no_such_file.json").exit_code == 2);

  // valid but not fundamental exits 1
  write_file("nf.json",
             R"({"schema":"gnla/1","degrees":{"-1":["a"],"-2":["b"]},"brackets":{}})");
  CHECK(run_cli("check nf.json").exit_code == 1);
  std::remove("nf.json");
}

TEST_CASE("prolong: the shipped paper runs") {
  SECTION("conformal plane geometry on R^3") {
    RunResult r = run_cli("prolong " + sample("gnla_abelian3.json") +
                          " --g0 co --max-degree 4 --json");
    REQUIRE(r.exit_code == 0);
    auto j = tanaka::json::parse(r.out);
    CHECK(j["total"] == 10);
    CHECK(j["finite_type"] == true);
    CHECK(j["kappa"] == 2);
  }
  SECTION("sp(4) from the heisenberg algebra with the degree-1 reduction") {
    RunResult r = run_cli("prolong " + sample("gnla_heisenberg1.json") +
                          " --reduce 1:custom:" + sample("reduce_contact_W_n2.json") +
                          " --max-degree 4 --json");
    REQUIRE(r.exit_code == 0);
    auto j = tanaka::json::parse(r.out);
    CHECK(j["total"] == 10);
    CHECK(j["kappa"] == 3);
  }
  SECTION("truncated full prolongation reports the contact dims") {
    RunResult r = run_cli("prolong " + sample("gnla_heisenberg1.json") +
                          " --g0 der0 --max-degree 3 --json");
    REQUIRE(r.exit_code == 0);
    auto j = tanaka::json::parse(r.out);
    CHECK(j["finite_type"] == false);
    CHECK(j["dims"].back()[1] == 12);
    CHECK(j["total"] == 1 + 2 + 4 + 6 + 9 + 12);
  }
}

TEST_CASE("flag: martinet and (2,3,5) pipelines") {
  SECTION("martinet growth vectors and regularity") {
    RunResult r = run_cli("flag " + sample("fields_martinet.json") +
                          " --point 0,0,0 --point 1,0,0 --json");
    REQUIRE(r.exit_code == 0);
    auto j = tanaka::json::parse(r.out);
    CHECK(j["generic_growth"] == tanaka::json::array({2, 3}));
    CHECK(j["points"][0]["growth"] == tanaka::json::array({2, 2, 3}));
    CHECK(j["points"][0]["regular"] == false);
    CHECK(j["points"][1]["growth"] == tanaka::json::array({2, 3}));
    CHECK(j["points"][1]["regular"] == true);
    CHECK(j["points"][1]["gnla"]["degrees"]["-2"].size() == 1);
  }
  SECTION("gnla extraction fails with exit 1 at an irregular point") {
    RunResult r = run_cli("flag " + sample("fields_martinet.json") +
                          " --point 0,0,0 --gnla-out mart_gnla.json");
    CHECK(r.exit_code == 1);
  }
  SECTION("the (2,3,5) pipeline feeds prolong") {
    RunResult r = run_cli("flag " + sample("fields_235.json") +
                          " --point 0,0,0,0,0 --gnla-out g235.json --json");
    REQUIRE(r.exit_code == 0);
    auto j = tanaka::json::parse(r.out);
    CHECK(j["generic_growth"] == tanaka::json::array({2, 3, 5}));
    RunResult p = run_cli("prolong g235.json --max-degree 6 --json");
    REQUIRE(p.exit_code == 0);
    auto pj = tanaka::json::parse(p.out);
    CHECK(pj["total"] == 14);
    CHECK(pj["kappa"] == 4);
    std::remove("g235.json");
  }
}

TEST_CASE("symmetry scenarios") {
  RunResult ok = run_cli("symmetry " + sample("scenario_sl3.json") + " --json");
  REQUIRE(ok.exit_code == 0);
  auto j = tanaka::json::parse(ok.out);
  CHECK(j["independent"] == 8);
  CHECK(j["per_degree_bound"] == true);
  CHECK(j["total_bound"] == true);
  CHECK(j["bracket_compat"]["ok"] == true);

  RunResult bad = run_cli("symmetry " + sample("scenario_bad.json"));
  CHECK(bad.exit_code == 1);
  CHECK(bad.out.find("residual") != std::string::npos);

  RunResult empty = run_cli("symmetry " + sample("scenario_empty.json") + " --json");
  CHECK(empty.exit_code == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
  std::string args = "prolong " + sample("gnla_heisenberg1.json") +
                     " --g0 der0 --max-degree 2 --json";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);

  std::string margs = "model gnla:heisenberg -n 1";
  CHECK(run_cli(margs).out == run_cli(margs).out);
}

TEST_CASE("model emission round-trips and matches the shipped samples") {
  RunResult heis = run_cli("model gnla:heisenberg -n 1");
  REQUIRE(heis.exit_code == 0);
  auto j = tanaka::json::parse(heis.out);
  auto shipped = tanaka::load_json(std::string(TANAKA_SAMPLES_DIR) + "/gnla_heisenberg1.json");
  CHECK(j == shipped);

  RunResult w = run_cli("model reduce:contact-W -n 2");
  REQUIRE(w.exit_code == 0);
  CHECK(tanaka::json::parse(w.out) ==
        tanaka::load_json(std::string(TANAKA_SAMPLES_DIR) + "/reduce_contact_W_n2.json"));

  // emitted gnla documents re-parse to equal objects
  tanaka::GnlaSpec spec = tanaka::gnla_from_json(j);
  CHECK(tanaka::gnla_to_json(tanaka::Gnla::from_spec(spec)) == j);
  CHECK(run_cli("model bogus:name").exit_code == 2);
}
