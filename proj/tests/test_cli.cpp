#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

#ifndef DIMEC_CLI_PATH
#error "DIMEC_CLI_PATH must be defined by the build"
#endif

const std::string kCli = DIMEC_CLI_PATH;

std::string temp_dir() {
  static std::string dir = [] {
    char tmpl[] = "/tmp/dimec_cli_XXXXXX";
    const char* d = mkdtemp(tmpl);
    REQUIRE(d != nullptr);
    return std::string(d);
  }();
  return dir;
}

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("rate-curve: determinism, header, svg") {
  const std::string d = temp_dir();
  const std::string base = "rate-curve --m 4 --gamma 0.5 --n 1000000000000 --grid 21";
  CHECK(run(base + " -o " + d + "/rc1.csv --svg " + d + "/rc.svg") == 0);
  CHECK(run(base + " -o " + d + "/rc2.csv") == 0);

  const std::string csv1 = slurp(d + "/rc1.csv");
  CHECK(csv1 == slurp(d + "/rc2.csv"));
  CHECK(csv1.rfind("omega_exp,leading_order_rate,rate_per_round,pt_star\n", 0) == 0);
  long long lines = 0;
  for (char c : csv1) lines += c == '\n';
  CHECK(lines == 22);

  const std::string svg = slurp(d + "/rc.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("tradeoff csv") {
  const std::string d = temp_dir();
  CHECK(run("tradeoff --m 4 --gamma 0.5 --pt-ratio 0.84 --points 33 -o " + d + "/to.csv") == 0);
  const std::string csv = slurp(d + "/to.csv");
  CHECK(csv.rfind("p1,f,f_max,a,b\n", 0) == 0);
  long long lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 34);
}

TEST_CASE("verify") {
  const std::string d = temp_dir();
  CHECK(run("verify --m 4 --trials 10 --seed 3 -o " + d + "/verify.json") == 0);
  const auto report = nlohmann::json::parse(slurp(d + "/verify.json"));
  CHECK(report["pass"] == true);
  CHECK(report["max_reassembly_residual"].get<double>() < 1e-10);
  CHECK(report["max_factorization_residual"].get<double>() < 1e-10);
}

TEST_CASE("simulate") {
  const std::string d = temp_dir();
  CHECK(run("simulate --m 3 --n 400 --gamma 0.5 --seed 9 --trials 200 --protocol 2 -o " + d +
            "/sim.json --transcript " + d + "/tr.jsonl") == 0);
  const auto summary = nlohmann::json::parse(slurp(d + "/sim.json"));
  CHECK(summary["M"] == 3);
  CHECK(summary["test_rounds"].get<long long>() > 0);
  CHECK(summary["empirical_omega"].get<double>() > 0.0);
  CHECK(summary.contains("abort_rate"));
  CHECK(summary["abort_rate_wilson95"].size() == 2);

  // Transcript: one JSON object per line, n rounds plus a summary.
  std::istringstream in(slurp(d + "/tr.jsonl"));
  std::string line;
  long long lines = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CHECK_NOTHROW(nlohmann::json::parse(line));
    ++lines;
  }
  CHECK(lines == 401);
}

TEST_CASE("entropy") {
  const std::string d = temp_dir();
  {
    // Weight tables keyed by (M-1)-bit strings; omitted keys default to 0.
    nlohmann::json spec;
    spec["M"] = 3;
    spec["lambda0"] = {{"00", 1.0}};
    spec["lambda1"] = nlohmann::json::object();
    spec["s"] = nlohmann::json::object();
    std::ofstream out(d + "/spec.json");
    out << spec.dump();
  }
  CHECK(run("entropy --spec " + d + "/spec.json -o " + d + "/ent.json") == 0);
  const auto report = nlohmann::json::parse(slurp(d + "/ent.json"));
  CHECK(report["M"] == 3);
  CHECK(report["von_neumann_entropy"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  for (const auto& h : report["marginal_entropies"])
    CHECK(h.get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report["asymptotic_distill_rate"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("error exit codes") {
  // Unknown flag and out-of-range values: invalid configuration.
  CHECK(run("rate-curve --no-such-flag") == 2);
  CHECK(run("rate-curve --m 1") == 2);
  CHECK(run("simulate --gamma 1.5") == 2);
  CHECK(run("tradeoff --pt-ratio 0.99") == 2);  // tangent point out of range
  CHECK(run("entropy --spec /nonexistent/path.json") == 2);
  CHECK(run("") == 2);  // missing subcommand
}

TEST_CASE("DIMEC_OUT_DIR redirects relative outputs") {
  const std::string d = temp_dir();
  const int status = std::system(("DIMEC_OUT_DIR=" + d + " " + kCli +
                                  " tradeoff --m 3 --gamma 0.5 --points 5 --pt-ratio 0.45 -o rel.csv" +
                                  " >/dev/null 2>&1")
                                     .c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(slurp(d + "/rel.csv").rfind("p1,f,f_max,a,b\n", 0) == 0);
}
