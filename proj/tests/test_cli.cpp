#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "knotcert/cli.hpp"

namespace cli = knotcert::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "knotcert_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("cover-homology") {
  const Run r = run({"cover-homology", "--m", "1", "--q", "3"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("Z_7 ⊕ Z_7") != std::string::npos);
  const Run j = run({"cover-homology", "--m", "2", "--q", "3", "--format", "json"});
  CHECK(j.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc.at("a") == "19");
  const Run k = run({"--format", "json", "cover-homology", "--knot", "trefoil", "--q", "2"});
  CHECK(k.code == cli::kExitOk);
  CHECK(k.out.find("\"3\"") != std::string::npos);
  CHECK(run({"cover-homology", "--m", "1", "--q", "6"}).code == cli::kExitPrecondition);
}

TEST_CASE("signature") {
  const Run r = run({"signature", "--knot", "trefoil", "--p", "7", "--format", "json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  std::vector<std::string> values;
  for (const auto& row : doc.at("values")) values.push_back(row.at("signature").get<std::string>());
  CHECK(values == std::vector<std::string>{"0", "0", "-2", "-2", "-2", "-2", "0"});
  const Run one = run({"signature", "--J", "mirror:trefoil", "--p", "7", "--c", "3"});
  CHECK(one.code == cli::kExitOk);
  CHECK(one.out.find('2') != std::string::npos);
  CHECK(run({"signature", "--knot", "trefoil", "--p", "6"}).code == cli::kExitPrecondition);
}

TEST_CASE("primes") {
  const Run r = run({"primes", "--count", "5", "--format", "json"});
  REQUIRE(r.code == cli::kExitOk);
  std::vector<std::string> ps;
  const auto doc = nlohmann::json::parse(r.out);
  for (const auto& w : doc.at("witnesses")) ps.push_back(w.at("p").get<std::string>());
  CHECK(ps == std::vector<std::string>{"7", "13", "19", "31", "37"});
  const Run f = run({"primes", "--count", "2", "--family", "--format", "json"});
  REQUIRE(f.code == cli::kExitOk);
  CHECK(f.out.find("\"19\"") != std::string::npos);
}

TEST_CASE("deck") {
  const Run r = run({"deck", "--m", "5", "--p", "13", "--format", "json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("lambda_plus") == "9");
  CHECK(doc.at("lambda_minus") == "3");
  const Run bad = run({"deck", "--m", "1", "--p", "5"});
  CHECK(bad.code == cli::kExitPrecondition);
  CHECK(bad.err.find("2 mod 3") != std::string::npos);
}

TEST_CASE("obstruct") {
  const Run r = run({"obstruct", "--m", "1", "--J", "trefoil", "--p", "7", "--n", "1", "--mode", "refined"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("NONSLICE") != std::string::npos);
  const Run u = run({"obstruct", "--m", "1", "--J", "unknot", "--p", "7", "--n", "1"});
  CHECK(u.code == cli::kExitOk);
  CHECK(u.out.find("INCONCLUSIVE") != std::string::npos);
  const Run sweep = run({"obstruct", "--m", "1", "--J", "trefoil", "--p", "7", "--all-units", "--format", "json"});
  REQUIRE(sweep.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(sweep.out);
  CHECK(doc.at("kind") == "unit_sweep");
  CHECK(doc.at("verdict_invariant") == true);
  CHECK(doc.at("certificates").size() == 6);
  CHECK(run({"obstruct", "--m", "1", "--J", "trefoil", "--p", "7", "--n", "3"}).code == cli::kExitBudget);
  CHECK(run({"obstruct", "--m", "1", "--J", "trefoil", "--p", "13"}).code == cli::kExitPrecondition);
  CHECK(run({"obstruct", "--m", "1", "--J", "nonsense", "--p", "7"}).code == cli::kExitPrecondition);
  CHECK(run({"obstruct", "--bogus"}).code == cli::kExitPrecondition);
}

TEST_CASE("budget override through the environment") {
  ::setenv("KNOTCERT_BUDGET", "5", 1);
  const int code = run({"obstruct", "--m", "1", "--J", "trefoil", "--p", "7", "--n", "1"}).code;
  ::unsetenv("KNOTCERT_BUDGET");
  CHECK(code == cli::kExitBudget);
  CHECK(run({"--budget", "5", "obstruct", "--m", "1", "--J", "trefoil", "--p", "7"}).code == cli::kExitBudget);
}

TEST_CASE("determinism: identical runs give identical bytes for any --jobs") {
  const auto a = scratch("a.json");
  const auto b = scratch("b.json");
  const std::vector<std::string> base{"obstruct", "--m", "1", "--J", "trefoil", "--p", "7", "--n", "2",
                                      "--mode", "both", "--C", "1", "--format", "json"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--out", a.string(), "--jobs", "1"});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--out", b.string(), "--jobs", "3"});
  REQUIRE(run(args_a).code == cli::kExitOk);
  REQUIRE(run(args_b).code == cli::kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("independence and verify round trip") {
  const auto family = scratch("family.json");
  std::ofstream(family) << R"([{"m":"1","J":"trefoil","p":"7"},{"m":"2","J":"trefoil","p":"19"}])";
  const auto cert = scratch("indep.json");
  const Run r = run({"independence", "--family", family.string(), "--coeffs", "1,1", "--format", "json", "--out",
                     cert.string()});
  REQUIRE(r.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(slurp(cert));
  CHECK(doc.at("verdict") == "NONSLICE");
  CHECK(doc.at("p") == "7");
  const Run v = run({"verify", "--cert", cert.string()});
  CHECK(v.code == cli::kExitOk);
  CHECK(v.out.find("OK") != std::string::npos);

  std::string bytes = slurp(cert);
  const auto pos = bytes.find("\"signature_total\": \"-8\"");
  REQUIRE(pos != std::string::npos);
  bytes.replace(pos, std::string("\"signature_total\": \"-8\"").size(), "\"signature_total\": \"-4\"");
  const auto bad = scratch("indep_bad.json");
  std::ofstream(bad, std::ios::binary) << bytes;
  CHECK(run({"verify", "--cert", bad.string()}).code == cli::kExitPrecondition);
  CHECK(run({"verify", "--cert", scratch("missing.json").string()}).code == cli::kExitPrecondition);
  CHECK(run({"independence", "--family", family.string(), "--coeffs", "1,x"}).code == cli::kExitPrecondition);
}
