#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "gosc/cli.hpp"

using namespace gosc;
using namespace gosc::cli;

namespace {

Real field(const Record& r, const char* key, int digits = 40) {
  return Real(r.data.at(key).get<std::string>(), digits_to_bits(digits));
}

std::vector<Record> of_kind(const Dataset& d, const std::string& kind) {
  std::vector<Record> out;
  for (const auto& r : d.records)
    if (r.data.at("kind") == kind) out.push_back(r);
  return out;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(GOSC_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value) setenv(kDigitsEnv, value, 1);
    else unsetenv(kDigitsEnv);
  }
  ~EnvGuard() { unsetenv(kDigitsEnv); }
};

}  // namespace

TEST_CASE("resolve_digits: flag, then environment, then default") {
  {
    EnvGuard env(nullptr);
    CHECK(resolve_digits(std::nullopt, 30) == 30);
    CHECK(resolve_digits(44, 30) == 44);
  }
  {
    EnvGuard env("61");
    CHECK(resolve_digits(std::nullopt, 30) == 61);
    CHECK(resolve_digits(44, 30) == 44);
  }
  {
    EnvGuard env("sixty");
    CHECK_THROWS_AS(resolve_digits(std::nullopt, 30), InvalidInput);
  }
  {
    EnvGuard env("-5");
    CHECK_THROWS_AS(resolve_digits(std::nullopt, 30), InvalidInput);
  }
}

TEST_CASE("sweep: unperturbed levels from every method") {
  SweepRequest req;
  req.lambda_min = req.lambda_max = "0";
  req.steps = 1;
  req.methods = {Method::RR, Method::RPM, Method::PT};
  req.guides = false;
  req.jobs = 1;
  Dataset d;
  CHECK(cmd_sweep(req, d.sink()));
  const auto pts = of_kind(d, "sweep_point");
  REQUIRE(pts.size() == 6);
  for (const auto& r : pts) {
    CHECK(r.data.at("status") == "ok");
    const Real expected = r.data.at("state") == 0 ? Real(0.5) : Real(1.5);
    CHECK(abs(field(r, "energy") - expected) < Real(1e-12));
  }
}

TEST_CASE("sweep: grid, ordering and PT departure away from lambda = 0") {
  SweepRequest req;
  req.lambda_min = "-2";
  req.lambda_max = "2";
  req.steps = 3;
  req.states = {0};
  req.guides = false;
  req.jobs = 2;
  Dataset d;
  CHECK(cmd_sweep(req, d.sink()));
  REQUIRE(d.records.size() == 6);
  // lambda-major, then state, then method
  CHECK(field(d.records[0], "lambda") == Real(-2));
  CHECK(d.records[0].data.at("method") == "RR");
  CHECK(d.records[1].data.at("method") == "PT");
  CHECK(field(d.records[5], "lambda") == Real(2));
  for (std::size_t i : {0u, 4u}) CHECK(abs(field(d.records[i], "energy") - field(d.records[i + 1], "energy")) > Real(1e-3));
  CHECK(abs(field(d.records[2], "energy") - field(d.records[3], "energy")) < Real(1e-12));
}

TEST_CASE("sweep: identical output for any number of workers") {
  SweepRequest req;
  req.lambda_min = "-3";
  req.lambda_max = "3";
  req.steps = 4;
  req.states = {0, 1, 2};
  req.methods = {Method::RR};
  req.guides = false;
  std::string runs[2];
  for (int k = 0; k < 2; ++k) {
    req.jobs = k == 0 ? 1 : 3;
    Dataset d;
    cmd_sweep(req, d.sink());
    for (const auto& r : d.records) runs[k] += r.data.dump() + "\n";
  }
  CHECK(runs[0] == runs[1]);
}

TEST_CASE("sweep: request validation") {
  SweepRequest req;
  Dataset d;
  req.steps = 0;
  CHECK_THROWS_AS(cmd_sweep(req, d.sink()), InvalidInput);
  req.steps = 1;
  CHECK_THROWS_AS(cmd_sweep(req, d.sink()), InvalidInput);
  req.steps = 5;
  req.lambda_min = "3";
  req.lambda_max = "1";
  CHECK_THROWS_AS(cmd_sweep(req, d.sink()), InvalidInput);
  req.lambda_min = "abc";
  CHECK_THROWS_AS(cmd_sweep(req, d.sink()), InvalidInput);
  req.lambda_min = "-1";
  req.states = {-1};
  CHECK_THROWS_AS(cmd_sweep(req, d.sink()), InvalidInput);
  req.states = {0};
  req.digits = 10;
  CHECK_THROWS_AS(cmd_sweep(req, d.sink()), InvalidInput);
  CHECK(d.records.empty());
}

TEST_CASE("critical: perturbative roots") {
  for (auto [n, rounded] : {std::pair{0, "0.684"}, {1, "3.35"}}) {
    CriticalRequest req;
    req.n = n;
    req.method = CriticalMethod::PT;
    req.digits = 30;
    Dataset d;
    CHECK(cmd_critical(req, d.sink()));
    REQUIRE(d.records.size() == 1);
    const Real l = field(d.records[0], "lambda_c");
    CHECK(abs(l - Real(rounded, digits_to_bits(30))) < Real(n == 0 ? 5e-4 : 5e-3));
  }
  CriticalRequest bad;
  bad.n = 2;
  bad.method = CriticalMethod::PT;
  Dataset d;
  CHECK_THROWS_AS(cmd_critical(bad, d.sink()), InvalidInput);
  CHECK_THROWS_AS(parse_critical_method("exact"), InvalidInput);
}

TEST_CASE("eps: empty box gives an empty, successful dataset") {
  EpsRequest req;
  req.digits = 30;
  req.box = parse_box("20,24,1,3", PrecisionCtx(30));
  Dataset d;
  CHECK(cmd_eps(req, d.sink()));
  CHECK(d.records.empty());
}

TEST_CASE("parse_box") {
  const PrecisionCtx ctx(30);
  const SearchBox b = parse_box("-4,0,0,4", ctx);
  CHECK(b.re_min == Real(-4));
  CHECK(b.im_max == Real(4));
  CHECK_THROWS_AS(parse_box("-4,0,0", ctx), InvalidInput);
  CHECK_THROWS_AS(parse_box("1,0,0,4", ctx), InvalidInput);
  CHECK_THROWS_AS(parse_box("a,b,c,d", ctx), InvalidInput);
}

TEST_CASE("hft: first-order slope at lambda = 0") {
  HftRequest req;
  req.D = 40;
  Dataset d;
  CHECK(cmd_hft(req, d.sink()));
  REQUIRE(d.records.size() == 1);
  CHECK(field(d.records[0], "residual") < Real(1e-8));
  CHECK(abs(field(d.records[0], "slope") + 1 / sqrt(PrecisionCtx(40).real(2))) < Real(1e-8));

  req.h = "0";
  Dataset bad;
  CHECK_THROWS_AS(cmd_hft(req, bad.sink()), InvalidInput);
}

TEST_CASE("decimal strings round-trip at working precision") {
  SweepRequest req;
  req.lambda_min = req.lambda_max = "1.25";
  req.steps = 1;
  req.states = {0};
  req.methods = {Method::RR};
  req.guides = false;
  req.digits = 40;
  Dataset d;
  cmd_sweep(req, d.sink());
  REQUIRE(d.records.size() == 1);
  const std::string text = d.records[0].data.at("energy").get<std::string>();
  const Real parsed(text, digits_to_bits(40));
  CHECK(parsed.str(40) == text);
}

TEST_CASE("run_ordered: order and failure capture") {
  std::vector<std::string> seen;
  std::atomic<int> calls{0};
  run_ordered(
      12, 4,
      [&](std::size_t i) -> std::vector<Record> {
        ++calls;
        if (i == 5) throw std::runtime_error("boom");
        Record r;
        r.data["i"] = i;
        return {r, r};
      },
      [&](const Record& r) { seen.push_back(r.ok ? std::to_string(r.data.at("i").get<int>()) : "E"); });
  CHECK(calls == 12);
  REQUIRE(seen.size() == 23);
  CHECK(seen[0] == "0");
  CHECK(seen[9] == "4");
  CHECK(seen[10] == "E");
  CHECK(seen[11] == "6");
  CHECK(seen.back() == "11");
}

TEST_CASE("writers") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(format_for_path("out.jsonl") == Format::jsonl);
  CHECK(format_for_path("out.csv") == Format::csv);
  CHECK(format_for_path("") == Format::csv);

  const Metadata meta{"gosc hft", 30, "2026-01-01T00:00:00Z"};
  Record r;
  r.data = {{"kind", "hft"}, {"n", 0}, {"message", "x, y"}};
  {
    std::ostringstream os;
    Writer w(os, Format::csv, {"kind", "n", "slope", "message"}, meta);
    w.write(r);
    CHECK(os.str() ==
          "# version: 0.1.0\n# digits: 30\n# command: gosc hft\n# timestamp: 2026-01-01T00:00:00Z\n"
          "kind,n,slope,message\nhft,0,,\"x, y\"\n");
  }
  {
    std::ostringstream os;
    Writer w(os, Format::jsonl, {"kind", "n", "slope", "message"}, meta);
    w.write(r);
    std::istringstream lines(os.str());
    std::string first, second;
    std::getline(lines, first);
    std::getline(lines, second);
    const auto m = nlohmann::json::parse(first);
    CHECK(m.at("kind") == "metadata");
    CHECK(m.at("digits") == 30);
    CHECK(second == R"({"kind":"hft","n":0,"message":"x, y"})");
  }
}

TEST_CASE("executable exit codes") {
  CHECK(run_binary("--version") == 0);
  CHECK(run_binary("hft --D 20") == 0);
  CHECK(run_binary("sweep --steps 0") == 2);
  CHECK(run_binary("hft --digits 10") == 2);
  // E_0 at lambda = -10 cannot reach 25 digits within the basis-size schedule
  CHECK(run_binary("sweep --lmin -10 --lmax -10 --steps 1 --states 0 --methods RR --target 25 --no-guides") == 1);
}
