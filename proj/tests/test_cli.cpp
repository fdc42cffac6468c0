#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ced/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = ced::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("decide exit codes follow the verdict") {
    const auto above = run({"decide", "--d", "2", "--lambda", "1", "--rho", "1"});
    CHECK(above.code == ced::cli::kAbove);
    CHECK(contains(above.out, "verdict: Above"));
    CHECK(contains(above.out, "certificate: above m=1"));

    const auto below = run({"decide", "--d", "2", "--lambda", "1", "--rho", "0"});
    CHECK(below.code == ced::cli::kBelow);
    CHECK(contains(below.out, "verdict: Below"));

    const auto undecided = run({"decide", "--d", "2", "--lambda", "1", "--rho", "9/50", "--max-m", "2"});
    CHECK(undecided.code == ced::cli::kUndecided);
  }

  TEST_CASE("decide json carries the manifest and certificate") {
    const auto r = run({"decide", "--d", "2", "--lambda", "1", "--rho", "1/1000", "--json"});
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "Below");
    CHECK(j["certificate"]["kind"] == "below");
    CHECK(j["manifest"]["subcommand"] == "decide");
    CHECK(j["manifest"]["params"]["rho"] == "1/1000");
    CHECK(j["manifest"]["seed"].is_null());
  }

  TEST_CASE("bad rationals are usage errors naming the flag") {
    const auto r = run({"decide", "--d", "2", "--lambda", "1", "--rho", "1/0"});
    CHECK(r.code == ced::cli::kUsage);
    CHECK(contains(r.err, "--rho"));
    const auto dec = run({"decide", "--d", "2", "--lambda", "0.5", "--rho", "1"});
    CHECK(dec.code == ced::cli::kUsage);
    CHECK(contains(dec.err, "--lambda"));
    const auto neg = run({"decide", "--d", "2", "--lambda", "-1", "--rho", "1"});
    CHECK(neg.code == ced::cli::kUsage);
    CHECK(run({"decide", "--d", "2", "--lambda", "1"}).code == ced::cli::kUsage);
    CHECK(run({"bogus"}).code == ced::cli::kUsage);
  }

  TEST_CASE("rho-c single lambda") {
    const auto r = run({"rho-c", "--d", "2", "--lambda", "1", "--tol", "1/1024"});
    CHECK(r.code == ced::cli::kOk);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rfind("lambda,inside,lo,hi", 0) == 0);
    CHECK(lines[1].rfind("1,1,", 0) == 0);
  }

  TEST_CASE("rho-c grid") {
    const auto r = run({"rho-c", "--d", "2", "--lambda-grid", "1/4:5:30", "--tol", "1/256", "--format", "json"});
    CHECK(r.code == ced::cli::kOk);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["rows"].size() == 30);
    double previous = 0.0;
    for (const auto& row : j["rows"]) {
      const double hi = row["hi_approx"];
      const double lo = row["lo_approx"];
      CHECK(hi - lo <= 1.0 / 256.0 + 1e-15);
      std::string lambda = row["lambda"];
      const auto slash = lambda.find('/');
      const double x = slash == std::string::npos
                           ? std::stod(lambda)
                           : std::stod(lambda.substr(0, slash)) / std::stod(lambda.substr(slash + 1));
      CHECK(x > previous);
      previous = x;
    }
  }

  TEST_CASE("rho-c outside the window") {
    const auto r = run({"rho-c", "--d", "2", "--lambda", "6"});
    CHECK(r.code == ced::cli::kDomain);
    CHECK(contains(r.err, "outside"));
    CHECK(run({"rho-c", "--d", "2"}).code == ced::cli::kUsage);
    CHECK(run({"rho-c", "--d", "2", "--lambda-grid", "1:2"}).code == ced::cli::kUsage);
  }

  TEST_CASE("catalan") {
    const auto r = run({"catalan", "--lambda", "1", "--rho", "1", "--k", "2"});
    CHECK(r.code == ced::cli::kOk);
    CHECK(data_lines(r.out) == std::vector<std::string>{"1/90"});
    const auto bad = run({"catalan", "--lambda", "1", "--rho", "1", "--k", "2", "--mode", "flat:0"});
    CHECK(bad.code == ced::cli::kUsage);
    CHECK(contains(bad.err, "--mode"));
    const auto series = run({"catalan", "--lambda", "1", "--rho", "1", "--k", "2", "--z", "2"});
    CHECK(data_lines(series.out) == std::vector<std::string>{"109/90"});
  }

  TEST_CASE("phase") {
    const auto r = run({"phase", "--d", "2", "--lambda", "1", "--rho", "2"});
    CHECK(r.code == ced::cli::kOk);
    CHECK(data_lines(r.out) == std::vector<std::string>{"Extinction"});
  }

  TEST_CASE("simulate line requires a seed and replays byte for byte") {
    CHECK(run({"simulate", "line", "--lambda", "1", "--rho", "1"}).code == ced::cli::kUsage);
    const std::vector<std::string> args{"simulate", "line", "--lambda", "1", "--rho", "1", "--k-max", "6",
                                        "--trials", "20000", "--seed", "7"};
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == ced::cli::kOk);
    CHECK(a.out == b.out);
    CHECK(contains(a.out, "seed=7"));
    CHECK(data_lines(a.out).size() == 8);

    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(run(threaded).out == a.out);
  }

  TEST_CASE("simulation decimals need opting in") {
    const std::vector<std::string> args{"simulate", "line", "--lambda", "0.5", "--rho", "1", "--seed", "1",
                                        "--trials", "100"};
    CHECK(run(args).code == ced::cli::kUsage);
    auto allowed = args;
    allowed.push_back("--allow-decimal");
    const auto r = run(allowed);
    CHECK(r.code == ced::cli::kOk);
    CHECK(contains(r.out, "lambda=1/2"));
  }

  TEST_CASE("CEL_THREADS is honored without changing output") {
    const std::vector<std::string> args{"simulate", "tree", "--d", "2", "--lambda", "1", "--rho", "1",
                                        "--depth", "4", "--trials", "2000", "--seed", "3", "--format", "json"};
    const auto serial = run(args);
    ::setenv("CEL_THREADS", "2", 1);
    const auto parallel = run(args);
    ::unsetenv("CEL_THREADS");
    CHECK(serial.code == ced::cli::kOk);
    CHECK(serial.out == parallel.out);
    const auto j = nlohmann::json::parse(serial.out);
    CHECK(j["levels"].size() == 4);
    CHECK(j["manifest"]["seed"] == 3);
  }

  TEST_CASE("vertex budget maps to the resource exit code") {
    const auto r = run({"simulate", "tree", "--d", "3", "--lambda", "3", "--rho", "0", "--depth", "10", "--trials",
                        "100", "--seed", "1", "--max-vertices", "40"});
    CHECK(r.code == ced::cli::kResource);
  }

  TEST_CASE("helpers") {
    CHECK(ced::cli::format_double(0.1) == "0.1");
    CHECK(ced::cli::format_double(1.0) == "1");
    CHECK(ced::cli::csv_field("plain") == "plain");
    CHECK(ced::cli::csv_field("a,b") == "\"a,b\"");
    CHECK(ced::cli::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  }
}
