#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "piseries/cli.hpp"

using piseries::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

size_t count_lines(const std::string& s) { return static_cast<size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("list") {
  const auto all = call({"list"});
  CHECK(all.code == 0);
  for (const char* id : {"eq2.1", "eq1.3", "lemma5.1"}) CHECK(all.out.find(id) != std::string::npos);
  CHECK(count_lines(all.out) >= 21);

  const auto q = call({"list", "--filter", "family=infinite_q", "--format", "csv"});
  CHECK(q.code == 0);
  std::istringstream rows(q.out);
  std::string line;
  std::getline(rows, line);
  int n = 0;
  while (std::getline(rows, line)) {
    CHECK(line.find(",infinite_q,") != std::string::npos);
    ++n;
  }
  CHECK(n == 10);

  const auto bad = call({"list", "--filter", "colour=red"});
  CHECK(bad.code != 0);
  CHECK(bad.err.find("unknown filter key") != std::string::npos);
}

TEST_CASE("verify exit codes") {
  CHECK(call({"verify", "eq2.1"}).code == 0);
  CHECK(call({"verify", "eq1.3", "--q", "0.5"}).code == 0);
  CHECK(call({"verify", "eq1.3", "--q", "1/2"}).code == 0);

  const auto missing = call({"verify", "eq1.3"});
  CHECK(missing.code == 3);
  CHECK(missing.out.find("q required") != std::string::npos);

  CHECK(call({"verify", "eq2.8", "--q", "0.5"}).code == 2);
  CHECK(call({"verify", "eq2.10", "--q", "0.5"}).code == 2);
  CHECK(call({"verify", "eq2.1", "--max-terms", "10"}).code == 1);
  CHECK(call({"verify", "nope"}).code == 3);
  CHECK(call({"verify", "eq1.3", "--q", "1.5"}).code == 3);
  CHECK(call({"verify", "eq2.1", "--precision-bits", "8"}).code == 3);
  CHECK(call({"verify", "eq2.1", "--tol", "-1"}).code == 3);
  CHECK(call({"verify", "eq2.1", "--format", "xml"}).code == 3);
  CHECK(call({}).code == 3);
}

TEST_CASE("verify terminating identities") {
  const auto draws = call({"verify", "eq3.3", "--rational", "--format", "csv"});
  CHECK(draws.code == 0);
  CHECK(count_lines(draws.out) == 21);

  const auto one = call({"verify", "eq5.2", "--rational", "--param", "a=1/4", "--param", "b=1/2", "--param", "c=1/3",
                         "--param", "d=1/5", "--param", "n=2", "--q", "1/2", "--format", "json"});
  CHECK(one.code == 0);
  const auto doc = nlohmann::ordered_json::parse(one.out);
  CHECK(doc["reports"].size() == 1);
  CHECK(doc["reports"][0]["abs_residual"] == "0");
  CHECK(doc["reports"][0]["mode"] == "rational");

  CHECK(call({"verify", "eq3.1", "--param", "z=1"}).code == 3);
  CHECK(call({"verify", "eq3.1", "--param", "n=two"}).code == 3);
  CHECK(call({"verify", "eq3.1", "--seed", "99", "--rational"}).code == 0);
}

TEST_CASE("json output round-trips byte for byte") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"verify", "eq2.1", "--format", "json"},
           {"verify", "eq2.10", "--q", "0.3", "--format", "json"},
           {"sweep", "eq2.2", "--q", "0.3,0.6", "--format", "json"},
           {"limit", "pair-2.9-2.5", "--ladder", "3,4", "--format", "json"},
           {"list", "--format", "json"}}) {
    const auto r = call(args);
    const auto doc = nlohmann::ordered_json::parse(r.out);
    CHECK(doc.dump(2) + "\n" == r.out);
  }
  const auto r = call({"verify", "eq2.1", "--format", "json"});
  const auto doc = nlohmann::ordered_json::parse(r.out);
  CHECK(doc["precision_bits"] == 192);
  CHECK(doc["reports"][0]["lhs"].is_string());
  CHECK(doc["reports"][0]["abs_residual"].is_string());
  CHECK(doc["summary"]["PASS"] == 1);
}

TEST_CASE("verify-all") {
  const auto term = call({"verify-all", "--family", "terminating", "--rational"});
  CHECK(term.code == 0);
  CHECK(term.out.find("PASS=160") != std::string::npos);

  const auto q = call({"verify-all", "--filter", "id=eq2.9", "--q", "0.5", "--format", "csv"});
  CHECK(q.code == 2);  // printed eq2.9 misses
  CHECK(count_lines(q.out) == 3);

  CHECK(call({"verify-all", "--filter", "family=cubic"}).code == 3);
  const auto none = call({"verify-all", "--filter", "id=zzz"});
  CHECK(none.code == 0);
}

TEST_CASE("sweep and limit") {
  const auto sweep = call({"sweep", "eq2.2", "--q", "0.3,0.6,0.9", "--format", "csv"});
  CHECK(sweep.code == 0);
  CHECK(count_lines(sweep.out) == 4);

  const auto limit = call({"limit", "pair-2.7-2.3"});
  CHECK(limit.code == 0);
  CHECK(limit.out.find("verdict: decreasing") != std::string::npos);
  CHECK(count_lines(limit.out) == 9);

  CHECK(call({"limit", "pair-9"}).code == 3);
  CHECK(call({"sweep", "eq2.1", "--q", "0.5"}).code == 3);
}

TEST_CASE("exports") {
  const auto cat = call({"catalog"});
  CHECK(cat.code == 0);
  CHECK(cat.out.rfind("id\tfamily", 0) == 0);
  const auto draws = call({"draws", "--count", "2"});
  CHECK(draws.code == 0);
  CHECK(count_lines(draws.out) == 2 + 8 * 2);
  CHECK(call({"pairs"}).out.find("pair-2.10-2.6") != std::string::npos);
  CHECK(call({"--help"}).code == 0);
}
