#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "piseries/errors.hpp"
#include "piseries/identities.hpp"
#include "piseries/registry.hpp"
#include "support.hpp"

using namespace piseries;
using piseries::testing::big;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> manifest() {
  std::ifstream in(std::string(PISERIES_DATA_DIR) + "/manifest.txt");
  std::vector<std::string> ids;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

IdentityParams with_q(const Rational& q) {
  IdentityParams p;
  p.q = q;
  return p;
}

// Everything but the wall time.
bool same_report(const VerificationReport& a, const VerificationReport& b) {
  return a.id == b.id && describe(a.params) == describe(b.params) && a.mode == b.mode &&
         a.precision_bits == b.precision_bits && a.lhs == b.lhs && a.rhs == b.rhs &&
         a.abs_residual == b.abs_residual && a.rel_residual == b.rel_residual && a.lhs_tail == b.lhs_tail &&
         a.rhs_tail == b.rhs_tail && a.lhs_terms == b.lhs_terms && a.rhs_terms == b.rhs_terms &&
         a.status == b.status && a.note == b.note;
}

}  // namespace

TEST_CASE("catalog matches the frozen manifest") {
  const auto ids = manifest();
  REQUIRE(ids.size() >= 20);
  std::vector<std::string> got;
  for (const auto& s : catalog()) got.push_back(s.id);
  CHECK(got == ids);
  CHECK(std::is_sorted(got.begin(), got.end()));
  CHECK(std::set<std::string>(got.begin(), got.end()).size() == got.size());
  for (const char* required : {"eq2.1", "eq1.3", "lemma5.1", "ramanujan", "dougall", "eq5.2"}) {
    CHECK_MESSAGE(std::find(got.begin(), got.end(), required) != got.end(), required);
  }
}

TEST_CASE("committed catalog file is current") { CHECK(read_file(std::string(PISERIES_DATA_DIR) + "/catalog.tsv") == catalog_tsv()); }

TEST_CASE("every catalog entry has a working evaluator") {
  VerifyOptions opt;
  opt.rational = true;
  for (const auto& s : catalog()) {
    CHECK(!s.citation.empty());
    IdentityParams p;
    if (s.family == Family::terminating) {
      const auto draws = committed_draws(s.id);
      REQUIRE(!draws.empty());
      p = draws.front();
    } else {
      CHECK_NOTHROW(infinite_identity(s.id));
      if (s.family == Family::infinite_q) p.q = Rational(1, 2);
    }
    if (s.id == "eq2.10") continue;  // diverges as printed
    const auto r = verify(s.id, p, opt);
    CHECK_MESSAGE(r.status != Status::SKIPPED, s.id << ": " << r.note);
  }
  CHECK_THROWS_AS(find_identity("eq9.9"), PreconditionError);
  CHECK_THROWS_AS(verify("eq9.9", {}, VerifyOptions{}), PreconditionError);
}

TEST_CASE("suspect entries") {
  for (const char* id : {"eq2.8", "eq2.10"}) CHECK(find_identity(id).expected_status == ExpectedStatus::suspect);
  for (const char* id : {"eq2.1", "eq1.3", "eq2.7-corrected", "eq2.10-corrected"}) {
    CHECK(find_identity(id).expected_status == ExpectedStatus::verified);
  }
}

TEST_CASE("committed draws") {
  const std::string committed = read_file(committed_draws_path());
  CHECK(committed == draws_tsv(kDefaultSeed, kDrawsPerIdentity));
  for (const auto& s : catalog()) {
    if (s.family != Family::terminating) continue;
    const auto draws = committed_draws(s.id);
    CHECK(draws.size() == static_cast<size_t>(kDrawsPerIdentity));
    for (const auto& d : draws) {
      REQUIRE(d.n.has_value());
      CHECK(*d.n >= 0);
      CHECK(*d.n <= 6);
    }
    const auto again = parse_draws(draws_tsv(kDefaultSeed, kDrawsPerIdentity), s.id);
    REQUIRE(again.size() == draws.size());
    for (size_t i = 0; i < draws.size(); ++i) CHECK(describe(again[i]) == describe(draws[i]));
  }
  CHECK(describe(generate_draws("eq3.1", 1, 3).front()) != describe(generate_draws("eq3.1", 2, 3).front()));
}

TEST_CASE("verify examples") {
  VerifyOptions opt;
  opt.max_terms = 5000;
  const auto r21 = verify("eq2.1", {}, opt);
  CHECK(r21.status == Status::PASS);
  CHECK(r21.rel_residual < big("1e-30"));
  CHECK(r21.lhs_terms <= 5000);

  VerifyOptions exact;
  exact.rational = true;
  IdentityParams p;
  p.a = Rational(1, 4), p.b = Rational(1, 2), p.c = Rational(1, 3), p.d = Rational(1, 5), p.n = 2;
  p.q = Rational(1, 2);
  const auto r52 = verify("eq5.2", p, exact);
  CHECK(r52.status == Status::PASS);
  CHECK(is_zero(r52.abs_residual));
  CHECK(r52.mode == "rational");

  const auto r210 = verify("eq2.10", with_q(Rational(1, 2)), VerifyOptions{});
  CHECK(r210.status == Status::MISMATCH);
  CHECK(r210.note.find("diverging") != std::string::npos);
}

TEST_CASE("preconditions become SKIPPED") {
  const auto no_q = verify("eq1.3", {}, VerifyOptions{});
  CHECK(no_q.status == Status::SKIPPED);
  CHECK(no_q.note == "q required");

  IdentityParams p;
  p.a = Rational(1, 4), p.b = Rational(1, 2), p.c = Rational(1, 3), p.d = Rational(1, 5), p.e = Rational(7), p.n = 2;
  p.q = Rational(1, 2);
  const auto unbalanced = verify("eq5.2", p, VerifyOptions{});
  CHECK(unbalanced.status == Status::SKIPPED);
  CHECK(unbalanced.note.find("balance") != std::string::npos);

  IdentityParams missing;
  missing.a = Rational(1, 3);
  missing.n = 2;
  CHECK(verify("eq3.1", missing, VerifyOptions{}).status == Status::SKIPPED);

  IdentityParams pole;
  pole.a = Rational(0), pole.b = Rational(1, 2), pole.c = Rational(1, 3), pole.n = 2;
  const auto polar = verify("eq3.1", pole, VerifyOptions{});
  CHECK(polar.status == Status::SKIPPED);
  CHECK(polar.note.find("pole") != std::string::npos);

  VerifyOptions bad;
  bad.precision_bits = 8;
  CHECK_THROWS_AS(verify("eq2.1", {}, bad), PreconditionError);
}

TEST_CASE("PASS rule for infinite identities") {
  VerifyOptions opt;
  const long p = opt.precision_bits;
  const auto reports = verify_all(Filter{}, opt, Rational(1, 2));
  for (const auto& r : reports) {
    if (find_identity(r.id).family == Family::terminating) continue;
    const BigReal lhs = BigReal::parse(r.lhs, p), rhs = BigReal::parse(r.rhs, p);
    const BigReal allowance = pow2(10 - p, p) * max(abs(lhs), abs(rhs));
    const bool within = r.abs_residual <= r.lhs_tail + r.rhs_tail + allowance;
    if (r.status == Status::PASS) CHECK_MESSAGE(within, r.id);
    if (r.status == Status::FAIL || r.status == Status::MISMATCH) {
      CHECK_MESSAGE((!within || !r.note.empty()), r.id);
    }
  }
}

TEST_CASE("verify_all") {
  Filter term;
  term.family = Family::terminating;
  VerifyOptions exact;
  exact.rational = true;
  const auto tr = verify_all(term, exact);
  CHECK(tr.size() == 8u * kDrawsPerIdentity);
  for (const auto& r : tr) CHECK_MESSAGE(r.status == Status::PASS, r.id << " " << describe(r.params));
  const auto tb = verify_all(term, VerifyOptions{});
  for (const auto& r : tb) CHECK_MESSAGE(r.status == Status::PASS, r.id << " " << describe(r.params));

  Filter classical;
  classical.family = Family::infinite_classical;
  const auto cr = verify_all(classical, VerifyOptions{});
  CHECK(cr.size() == 9u);
  for (const auto& r : cr) {
    if (find_identity(r.id).expected_status == ExpectedStatus::verified) {
      CHECK_MESSAGE(r.status == Status::PASS, r.id);
    }
  }
  std::vector<std::string> ids;
  for (const auto& r : cr) ids.push_back(r.id);
  CHECK(std::is_sorted(ids.begin(), ids.end()));

  Filter nothing;
  nothing.id_substring = "no-such-identity";
  CHECK(verify_all(nothing, VerifyOptions{}).empty());
}

TEST_CASE("sweep_q") {
  const auto grid = sweep_q("eq1.3", default_q_grid(), VerifyOptions{});
  REQUIRE(grid.size() == 5u);
  for (const auto& r : grid) CHECK_MESSAGE(r.status == Status::PASS, describe(r.params));
  CHECK(sweep_q("eq1.3", {}, VerifyOptions{}).empty());

  const auto slow = sweep_q("eq2.2", {Rational(1, 2), Rational(99, 100)}, VerifyOptions{});
  CHECK(slow[0].status == Status::PASS);
  CHECK(slow[1].status == Status::PASS);
  CHECK(slow[1].lhs_terms > slow[0].lhs_terms);

  CHECK_THROWS_AS(sweep_q("eq2.1", {Rational(1, 2)}, VerifyOptions{}), PreconditionError);
}

TEST_CASE("suspect entries report mismatch or divergence") {
  for (const char* id : {"eq2.8", "eq2.10"}) {
    for (const Rational& q : {Rational(3, 10), Rational(1, 2)}) {
      const auto r = verify(id, with_q(q), VerifyOptions{});
      CHECK_MESSAGE(r.status == Status::MISMATCH, id);
      const bool has_residual = r.abs_residual.is_finite() && sign(r.abs_residual) > 0;
      CHECK_MESSAGE((has_residual || !r.note.empty()), id);
    }
  }
}

TEST_CASE("limit study") {
  for (const char* pair : {"pair-2.7-2.3", "pair-2.9-2.5"}) {
    const auto rep = limit_study(pair, {3, 4, 5, 6, 7, 8}, VerifyOptions{});
    CHECK_MESSAGE(rep.verdict == "decreasing", pair);
    CHECK(rep.rungs.size() == 6u);
    CHECK(rep.rungs.front().q == Rational(7, 8));
  }
  const auto one = limit_study("pair-2.8-2.4", {4}, VerifyOptions{});
  CHECK(one.rungs.size() == 1u);
  CHECK(one.verdict == "insufficient rungs");
  CHECK_THROWS_AS(limit_study("pair-1-1", {3}, VerifyOptions{}), PreconditionError);
  CHECK(limit_pairs().size() == 4u);
}

TEST_CASE("reports are deterministic") {
  VerifyOptions opt;
  for (const auto& [id, q] : std::vector<std::pair<std::string, std::optional<Rational>>>{
           {"eq2.1", std::nullopt}, {"eq2.3", std::nullopt}, {"eq1.3", Rational(7, 10)}, {"eq2.10", Rational(1, 2)}}) {
    IdentityParams p;
    p.q = q;
    CHECK_MESSAGE(same_report(verify(id, p, opt), verify(id, p, opt)), id);
  }
  Filter term;
  term.family = Family::terminating;
  const auto a = verify_all(term, opt);
  const auto b = verify_all(term, opt);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(same_report(a[i], b[i]));
}

TEST_CASE("a looser tolerance keeps PASS with no more terms") {
  for (const auto& [id, q] : std::vector<std::pair<std::string, std::optional<Rational>>>{
           {"ramanujan", std::nullopt}, {"eq2.1", std::nullopt}, {"eq1.3", Rational(9, 10)}, {"eq2.2", Rational(3, 10)}}) {
    IdentityParams p;
    p.q = q;
    VerifyOptions tight;
    VerifyOptions loose;
    loose.tol = big("1e-29");
    const auto t = verify(id, p, tight);
    const auto l = verify(id, p, loose);
    REQUIRE(t.status == Status::PASS);
    CHECK_MESSAGE(l.status == Status::PASS, id);
    CHECK_MESSAGE(l.lhs_terms + l.rhs_terms <= t.lhs_terms + t.rhs_terms, id);
  }
}
