#include "piseries/registry.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "piseries/errors.hpp"
#include "piseries/identities.hpp"
#include "piseries/terminating.hpp"

#ifndef PISERIES_DATA_DIR
#define PISERIES_DATA_DIR "data"
#endif

namespace piseries {

std::string to_string(Family f) {
  switch (f) {
    case Family::terminating:
      return "terminating";
    case Family::infinite_classical:
      return "infinite_classical";
    case Family::infinite_q:
      return "infinite_q";
  }
  return "unknown";
}

std::string to_string(ExpectedStatus s) { return s == ExpectedStatus::verified ? "verified" : "suspect"; }

std::string to_string(Status s) {
  switch (s) {
    case Status::PASS:
      return "PASS";
    case Status::FAIL:
      return "FAIL";
    case Status::MISMATCH:
      return "MISMATCH";
    case Status::SKIPPED:
      return "SKIPPED";
  }
  return "unknown";
}

Family parse_family(const std::string& s) {
  if (s == "terminating") return Family::terminating;
  if (s == "infinite_classical") return Family::infinite_classical;
  if (s == "infinite_q") return Family::infinite_q;
  throw PreconditionError("unknown family: " + s);
}

int severity(Status s) {
  switch (s) {
    case Status::PASS:
      return 0;
    case Status::FAIL:
      return 1;
    case Status::MISMATCH:
      return 2;
    case Status::SKIPPED:
      return 3;
  }
  return 3;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace {

std::vector<IdentitySpec> build_catalog() {
  using F = Family;
  const auto V = ExpectedStatus::verified;
  const auto S = ExpectedStatus::suspect;
  const std::string pole_free = "no lower parameter vanishes for k <= n";
  const std::string q_range = "0 < q < 1";
  std::vector<IdentitySpec> c{
      {"eq3.1", F::terminating,
       "7F6[a, 1+a/3, b, 1-b, c, 1/2+a-c+n, -n; a/3, (2+a-b)/2, (1+a+b)/2, 1+a+2n, 1+a-2c, 2c-a-2n] = "
       "((1+a)/2, 1+a/2, (1+a+b)/2-c, 1+(a-b)/2-c)_n / ((1+a+b)/2, 1+(a-b)/2, (1+a)/2-c, 1+a/2-c)_n",
       {"a", "b", "c", "n"}, pole_free, V, "eval_7F6"},
      {"eq3.2", F::terminating, "sum_{k=1}^n t_k A_k(a,b) = RHS_n B_n(a,b,c), t_k the 7F6 summand",
       {"a", "b", "c", "n"}, pole_free + "; no pole in A_k, B_n", V, "eval_eq32"},
      {"eq3.3", F::terminating, "sum_{k=1}^n t_k (A_k^2 + C_k) = RHS_n (B_n^2 + D_n), t_k the 7F6 summand",
       {"a", "b", "c", "n"}, pole_free + "; no pole in A..D", V, "eval_eq33"},
      {"eq4.1-trunc", F::terminating,
       "sum_k (1-aq^3k)/(1-a) (a,b,q/b;q)_k (q^-2n,c^2,a^2q^(2n+1)/c^2;q^2)_k / "
       "((q^2,aq^2/b,abq;q^2)_k (aq^(2n+1),aq/c^2,c^2q^-2n/a;q)_k) q^k = "
       "(aq,aq^2,aq^2/bc^2,abq/c^2;q^2)_n/(aq/c^2,aq^2/c^2,aq^2/b,abq;q^2)_n",
       {"a", "b", "c", "n", "q"}, q_range + "; " + pole_free, V, "eval_quadratic_truncated"},
      {"eq4.2", F::terminating, "quadratic summand times (A_k^2 + C_k), q_quadratic flavor, = RHS_n (B_n^2 + D_n)",
       {"a", "b", "c", "n", "q"}, q_range + "; " + pole_free, V, "eval_eq42"},
      {"eq5.2", F::terminating,
       "8phi7[a, qa^(1/2), -qa^(1/2), b, c, d, e, q^-n; a^(1/2), -a^(1/2), aq/b, aq/c, aq/d, aq/e, aq^(n+1)] = "
       "(aq, aq/bc, aq/bd, aq/cd;q)_n / (aq/b, aq/c, aq/d, aq/bcd;q)_n",
       {"a", "b", "c", "d", "n", "q"}, q_range + "; q^(n+1) a^2 = bcde (e solved when omitted)", V,
       "eval_jackson"},
      {"lemma5.1", F::terminating,
       "8phi7 with d = q/b, e = a^2q^n/c, summand times (A_k^2 + C_k), q_linear flavor, = RHS_n (B_n^2 + D_n)",
       {"a", "b", "c", "n", "q"}, q_range + "; " + pole_free, V, "eval_lemma51"},
      {"dougall", F::terminating,
       "7F6[a, 1+a/2, b, c, d, e, -n; a/2, 1+a-b, 1+a-c, 1+a-d, 1+a-e, 1+a+n] = "
       "(1+a, 1+a-b-c, 1+a-b-d, 1+a-c-d)_n / (1+a-b, 1+a-c, 1+a-d, 1+a-b-c-d)_n",
       {"a", "b", "c", "d", "n"}, "1 + 2a = b + c + d + e - n (e solved when omitted)", V, "eval_dougall"},
      {"ramanujan", F::infinite_classical, "sum_{k>=0} (6k+1) (1/2)_k^3 / (k!^3 4^k) = 4/pi", {}, "", V,
       "eval_identity_series"},
      {"eq1.1a", F::infinite_classical,
       "sum_{k>=1} (6k+1) (1/2)_k^3/(k!^3 4^k) sum_{j=1}^k (1/(2j-1)^2 - 1/(16j^2)) = pi/12", {}, "", V,
       "eval_identity_series"},
      {"eq1.1b", F::infinite_classical,
       "sum_{k>=1} (-1)^k (6k+1) (1/2)_k^3/(k!^3 8^k) sum_{j=1}^k (1/(2j-1)^2 - 1/(16j^2)) = -sqrt(2) pi/48", {},
       "", V, "eval_identity_series"},
      {"eq1.2", F::infinite_classical,
       "sum_{k>=1} (-1)^k (4k+1) (1/2)_k^3/k!^3 sum_{i=1}^{2k} (-1)^i/i^2 = pi/12", {}, "", V,
       "eval_identity_series"},
      {"eq1.3", F::infinite_q,
       "sum_{k>=1} (-1)^k q^(k^2) [4k+1] (q;q^2)_k^3/(q^2;q^2)_k^3 sum_{i=1}^{2k} (-1)^i q^i/[i]^2 = "
       "(q,q^3;q^2)_inf/(q^2;q^2)_inf^2 sum_{j>=1} q^(2j)/[2j]^2",
       {"q"}, q_range, V, "eval_identity_series"},
      {"eq2.1", F::infinite_classical,
       "sum_{k>=1} (6k-1) (-1/2)_k^2/(4^k k! (3/2)_k) sum_{i=1}^k 1/(2i-1)^2 = pi^3/144", {}, "", V,
       "eval_identity_series"},
      {"eq2.2", F::infinite_q,
       "sum_{k>=1} [6k-1] (q^-1,q,q;q^2)_k (q^-2;q^4)_k/((q^4,q^2,q^2;q^4)_k (q^3;q^2)_k) q^((k+1)^2) "
       "sum_{i=1}^k (q^(2i-1)/[2i-1]^2 - q^(4i-2)/[4i-2]^2) = "
       "(q,q^4,q^4;q^4)_inf/(q^5,q^2,q^2;q^4)_inf sum_{i>=1} (q^(4i-2)/[4i-2]^2 - q^(4i)/[4i]^2)",
       {"q"}, q_range, V, "eval_identity_series"},
      {"eq2.3", F::infinite_classical,
       "sum_{k>=1} (4k+1) (-1/2)_k (1/2)_k^3/((k+1)! k!^3) sum_{i=1}^{2k} (-1)^(i-1)/i^2 = 2/3 - 8/pi^2", {}, "",
       V, "eval_identity_series"},
      {"eq2.4", F::infinite_classical,
       "sum_{k>=1} (4k+3) (-1/2)_k (1/2)_k^2 (3/2)_k/(k! (k+1)!^2 (k+2)!) sum_{i=1}^k (1/(2i-1)^2 - 1/(4(i+1)^2)) "
       "= 32/27 - 992/(81 pi^2)",
       {}, "", V, "eval_identity_series"},
      {"eq2.5", F::infinite_classical,
       "sum_{k>=1} (4k+3) (3/2)_k (1/2)_k^3/(k! (k+1)!^3) sum_{i=1}^k (1/(2i-1)^2 - 1/(4(i+1)^2)) = 8/3 - 24/pi^2",
       {}, "", V, "eval_identity_series"},
      {"eq2.6", F::infinite_classical,
       "sum_{k>=1} (-1)^k (4k+3) (3/2)_k (1/2)_k^2/(k! (k+1)!^2) sum_{i=1}^k (1/(1+i)^2 - 4/(2i-1)^2) = "
       "4 pi/3 - 8/pi",
       {}, "", V, "eval_identity_series"},
      {"eq2.7", F::infinite_q,
       "sum_{k>=1} [4k+1] (q;q^2)_k^3 (q^-1;q^2)_k/((q^2;q^2)_k^3 (q^4;q^2)_k) q^(2k) "
       "sum_{i=1}^k (q^(2i)/[2i]^2 - q^(2i-1)/[2i-1]^2) = (q^3;q^2)_inf^3 (q;q^2)_inf/((q^2;q^2)_inf^3 "
       "(q^4;q^2)_inf) sum_{i>=1} ((-1)^(i+1)/[i+1]^2 - q^(3i)(1-q)/(2[2i+1]^2)) q^(i+1)",
       {"q"}, q_range, S, "eval_identity_series"},
      {"eq2.8", F::infinite_q,
       "sum_{k>=1} [4k+3] (q;q^2)_k^2 (q^3,q^-1;q^2)_k/((q^4;q^2)_k^2 (q^2,q^6;q^2)_k) q^(4k) "
       "sum_{i=1}^k (q^(2i+2)/[2i+2]^2 - q^(2i-1)/[2i-1]^2) = (q^3;q^2)_inf (q^5;q^2)_inf^2 (q^3;q^2)_inf/"
       "((1-q)(q^4;q^2)_inf^3 (q^6;q^2)_inf) sum_{i>=1} ((-1)^(i+1)/[i+3]^2 - q^(3i+2)(1-q)/(2[2i+3]^2)) q^(i+3)",
       {"q"}, q_range, S, "eval_identity_series"},
      {"eq2.9", F::infinite_q,
       "sum_{k>=1} [4k+3] (q;q^2)_k^3 (q^3;q^2)_k/((q^4;q^2)_k^3 (q^2;q^2)_k) q^(2k) "
       "sum_{i=1}^k (q^(2i+2)/[2i+2]^2 - q^(2i-1)/[2i-1]^2) = (q^3;q^2)_inf^3 (q^3;q^2)_inf/((1-q)(q^4;q^2)_inf^3 "
       "(q^2;q^2)_inf) sum_{i>=1} ((-1)^i/[i+2]^2 + q^(3i)(1-q)/(2[2i+1]^2)) q^(i+2)",
       {"q"}, q_range, S, "eval_identity_series"},
      {"eq2.10", F::infinite_q,
       "sum_{k>=1} (-1)^k [4k+3] (q;q^2)_{k+1} (q;q^2)_k^2/(q^2,q^4,q^4;q^2)_k q^(-k(k+4)) "
       "sum_{i=1}^k (q^(2i+2)/[2i+2]^2 - q^(2i-1)/[2i-1]^2) = (q^3,q^3;q^2)_inf/(q^4,q^4;q^2)_inf "
       "sum_{i>=1} q^(2i+2)/[2i+2]^2",
       {"q"}, q_range, S, "eval_identity_series"},
      {"eq2.7-corrected", F::infinite_q, "eq2.7 without the q^(3i)(1-q)/(2[2i+1]^2) piece on the right", {"q"},
       q_range, V, "eval_identity_series"},
      {"eq2.8-corrected", F::infinite_q, "eq2.8 without the q^(3i+2)(1-q)/(2[2i+3]^2) piece on the right", {"q"},
       q_range, V, "eval_identity_series"},
      {"eq2.9-corrected", F::infinite_q, "eq2.9 without the q^(3i)(1-q)/(2[2i+1]^2) piece on the right", {"q"},
       q_range, V, "eval_identity_series"},
      {"eq2.10-corrected", F::infinite_q, "eq2.10 with q^(k(k+2)) in place of q^(-k(k+4))", {"q"}, q_range, V,
       "eval_identity_series"},
  };
  std::sort(c.begin(), c.end(), [](const IdentitySpec& x, const IdentitySpec& y) { return x.id < y.id; });
  return c;
}

}  // namespace

const std::vector<IdentitySpec>& catalog() {
  static const std::vector<IdentitySpec> c = build_catalog();
  return c;
}

const IdentitySpec& find_identity(const std::string& id) {
  for (const auto& s : catalog()) {
    if (s.id == id) return s;
  }
  throw PreconditionError("unknown identity: " + id);
}

std::string catalog_tsv() {
  std::ostringstream os;
  os << "id\tfamily\texpected_status\trequired_params\tconstraints\tevaluator\tcitation\n";
  for (const auto& s : catalog()) {
    std::string params;
    for (const auto& p : s.required_params) params += (params.empty() ? "" : ",") + p;
    os << s.id << '\t' << to_string(s.family) << '\t' << to_string(s.expected_status) << '\t'
       << (params.empty() ? "-" : params) << '\t' << (s.constraints.empty() ? "-" : s.constraints) << '\t'
       << s.evaluator << '\t' << s.citation << '\n';
  }
  return os.str();
}

std::string describe(const IdentityParams& p) {
  std::string out;
  auto add = [&](const char* name, const std::optional<Rational>& v) {
    if (v) out += (out.empty() ? "" : " ") + std::string(name) + "=" + v->to_string();
  };
  add("a", p.a);
  add("b", p.b);
  add("c", p.c);
  add("d", p.d);
  add("e", p.e);
  if (p.n) out += (out.empty() ? "" : " ") + std::string("n=") + std::to_string(*p.n);
  add("q", p.q);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

constexpr long kRoundingProbeBits = 64;

const Rational& need(const std::optional<Rational>& v, const char* name) {
  if (!v) throw PreconditionError(std::string("parameter ") + name + " required");
  return *v;
}

long need_n(const IdentityParams& p) {
  if (!p.n) throw PreconditionError("parameter n required");
  if (*p.n < 0) throw PreconditionError("n must be non-negative");
  return *p.n;
}

const Rational& need_q(const IdentityParams& p) {
  if (!p.q) throw PreconditionError("q required");
  if (!(sign(*p.q) > 0 && *p.q < Rational(1))) throw PreconditionError("q must lie strictly between 0 and 1");
  return *p.q;
}

template <Field T, typename Conv>
Sides<T> run_terminating(const std::string& id, const IdentityParams& p, Conv conv) {
  auto A = [&] { return conv(need(p.a, "a")); };
  auto B = [&] { return conv(need(p.b, "b")); };
  auto C = [&] { return conv(need(p.c, "c")); };
  auto D = [&] { return conv(need(p.d, "d")); };
  if (id == "eq3.1") return eval_7F6(A(), B(), C(), need_n(p));
  if (id == "eq3.2") return eval_eq32(A(), B(), C(), need_n(p));
  if (id == "eq3.3") return eval_eq33(A(), B(), C(), need_n(p));
  if (id == "dougall") {
    const long n = need_n(p);
    const T e = p.e ? conv(*p.e) : dougall_solve_e(A(), B(), C(), D(), n);
    return eval_dougall(A(), B(), C(), D(), e, n);
  }
  const QParams<T> q(conv(need_q(p)));
  if (id == "eq4.1-trunc") return eval_quadratic_truncated(A(), B(), C(), need_n(p), q);
  if (id == "eq4.2") return eval_eq42(A(), B(), C(), need_n(p), q);
  if (id == "lemma5.1") return eval_lemma51(A(), B(), C(), need_n(p), q);
  if (id == "eq5.2") {
    const long n = need_n(p);
    const T e = p.e ? conv(*p.e) : jackson_solve_e(A(), B(), C(), D(), n, q);
    return eval_jackson(A(), B(), C(), D(), e, n, q);
  }
  throw PreconditionError("no terminating evaluator for " + id);
}

BigReal relative(const BigReal& res, const BigReal& lhs, const BigReal& rhs) {
  const BigReal scale = max(abs(lhs), abs(rhs));
  if (is_zero(scale)) return is_zero(res) ? BigReal(0L, res.precision_bits()) : infinity(res.precision_bits());
  return res / scale;
}

void verify_terminating(const IdentitySpec& spec, const IdentityParams& params, const VerifyOptions& opt,
                        VerificationReport& rep) {
  const long prec = opt.precision_bits;
  if (opt.rational) {
    rep.mode = "rational";
    const auto s = run_terminating<Rational>(spec.id, params, [](const Rational& r) { return r; });
    rep.lhs = s.lhs.to_string();
    rep.rhs = s.rhs.to_string();
    const Rational diff = abs(s.lhs - s.rhs);
    rep.abs_residual = BigReal(diff, prec);
    rep.rel_residual = relative(rep.abs_residual, BigReal(s.lhs, prec), BigReal(s.rhs, prec));
    rep.lhs_tail = BigReal(0L, prec);
    rep.rhs_tail = BigReal(0L, prec);
    rep.lhs_terms = params.n ? *params.n + 1 : 0;
    rep.status = is_zero(diff) ? Status::PASS
                               : (spec.expected_status == ExpectedStatus::suspect ? Status::MISMATCH : Status::FAIL);
    return;
  }
  rep.mode = "bigreal";
  auto evaluate = [&](long bits) {
    PrecisionScope scope(bits);
    return run_terminating<BigReal>(spec.id, params, [bits](const Rational& r) { return BigReal(r, bits); });
  };
  PrecisionScope scope(prec);
  const auto s = evaluate(prec);
  rep.lhs = s.lhs.to_string();
  rep.rhs = s.rhs.to_string();
  rep.abs_residual = abs(s.lhs - s.rhs);
  rep.rel_residual = relative(rep.abs_residual, s.lhs, s.rhs);
  rep.lhs_tail = BigReal(0L, prec);
  rep.rhs_tail = BigReal(0L, prec);
  rep.lhs_terms = params.n ? *params.n + 1 : 0;
  // Rounding scales with the summands, not the (possibly cancelled) total.
  // Cancellation inside the coefficient sums is caught by re-evaluating with
  // extra bits and counting the observed drift.
  const auto hi = evaluate(prec + kRoundingProbeBits);
  const BigReal drift = (abs(s.lhs - hi.lhs) + abs(s.rhs - hi.rhs)).with_precision(prec);
  const BigReal scale = max(max(abs(s.lhs), abs(s.rhs)), s.lhs_abs_sum);
  const BigReal allowance = pow2(10 - prec, prec) * scale + BigReal(4L, prec) * drift;
  rep.status = rep.abs_residual <= allowance
                   ? Status::PASS
                   : (spec.expected_status == ExpectedStatus::suspect ? Status::MISMATCH : Status::FAIL);
}

void verify_infinite(const IdentitySpec& spec, const IdentityParams& params, const VerifyOptions& opt,
                     VerificationReport& rep) {
  const long prec = opt.precision_bits;
  rep.mode = "bigreal";
  PrecisionScope scope(prec);
  std::optional<Rational> q;
  if (spec.family == Family::infinite_q) q = need_q(params);
  const SeriesSides s = eval_identity_series(spec.id, q, opt.tol.with_precision(prec), opt.max_terms, prec);
  rep.lhs = s.lhs.value.to_string();
  rep.rhs = s.rhs.value.to_string();
  rep.abs_residual = abs(s.lhs.value - s.rhs.value);
  rep.rel_residual = relative(rep.abs_residual, s.lhs.value, s.rhs.value);
  rep.lhs_tail = s.lhs.tail_bound;
  rep.rhs_tail = s.rhs.tail_bound;
  rep.lhs_terms = s.lhs.terms_used;
  rep.rhs_terms = s.rhs.terms_used;
  const Status bad = spec.expected_status == ExpectedStatus::suspect ? Status::MISMATCH : Status::FAIL;

  std::vector<std::string> notes;
  if (!s.lhs.certified) notes.push_back("lhs error is a Levin estimate");
  if (!s.lhs.ok()) notes.push_back("lhs " + to_string(s.lhs.status) + ": " + s.lhs.note);
  if (!s.rhs.ok()) notes.push_back("rhs " + to_string(s.rhs.status) + ": " + s.rhs.note);
  for (const auto& n : notes) rep.note += (rep.note.empty() ? "" : "; ") + n;
  if (!s.lhs.ok() || !s.rhs.ok()) {
    rep.status = bad;
    return;
  }
  const BigReal allowance = pow2(10 - prec, prec) * max(abs(s.lhs.value), abs(s.rhs.value));
  rep.status = rep.abs_residual <= rep.lhs_tail + rep.rhs_tail + allowance ? Status::PASS : bad;
}

}  // namespace

VerificationReport verify(const std::string& id, const IdentityParams& params, const VerifyOptions& opt) {
  const IdentitySpec& spec = find_identity(id);
  if (opt.precision_bits < kMinPrecisionBits) throw PreconditionError("precision must be at least 16 bits");
  if (!(sign(opt.tol) > 0)) throw PreconditionError("tolerance must be positive");
  if (opt.max_terms < 1) throw PreconditionError("max_terms must be at least 1");

  VerificationReport rep;
  rep.id = id;
  rep.params = params;
  rep.precision_bits = opt.precision_bits;
  const long prec = opt.precision_bits;
  rep.abs_residual = BigReal(0L, prec);
  rep.rel_residual = BigReal(0L, prec);
  rep.lhs_tail = BigReal(0L, prec);
  rep.rhs_tail = BigReal(0L, prec);
  rep.mode = opt.rational && spec.family == Family::terminating ? "rational" : "bigreal";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (spec.family == Family::terminating) {
      verify_terminating(spec, params, opt, rep);
    } else {
      verify_infinite(spec, params, opt, rep);
    }
  } catch (const PreconditionError& e) {
    rep.status = Status::SKIPPED;
    rep.note = e.what();
  } catch (const PoleError& e) {
    rep.status = Status::SKIPPED;
    rep.note = std::string("pole: ") + e.what();
  } catch (const DivisionByZero& e) {
    rep.status = Status::SKIPPED;
    rep.note = std::string("pole: ") + e.what();
  } catch (const NonConvergence& e) {
    rep.status = spec.expected_status == ExpectedStatus::suspect ? Status::MISMATCH : Status::FAIL;
    rep.note = std::string("no convergence: ") + e.what();
  }
  rep.wall_time_us =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Draws
// ---------------------------------------------------------------------------

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

Rational draw_param(std::mt19937_64& g) {
  const long num = static_cast<long>(g() % 19) - 9;
  const long den = 1 + static_cast<long>(g() % 9);
  return Rational(num, den);
}

Rational draw_q(std::mt19937_64& g) {
  const long den = 2 + static_cast<long>(g() % 8);
  const long num = 1 + static_cast<long>(g() % static_cast<std::uint64_t>(den - 1));
  return Rational(num, den);
}

bool is_q_identity(const std::string& id) {
  return id == "eq4.1-trunc" || id == "eq4.2" || id == "lemma5.1" || id == "eq5.2";
}

}  // namespace

std::vector<IdentityParams> generate_draws(const std::string& id, std::uint64_t seed, int count) {
  const IdentitySpec& spec = find_identity(id);
  if (spec.family != Family::terminating) throw PreconditionError("draws exist only for terminating identities");
  std::mt19937_64 g(seed ^ fnv1a(id));
  std::vector<IdentityParams> out;
  const bool needs_d = id == "eq5.2" || id == "dougall";
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts && static_cast<int>(out.size()) < count; ++attempt) {
    IdentityParams p;
    p.a = draw_param(g);
    p.b = draw_param(g);
    p.c = draw_param(g);
    if (needs_d) p.d = draw_param(g);
    p.n = static_cast<long>(g() % 7);
    if (is_q_identity(id)) p.q = draw_q(g);
    try {
      // A draw is usable when both sides evaluate without a pole.
      run_terminating<Rational>(id, p, [](const Rational& r) { return r; });
      out.push_back(p);
    } catch (const PoleError&) {
    } catch (const DivisionByZero&) {
    } catch (const PreconditionError&) {
    }
  }
  if (static_cast<int>(out.size()) < count) throw NonConvergence("could not draw enough pole-free points for " + id);
  return out;
}

namespace {

std::string field(const std::optional<Rational>& v) { return v ? v->to_string() : "-"; }

std::optional<Rational> parse_field(const std::string& s) {
  if (s == "-") return std::nullopt;
  return Rational::parse(s);
}

}  // namespace

std::string draws_tsv(std::uint64_t seed, int count) {
  std::ostringstream os;
  os << "# seed " << seed << ", " << count << " draws per identity\n";
  os << "id\tindex\ta\tb\tc\td\te\tn\tq\n";
  for (const auto& spec : catalog()) {
    if (spec.family != Family::terminating) continue;
    const auto draws = generate_draws(spec.id, seed, count);
    for (size_t i = 0; i < draws.size(); ++i) {
      const auto& p = draws[i];
      os << spec.id << '\t' << i << '\t' << field(p.a) << '\t' << field(p.b) << '\t' << field(p.c) << '\t'
         << field(p.d) << '\t' << field(p.e) << '\t' << *p.n << '\t' << field(p.q) << '\n';
    }
  }
  return os.str();
}

std::vector<IdentityParams> parse_draws(const std::string& tsv, const std::string& id) {
  std::vector<IdentityParams> out;
  std::istringstream in(tsv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("id\t", 0) == 0) continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string col;
    while (std::getline(ls, col, '\t')) cols.push_back(col);
    if (cols.size() != 9) throw PreconditionError("malformed draws line: " + line);
    if (cols[0] != id) continue;
    IdentityParams p;
    p.a = parse_field(cols[2]);
    p.b = parse_field(cols[3]);
    p.c = parse_field(cols[4]);
    p.d = parse_field(cols[5]);
    p.e = parse_field(cols[6]);
    p.n = std::stol(cols[7]);
    p.q = parse_field(cols[8]);
    out.push_back(p);
  }
  return out;
}

std::string committed_draws_path() { return std::string(PISERIES_DATA_DIR) + "/draws.tsv"; }

std::vector<IdentityParams> committed_draws(const std::string& id) {
  std::ifstream in(committed_draws_path());
  if (!in) return generate_draws(id, kDefaultSeed, kDrawsPerIdentity);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_draws(buf.str(), id);
}

// ---------------------------------------------------------------------------
// Batch operations
// ---------------------------------------------------------------------------

bool Filter::matches(const IdentitySpec& s) const {
  if (family && s.family != *family) return false;
  if (id_substring && s.id.find(*id_substring) == std::string::npos) return false;
  return true;
}

std::vector<Rational> default_q_grid() {
  return {Rational(1, 10), Rational(3, 10), Rational(1, 2), Rational(7, 10), Rational(9, 10)};
}

namespace {

std::vector<VerificationReport> run_parallel(std::vector<std::function<VerificationReport()>> jobs) {
  std::vector<VerificationReport> out(jobs.size());
  std::atomic<size_t> next{0};
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(jobs.size())));
  auto work = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) out[i] = jobs[i]();
  };
  if (workers <= 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

std::vector<VerificationReport> verify_all(const Filter& filter, const VerifyOptions& opt,
                                           const std::optional<Rational>& q, std::optional<std::uint64_t> seed) {
  std::vector<std::function<VerificationReport()>> jobs;
  for (const auto& spec : catalog()) {
    if (!filter.matches(spec)) continue;
    if (spec.family == Family::terminating) {
      const auto draws = seed ? generate_draws(spec.id, *seed, kDrawsPerIdentity) : committed_draws(spec.id);
      for (const auto& p : draws) {
        jobs.push_back([id = spec.id, p, opt] { return verify(id, p, opt); });
      }
    } else if (spec.family == Family::infinite_q) {
      for (const Rational& qv : q ? std::vector<Rational>{*q} : default_q_grid()) {
        IdentityParams p;
        p.q = qv;
        jobs.push_back([id = spec.id, p, opt] { return verify(id, p, opt); });
      }
    } else {
      jobs.push_back([id = spec.id, opt] { return verify(id, IdentityParams{}, opt); });
    }
  }
  // Jobs are generated in catalog (id) order, so the result is already sorted.
  return run_parallel(std::move(jobs));
}

std::vector<VerificationReport> sweep_q(const std::string& id, const std::vector<Rational>& qs,
                                        const VerifyOptions& opt) {
  const IdentitySpec& spec = find_identity(id);
  const auto& req = spec.required_params;
  if (std::find(req.begin(), req.end(), "q") == req.end()) throw PreconditionError(id + " is not a q-identity");
  if (spec.family == Family::terminating) throw PreconditionError("sweep needs an infinite q-identity");
  std::vector<std::function<VerificationReport()>> jobs;
  for (const Rational& qv : qs) {
    IdentityParams p;
    p.q = qv;
    jobs.push_back([id, p, opt] { return verify(id, p, opt); });
  }
  return run_parallel(std::move(jobs));
}

// ---------------------------------------------------------------------------
// q -> 1 limit study
// ---------------------------------------------------------------------------

namespace {

struct PairRule {
  LimitPair pair;
  std::function<Rational(const Rational&)> scale;
};

const std::vector<PairRule>& pair_rules() {
  static const std::vector<PairRule> rules{
      {{"pair-2.7-2.3", "eq2.7", "eq2.3", "-1"}, [](const Rational&) { return Rational(-1); }},
      {{"pair-2.8-2.4", "eq2.8", "eq2.4", "-1/2"}, [](const Rational&) { return Rational(-1, 2); }},
      {{"pair-2.9-2.5", "eq2.9", "eq2.5", "-1"}, [](const Rational&) { return Rational(-1); }},
      {{"pair-2.10-2.6", "eq2.10-corrected", "eq2.6", "4/(1-q)"},
       [](const Rational& q) { return Rational(4) / (Rational(1) - q); }},
  };
  return rules;
}

}  // namespace

const std::vector<LimitPair>& limit_pairs() {
  static const std::vector<LimitPair> pairs = [] {
    std::vector<LimitPair> out;
    for (const auto& r : pair_rules()) out.push_back(r.pair);
    return out;
  }();
  return pairs;
}

LimitReport limit_study(const std::string& pair_id, const std::vector<long>& ladder, const VerifyOptions& opt) {
  const auto& rules = pair_rules();
  auto it = std::find_if(rules.begin(), rules.end(), [&](const PairRule& r) { return r.pair.pair_id == pair_id; });
  if (it == rules.end()) throw PreconditionError("unknown pair: " + pair_id);
  const long prec = opt.precision_bits;
  PrecisionScope scope(prec);
  const BigReal tol = opt.tol.with_precision(prec);

  LimitReport rep;
  rep.pair_id = pair_id;
  const SumResult classical =
      sum_double_series(infinite_identity(it->pair.classical_id).lhs, std::nullopt, tol, opt.max_terms, prec);
  rep.classical_lhs = classical.value.to_string();
  bool all_ok = classical.ok();

  for (long j : ladder) {
    if (j < 1 || j > 62) throw PreconditionError("ladder exponent out of range: " + std::to_string(j));
    LimitRung rung;
    rung.j = j;
    const long pw = 1L << j;
    rung.q = Rational(pw - 1, pw);
    const SumResult s = sum_double_series(infinite_identity(it->pair.q_id).lhs, rung.q, tol, opt.max_terms, prec);
    const BigReal scaled = s.value * BigReal(it->scale(rung.q), prec);
    rung.lhs_q = s.value.to_string();
    rung.scaled_lhs_q = scaled.to_string();
    rung.error = abs(scaled - classical.value);
    rung.terms = s.terms_used;
    if (!s.ok()) {
      rung.note = to_string(s.status) + ": " + s.note;
      all_ok = false;
    }
    rep.rungs.push_back(rung);
  }

  const size_t n = rep.rungs.size();
  if (!all_ok) {
    rep.verdict = "no convergence";
  } else if (n < 3) {
    rep.verdict = "insufficient rungs";
  } else {
    const bool dec = rep.rungs[n - 3].error > rep.rungs[n - 2].error && rep.rungs[n - 2].error > rep.rungs[n - 1].error;
    rep.verdict = dec ? "decreasing" : "not decreasing";
  }
  return rep;
}

}  // namespace piseries
