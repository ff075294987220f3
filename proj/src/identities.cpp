#include "piseries/identities.hpp"

#include <algorithm>

#include "piseries/errors.hpp"
#include "piseries/scalar.hpp"

namespace piseries {

namespace {

Rational r(long p, long q = 1) { return Rational(p, q); }

InnerPiece cpiece(Rational coeff, long gamma, long delta, bool alternating = false) {
  InnerPiece p;
  p.coeff = std::move(coeff);
  p.gamma = gamma;
  p.delta = delta;
  p.alternating = alternating;
  return p;
}

InnerPiece qpiece(Rational coeff, long alpha, long beta, long gamma, long delta, bool alternating = false,
                  long one_minus_q_power = 0) {
  InnerPiece p = cpiece(std::move(coeff), gamma, delta, alternating);
  p.q_alpha = alpha;
  p.q_beta = beta;
  p.one_minus_q_power = one_minus_q_power;
  return p;
}

DoubleSeries classical(long start, Rational z, LinearFactor lin, std::vector<ClassicalFactor> num,
                       std::vector<ClassicalFactor> den, std::optional<PieceSum> inner, bool algebraic) {
  DoubleSeries d;
  d.kind = SeriesKind::classical;
  d.start = start;
  d.z = std::move(z);
  d.linear = lin;
  d.num = std::move(num);
  d.den = std::move(den);
  d.inner = std::move(inner);
  d.algebraic = algebraic;
  return d;
}

DoubleSeries qseries(bool alternating, LinearFactor lin, long ga, long gb, long gc, std::vector<QFactor> num,
                     std::vector<QFactor> den, PieceSum inner) {
  DoubleSeries d;
  d.kind = SeriesKind::q;
  d.start = 1;
  d.alternating = alternating;
  d.linear = lin;
  d.gauss_a = ga;
  d.gauss_b = gb;
  d.gauss_c = gc;
  d.qnum = std::move(num);
  d.qden = std::move(den);
  d.inner = std::move(inner);
  return d;
}

// Inner sums shared by several displays.
PieceSum odd_minus_sixteenth() { return {{cpiece(r(1), 2, -1), cpiece(r(-1, 16), 1, 0)}, 1}; }
PieceSum odd_minus_quarter_shifted() { return {{cpiece(r(1), 2, -1), cpiece(r(-1, 4), 1, 1)}, 1}; }
PieceSum q_even2_minus_odd() { return {{qpiece(r(1), 2, 2, 2, 2), qpiece(r(-1), 2, -1, 2, -1)}, 1}; }

std::vector<InfiniteIdentity> build() {
  std::vector<InfiniteIdentity> out;
  const ClassicalFactor half3{r(1, 2), 0, 3};
  const ClassicalFactor fact3{r(1), 0, 3};

  // ---- classical ----------------------------------------------------------
  out.push_back({"ramanujan", classical(0, r(1, 4), {6, 1}, {half3}, {fact3}, std::nullopt, false),
                 [](long p) { return BigReal(4L, p) / pi(p); }, std::nullopt});

  out.push_back({"eq1.1a", classical(1, r(1, 4), {6, 1}, {half3}, {fact3}, odd_minus_sixteenth(), false),
                 [](long p) { return pi(p) / BigReal(12L, p); }, std::nullopt});

  out.push_back({"eq1.1b", classical(1, r(-1, 8), {6, 1}, {half3}, {fact3}, odd_minus_sixteenth(), false),
                 [](long p) { return -(sqrt(BigReal(2L, p)) * pi(p)) / BigReal(48L, p); }, std::nullopt});

  {
    // sum_{i=1}^{2k} (-1)^i/i^2, taken two terms at a time
    PieceSum inner{{cpiece(r(-1), 2, -1), cpiece(r(1), 2, 0)}, 1};
    DoubleSeries d = classical(1, r(-1), {4, 1}, {half3}, {fact3}, inner, true);
    out.push_back({"eq1.2", d, [](long p) { return pi(p) / BigReal(12L, p); }, std::nullopt});
  }

  out.push_back({"eq2.1",
                 classical(1, r(1, 4), {6, -1}, {{r(-1, 2), 0, 2}}, {{r(1), 0, 1}, {r(3, 2), 0, 1}},
                           PieceSum{{cpiece(r(1), 2, -1)}, 1}, false),
                 [](long p) {
                   const BigReal x = pi(p);
                   return x * x * x / BigReal(144L, p);
                 },
                 std::nullopt});

  out.push_back({"eq2.3",
                 classical(1, r(1), {4, 1}, {{r(-1, 2), 0, 1}, half3}, {{r(1), 1, 1}, fact3},
                           PieceSum{{cpiece(r(1), 2, -1), cpiece(r(-1), 2, 0)}, 1}, true),
                 [](long p) {
                   const BigReal x = pi(p);
                   return BigReal(2L, p) / BigReal(3L, p) - BigReal(8L, p) / (x * x);
                 },
                 std::nullopt});

  out.push_back({"eq2.4",
                 classical(1, r(1), {4, 3}, {{r(-1, 2), 0, 1}, {r(1, 2), 0, 2}, {r(3, 2), 0, 1}},
                           {{r(1), 0, 1}, {r(1), 1, 2}, {r(1), 2, 1}}, odd_minus_quarter_shifted(), true),
                 [](long p) {
                   const BigReal x = pi(p);
                   return BigReal(32L, p) / BigReal(27L, p) - BigReal(992L, p) / (BigReal(81L, p) * x * x);
                 },
                 std::nullopt});

  out.push_back({"eq2.5",
                 classical(1, r(1), {4, 3}, {{r(3, 2), 0, 1}, half3}, {{r(1), 0, 1}, {r(1), 1, 3}},
                           odd_minus_quarter_shifted(), true),
                 [](long p) {
                   const BigReal x = pi(p);
                   return BigReal(8L, p) / BigReal(3L, p) - BigReal(24L, p) / (x * x);
                 },
                 std::nullopt});

  out.push_back({"eq2.6",
                 classical(1, r(-1), {4, 3}, {{r(3, 2), 0, 1}, {r(1, 2), 0, 2}}, {{r(1), 0, 1}, {r(1), 1, 2}},
                           PieceSum{{cpiece(r(1), 1, 1), cpiece(r(-4), 2, -1)}, 1}, true),
                 [](long p) {
                   const BigReal x = pi(p);
                   return BigReal(4L, p) * x / BigReal(3L, p) - BigReal(8L, p) / x;
                 },
                 std::nullopt});

  // ---- q ------------------------------------------------------------------
  {
    PieceSum inner{{qpiece(r(-1), 2, -1, 2, -1), qpiece(r(1), 2, 0, 2, 0)}, 1};
    DoubleSeries d = qseries(true, {4, 1}, 1, 0, 0, {{1, 2, 0, 3}}, {{2, 2, 0, 3}}, inner);
    QProductSide rhs{r(1), 0, {{1, 2, 1}, {3, 2, 1}, {2, 2, -2}}, PieceSum{{qpiece(r(1), 2, 0, 2, 0)}, 1}};
    out.push_back({"eq1.3", d, nullptr, rhs});
  }
  {
    PieceSum inner{{qpiece(r(1), 2, -1, 2, -1), qpiece(r(-1), 4, -2, 4, -2)}, 1};
    DoubleSeries d = qseries(false, {6, -1}, 1, 2, 1, {{-1, 2, 0, 1}, {1, 2, 0, 2}, {-2, 4, 0, 1}},
                             {{4, 4, 0, 1}, {2, 4, 0, 2}, {3, 2, 0, 1}}, inner);
    QProductSide rhs{r(1), 0, {{1, 4, 1}, {4, 4, 2}, {5, 4, -1}, {2, 4, -2}},
                     PieceSum{{qpiece(r(1), 4, -2, 4, -2), qpiece(r(-1), 4, 0, 4, 0)}, 1}};
    out.push_back({"eq2.2", d, nullptr, rhs});
  }

  const DoubleSeries lhs27 =
      qseries(false, {4, 1}, 0, 2, 0, {{1, 2, 0, 3}, {-1, 2, 0, 1}}, {{2, 2, 0, 3}, {4, 2, 0, 1}},
              PieceSum{{qpiece(r(1), 2, 0, 2, 0), qpiece(r(-1), 2, -1, 2, -1)}, 1});
  const DoubleSeries lhs28 = qseries(false, {4, 3}, 0, 4, 0, {{1, 2, 0, 2}, {3, 2, 0, 1}, {-1, 2, 0, 1}},
                                     {{4, 2, 0, 2}, {2, 2, 0, 1}, {6, 2, 0, 1}}, q_even2_minus_odd());
  const DoubleSeries lhs29 = qseries(false, {4, 3}, 0, 2, 0, {{1, 2, 0, 3}, {3, 2, 0, 1}},
                                     {{4, 2, 0, 3}, {2, 2, 0, 1}}, q_even2_minus_odd());
  const DoubleSeries lhs210 = qseries(true, {4, 3}, -1, -4, 0, {{1, 2, 1, 1}, {1, 2, 0, 2}},
                                      {{2, 2, 0, 1}, {4, 2, 0, 2}}, q_even2_minus_odd());

  // Printed right sides, including the (1-q)/2 pieces.
  const InnerPiece s27 = qpiece(r(-1), 1, 1, 1, 1, true);
  const InnerPiece x27 = qpiece(r(-1, 2), 4, 1, 2, 1, false, 1);
  const std::vector<QInfFactor> p27{{3, 2, 3}, {1, 2, 1}, {2, 2, -3}, {4, 2, -1}};
  out.push_back({"eq2.7", lhs27, nullptr, QProductSide{r(1), 0, p27, PieceSum{{s27, x27}, 1}}});

  const InnerPiece s28 = qpiece(r(-1), 1, 3, 1, 3, true);
  const InnerPiece x28 = qpiece(r(-1, 2), 4, 5, 2, 3, false, 1);
  const std::vector<QInfFactor> p28{{3, 2, 1}, {5, 2, 2}, {3, 2, 1}, {4, 2, -3}, {6, 2, -1}};
  out.push_back({"eq2.8", lhs28, nullptr, QProductSide{r(1), -1, p28, PieceSum{{s28, x28}, 1}}});

  const InnerPiece s29 = qpiece(r(1), 1, 2, 1, 2, true);
  const InnerPiece x29 = qpiece(r(1, 2), 4, 2, 2, 1, false, 1);
  const std::vector<QInfFactor> p29{{3, 2, 3}, {3, 2, 1}, {4, 2, -3}, {2, 2, -1}};
  out.push_back({"eq2.9", lhs29, nullptr, QProductSide{r(1), -1, p29, PieceSum{{s29, x29}, 1}}});

  const std::vector<QInfFactor> p210{{3, 2, 2}, {4, 2, -2}};
  const PieceSum sum210{{qpiece(r(1), 2, 2, 2, 2)}, 1};
  out.push_back({"eq2.10", lhs210, nullptr, QProductSide{r(1), 0, p210, sum210}});

  // Forms that hold numerically: the (1-q)/2 pieces dropped, and for (2.10)
  // the exponent q^(k(k+2)) in place of q^(-k(k+4)).
  out.push_back({"eq2.7-corrected", lhs27, nullptr, QProductSide{r(1), 0, p27, PieceSum{{s27}, 1}}});
  out.push_back({"eq2.8-corrected", lhs28, nullptr, QProductSide{r(1), -1, p28, PieceSum{{s28}, 1}}});
  out.push_back({"eq2.9-corrected", lhs29, nullptr, QProductSide{r(1), -1, p29, PieceSum{{s29}, 1}}});
  DoubleSeries lhs210c = lhs210;
  lhs210c.gauss_a = 1;
  lhs210c.gauss_b = 2;
  out.push_back({"eq2.10-corrected", lhs210c, nullptr, QProductSide{r(1), 0, p210, sum210}});
  return out;
}

}  // namespace

const std::vector<InfiniteIdentity>& infinite_identities() {
  static const std::vector<InfiniteIdentity> table = build();
  return table;
}

const InfiniteIdentity& infinite_identity(const std::string& id) {
  const auto& t = infinite_identities();
  auto it = std::find_if(t.begin(), t.end(), [&](const InfiniteIdentity& e) { return e.id == id; });
  if (it == t.end()) throw PreconditionError("unknown infinite identity: " + id);
  return *it;
}

SumResult eval_q_product_side(const QProductSide& side, const Rational& q, const BigReal& tol, long max_terms,
                              long prec) {
  const long internal = prec + kGuardBits;
  PrecisionScope scope(internal);
  const QParams<BigReal> qp{BigReal(q, internal)};
  const BigReal one(1L, internal);
  const BigReal eps = tol.with_precision(internal) / BigReal(2 * (static_cast<long>(side.factors.size()) + 1), internal);

  BigReal product(side.constant, internal);
  if (side.one_minus_q_power != 0) product *= ipow(one - qp.q(), side.one_minus_q_power);
  BigReal growth = one;  // prod (1 + rho_i)
  long factors_used = 0;
  for (const QInfFactor& f : side.factors) {
    const auto p = q_pochhammer_inf(qp.power(f.e), qp.derived(f.m), eps);
    product *= ipow(p.value, f.power);
    factors_used += p.factors;
    // P = P_m (1 + d), |d| <= B: P^n is off by at most (1+B)^n - 1 for n > 0
    // and (1-B)^(-|n|) - 1 for n < 0.
    const BigReal rho = f.power > 0 ? ipow(one + p.rel_bound, f.power) - one
                                    : ipow(one / (one - p.rel_bound), -f.power) - one;
    growth *= one + rho;
  }
  const BigReal rho = growth - one;

  SumResult s = sum_piece_series(side.sum, q, eps, max_terms, internal);
  SumResult out;
  out.value = (product * s.value).with_precision(prec);
  out.terms_used = s.terms_used + factors_used;
  out.status = s.status;
  out.note = s.note;
  out.certified = s.certified;
  // |P S - Pc Sc| <= |Pc||Sc| rho + |Pc| (1 + rho) tau
  out.tail_bound =
      (abs(product) * abs(s.value) * rho + abs(product) * (one + rho) * s.tail_bound).with_precision(prec);
  return out;
}

SeriesSides eval_identity_series(const std::string& id, const std::optional<Rational>& q, const BigReal& tol,
                                 long max_terms, long prec) {
  const InfiniteIdentity& e = infinite_identity(id);
  if (e.needs_q() && !q) throw PreconditionError("q required for " + id);
  if (!e.needs_q() && q) throw PreconditionError(id + " takes no q");
  if (q && !(sign(*q) > 0 && *q < Rational(1))) throw PreconditionError("q must lie strictly between 0 and 1");

  SeriesSides out;
  out.lhs = sum_double_series(e.lhs, q, tol, max_terms, prec);
  if (e.q_rhs) {
    out.rhs = eval_q_product_side(*e.q_rhs, *q, tol, max_terms, prec);
  } else {
    PrecisionScope scope(prec + kGuardBits);
    out.rhs.value = e.closed_form(prec + kGuardBits).with_precision(prec);
    out.rhs.tail_bound = BigReal(0L, prec);
    out.rhs.status = SumStatus::converged;
  }
  return out;
}

}  // namespace piseries
