#include "piseries/series.hpp"

#include <vector>

#include "piseries/errors.hpp"

namespace piseries {

namespace {

constexpr int kSmallRunNeeded = 3;
constexpr long kGrowthRunLimit = 64;

BigReal threshold(const BigReal& tol, const BigReal& sum) {
  const BigReal s = abs(sum);
  return s < BigReal(1L) ? tol : tol * s;
}

void check_args(const BigReal& tol, long max_terms) {
  if (!(sign(tol) > 0)) throw PreconditionError("tolerance must be positive");
  if (max_terms < 1) throw PreconditionError("max_terms must be at least 1");
}

}  // namespace

std::string to_string(SumStatus s) {
  switch (s) {
    case SumStatus::converged:
      return "converged";
    case SumStatus::terminated:
      return "terminated";
    case SumStatus::budget_exhausted:
      return "budget_exhausted";
    case SumStatus::diverging:
      return "diverging";
  }
  return "unknown";
}

BigReal infinity(long precision_bits) {
  BigReal r(0L, precision_bits);
  mpfr_set_inf(r.raw(), 1);
  return r;
}

std::optional<BigReal> geometric_tail(const BigReal& last_abs, const BigReal& r) {
  if (!(r < BigReal(1L)) || sign(r) < 0) return std::nullopt;
  return last_abs * r / (BigReal(1L) - r);
}

SumResult sum_adaptive(TermStream& stream, const BigReal& tol, long max_terms) {
  check_args(tol, max_terms);
  SumResult out;
  out.value = BigReal(0L);
  out.tail_bound = infinity(tol.precision_bits());
  int small_run = 0;
  long growth_run = 0;
  std::optional<BigReal> prev_abs;
  std::optional<BigReal> tail;

  for (long k = 0; k < max_terms; ++k) {
    const BigReal t = stream.next();
    ++out.terms_used;
    if (!t.is_finite()) {
      out.status = SumStatus::diverging;
      out.note = "non-finite term at k = " + std::to_string(k);
      return out;
    }
    out.value += t;
    if (stream.terminated()) {
      out.tail_bound = BigReal(0L, tol.precision_bits());
      out.terminated = true;
      out.status = SumStatus::terminated;
      return out;
    }

    const BigReal t_abs = abs(t);
    const BigReal thresh = threshold(tol, out.value);
    small_run = t_abs < thresh ? small_run + 1 : 0;

    const auto hint = stream.ratio_hint();
    const bool contracting = hint && *hint < BigReal(1L);
    growth_run = (prev_abs && *prev_abs < t_abs && !contracting) ? growth_run + 1 : 0;
    prev_abs = t_abs;
    if (growth_run >= kGrowthRunLimit) {
      out.status = SumStatus::diverging;
      out.note = "terms grew for " + std::to_string(growth_run) + " consecutive steps (|t_k| = " +
                 t_abs.to_string(6) + " at k = " + std::to_string(k) + ")";
      return out;
    }

    if (small_run >= kSmallRunNeeded || k + 1 == max_terms) {
      tail = stream.tail_majorant();
      if (!tail && hint) tail = geometric_tail(t_abs, *hint);
      if (small_run >= kSmallRunNeeded && tail && *tail < thresh) {
        out.tail_bound = *tail;
        out.status = SumStatus::converged;
        return out;
      }
    }
  }
  if (tail) out.tail_bound = *tail;
  out.status = SumStatus::budget_exhausted;
  out.note = "no certified tail below tolerance within " + std::to_string(max_terms) + " terms";
  return out;
}

namespace {

// Levin u-transform of S_{n0}..S_{n0+K} with beta = 1:
//   T = sum_j (-1)^j C(K,j) c_j^(K-1) S_{n0+j}/w_{n0+j} / sum_j (-1)^j C(K,j) c_j^(K-1) / w_{n0+j}
// where c_j = (1+n0+j)/(1+n0+K) and w_m = (1+m) a_m.
BigReal levin_u(const std::vector<BigReal>& terms, const std::vector<BigReal>& sums, long n0, long K) {
  const long prec = terms.front().precision_bits();
  BigReal num(0L, prec);
  BigReal den(0L, prec);
  BigReal binom(1L, prec);
  const BigReal last = BigReal(1 + n0 + K, prec);
  for (long j = 0; j <= K; ++j) {
    const long m = n0 + j;
    const BigReal w = BigReal(1 + m, prec) * terms[static_cast<size_t>(m)];
    const BigReal c = BigReal(1 + m, prec) / last;
    BigReal weight = binom / w;
    for (long e = 0; e < K - 1; ++e) weight *= c;
    if (j % 2 == 1) weight = -weight;
    num += weight * sums[static_cast<size_t>(m)];
    den += weight;
    binom = binom * BigReal(K - j, prec) / BigReal(j + 1, prec);
  }
  return num / den;
}

}  // namespace

SumResult sum_levin(TermStream& stream, const BigReal& tol, long max_terms) {
  check_args(tol, max_terms);
  constexpr long kN0 = 1;
  constexpr long kStep = 5;
  constexpr long kFirstK = 10;
  constexpr int kWorseningLimit = 3;

  std::vector<BigReal> terms;
  std::vector<BigReal> sums;
  SumResult out;
  out.certified = false;
  out.value = BigReal(0L);
  out.tail_bound = infinity(tol.precision_bits());

  auto pull = [&](long upto) {
    while (static_cast<long>(terms.size()) <= upto) {
      terms.push_back(stream.next());
      sums.push_back(sums.empty() ? terms.back() : sums.back() + terms.back());
      if (!terms.back().is_finite()) throw NonConvergence("non-finite term");
      if (stream.terminated()) return false;
    }
    return true;
  };

  std::vector<BigReal> transforms;
  std::optional<BigReal> best_spread;
  int worsening = 0;
  try {
    for (long K = kFirstK; kN0 + K + 1 <= max_terms; K += kStep) {
      if (!pull(kN0 + K)) {
        out.value = sums.back();
        out.terms_used = static_cast<long>(terms.size());
        out.tail_bound = BigReal(0L, tol.precision_bits());
        out.terminated = true;
        out.certified = true;
        out.status = SumStatus::terminated;
        return out;
      }
      for (long m = kN0; m <= kN0 + K; ++m) {
        if (is_zero(terms[static_cast<size_t>(m)])) {
          throw NonConvergence("zero term at k = " + std::to_string(m) + " breaks the Levin weights");
        }
      }
      transforms.push_back(levin_u(terms, sums, kN0, K));
      out.value = transforms.back();
      out.terms_used = kN0 + K + 1;
      const size_t n = transforms.size();
      if (n < 3) continue;
      const BigReal spread = max(abs(transforms[n - 1] - transforms[n - 2]), abs(transforms[n - 2] - transforms[n - 3]));
      out.tail_bound = spread;
      if (spread < threshold(tol, out.value)) {
        out.status = SumStatus::converged;
        return out;
      }
      if (best_spread && !(spread < *best_spread)) {
        if (++worsening >= kWorseningLimit) {
          out.status = SumStatus::diverging;
          out.note = "Levin transforms stopped improving at K = " + std::to_string(K) + " (spread " +
                     spread.to_string(6) + ")";
          return out;
        }
      } else {
        worsening = 0;
        best_spread = spread;
      }
    }
  } catch (const NonConvergence& e) {
    out.status = SumStatus::diverging;
    out.note = e.what();
    return out;
  }
  out.status = SumStatus::budget_exhausted;
  out.note = "Levin transforms did not settle within " + std::to_string(max_terms) + " terms";
  return out;
}

}  // namespace piseries
