#include "piseries/double_series.hpp"

#include <algorithm>

#include "piseries/errors.hpp"
#include "piseries/scalar.hpp"

namespace piseries {

namespace {

const QParams<BigReal>& need_q(const std::optional<QParams<BigReal>>& q) {
  if (!q) throw PreconditionError("q series evaluated without q");
  return *q;
}

BigReal qpow(const QParams<BigReal>& q, long e, long prec) { return ipow(q.q().with_precision(prec), e); }

BigReal q_bracket(const QParams<BigReal>& q, long n, long prec) {
  if (n < 1) throw PoleError("q-integer [" + std::to_string(n) + "] in a denominator");
  const BigReal x = q.q().with_precision(prec);
  return (BigReal(1L, prec) - ipow(x, n)) / (BigReal(1L, prec) - x);
}

}  // namespace

BigReal piece_increment(const PieceSum& s, long i, const std::optional<QParams<BigReal>>& q, long prec) {
  PrecisionScope scope(prec);
  BigReal total(0L, prec);
  for (const InnerPiece& p : s.pieces) {
    BigReal v(p.coeff, prec);
    if (p.alternating && i % 2 != 0) v = -v;
    const long n = p.gamma * i + p.delta;
    if (q) {
      if (p.one_minus_q_power != 0) {
        v *= ipow(BigReal(1L, prec) - q->q().with_precision(prec), p.one_minus_q_power);
      }
      const BigReal br = q_bracket(*q, n, prec);
      v = v * qpow(*q, p.q_alpha * i + p.q_beta, prec) / (br * br);
    } else {
      if (n == 0) throw PoleError("inner denominator vanishes at i = " + std::to_string(i));
      v = v / BigReal(n * n, prec);
    }
    total += v;
  }
  return total;
}

std::optional<BigReal> piece_tail(const PieceSum& s, long k, const std::optional<QParams<BigReal>>& q, long prec) {
  PrecisionScope scope(prec);
  k = std::max(k, s.start - 1);
  BigReal total(0L, prec);
  for (const InnerPiece& p : s.pieces) {
    const BigReal c = abs(BigReal(p.coeff, prec));
    if (q) {
      // [n] >= 1 for n >= 1, so the piece is dominated by a geometric series in q^alpha.
      if (p.q_alpha <= 0 || p.gamma <= 0 || p.gamma * (k + 1) + p.delta < 1) return std::nullopt;
      BigReal v = c * qpow(*q, p.q_alpha * (k + 1) + p.q_beta, prec) /
                  (BigReal(1L, prec) - qpow(*q, p.q_alpha, prec));
      if (p.one_minus_q_power != 0) v *= ipow(BigReal(1L, prec) - q->q().with_precision(prec), p.one_minus_q_power);
      total += v;
    } else {
      // sum_{i>k} 1/(g i + d)^2 <= integral_k^inf dx/(g x + d)^2 = 1/(g (g k + d))
      const long base = p.gamma * k + p.delta;
      if (p.gamma <= 0 || base <= 0) return std::nullopt;
      total += c / BigReal(p.gamma * base, prec);
    }
  }
  return total;
}

BigReal weight_direct(const DoubleSeries& d, long k, const std::optional<QParams<BigReal>>& q, long prec) {
  PrecisionScope scope(prec);
  BigReal w(d.constant, prec);
  if (d.alternating && k % 2 != 0) w = -w;
  if (d.kind == SeriesKind::classical) {
    w *= ipow(BigReal(d.z, prec), k);
    if (d.linear) {
      const long lin = d.linear->alpha * k + d.linear->beta;
      if (lin == 0) throw PoleError("linear factor vanishes at k = " + std::to_string(k));
      w *= BigReal(lin, prec);
    }
    for (const auto& f : d.num) w *= ipow(pochhammer(BigReal(f.x, prec), k + f.shift), f.power);
    for (const auto& f : d.den) {
      const BigReal p = pochhammer(BigReal(f.x, prec), k + f.shift);
      if (is_zero(p)) throw PoleError("denominator Pochhammer vanishes at k = " + std::to_string(k));
      w = w / ipow(p, f.power);
    }
    return w;
  }
  const QParams<BigReal>& base = need_q(q);
  const QParams<BigReal> qp(base.q().with_precision(prec));
  if (d.linear) w *= q_bracket(qp, d.linear->alpha * k + d.linear->beta, prec);
  w *= qp.power(d.gauss_a * k * k + d.gauss_b * k + d.gauss_c);
  for (const auto& f : d.qnum) {
    w *= ipow(q_pochhammer(qp.power(f.e), qp.derived(f.m), k + f.shift), f.power);
  }
  for (const auto& f : d.qden) {
    const BigReal p = q_pochhammer(qp.power(f.e), qp.derived(f.m), k + f.shift);
    if (is_zero(p)) throw PoleError("denominator q-Pochhammer vanishes at k = " + std::to_string(k));
    w = w / ipow(p, f.power);
  }
  return w;
}

BigReal term_direct(const DoubleSeries& d, long k, const std::optional<QParams<BigReal>>& q, long prec) {
  const BigReal w = weight_direct(d, k, q, prec);
  if (!d.inner) return w;
  BigReal s(0L, prec);
  for (long i = d.inner->start; i <= k; ++i) s += piece_increment(*d.inner, i, q, prec);
  return w * s;
}

// ---------------------------------------------------------------------------

DoubleSeriesStream::DoubleSeriesStream(DoubleSeries d, std::optional<QParams<BigReal>> q, long prec)
    : d_(std::move(d)), q_(std::move(q)), prec_(prec), w_(0L, prec), s_(0L, prec),
      constant_ratio_(1L, prec) {
  PrecisionScope scope(prec_);
  const BigReal one(1L, prec_);
  const BigReal zero(0L, prec_);
  auto push = [&](BigReal n0, BigReal n1, BigReal d0, BigReal d1, long m, long times) {
    for (long t = 0; t < times; ++t) factors_.push_back({n0, n1, d0, d1, m});
  };

  if (d_.alternating) constant_ratio_ = -constant_ratio_;
  if (d_.kind == SeriesKind::classical) {
    constant_ratio_ *= BigReal(d_.z, prec_);
    // Each Pochhammer contributes a linear factor (k + offset) to the ratio.
    // Numerator and denominator offsets are paired so each Mobius factor
    // tends to 1 and its sup over j >= k stays finite.
    std::vector<Rational> nums;
    std::vector<Rational> dens;
    auto collect = [](const std::vector<ClassicalFactor>& fs, std::vector<Rational>& up, std::vector<Rational>& down) {
      for (const auto& f : fs) {
        const Rational offset = f.x + Rational(f.shift);
        for (long t = 0; t < std::abs(f.power); ++t) (f.power > 0 ? up : down).push_back(offset);
      }
    };
    collect(d_.num, nums, dens);
    collect(d_.den, dens, nums);
    if (d_.linear) {
      const Rational a(d_.linear->alpha);
      nums.push_back((a + Rational(d_.linear->beta)) / a);
      dens.push_back(Rational(d_.linear->beta) / a);
    }
    std::sort(nums.begin(), nums.end());
    std::sort(dens.begin(), dens.end());
    const size_t paired = std::min(nums.size(), dens.size());
    for (size_t i = 0; i < paired; ++i) push(BigReal(nums[i], prec_), one, BigReal(dens[i], prec_), one, 0, 1);
    for (size_t i = paired; i < nums.size(); ++i) push(BigReal(nums[i], prec_), one, one, zero, 0, 1);
    for (size_t i = paired; i < dens.size(); ++i) push(one, zero, BigReal(dens[i], prec_), one, 0, 1);
    return;
  }

  const QParams<BigReal>& q0 = need_q(q_);
  auto qp = [&](long e) { return qpow(q0, e, prec_); };
  for (const auto& f : d_.qnum) {
    const BigReal c = -qp(f.e + f.m * f.shift);
    if (f.power > 0) push(one, c, one, zero, f.m, f.power);
    else push(one, zero, one, c, f.m, -f.power);
  }
  for (const auto& f : d_.qden) {
    const BigReal c = -qp(f.e + f.m * f.shift);
    if (f.power > 0) push(one, zero, one, c, f.m, f.power);
    else push(one, c, one, zero, f.m, -f.power);
  }
  if (d_.linear) {
    // [a(k+1)+b]/[ak+b] = (1 - q^(a+b) X)/(1 - q^b X), X = q^(ak)
    push(one, -qp(d_.linear->alpha + d_.linear->beta), one, -qp(d_.linear->beta), d_.linear->alpha, 1);
  }
  // q^(a(k+1)^2 + b(k+1)) / q^(a k^2 + b k) = q^(a+b) (q^(2a))^k
  constant_ratio_ *= qp(d_.gauss_a + d_.gauss_b);
  if (d_.gauss_a > 0) push(zero, one, one, zero, 2 * d_.gauss_a, 1);
  if (d_.gauss_a < 0) push(one, zero, zero, one, -2 * d_.gauss_a, 1);
}

BigReal DoubleSeriesStream::x_at(const Mobius& f, long k) const {
  if (d_.kind == SeriesKind::classical) return BigReal(k, prec_);
  return qpow(*q_, f.m * k, prec_);
}

BigReal DoubleSeriesStream::ratio_at(long k) const {
  BigReal r = constant_ratio_;
  for (const Mobius& f : factors_) {
    const BigReal x = x_at(f, k);
    const BigReal den = f.d0 + f.d1 * x;
    if (is_zero(den)) throw PoleError("ratio factor vanishes at k = " + std::to_string(k));
    r = r * (f.n0 + f.n1 * x) / den;
  }
  return r;
}

// sup_{j >= k} |f| for a Mobius factor. The variable runs over [k, inf)
// classically and over (0, q^(mk)] for q series; f is monotone there as long
// as the denominator keeps its sign, so the sup sits at an end point.
std::optional<BigReal> DoubleSeriesStream::sup_abs(const Mobius& f, long k) const {
  const BigReal x = x_at(f, k);
  const BigReal den_k = f.d0 + f.d1 * x;
  const BigReal at_k = abs((f.n0 + f.n1 * x) / den_k);
  if (d_.kind == SeriesKind::classical) {
    if (is_zero(f.d1)) {
      if (!is_zero(f.n1)) return std::nullopt;
      return at_k;
    }
    if (sign(den_k) != sign(f.d1)) return std::nullopt;
    return max(at_k, abs(f.n1 / f.d1));
  }
  if (is_zero(f.d0) || sign(f.d0) != sign(den_k)) return std::nullopt;
  return max(at_k, abs(f.n0 / f.d0));
}

std::optional<BigReal> DoubleSeriesStream::weight_ratio_bound() const {
  if (k_ < 0) return std::nullopt;
  PrecisionScope scope(prec_);
  BigReal r = abs(constant_ratio_);
  for (const Mobius& f : factors_) {
    auto s = sup_abs(f, k_);
    if (!s) return std::nullopt;
    r *= *s;
  }
  return r;
}

BigReal DoubleSeriesStream::next() {
  PrecisionScope scope(prec_);
  if (k_ < 0) {
    k_ = d_.start;
    w_ = weight_direct(d_, k_, q_, prec_);
    if (d_.inner) {
      s_ = BigReal(0L, prec_);
      for (long i = d_.inner->start; i <= k_; ++i) s_ += piece_increment(*d_.inner, i, q_, prec_);
    }
  } else {
    w_ = w_ * ratio_at(k_);
    ++k_;
    if (d_.inner && k_ >= d_.inner->start) s_ += piece_increment(*d_.inner, k_, q_, prec_);
  }
  return d_.inner ? w_ * s_ : w_;
}

std::optional<BigReal> DoubleSeriesStream::ratio_hint() const {
  if (d_.inner) return std::nullopt;
  return weight_ratio_bound();
}

std::optional<BigReal> DoubleSeriesStream::tail_majorant() const {
  const auto r = weight_ratio_bound();
  if (!r || !(*r < BigReal(1L))) return std::nullopt;
  PrecisionScope scope(prec_);
  const BigReal geo = abs(w_) * *r / (BigReal(1L, prec_) - *r);
  if (!d_.inner) return geo;
  const auto inner_tail = piece_tail(*d_.inner, k_, q_, prec_);
  if (!inner_tail) return std::nullopt;
  return (abs(s_) + *inner_tail) * geo;
}

// ---------------------------------------------------------------------------

PieceSumStream::PieceSumStream(PieceSum s, std::optional<QParams<BigReal>> q, long prec)
    : s_(std::move(s)), q_(std::move(q)), prec_(prec), i_(s_.start - 1) {}

BigReal PieceSumStream::next() {
  ++i_;
  return piece_increment(s_, i_, q_, prec_);
}

std::optional<BigReal> PieceSumStream::tail_majorant() const { return piece_tail(s_, i_, q_, prec_); }

// ---------------------------------------------------------------------------

namespace {

std::optional<QParams<BigReal>> make_q(const std::optional<Rational>& q, long prec) {
  if (!q) return std::nullopt;
  return QParams<BigReal>(BigReal(*q, prec));
}

SumResult round_result(SumResult r, long prec) {
  r.value = r.value.with_precision(prec);
  r.tail_bound = r.tail_bound.with_precision(prec);
  return r;
}

}  // namespace

SumResult sum_double_series(const DoubleSeries& d, const std::optional<Rational>& q, const BigReal& tol,
                            long max_terms, long prec) {
  if ((d.kind == SeriesKind::q) != q.has_value()) {
    throw PreconditionError(d.kind == SeriesKind::q ? "q required" : "classical series takes no q");
  }
  if (d.algebraic) {
    // Levin weights cancel catastrophically; carry about twice the digits.
    const long internal = std::max(2 * prec, prec + 64);
    PrecisionScope scope(internal);
    DoubleSeriesStream stream(d, make_q(q, internal), internal);
    return round_result(sum_levin(stream, tol.with_precision(internal), max_terms), prec);
  }
  const long internal = prec + kGuardBits;
  PrecisionScope scope(internal);
  DoubleSeriesStream stream(d, make_q(q, internal), internal);
  return round_result(sum_adaptive(stream, tol.with_precision(internal), max_terms), prec);
}

SumResult sum_piece_series(const PieceSum& s, const std::optional<Rational>& q, const BigReal& tol, long max_terms,
                           long prec) {
  const long internal = prec + kGuardBits;
  PrecisionScope scope(internal);
  PieceSumStream stream(s, make_q(q, internal), internal);
  return round_result(sum_adaptive(stream, tol.with_precision(internal), max_terms), prec);
}

}  // namespace piseries
