#pragma once

#include <optional>
#include <vector>

#include "piseries/bigreal.hpp"
#include "piseries/qkernel.hpp"
#include "piseries/rational.hpp"
#include "piseries/series.hpp"

// Declarative description of the double series
//
//   sum_{k >= start} w_k * s_k,   s_k = sum_{i=1}^{k} inc(i)
//
// where w_k is a hypergeometric (classical) or basic hypergeometric (q) weight
// and inc(i) a short list of pieces c * (+-1)^i * q^(alpha i + beta) / [gamma i + delta]^2
// (or c * (+-1)^i / (gamma i + delta)^2 classically).

namespace piseries {

enum class SeriesKind { classical, q };

/// (x)_{k+shift}^power
struct ClassicalFactor {
  Rational x;
  long shift = 0;
  long power = 1;
};

/// (q^e; q^m)_{k+shift}^power
struct QFactor {
  long e = 0;
  long m = 1;
  long shift = 0;
  long power = 1;
};

/// (alpha k + beta), or the q-integer [alpha k + beta]
struct LinearFactor {
  long alpha = 1;
  long beta = 0;
};

struct InnerPiece {
  Rational coeff{1};
  long one_minus_q_power = 0;  // extra factor (1-q)^p
  bool alternating = false;    // extra (-1)^i
  long q_alpha = 0;            // q^(alpha i + beta), q kind only
  long q_beta = 0;
  long gamma = 1;  // denominator (gamma i + delta)^2 or [gamma i + delta]^2
  long delta = 0;
};

/// sum_{i >= start} of the pieces; as an inner sum it is cut at i = k.
struct PieceSum {
  std::vector<InnerPiece> pieces;
  long start = 1;
};

struct DoubleSeries {
  SeriesKind kind = SeriesKind::classical;
  long start = 0;
  Rational constant{1};
  Rational z{1};             // classical: z^k
  bool alternating = false;  // (-1)^k
  std::vector<ClassicalFactor> num;
  std::vector<ClassicalFactor> den;
  std::vector<QFactor> qnum;
  std::vector<QFactor> qden;
  std::optional<LinearFactor> linear;
  long gauss_a = 0;  // q^(a k^2 + b k + c)
  long gauss_b = 0;
  long gauss_c = 0;
  std::optional<PieceSum> inner;
  /// Terms decay only polynomially; summed by Levin acceleration.
  bool algebraic = false;
};

/// inc(i) evaluated literally.
BigReal piece_increment(const PieceSum& s, long i, const std::optional<QParams<BigReal>>& q, long prec);

/// Bound on sum_{i > k} |inc(i)|; nullopt when the pieces do not admit one at
/// this k.
std::optional<BigReal> piece_tail(const PieceSum& s, long k, const std::optional<QParams<BigReal>>& q, long prec);

/// w_k evaluated literally from the Pochhammer products.
BigReal weight_direct(const DoubleSeries& d, long k, const std::optional<QParams<BigReal>>& q, long prec);

/// w_k * s_k with the inner sum recomputed from scratch.
BigReal term_direct(const DoubleSeries& d, long k, const std::optional<QParams<BigReal>>& q, long prec);

/// Terms of a DoubleSeries by the weight recurrence, with certified tail
/// majorants built from sup bounds on the ratio factors.
class DoubleSeriesStream : public TermStream {
 public:
  DoubleSeriesStream(DoubleSeries d, std::optional<QParams<BigReal>> q, long prec);

  BigReal next() override;
  std::optional<BigReal> ratio_hint() const override;
  std::optional<BigReal> tail_majorant() const override;

  /// sup_{j >= k} |w_{j+1}/w_j| for the current k, if finite.
  std::optional<BigReal> weight_ratio_bound() const;
  long index() const { return k_; }

 private:
  struct Mobius {
    // (n0 + n1 X)/(d0 + d1 X); X = q^(m k) for q series, X = k classically
    BigReal n0, n1, d0, d1;
    long m = 0;
  };
  BigReal ratio_at(long k) const;
  BigReal x_at(const Mobius& f, long k) const;
  std::optional<BigReal> sup_abs(const Mobius& f, long k) const;

  DoubleSeries d_;
  std::optional<QParams<BigReal>> q_;
  long prec_;
  long k_ = -1;
  BigReal w_;
  BigReal s_;
  BigReal constant_ratio_;
  std::vector<Mobius> factors_;
};

/// Terms inc(start), inc(start+1), ... of a single PieceSum.
class PieceSumStream : public TermStream {
 public:
  PieceSumStream(PieceSum s, std::optional<QParams<BigReal>> q, long prec);
  BigReal next() override;
  std::optional<BigReal> tail_majorant() const override;

 private:
  PieceSum s_;
  std::optional<QParams<BigReal>> q_;
  long prec_;
  long i_;
};

/// Sums a DoubleSeries to tolerance `tol` at working precision `prec`.
/// Geometric series run at prec plus guard bits; algebraic ones go through
/// Levin at roughly double precision.
SumResult sum_double_series(const DoubleSeries& d, const std::optional<Rational>& q, const BigReal& tol,
                            long max_terms, long prec);

SumResult sum_piece_series(const PieceSum& s, const std::optional<Rational>& q, const BigReal& tol, long max_terms,
                           long prec);

/// Extra bits carried by geometric summations above the working precision.
inline constexpr long kGuardBits = 32;

}  // namespace piseries
