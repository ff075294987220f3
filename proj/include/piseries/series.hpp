#pragma once

#include <functional>
#include <optional>
#include <string>

#include "piseries/bigreal.hpp"

namespace piseries {

/// Successive terms t_0, t_1, ... of a series. After next() has returned t_k,
/// ratio_hint() and tail_majorant() describe the terms still to come.
class TermStream {
 public:
  virtual ~TermStream() = default;

  virtual BigReal next() = 0;
  /// Upper bound on |t_{j+1}/t_j| for every j >= the current index, if known.
  virtual std::optional<BigReal> ratio_hint() const { return std::nullopt; }
  /// Upper bound on sum_{j > k} |t_j| where t_k is the last term returned.
  /// The default derives it from ratio_hint().
  virtual std::optional<BigReal> tail_majorant() const { return std::nullopt; }
  /// True once every remaining term is exactly zero.
  virtual bool terminated() const { return false; }
};

/// Adapts a function k -> t_k. `ratio` (optional) maps k to a bound on
/// |t_{j+1}/t_j| for j >= k. A non-negative `last_index` marks a stream that
/// is identically zero beyond that index.
class FunctionStream : public TermStream {
 public:
  using TermFn = std::function<BigReal(long)>;
  using RatioFn = std::function<std::optional<BigReal>(long)>;

  explicit FunctionStream(TermFn term, RatioFn ratio = {}, long last_index = -1)
      : term_(std::move(term)), ratio_(std::move(ratio)), last_index_(last_index) {}

  BigReal next() override {
    ++k_;
    if (last_index_ >= 0 && k_ > last_index_) return BigReal(0L);
    return term_(k_);
  }
  std::optional<BigReal> ratio_hint() const override {
    if (!ratio_ || k_ < 0) return std::nullopt;
    return ratio_(k_);
  }
  bool terminated() const override { return last_index_ >= 0 && k_ >= last_index_; }

 private:
  TermFn term_;
  RatioFn ratio_;
  long last_index_;
  long k_ = -1;
};

enum class SumStatus { converged, terminated, budget_exhausted, diverging };

std::string to_string(SumStatus s);

struct SumResult {
  BigReal value;
  long terms_used = 0;
  /// Bound on |true sum - value|. Zero for exact termination, +inf when no
  /// bound was obtained.
  BigReal tail_bound;
  bool terminated = false;
  /// False when tail_bound is an estimate rather than a proven majorant.
  bool certified = true;
  SumStatus status = SumStatus::converged;
  std::string note;

  bool ok() const { return status == SumStatus::converged || status == SumStatus::terminated; }
};

/// Sums until three consecutive terms satisfy |t_k| < tol*max(1,|S_k|) and a
/// tail bound below the same threshold is available, or the stream
/// terminates. Running out of budget or sustained term growth yields a result
/// with ok() == false; nothing is silently truncated.
SumResult sum_adaptive(TermStream& stream, const BigReal& tol, long max_terms);

/// Levin u-transform of the partial sums, for slowly (algebraically)
/// converging series. Terms should be produced at a precision well above the
/// working precision since the transform cancels heavily. The reported
/// tail_bound is the spread of the last three transforms and is not
/// certified.
SumResult sum_levin(TermStream& stream, const BigReal& tol, long max_terms);

/// Bound on sum_{j>k} |t_j| from |t_k| and a ratio bound r < 1; nullopt if
/// r >= 1.
std::optional<BigReal> geometric_tail(const BigReal& last_abs, const BigReal& r);

BigReal infinity(long precision_bits);

}  // namespace piseries
