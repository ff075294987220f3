#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "piseries/double_series.hpp"

namespace piseries {

/// (q^e; q^m)_inf^power
struct QInfFactor {
  long e = 0;
  long m = 1;
  long power = 1;
};

/// constant * (1-q)^p * prod (q^e; q^m)_inf^power * sum
struct QProductSide {
  Rational constant{1};
  long one_minus_q_power = 0;
  std::vector<QInfFactor> factors;
  PieceSum sum;
};

/// An infinite identity: a double series on the left and either a closed
/// form in pi (classical) or a product-times-series (q) on the right.
struct InfiniteIdentity {
  std::string id;
  DoubleSeries lhs;
  std::function<BigReal(long prec)> closed_form;  // classical right side
  std::optional<QProductSide> q_rhs;              // q right side

  bool needs_q() const { return lhs.kind == SeriesKind::q; }
};

/// Every infinite identity, keyed by catalog id.
const std::vector<InfiniteIdentity>& infinite_identities();

/// Throws PreconditionError for an unknown id.
const InfiniteIdentity& infinite_identity(const std::string& id);

struct SeriesSides {
  SumResult lhs;
  SumResult rhs;
};

/// Evaluates both sides to tolerance tol. The right side's infinite products
/// and sum share a budget of tol/2; its tail_bound covers all of them.
SeriesSides eval_identity_series(const std::string& id, const std::optional<Rational>& q, const BigReal& tol,
                                 long max_terms, long prec);

SumResult eval_q_product_side(const QProductSide& side, const Rational& q, const BigReal& tol, long max_terms,
                              long prec);

}  // namespace piseries
