#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "piseries/bigreal.hpp"
#include "piseries/rational.hpp"

namespace piseries {

enum class Family { terminating, infinite_classical, infinite_q };
enum class ExpectedStatus { verified, suspect };
enum class Status { PASS, FAIL, MISMATCH, SKIPPED };

std::string to_string(Family f);
std::string to_string(ExpectedStatus s);
std::string to_string(Status s);
Family parse_family(const std::string& s);

struct IdentitySpec {
  std::string id;
  Family family;
  std::string citation;  // the display, in plain text
  std::vector<std::string> required_params;
  std::string constraints;
  ExpectedStatus expected_status;
  std::string evaluator;
};

/// The full catalog, ordered by id.
const std::vector<IdentitySpec>& catalog();
/// Throws PreconditionError for an unknown id.
const IdentitySpec& find_identity(const std::string& id);

/// Catalog as tab-separated text, one record per identity with a header row.
std::string catalog_tsv();

/// Parameters of one evaluation. Unset fields are not used by the identity;
/// e may be left unset for Jackson and Dougall, where it is solved from the
/// balance condition.
struct IdentityParams {
  std::optional<Rational> a, b, c, d, e;
  std::optional<long> n;
  std::optional<Rational> q;
};

std::string describe(const IdentityParams& p);

struct VerifyOptions {
  BigReal tol = BigReal::parse("1e-30", kDefaultPrecisionBits);
  long max_terms = 20000;
  long precision_bits = kDefaultPrecisionBits;
  /// Evaluate terminating identities in exact rational arithmetic.
  bool rational = false;
};

struct VerificationReport {
  std::string id;
  IdentityParams params;
  std::string mode;  // "rational" or "bigreal"
  long precision_bits = 0;
  std::string lhs;  // decimal, or exact "p/r" in rational mode
  std::string rhs;
  BigReal abs_residual;
  BigReal rel_residual;
  BigReal lhs_tail;
  BigReal rhs_tail;
  long lhs_terms = 0;
  long rhs_terms = 0;
  Status status = Status::SKIPPED;
  std::string note;
  long wall_time_us = 0;
};

/// Exit-code style severity: PASS 0, FAIL 1, MISMATCH 2, SKIPPED 3.
int severity(Status s);

VerificationReport verify(const std::string& id, const IdentityParams& params, const VerifyOptions& opt);

// ---- committed parameter draws ------------------------------------------

inline constexpr std::uint64_t kDefaultSeed = 20240521;
inline constexpr int kDrawsPerIdentity = 20;

/// Seed-driven pole-free rational parameter points for a terminating
/// identity. Uses raw mt19937_64 output only, so the draws are identical on
/// every platform.
std::vector<IdentityParams> generate_draws(const std::string& id, std::uint64_t seed, int count);

/// All draws for all terminating identities as TSV (id, index, a..e, n, q).
std::string draws_tsv(std::uint64_t seed, int count);
/// Parses draws_tsv output; returns the draws of one identity in order.
std::vector<IdentityParams> parse_draws(const std::string& tsv, const std::string& id);

/// Reads the committed draws file, or regenerates it from kDefaultSeed when
/// the file is absent.
std::vector<IdentityParams> committed_draws(const std::string& id);
std::string committed_draws_path();

// ---- batch operations ---------------------------------------------------

struct Filter {
  std::optional<Family> family;
  std::optional<std::string> id_substring;
  bool matches(const IdentitySpec& s) const;
};

/// Default q grid for q-identities when no q is given.
std::vector<Rational> default_q_grid();

/// Every matching entry: terminating ones at their committed draws (or the
/// given seed), q-identities at `q` or the default grid. Runs in parallel;
/// reports are sorted by id, then by input order.
std::vector<VerificationReport> verify_all(const Filter& filter, const VerifyOptions& opt,
                                           const std::optional<Rational>& q = std::nullopt,
                                           std::optional<std::uint64_t> seed = std::nullopt);

std::vector<VerificationReport> sweep_q(const std::string& id, const std::vector<Rational>& qs,
                                        const VerifyOptions& opt);

struct LimitPair {
  std::string pair_id;
  std::string q_id;
  std::string classical_id;
  std::string scale;  // s(q) in |s(q) lhs_q - lhs_classical|, as text
};

const std::vector<LimitPair>& limit_pairs();

struct LimitRung {
  long j = 0;
  Rational q;
  std::string lhs_q;
  std::string scaled_lhs_q;
  BigReal error;
  long terms = 0;
  std::string note;
};

struct LimitReport {
  std::string pair_id;
  std::string classical_lhs;
  std::vector<LimitRung> rungs;
  std::string verdict;  // "decreasing", "not decreasing", "insufficient rungs", "no convergence"
};

/// q = 1 - 2^(-j) for each j of the ladder.
LimitReport limit_study(const std::string& pair_id, const std::vector<long>& ladder, const VerifyOptions& opt);

}  // namespace piseries
