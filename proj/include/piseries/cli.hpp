#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "piseries/registry.hpp"

namespace piseries::cli {

enum class Format { human, json, csv };

Format parse_format(const std::string& s);

/// Exit code for a usage error (bad flag, unknown filter key, bad literal).
inline constexpr int kUsageExit = 3;

/// Runs one command line (without the program name). Everything is written to
/// `out` in a single flush at the end; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Report rendering, shared with the tests.
std::string render_reports(const std::vector<VerificationReport>& reports, long precision_bits, Format f);
std::string render_limit(const LimitReport& rep, long precision_bits, Format f);

/// Worst severity over the reports; 0 for an empty list.
int exit_code(const std::vector<VerificationReport>& reports);

}  // namespace piseries::cli
