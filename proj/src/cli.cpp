#include "piseries/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "piseries/errors.hpp"

namespace piseries::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

struct Config {
  long precision_bits = kDefaultPrecisionBits;
  std::string tol = "1e-30";
  long max_terms = 20000;
  std::string q;
  std::string format = "human";
  bool rational = false;
  std::vector<std::string> filters;
  std::string family;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> params;
};

Rational parse_q(const std::string& text) {
  Rational q;
  try {
    q = Rational::parse(text);
  } catch (const std::exception&) {
    throw UsageError("bad q literal: " + text);
  }
  if (!(q > Rational(0) && q < Rational(1))) throw UsageError("q must lie in (0,1): " + text);
  return q;
}

std::vector<Rational> parse_q_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_q(item));
  }
  return out;
}

VerifyOptions make_options(const Config& c) {
  if (c.precision_bits < kMinPrecisionBits) throw UsageError("--precision-bits must be at least 16");
  if (c.max_terms < 1) throw UsageError("--max-terms must be positive");
  VerifyOptions opt;
  opt.precision_bits = c.precision_bits;
  try {
    opt.tol = BigReal::parse(c.tol, c.precision_bits);
  } catch (const std::exception&) {
    throw UsageError("bad --tol literal: " + c.tol);
  }
  if (!(sign(opt.tol) > 0)) throw UsageError("--tol must be positive");
  opt.max_terms = c.max_terms;
  opt.rational = c.rational;
  return opt;
}

Filter make_filter(const Config& c) {
  Filter f;
  auto set_family = [&](const std::string& v) {
    try {
      f.family = parse_family(v);
    } catch (const std::exception&) {
      throw UsageError("unknown family: " + v);
    }
  };
  if (!c.family.empty()) set_family(c.family);
  for (const std::string& item : c.filters) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("filter must be key=value: " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "family") {
      set_family(value);
    } else if (key == "id") {
      f.id_substring = value;
    } else {
      throw UsageError("unknown filter key: " + key);
    }
  }
  return f;
}

IdentityParams make_params(const Config& c) {
  IdentityParams p;
  for (const std::string& item : c.params) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--param must be name=value: " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n") {
        size_t used = 0;
        p.n = std::stol(value, &used);
        if (used != value.size()) throw UsageError("n must be an integer");
        continue;
      }
      const Rational r = Rational::parse(value);
      if (key == "a") p.a = r;
      else if (key == "b") p.b = r;
      else if (key == "c") p.c = r;
      else if (key == "d") p.d = r;
      else if (key == "e") p.e = r;
      else if (key == "q") p.q = parse_q(value);
      else throw UsageError("unknown parameter: " + key);
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("bad value for " + key + ": " + value);
    }
  }
  if (!c.q.empty()) p.q = parse_q(c.q);
  return p;
}

bool has_explicit_params(const IdentityParams& p) { return p.a || p.b || p.c || p.d || p.e || p.n; }

ordered_json params_json(const IdentityParams& p) {
  ordered_json j = ordered_json::object();
  auto put = [&](const char* k, const std::optional<Rational>& v) {
    if (v) j[k] = v->to_string();
  };
  put("a", p.a);
  put("b", p.b);
  put("c", p.c);
  put("d", p.d);
  put("e", p.e);
  if (p.n) j["n"] = std::to_string(*p.n);
  put("q", p.q);
  return j;
}

ordered_json report_json(const VerificationReport& r) {
  ordered_json j;
  j["id"] = r.id;
  j["params"] = params_json(r.params);
  j["mode"] = r.mode;
  j["precision_bits"] = r.precision_bits;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["abs_residual"] = r.abs_residual.to_string();
  j["rel_residual"] = r.rel_residual.to_string();
  j["lhs_tail"] = r.lhs_tail.to_string();
  j["rhs_tail"] = r.rhs_tail.to_string();
  j["lhs_terms"] = r.lhs_terms;
  j["rhs_terms"] = r.rhs_terms;
  j["status"] = to_string(r.status);
  j["note"] = r.note;
  j["wall_time_us"] = r.wall_time_us;
  return j;
}

std::map<std::string, int> status_counts(const std::vector<VerificationReport>& reports) {
  std::map<std::string, int> counts;
  for (Status s : {Status::PASS, Status::FAIL, Status::MISMATCH, Status::SKIPPED}) counts[to_string(s)] = 0;
  for (const auto& r : reports) ++counts[to_string(r.status)];
  return counts;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

std::string short_value(const std::string& s, size_t width = 24) {
  return s.size() <= width ? s : s.substr(0, width - 3) + "...";
}

std::string render_catalog(const std::vector<IdentitySpec>& specs, Format f) {
  std::ostringstream os;
  switch (f) {
    case Format::json: {
      ordered_json arr = ordered_json::array();
      for (const auto& s : specs) {
        ordered_json j;
        j["id"] = s.id;
        j["family"] = to_string(s.family);
        j["expected_status"] = to_string(s.expected_status);
        j["required_params"] = s.required_params;
        j["constraints"] = s.constraints;
        j["citation"] = s.citation;
        arr.push_back(j);
      }
      ordered_json doc;
      doc["identities"] = arr;
      os << doc.dump(2) << "\n";
      break;
    }
    case Format::csv:
      os << csv_row({"id", "family", "expected_status", "citation"});
      for (const auto& s : specs) os << csv_row({s.id, to_string(s.family), to_string(s.expected_status), s.citation});
      break;
    case Format::human:
      for (const auto& s : specs) {
        os << std::left << std::setw(18) << s.id << std::setw(20) << to_string(s.family) << std::setw(10)
           << to_string(s.expected_status) << s.citation << "\n";
      }
      os << specs.size() << " identities\n";
      break;
  }
  return os.str();
}

}  // namespace

Format parse_format(const std::string& s) {
  if (s == "human") return Format::human;
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw UsageError("unknown format: " + s);
}

int exit_code(const std::vector<VerificationReport>& reports) {
  int worst = 0;
  for (const auto& r : reports) worst = std::max(worst, severity(r.status));
  return worst;
}

std::string render_reports(const std::vector<VerificationReport>& reports, long precision_bits, Format f) {
  std::ostringstream os;
  switch (f) {
    case Format::json: {
      ordered_json doc;
      doc["precision_bits"] = precision_bits;
      ordered_json arr = ordered_json::array();
      for (const auto& r : reports) arr.push_back(report_json(r));
      doc["reports"] = arr;
      doc["summary"] = status_counts(reports);
      os << doc.dump(2) << "\n";
      break;
    }
    case Format::csv:
      os << csv_row({"id", "params", "mode", "precision_bits", "lhs", "rhs", "abs_residual", "rel_residual",
                     "lhs_tail", "rhs_tail", "lhs_terms", "rhs_terms", "status", "note", "wall_time_us"});
      for (const auto& r : reports) {
        os << csv_row({r.id, describe(r.params), r.mode, std::to_string(r.precision_bits), r.lhs, r.rhs,
                       r.abs_residual.to_string(), r.rel_residual.to_string(), r.lhs_tail.to_string(),
                       r.rhs_tail.to_string(), std::to_string(r.lhs_terms), std::to_string(r.rhs_terms),
                       to_string(r.status), r.note, std::to_string(r.wall_time_us)});
      }
      break;
    case Format::human: {
      os << std::left << std::setw(18) << "id" << std::setw(36) << "params" << std::setw(9) << "status"
         << std::setw(12) << "abs_res" << std::setw(12) << "rel_res" << std::setw(12) << "tails" << std::setw(13)
         << "terms" << "lhs\n";
      for (const auto& r : reports) {
        const BigReal tails = r.lhs_tail + r.rhs_tail;
        os << std::left << std::setw(18) << r.id << std::setw(36) << short_value(describe(r.params), 34)
           << std::setw(9) << to_string(r.status) << std::setw(12) << r.abs_residual.to_string(3) << std::setw(12)
           << r.rel_residual.to_string(3) << std::setw(12) << tails.to_string(3) << std::setw(13)
           << (std::to_string(r.lhs_terms) + "/" + std::to_string(r.rhs_terms)) << short_value(r.lhs, 28) << "\n";
        if (!r.note.empty()) os << "    note: " << r.note << "\n";
      }
      os << reports.size() << " reports at " << precision_bits << " bits:";
      for (const auto& [name, count] : status_counts(reports)) os << " " << name << "=" << count;
      os << "\n";
      break;
    }
  }
  return os.str();
}

std::string render_limit(const LimitReport& rep, long precision_bits, Format f) {
  std::ostringstream os;
  switch (f) {
    case Format::json: {
      ordered_json doc;
      doc["precision_bits"] = precision_bits;
      doc["pair_id"] = rep.pair_id;
      doc["classical_lhs"] = rep.classical_lhs;
      ordered_json arr = ordered_json::array();
      for (const auto& g : rep.rungs) {
        ordered_json j;
        j["j"] = g.j;
        j["q"] = g.q.to_string();
        j["lhs_q"] = g.lhs_q;
        j["scaled_lhs_q"] = g.scaled_lhs_q;
        j["error"] = g.error.to_string();
        j["terms"] = g.terms;
        j["note"] = g.note;
        arr.push_back(j);
      }
      doc["rungs"] = arr;
      doc["verdict"] = rep.verdict;
      os << doc.dump(2) << "\n";
      break;
    }
    case Format::csv:
      os << csv_row({"pair_id", "j", "q", "scaled_lhs_q", "error", "terms", "note"});
      for (const auto& g : rep.rungs) {
        os << csv_row({rep.pair_id, std::to_string(g.j), g.q.to_string(), g.scaled_lhs_q, g.error.to_string(),
                       std::to_string(g.terms), g.note});
      }
      break;
    case Format::human:
      os << rep.pair_id << ": classical lhs " << short_value(rep.classical_lhs, 40) << "\n";
      os << std::left << std::setw(4) << "j" << std::setw(10) << "q" << std::setw(14) << "error" << std::setw(8)
         << "terms" << "note\n";
      for (const auto& g : rep.rungs) {
        os << std::left << std::setw(4) << g.j << std::setw(10) << g.q.to_string() << std::setw(14)
           << g.error.to_string(4) << std::setw(8) << g.terms << g.note << "\n";
      }
      os << "verdict: " << rep.verdict << "\n";
      break;
  }
  return os.str();
}

namespace {

void add_numeric_flags(CLI::App* app, Config& c) {
  app->add_option("--precision-bits", c.precision_bits, "working precision in bits")->capture_default_str();
  app->add_option("--tol", c.tol, "target tolerance, as a decimal literal")->capture_default_str();
  app->add_option("--max-terms", c.max_terms, "term budget per side")->capture_default_str();
  app->add_option("--format", c.format, "human, json or csv")
      ->check(CLI::IsMember({"human", "json", "csv"}))
      ->capture_default_str();
}

void add_seed_flag(CLI::App* app, Config& c) {
  app->add_option_function<std::uint64_t>(
      "--seed", [&c](const std::uint64_t& s) { c.seed = s; }, "draw seed for terminating identities");
}

void add_filter_flags(CLI::App* app, Config& c) {
  app->add_option("--filter", c.filters, "key=value, keys: family, id");
  app->add_option("--family", c.family, "shorthand for --filter family=...");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical verification of pi-series and q-series identities", "piverify"};
  app.require_subcommand(1);
  Config cfg;

  auto* list = app.add_subcommand("list", "list the identity catalog");
  add_filter_flags(list, cfg);
  list->add_option("--format", cfg.format, "human, json or csv")->check(CLI::IsMember({"human", "json", "csv"}));

  std::string id;
  auto* verify_cmd = app.add_subcommand("verify", "verify one identity");
  verify_cmd->add_option("id", id, "catalog id")->required();
  add_numeric_flags(verify_cmd, cfg);
  verify_cmd->add_option("--q", cfg.q, "q as a decimal or p/r");
  verify_cmd->add_option("--param", cfg.params, "name=value for a, b, c, d, e, n");
  verify_cmd->add_flag("--rational", cfg.rational, "exact rational mode for terminating identities");
  add_seed_flag(verify_cmd, cfg);

  auto* verify_all_cmd = app.add_subcommand("verify-all", "verify every matching identity");
  add_numeric_flags(verify_all_cmd, cfg);
  add_filter_flags(verify_all_cmd, cfg);
  verify_all_cmd->add_option("--q", cfg.q, "q for q-identities (default: a fixed grid)");
  verify_all_cmd->add_flag("--rational", cfg.rational, "exact rational mode for terminating identities");
  add_seed_flag(verify_all_cmd, cfg);

  auto* sweep = app.add_subcommand("sweep", "verify a q-identity over a list of q");
  sweep->add_option("id", id, "catalog id")->required();
  add_numeric_flags(sweep, cfg);
  sweep->add_option("--q", cfg.q, "comma-separated q values")->required();

  std::vector<long> ladder{3, 4, 5, 6, 7, 8};
  auto* limit = app.add_subcommand("limit", "q -> 1 study of a paired identity");
  limit->add_option("pair", id, "pair id")->required();
  add_numeric_flags(limit, cfg);
  limit->add_option("--ladder", ladder, "exponents j of q = 1 - 2^-j")->delimiter(',')->capture_default_str();

  auto* pairs = app.add_subcommand("pairs", "list the q -> 1 pairs");

  auto* catalog_cmd = app.add_subcommand("catalog", "export the catalog as TSV");

  int count = kDrawsPerIdentity;
  auto* draws = app.add_subcommand("draws", "export parameter draws as TSV");
  add_seed_flag(draws, cfg);
  draws->add_option("--count", count, "draws per identity")->capture_default_str();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageExit;
  }

  std::ostringstream buf;
  int code = 0;
  try {
    const Format fmt = parse_format(cfg.format);
    if (*list) {
      const Filter f = make_filter(cfg);
      std::vector<IdentitySpec> specs;
      for (const auto& s : catalog()) {
        if (f.matches(s)) specs.push_back(s);
      }
      buf << render_catalog(specs, fmt);
    } else if (*verify_cmd) {
      const VerifyOptions opt = make_options(cfg);
      const IdentityParams p = make_params(cfg);
      const IdentitySpec& spec = find_identity(id);
      std::vector<VerificationReport> reports;
      if (spec.family == Family::terminating && !has_explicit_params(p)) {
        const auto pts = cfg.seed ? generate_draws(id, *cfg.seed, kDrawsPerIdentity) : committed_draws(id);
        for (const auto& pt : pts) reports.push_back(verify(id, pt, opt));
      } else {
        reports.push_back(verify(id, p, opt));
      }
      buf << render_reports(reports, opt.precision_bits, fmt);
      code = exit_code(reports);
    } else if (*verify_all_cmd) {
      const VerifyOptions opt = make_options(cfg);
      const Filter f = make_filter(cfg);
      std::optional<Rational> q;
      if (!cfg.q.empty()) q = parse_q(cfg.q);
      const auto reports = verify_all(f, opt, q, cfg.seed);
      buf << render_reports(reports, opt.precision_bits, fmt);
      code = exit_code(reports);
    } else if (*sweep) {
      const VerifyOptions opt = make_options(cfg);
      const auto reports = sweep_q(id, parse_q_list(cfg.q), opt);
      buf << render_reports(reports, opt.precision_bits, fmt);
      code = exit_code(reports);
    } else if (*limit) {
      const VerifyOptions opt = make_options(cfg);
      const LimitReport rep = limit_study(id, ladder, opt);
      buf << render_limit(rep, opt.precision_bits, fmt);
      code = rep.verdict == "decreasing" || rep.verdict == "insufficient rungs" ? 0 : 1;
    } else if (*pairs) {
      for (const auto& p : limit_pairs()) {
        buf << p.pair_id << "\t" << p.q_id << "\t" << p.classical_id << "\t" << p.scale << "\n";
      }
    } else if (*catalog_cmd) {
      buf << catalog_tsv();
    } else if (*draws) {
      if (count < 1) throw UsageError("--count must be positive");
      buf << draws_tsv(cfg.seed.value_or(kDefaultSeed), count);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageExit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageExit;
  }
  out << buf.str() << std::flush;
  return code;
}

}  // namespace piseries::cli
