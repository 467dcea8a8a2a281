#pragma once

// Command-line front end. run() is the whole program minus process setup so
// it can be driven from tests with captured streams.
//
// Exit status: 0 success, 1 internal error, 2 argument error, 3 ranking-file
// error.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "credit.hpp"
#include "ranking.hpp"
#include "reporting.hpp"

namespace credit_alloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRanking = 3;

inline constexpr const char* kConfigEnv = "CREDIT_ALLOC_CONFIG";

using EnvLookup = std::function<const char*(const char*)>;

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankingFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AllocateArgs {
  std::optional<double> t;
  double p = 0.5;
  std::optional<double> r;
  std::optional<std::int64_t> rank;
  std::optional<std::int64_t> total;
  std::optional<std::string> ranking_file;
  std::string ranking_format = "auto";
  std::optional<std::string> field;
  std::optional<std::string> journal;
  std::optional<std::int64_t> authors;
  std::string scheme = "acsi";
  double minor_unit = 0.01;
  std::string format = "table";
  bool show_weights = false;
};

struct GridArgs {
  double t = 0.0;
  std::int64_t p_steps = 0;
  std::int64_t r_steps = 0;
};

struct WeightsArgs {
  std::int64_t authors = 0;
};

inline RankFraction resolve_rank(const AllocateArgs& a) {
  const bool explicit_r = a.r.has_value();
  const bool quotient = a.rank.has_value() || a.total.has_value();
  const bool from_file = a.ranking_file || a.field || a.journal;
  if (static_cast<int>(explicit_r) + static_cast<int>(quotient) + static_cast<int>(from_file) != 1) {
    throw UsageError(
        "give exactly one rank source: --r, --rank with --total, or --ranking-file with --field "
        "and --journal");
  }
  if (explicit_r) return RankFraction::explicit_value(*a.r);
  if (quotient) {
    if (!a.rank || !a.total) throw UsageError("--rank and --total must be given together");
    return RankFraction::from_rank(*a.rank, *a.total);
  }
  if (!a.ranking_file || !a.field || !a.journal) {
    throw UsageError("--ranking-file, --field and --journal must be given together");
  }

  TableFormat format = TableFormat::Csv;
  if (a.ranking_format == "json" ||
      (a.ranking_format == "auto" &&
       std::filesystem::path(*a.ranking_file).extension() == ".json")) {
    format = TableFormat::Json;
  }
  std::ifstream in(*a.ranking_file, std::ios::binary);
  if (!in) throw RankingFileError("cannot open ranking file '" + *a.ranking_file + "'");
  try {
    const auto table = parse_ranking_table(in, format);
    return rank_fraction(table, *a.field, *a.journal);
  } catch (const RankingParseError& e) {
    throw RankingFileError(*a.ranking_file + ": " + e.what());
  } catch (const JournalNotFound& e) {
    throw RankingFileError(e.what());
  }
}

inline std::string run_allocate(const AllocateArgs& a) {
  if (!a.t) throw UsageError("--t is required");
  if (!a.authors) throw UsageError("--authors is required");
  if (*a.authors < 1) throw UsageError("empty author list");

  const auto scheme = parse_scheme(a.scheme);
  if (!scheme) throw UsageError("unknown scheme '" + a.scheme + "'");

  ReportFormat format = ReportFormat::Table;
  if (a.format == "csv") format = ReportFormat::Csv;
  else if (a.format == "json") format = ReportFormat::Json;

  const CreditPolicy policy(*a.t, a.p);
  const RoundingPolicy rounding(a.minor_unit);
  const auto rank = resolve_rank(a);
  const auto report = allocate(policy, rank, static_cast<std::size_t>(*a.authors), *scheme);
  return render_report(round_allocations(report, rounding), format,
                       RenderOptions{a.show_weights});
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const EnvLookup& getenv = [](const char* name) { return std::getenv(name); }) {
  CLI::App app{"Publication credit allocation across coauthors", "credit-alloc"};
  app.require_subcommand(0, 1);

  detail::AllocateArgs a;
  app.add_option("--t", a.t, "Total publication credit t (> 0)");
  app.add_option("--p", a.p, "Base proportion p in [0, 1]")->capture_default_str();
  app.add_option("--r", a.r, "Explicit rank fraction r in (0, 1]");
  app.add_option("--rank", a.rank, "Journal rank within its field");
  app.add_option("--total", a.total, "Number of journals in the field");
  app.add_option("--ranking-file", a.ranking_file, "Journal ranking table (CSV or JSON)");
  app.add_option("--ranking-format", a.ranking_format, "Ranking table format")
      ->check(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--field", a.field, "Subject field to look the journal up in");
  app.add_option("--journal", a.journal, "Journal name");
  app.add_option("--authors", a.authors, "Number of authors");
  app.add_option("--scheme", a.scheme,
                 "equal, harmonic (hci), cantor (csi) or acsi (adjusted-cantor)")
      ->capture_default_str();
  app.add_option("--minor-unit", a.minor_unit, "Smallest currency unit")->capture_default_str();
  app.add_option("--format", a.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_flag("--show-weights", a.show_weights, "Print the weight column in table output");

  std::string default_config;
  if (const char* env = getenv(kConfigEnv); env != nullptr && *env != '\0') {
    default_config = env;
  }
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", default_config,
                 "key=value policy file; explicit flags take precedence (fallback: $" +
                     std::string(kConfigEnv) + ")");

  detail::GridArgs g;
  auto* grid = app.add_subcommand("grid", "Total credit over a (p, r) grid as CSV");
  grid->add_option("--t", g.t, "Total publication credit t (> 0)")->required();
  grid->add_option("--p-steps", g.p_steps, "Number of p nodes in [0, 1]")->required();
  grid->add_option("--r-steps", g.r_steps, "Number of r nodes in (0, 1]")->required();

  detail::WeightsArgs w;
  auto* weights = app.add_subcommand("weights", "Harmonic and Cantor weights side by side as CSV");
  weights->add_option("--authors", w.authors, "Number of authors")->required();

  try {
    const bool config_flag = std::find_if(args.begin(), args.end(), [](const std::string& s) {
                               return s == "--config" || s.rfind("--config=", 0) == 0;
                             }) != args.end();
    if (!config_flag && !default_config.empty() && !std::filesystem::exists(default_config)) {
      throw detail::UsageError(std::string(kConfigEnv) + " points to a missing file '" +
                               default_config + "'");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (grid->parsed()) {
      if (g.p_steps < 2 || g.r_steps < 2) throw detail::UsageError("steps must be at least 2");
      out << render_grid_csv(surface_grid(g.t, static_cast<std::size_t>(g.p_steps),
                                          static_cast<std::size_t>(g.r_steps)));
    } else if (weights->parsed()) {
      if (w.authors < 1) throw detail::UsageError("empty author list");
      out << render_weight_comparison_csv(weight_comparison(static_cast<std::size_t>(w.authors)));
    } else {
      out << detail::run_allocate(a);
    }
    return kExitOk;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CreditError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const detail::RankingFileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRanking;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace credit_alloc::cli
