#pragma once

// Currency rounding, report rendering and figure data grids.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "credit.hpp"

namespace credit_alloc {

class RoundingPolicy {
 public:
  explicit RoundingPolicy(double minor_unit) : minor_unit_(minor_unit) {
    if (!std::isfinite(minor_unit) || minor_unit <= 0.0) {
      throw CreditError("minor unit must be a positive amount");
    }
  }

  double minor_unit() const noexcept { return minor_unit_; }

  /// Digits after the decimal point needed to print one minor unit
  /// (0.01 -> 2, 0.5 -> 1, 1 -> 0); capped at 9.
  int decimals() const noexcept {
    double scaled = minor_unit_;
    for (int d = 0; d < 9; ++d) {
      if (std::abs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, scaled)) return d;
      scaled *= 10.0;
    }
    return 9;
  }

 private:
  double minor_unit_;
};

/// Allocation in whole minor units. amounts_minor sums exactly to
/// total_minor; for plain Cantor, undistributed_minor makes up the gap to Q.
struct RoundedReport {
  CreditPolicy policy;
  RankFraction rank;
  WeightScheme scheme;
  std::vector<double> weights;
  double total_credit;
  double epsilon;
  RoundingPolicy rounding;
  std::vector<std::int64_t> amounts_minor;
  std::int64_t total_minor;
  std::int64_t undistributed_minor;

  std::size_t authors() const noexcept { return amounts_minor.size(); }
};

namespace detail {

// Amount in minor units, snapped to the nearest integer when it sits within
// floating-point noise of one (352000.0 / 0.1 must not floor to 3519999).
inline double to_minor_units(double amount, double minor_unit) {
  const double scaled = amount / minor_unit;
  const double nearest = std::round(scaled);
  // absorb representation noise only; a wider window skews the floors
  const double noise = 1e-9 + 64 * std::numeric_limits<double>::epsilon() * std::abs(scaled);
  if (std::abs(scaled - nearest) <= noise) return nearest;
  return scaled;
}

}  // namespace detail

/// Largest-remainder apportionment: floor every amount, then hand the
/// shortfall to the largest fractional parts one unit at a time. Equal
/// remainders go to the earlier author.
inline RoundedReport round_allocations(const AllocationReport& report,
                                       const RoundingPolicy& policy) {
  const double unit = policy.minor_unit();
  const std::size_t n = report.amounts.size();
  if (!(report.total_credit / unit < 0x1p62)) {
    throw CreditError("total credit too large to count in minor units");
  }

  std::vector<std::int64_t> minor(n);
  std::vector<double> remainder(n);
  std::int64_t floor_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = detail::to_minor_units(report.amounts[i], unit);
    const double fl = std::floor(scaled);
    minor[i] = static_cast<std::int64_t>(fl);
    remainder[i] = scaled - fl;
    floor_sum += minor[i];
  }

  const auto total_minor =
      static_cast<std::int64_t>(std::llround(detail::to_minor_units(report.distributed_total(), unit)));
  std::int64_t shortfall = total_minor - floor_sum;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });

  // Shortfall lies in [0, n) up to float noise; the loops only wrap when the
  // caller's amounts do not add up to the report total.
  for (std::size_t k = 0; shortfall > 0; k = (k + 1) % n, --shortfall) ++minor[order[k]];
  for (std::size_t k = n; shortfall < 0; ++shortfall) {
    k = (k == 0 ? n : k) - 1;
    --minor[order[k]];
  }

  std::int64_t undistributed_minor = 0;
  if (report.scheme == WeightScheme::Cantor) {
    undistributed_minor = std::llround(detail::to_minor_units(report.total_credit, unit)) - total_minor;
  }

  return RoundedReport{report.policy,       report.rank,  report.scheme,
                       report.weights.weights, report.total_credit, report.epsilon,
                       policy,              std::move(minor), total_minor,
                       undistributed_minor};
}

enum class ReportFormat { Table, Csv, Json };

struct RenderOptions {
  bool show_weights = true;  // table format only
};

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[128];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, ptr);
}

inline std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Shortest round-trip digits without an exponent.
inline std::string plain(double v) {
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, ptr);
}

inline std::string minor_to_decimal(std::int64_t minor, const RoundingPolicy& policy) {
  return fixed(static_cast<double>(minor) * policy.minor_unit(), policy.decimals());
}

inline std::string group_thousands(const std::string& s) {
  const auto start = (!s.empty() && s[0] == '-') ? std::size_t{1} : std::size_t{0};
  auto dot = s.find('.');
  if (dot == std::string::npos) dot = s.size();
  std::string out = s.substr(0, start);
  for (std::size_t i = start; i < dot; ++i) {
    if (i > start && (dot - i) % 3 == 0) out += ',';
    out += s[i];
  }
  out += s.substr(dot);
  return out;
}

inline std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

inline double decimal_number(const std::string& s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

inline std::string render_table(const RoundedReport& r, const RenderOptions& opts) {
  const auto money = [&](std::int64_t m) { return group_thousands(minor_to_decimal(m, r.rounding)); };

  std::string out;
  out += "scheme        " + std::string(scheme_name(r.scheme)) + "\n";
  out += "t             " + plain(r.policy.total()) + "\n";
  out += "p             " + plain(r.policy.base_share()) + "\n";
  out += "r             " + plain(r.rank.value());
  if (const auto& q = r.rank.quotient()) {
    out += " (" + std::to_string(q->rank) + "/" + std::to_string(q->total) + ")";
  }
  out += "\n";
  out += "authors       " + std::to_string(r.authors()) + "\n";
  out += "total credit  " + group_thousands(fixed(r.total_credit, r.rounding.decimals())) + "\n\n";

  std::vector<std::string> amounts;
  for (auto m : r.amounts_minor) amounts.push_back(money(m));
  const std::string total_text = money(r.total_minor);
  std::size_t amount_w = std::max<std::size_t>(6, total_text.size());
  if (r.scheme == WeightScheme::Cantor) {
    amount_w = std::max(amount_w, money(r.undistributed_minor).size());
  }
  const std::size_t author_w = std::max<std::size_t>(6, std::to_string(r.authors()).size());

  out += pad_left("author", author_w);
  if (opts.show_weights) out += "  weight";
  out += "  " + pad_left("amount", amount_w) + "\n";
  for (std::size_t i = 0; i < r.authors(); ++i) {
    out += pad_left(std::to_string(i + 1), author_w);
    if (opts.show_weights) out += "  " + pad_left(fixed(r.weights[i], 3), 6);
    out += "  " + pad_left(amounts[i], amount_w) + "\n";
  }
  out += pad_left("total", author_w);
  if (opts.show_weights) {
    const double wsum = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
    out += "  " + pad_left(fixed(wsum, 3), 6);
  }
  out += "  " + pad_left(total_text, amount_w) + "\n";
  if (r.scheme == WeightScheme::Cantor) {
    const std::size_t row_w = author_w + (opts.show_weights ? 8 : 0) + 2 + amount_w;
    const std::string label = "undistributed";
    out += label + pad_left(money(r.undistributed_minor), std::max(row_w, label.size() + 1 + amount_w) - label.size()) + "\n";
  }
  return out;
}

inline std::string render_csv(const RoundedReport& r) {
  std::string out = "author,weight,amount\n";
  for (std::size_t i = 0; i < r.authors(); ++i) {
    out += std::to_string(i + 1) + ',' + shortest(r.weights[i]) + ',' +
           minor_to_decimal(r.amounts_minor[i], r.rounding) + '\n';
  }
  const double wsum = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
  out += "total," + shortest(wsum) + ',' + minor_to_decimal(r.total_minor, r.rounding) + '\n';
  if (r.scheme == WeightScheme::Cantor) {
    out += "undistributed,," + minor_to_decimal(r.undistributed_minor, r.rounding) + '\n';
  }
  return out;
}

inline std::string render_json(const RoundedReport& r) {
  using nlohmann::ordered_json;
  const auto money = [&](std::int64_t m) { return decimal_number(minor_to_decimal(m, r.rounding)); };

  ordered_json inputs;
  inputs["t"] = r.policy.total();
  inputs["p"] = r.policy.base_share();
  inputs["r"] = r.rank.value();
  if (const auto& q = r.rank.quotient()) {
    inputs["rank"] = q->rank;
    inputs["journals"] = q->total;
  }
  inputs["authors"] = r.authors();
  inputs["scheme"] = scheme_name(r.scheme);
  inputs["minor_unit"] = r.rounding.minor_unit();

  ordered_json amounts = ordered_json::array();
  for (auto m : r.amounts_minor) amounts.push_back(money(m));

  ordered_json doc;
  doc["inputs"] = std::move(inputs);
  doc["total_credit"] = r.total_credit;
  doc["weights"] = r.weights;
  doc["amounts"] = std::move(amounts);
  doc["amounts_minor"] = r.amounts_minor;
  doc["total"] = money(r.total_minor);
  doc["total_minor"] = r.total_minor;
  doc["epsilon"] = r.epsilon;
  doc["undistributed"] = money(r.undistributed_minor);
  doc["undistributed_minor"] = r.undistributed_minor;
  return doc.dump(2) + "\n";
}

}  // namespace detail

/// Byte-identical output for identical reports; all number formatting is
/// locale-independent.
inline std::string render_report(const RoundedReport& report, ReportFormat format,
                                 const RenderOptions& opts = {}) {
  switch (format) {
    case ReportFormat::Table: return detail::render_table(report, opts);
    case ReportFormat::Csv: return detail::render_csv(report);
    case ReportFormat::Json: return detail::render_json(report);
  }
  return {};
}

// Figure data.

struct SurfaceGrid {
  double t;
  std::vector<double> p_values;  // ascending in [0, 1]
  std::vector<double> r_values;  // ascending in (0, 1]
  std::vector<std::vector<double>> q_values;  // [p][r]
};

/// Q over p in {0, 1/(p_steps-1), ..., 1} and r in {1/r_steps, ..., 1}.
inline SurfaceGrid surface_grid(double t, std::size_t p_steps, std::size_t r_steps) {
  if (p_steps < 2 || r_steps < 2) throw CreditError("grid needs at least 2 steps per axis");
  const CreditPolicy probe(t, 0.0);  // validates t

  SurfaceGrid grid{probe.total(), {}, {}, {}};
  for (std::size_t i = 0; i < p_steps; ++i) {
    grid.p_values.push_back(static_cast<double>(i) / static_cast<double>(p_steps - 1));
  }
  for (std::size_t j = 1; j <= r_steps; ++j) {
    grid.r_values.push_back(static_cast<double>(j) / static_cast<double>(r_steps));
  }
  for (double p : grid.p_values) {
    const CreditPolicy policy(t, p);
    auto& row = grid.q_values.emplace_back();
    for (double r : grid.r_values) {
      row.push_back(total_credit(policy, RankFraction::explicit_value(r)));
    }
  }
  return grid;
}

/// First row holds r values, first column p values; Q to two decimals.
inline std::string render_grid_csv(const SurfaceGrid& grid) {
  std::string out = "p\\r";
  for (double r : grid.r_values) out += ',' + detail::shortest(r);
  out += '\n';
  for (std::size_t i = 0; i < grid.p_values.size(); ++i) {
    out += detail::shortest(grid.p_values[i]);
    for (double q : grid.q_values[i]) out += ',' + detail::fixed(q, 2);
    out += '\n';
  }
  return out;
}

struct WeightComparisonRow {
  std::size_t author;
  double harmonic;
  double cantor;
};

inline std::vector<WeightComparisonRow> weight_comparison(std::size_t n) {
  const auto h = harmonic_weights(n);
  const auto c = cantor_weights(n);
  std::vector<WeightComparisonRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back({i + 1, h[i], c[i]});
  return rows;
}

inline std::string render_weight_comparison_csv(const std::vector<WeightComparisonRow>& rows) {
  std::string out = "author,harmonic,cantor\n";
  for (const auto& row : rows) {
    out += std::to_string(row.author) + ',' + detail::shortest(row.harmonic) + ',' +
           detail::shortest(row.cantor) + '\n';
  }
  return out;
}

}  // namespace credit_alloc
