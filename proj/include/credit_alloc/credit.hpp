#pragma once

// Total publication credit and its split across an ordered author list.
//
// Q = p*t + (1-p)*(1-r)*t is the credit a publication earns; the per-author
// amount is P_i * Q for one of four weight sequences P_i. Cantor weights
// leave a residual epsilon undistributed; the adjusted variant hands it back
// in equal parts.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace credit_alloc {

/// Raised when an input violates a domain invariant.
class CreditError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMaxAuthors = 10'000;

class CreditPolicy {
 public:
  /// `total` is the funding t available per paper, `base_share` the fraction
  /// p paid regardless of journal rank.
  CreditPolicy(double total, double base_share) : total_(total), base_share_(base_share) {
    if (!std::isfinite(total) || total <= 0.0) {
      throw CreditError("total credit must be a positive finite amount");
    }
    if (!std::isfinite(base_share) || base_share < 0.0 || base_share > 1.0) {
      throw CreditError("base proportion must lie in [0, 1]");
    }
  }

  double total() const noexcept { return total_; }
  double base_share() const noexcept { return base_share_; }

  friend bool operator==(const CreditPolicy&, const CreditPolicy&) = default;

 private:
  double total_;
  double base_share_;
};

/// Journal rank divided by the number of journals in its field, in (0, 1].
class RankFraction {
 public:
  struct Quotient {
    std::int64_t rank;
    std::int64_t total;
    friend bool operator==(const Quotient&, const Quotient&) = default;
  };

  static RankFraction explicit_value(double r) {
    if (!std::isfinite(r) || r <= 0.0 || r > 1.0) {
      throw CreditError("rank fraction must lie in (0, 1]");
    }
    return RankFraction(r, std::nullopt);
  }

  static RankFraction from_rank(std::int64_t rank, std::int64_t total) {
    if (total < 1) throw CreditError("journal count must be positive");
    if (rank < 1 || rank > total) throw CreditError("rank must lie in [1, total]");
    return RankFraction(static_cast<double>(rank) / static_cast<double>(total),
                        Quotient{rank, total});
  }

  double value() const noexcept { return value_; }
  /// Set when built from (rank, total); empty for an explicit r.
  const std::optional<Quotient>& quotient() const noexcept { return quotient_; }

  friend bool operator==(const RankFraction&, const RankFraction&) = default;

 private:
  RankFraction(double value, std::optional<Quotient> quotient)
      : value_(value), quotient_(quotient) {}

  double value_;
  std::optional<Quotient> quotient_;
};

enum class WeightScheme { Equal, Harmonic, Cantor, AdjustedCantor };

inline std::string_view scheme_name(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::Equal: return "equal";
    case WeightScheme::Harmonic: return "harmonic";
    case WeightScheme::Cantor: return "cantor";
    case WeightScheme::AdjustedCantor: return "acsi";
  }
  return "unknown";
}

/// Accepts the canonical names plus the hci/csi/adjusted-cantor aliases.
inline std::optional<WeightScheme> parse_scheme(std::string_view name) {
  if (name == "equal") return WeightScheme::Equal;
  if (name == "harmonic" || name == "hci") return WeightScheme::Harmonic;
  if (name == "cantor" || name == "csi") return WeightScheme::Cantor;
  if (name == "acsi" || name == "adjusted-cantor") return WeightScheme::AdjustedCantor;
  return std::nullopt;
}

/// Per-author shares, index 0 is the first author. AdjustedCantor carries
/// the Cantor weights; its correction is applied to amounts, not weights.
struct WeightVector {
  WeightScheme scheme;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
  double sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
};

namespace detail {

inline void check_author_count(std::size_t n) {
  if (n == 0) throw CreditError("empty author list");
  if (n > kMaxAuthors) throw CreditError("author count exceeds supported maximum");
}

// Exact powers of two and three keep the leading terms correctly rounded;
// 3^i overflows near i = 647, past which the geometric form takes over.
inline double cantor_term(std::size_t i) {
  if (i <= 600) {
    return std::ldexp(1.0, static_cast<int>(i) - 1) / std::pow(3.0, static_cast<double>(i));
  }
  return std::pow(2.0 / 3.0, static_cast<double>(i - 1)) / 3.0;
}

}  // namespace detail

inline double total_credit(const CreditPolicy& policy, const RankFraction& rank) {
  const double t = policy.total();
  const double p = policy.base_share();
  return p * t + (1.0 - p) * (1.0 - rank.value()) * t;
}

inline WeightVector equal_weights(std::size_t n) {
  detail::check_author_count(n);
  return {WeightScheme::Equal, std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

inline WeightVector harmonic_weights(std::size_t n) {
  detail::check_author_count(n);
  // smallest terms first
  double harmonic_number = 0.0;
  for (std::size_t j = n; j >= 1; --j) harmonic_number += 1.0 / static_cast<double>(j);

  std::vector<double> w(n);
  for (std::size_t i = 1; i <= n; ++i) {
    w[i - 1] = 1.0 / (static_cast<double>(i) * harmonic_number);
  }
  return {WeightScheme::Harmonic, std::move(w)};
}

/// C_i = 2^(i-1) / 3^i. Independent of n; sums to 1 - (2/3)^n. Terms past
/// i ~ 1800 are below the smallest double and come out as zero.
inline WeightVector cantor_weights(std::size_t n) {
  detail::check_author_count(n);
  std::vector<double> w(n);
  for (std::size_t i = 1; i <= n; ++i) w[i - 1] = detail::cantor_term(i);
  return {WeightScheme::Cantor, std::move(w)};
}

inline WeightVector scheme_weights(WeightScheme scheme, std::size_t n) {
  switch (scheme) {
    case WeightScheme::Equal: return equal_weights(n);
    case WeightScheme::Harmonic: return harmonic_weights(n);
    case WeightScheme::Cantor: return cantor_weights(n);
    case WeightScheme::AdjustedCantor: {
      auto w = cantor_weights(n);
      w.scheme = WeightScheme::AdjustedCantor;
      return w;
    }
  }
  throw CreditError("unknown weight scheme");
}

/// Credit left undistributed by Cantor weights, Q * (1 - sum C_i).
///
/// Uses the closed form (2/3)^n for the tail so the result stays
/// non-negative and does not collapse into cancellation noise for large n.
inline double residual_epsilon(double total_credit, const WeightVector& cantor) {
  if (cantor.size() == 0) return 0.0;
  return total_credit * std::pow(2.0 / 3.0, static_cast<double>(cantor.size()));
}

struct AllocationReport {
  CreditPolicy policy;
  RankFraction rank;
  WeightScheme scheme;
  WeightVector weights;
  double total_credit;
  std::vector<double> amounts;
  /// Zero for every scheme but Cantor and AdjustedCantor.
  double epsilon;

  std::size_t authors() const noexcept { return amounts.size(); }

  /// What the amounts add up to: Q - epsilon for plain Cantor, Q otherwise.
  double distributed_total() const noexcept {
    return scheme == WeightScheme::Cantor ? total_credit - epsilon : total_credit;
  }
};

inline AllocationReport allocate(const CreditPolicy& policy, const RankFraction& rank,
                                 std::size_t n, WeightScheme scheme) {
  auto weights = scheme_weights(scheme, n);
  const double q = total_credit(policy, rank);

  double epsilon = 0.0;
  if (scheme == WeightScheme::Cantor || scheme == WeightScheme::AdjustedCantor) {
    epsilon = residual_epsilon(q, weights);
  }
  const double shift =
      scheme == WeightScheme::AdjustedCantor ? epsilon / static_cast<double>(n) : 0.0;

  std::vector<double> amounts(n);
  for (std::size_t i = 0; i < n; ++i) amounts[i] = weights[i] * q + shift;

  return AllocationReport{policy, rank, scheme, std::move(weights), q, std::move(amounts), epsilon};
}

}  // namespace credit_alloc
