#pragma once

#include <cstdint>
#include <optional>

#include "coinweigh/rational.hpp"

namespace coinweigh {

/// Mean weighing count for pool exponent m under the independence model: the
/// first-phase count is geometric with success probability 3/4, the
/// second-phase count geometric with 1/2, and each of the m - l1 - l2 digit
/// positions is ambiguous with probability 3/4. Evaluated as the literal
/// nested sum; throws std::domain_error for m < 2.
///
/// This models uniformly placed forged coins only asymptotically; the exact
/// small-m means come from exhaustive_verify and are reported side by side,
/// never asserted equal.
double mean_triple_sum(int m);

/// Same quantity in closed form:
///   (7/4)m - 1/2 - (4m + 22)/4^m - (24m - 45)/2^(m+1).
/// Agrees with mean_triple_sum to 1e-9 relative (tested for m = 2..40).
double mean_closed_form(int m);

/// Limit of m / mean as m grows: exactly 4/7.
Rational asymptotic_rate();

/// 4/7 to the six decimal places used in displays.
inline constexpr double kAsymptoticRateDecimal = 0.571429;
/// Rate of Lindstrom's static weighing algorithm, the best known static
/// scheme; comparison constant only.
inline constexpr double kStaticAlgorithmRate = 0.46;
/// Theoretical rate bound for static weighing algorithms (Dyachkov);
/// comparison constant only.
inline constexpr double kStaticRateBound = 0.6;

/// Seeded-simulation estimate attached to a report; see monte_carlo() for
/// how estimates are produced.
struct MonteCarloEstimate {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

/// The mean duration of the search from every route we have, side by side.
struct DurationReport {
  int m = 0;
  double triple_sum = 0.0;
  double closed_form = 0.0;
  std::optional<Rational> exact;             // enumeration, small m only
  std::optional<MonteCarloEstimate> monte_carlo;
  double rate_at_m = 0.0;  // m / closed_form
};

DurationReport make_duration_report(int m, std::optional<Rational> exact = std::nullopt,
                                    std::optional<MonteCarloEstimate> monte_carlo = std::nullopt);

}  // namespace coinweigh
