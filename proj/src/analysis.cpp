#include "coinweigh/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coinweigh {

namespace {

void require_m(int m) {
  if (m < 2) throw std::domain_error("mean duration is defined for m >= 2");
}

// sum_{l3=0}^{n} l3 * C(n, l3) * (3/4)^l3 * (1/4)^(n-l3), evaluated term by
// term. Analytically this is the binomial mean (3/4)n; the direct sum stays
// primary and the analytic value guards against transcription slips.
double expected_ambiguities(int n) {
  double sum = 0.0;
  double binom = 1.0;  // C(n, 0); exact in double up to n = 40
  for (int l3 = 0; l3 <= n; ++l3) {
    sum += l3 * binom * std::pow(0.75, l3) * std::pow(0.25, n - l3);
    binom = binom * (n - l3) / (l3 + 1);
  }
  double analytic = 0.75 * n;
  if (std::abs(sum - analytic) > 1e-9 * std::max(1.0, analytic))
    throw std::logic_error("expected_ambiguities: binomial sum drifted from (3/4)n at n = " +
                           std::to_string(n));
  return sum;
}

}  // namespace

double mean_triple_sum(int m) {
  require_m(m);
  double total = 0.0;
  for (int l1 = 1; l1 <= m - 1; ++l1) {
    double inner = 0.0;
    for (int l2 = 1; l2 <= m - l1 - 1; ++l2) {
      int n = m - l1 - l2;
      inner += std::pow(0.5, l2) * (2.0 * l2 + n + expected_ambiguities(n));
    }
    total += std::pow(0.25, l1 - 1) * 0.75 * (l1 + inner);
  }
  return total;
}

double mean_closed_form(int m) {
  require_m(m);
  double dm = m;
  // exp2 underflows to 0 for large m, which is the correct tail behavior
  return 1.75 * dm - 0.5 - (4.0 * dm + 22.0) * std::exp2(-2.0 * dm) -
         (24.0 * dm - 45.0) * std::exp2(-(dm + 1.0));
}

Rational asymptotic_rate() { return Rational(4, 7); }

DurationReport make_duration_report(int m, std::optional<Rational> exact,
                                    std::optional<MonteCarloEstimate> monte_carlo) {
  DurationReport report;
  report.m = m;
  report.triple_sum = mean_triple_sum(m);
  report.closed_form = mean_closed_form(m);
  if (std::abs(report.triple_sum - report.closed_form) >
      1e-9 * std::max(1.0, report.closed_form))
    throw std::logic_error("DurationReport: sum and closed form disagree at m = " +
                           std::to_string(m));
  report.exact = std::move(exact);
  report.monte_carlo = std::move(monte_carlo);
  report.rate_at_m = m / report.closed_form;
  if (!(report.rate_at_m > 0.0 && report.rate_at_m <= 1.0))
    throw std::logic_error("DurationReport: rate outside (0, 1] at m = " + std::to_string(m));
  return report;
}

}  // namespace coinweigh
