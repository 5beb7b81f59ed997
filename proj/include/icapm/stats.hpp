#pragma once

#include <string>

namespace icapm::stats {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
/// series expansion for x < a + 1, continued fraction otherwise.
/// Absolute accuracy is well inside 1e-12 over the chi-square range used here.
double gamma_q(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double gamma_p(double a, double x);

/// Upper-tail probability of a chi-square variate: P(X > x) with df degrees
/// of freedom. x <= 0 maps to 1.
double chi2_survival(double x, double df);

/// Two-sided standard-normal critical values used for significance stars.
inline constexpr double kCritical1pct = 2.5758293035489004;
inline constexpr double kCritical5pct = 1.959963984540054;

/// Star convention used across report tables: "*" significant at 1%,
/// "**" at 5%, empty otherwise.
std::string stars_from_pvalue(double p);
std::string stars_from_zscore(double z);

}  // namespace icapm::stats
