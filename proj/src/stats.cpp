#include "icapm/stats.hpp"

#include <cmath>
#include <limits>

#include "icapm/error.hpp"

namespace icapm::stats {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;

// Lower regularized gamma by power series.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw_numeric("E_STATS", "incomplete gamma series failed to converge");
}

// Upper regularized gamma by modified Lentz continued fraction.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw_numeric("E_STATS", "incomplete gamma continued fraction failed to converge");
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0) throw_numeric("E_STATS", "gamma_p requires a > 0");
    if (x < 0.0) throw_numeric("E_STATS", "gamma_p requires x >= 0");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0) throw_numeric("E_STATS", "gamma_q requires a > 0");
    if (x < 0.0) throw_numeric("E_STATS", "gamma_q requires x >= 0");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_survival(double x, double df) {
    if (df <= 0.0) throw_numeric("E_STATS", "chi-square needs df > 0");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

std::string stars_from_pvalue(double p) {
    if (p < 0.01) return "*";
    if (p < 0.05) return "**";
    return "";
}

std::string stars_from_zscore(double z) {
    double a = std::fabs(z);
    if (a > kCritical1pct) return "*";
    if (a > kCritical5pct) return "**";
    return "";
}

}  // namespace icapm::stats
