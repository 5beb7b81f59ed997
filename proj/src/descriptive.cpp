#include "icapm/descriptive.hpp"

#include <cmath>
#include <string>

#include "icapm/error.hpp"
#include "icapm/stats.hpp"

namespace icapm {

namespace {

double mean_of(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

// Central moments m2, m3, m4 with the 1/T divisor.
void central_moments(const std::vector<double>& x, double& m2, double& m3, double& m4) {
    double xbar = mean_of(x);
    m2 = m3 = m4 = 0.0;
    for (double v : x) {
        double d = v - xbar;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    double t = static_cast<double>(x.size());
    m2 /= t;
    m3 /= t;
    m4 /= t;
}

void require_nonconstant(double m2) {
    if (m2 <= 0.0) throw_input("E_DESCRIPTIVE", "zero variance: constant series");
}

}  // namespace

Moments moments(const std::vector<double>& x) {
    if (x.size() < 3)
        throw_input("E_DESCRIPTIVE", "moments needs at least 3 observations");
    double m2, m3, m4;
    central_moments(x, m2, m3, m4);
    require_nonconstant(m2);
    Moments out;
    out.mean = mean_of(x);
    double t = static_cast<double>(x.size());
    out.sd = std::sqrt(m2 * t / (t - 1.0));
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return out;
}

double jarque_bera_stat(int t_obs, double skewness, double excess_kurtosis) {
    return static_cast<double>(t_obs) / 6.0 *
           (skewness * skewness + excess_kurtosis * excess_kurtosis / 4.0);
}

TestStat jarque_bera(const std::vector<double>& x) {
    if (x.size() < 4)
        throw_input("E_DESCRIPTIVE", "jarque_bera needs at least 4 observations");
    Moments m = moments(x);
    TestStat out;
    out.stat = jarque_bera_stat(static_cast<int>(x.size()), m.skewness, m.excess_kurtosis);
    out.df = 2;
    out.p_value = stats::chi2_survival(out.stat, 2.0);
    return out;
}

std::vector<double> autocorrelations(const std::vector<double>& x, int max_lag) {
    int t_obs = static_cast<int>(x.size());
    if (max_lag < 1) throw_input("E_DESCRIPTIVE", "max_lag must be >= 1");
    if (t_obs <= max_lag)
        throw_input("E_DESCRIPTIVE", "max_lag " + std::to_string(max_lag) +
                                         " too large for " + std::to_string(t_obs) +
                                         " observations");
    double xbar = mean_of(x);
    double denom = 0.0;
    for (double v : x) denom += (v - xbar) * (v - xbar);
    require_nonconstant(denom);
    std::vector<double> rho(max_lag);
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (int t = k; t < t_obs; ++t) num += (x[t] - xbar) * (x[t - k] - xbar);
        rho[k - 1] = num / denom;
    }
    return rho;
}

double ljung_box_stat(int t_obs, const std::vector<double>& acf) {
    double t = static_cast<double>(t_obs);
    double sum = 0.0;
    for (size_t k = 1; k <= acf.size(); ++k)
        sum += acf[k - 1] * acf[k - 1] / (t - static_cast<double>(k));
    return t * (t + 2.0) * sum;
}

TestStat ljung_box(const std::vector<double>& x, int lags) {
    int t_obs = static_cast<int>(x.size());
    if (lags < 1) throw_input("E_DESCRIPTIVE", "ljung_box needs lags >= 1");
    if (lags >= t_obs)
        throw_input("E_DESCRIPTIVE", "ljung_box needs more observations than lags");
    auto rho = autocorrelations(x, lags);
    TestStat out;
    out.stat = ljung_box_stat(t_obs, rho);
    out.df = lags;
    out.p_value = stats::chi2_survival(out.stat, static_cast<double>(lags));
    return out;
}

std::vector<double> cross_correlations(const std::vector<double>& x,
                                       const std::vector<double>& y, int max_lag) {
    if (x.size() != y.size())
        throw_input("E_DESCRIPTIVE", "cross_correlations: length mismatch");
    int t_obs = static_cast<int>(x.size());
    if (max_lag < 0 || max_lag >= t_obs)
        throw_input("E_DESCRIPTIVE", "cross_correlations: bad lag window");

    std::vector<double> out(2 * max_lag + 1);
    for (int k = -max_lag; k <= max_lag; ++k) {
        // Pairs (x_t, y_{t-k}) over the overlapping range.
        int t_lo = std::max(0, k);
        int t_hi = t_obs - 1 + std::min(0, k);
        int n = t_hi - t_lo + 1;
        if (n < 2)
            throw_input("E_DESCRIPTIVE", "cross_correlations: overlap too short at lag " +
                                             std::to_string(k));
        double mx = 0.0, my = 0.0;
        for (int t = t_lo; t <= t_hi; ++t) {
            mx += x[t];
            my += y[t - k];
        }
        mx /= n;
        my /= n;
        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (int t = t_lo; t <= t_hi; ++t) {
            double dx = x[t] - mx;
            double dy = y[t - k] - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
        if (sxx <= 0.0 || syy <= 0.0)
            throw_input("E_DESCRIPTIVE", "zero variance: constant series in overlap at lag " +
                                             std::to_string(k));
        out[k + max_lag] = sxy / std::sqrt(sxx * syy);
    }
    return out;
}

Annualized annualize(double monthly_mean, double monthly_sd) {
    Annualized a;
    a.mean_pct_per_year = monthly_mean * 12.0 * 100.0;
    a.sd_pct_per_year = monthly_sd * std::sqrt(12.0) * 100.0;
    return a;
}

}  // namespace icapm
