#pragma once

#include <vector>

namespace icapm {

struct Moments {
    double mean = 0.0;
    double sd = 0.0;              // n-1 divisor
    double skewness = 0.0;        // m3 / m2^(3/2), population central moments
    double excess_kurtosis = 0.0; // m4 / m2^2 - 3
};

struct TestStat {
    double stat = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Sample moments; skewness/kurtosis use standardized central-moment ratios
/// without small-sample correction. Constant series are rejected.
Moments moments(const std::vector<double>& x);

/// Normality test: T/6 * (S^2 + K^2/4) against chi-square(2).
TestStat jarque_bera(const std::vector<double>& x);
double jarque_bera_stat(int t_obs, double skewness, double excess_kurtosis);

/// Portmanteau autocorrelation test of order `lags` against chi-square(lags).
TestStat ljung_box(const std::vector<double>& x, int lags);
double ljung_box_stat(int t_obs, const std::vector<double>& acf);

/// rho_k = sum_{t>k} (x_t - xbar)(x_{t-k} - xbar) / sum_t (x_t - xbar)^2,
/// k = 1..max_lag. Lag 0 is identically 1 and not included.
std::vector<double> autocorrelations(const std::vector<double>& x, int max_lag);

/// corr(x_t, y_{t-k}) for k = -max_lag..max_lag, each over the overlapping
/// sample; index [k + max_lag] of the result holds lag k.
std::vector<double> cross_correlations(const std::vector<double>& x,
                                       const std::vector<double>& y, int max_lag);

struct Annualized {
    double mean_pct_per_year = 0.0;  // monthly mean * 12 * 100
    double sd_pct_per_year = 0.0;    // monthly sd * sqrt(12) * 100
};

Annualized annualize(double monthly_mean, double monthly_sd);

}  // namespace icapm
