#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "icapm/dates.hpp"
#include "icapm/model.hpp"

namespace icapm::premia {

/// Per-series premium paths (T x N each). total = market + currency +
/// domestic pointwise by construction; the domestic block is exactly zero
/// under the integrated variant.
struct Decomposition {
    Eigen::MatrixXd market;    // delta_m,t-1 * H_t(i, m)
    Eigen::MatrixXd currency;  // sum_k delta_k,t-1 * H_t(i, n+k)
    Eigen::MatrixXd domestic;  // delta_d,i * q_it on asset rows
    Eigen::MatrixXd total;
};

Decomposition decompose(const ModelSpec& spec, const Parameters& params,
                        const std::vector<Eigen::MatrixXd>& h_path,
                        const Eigen::VectorXd& delta_market_path,
                        const Eigen::MatrixXd& delta_currency_path);

struct SubperiodRow {
    std::string label;
    int start = 0;  // inclusive observation indices
    int end = 0;    // inclusive
    double mean_pct_per_year = 0.0;  // monthly mean * 1200
    double se_pct_per_year = 0.0;    // plain sd/sqrt(T) * 1200 or Newey-West
    std::string stars;
};

/// Annualized subperiod means of a premium series. Breakpoints mark the
/// last month of each subperiod; the full-sample row always comes first.
/// With use_hac the standard error uses Newey-West weights at 12 lags.
std::vector<SubperiodRow> subperiod_summary(const Eigen::VectorXd& series,
                                            const std::vector<YearMonth>& dates,
                                            const std::vector<YearMonth>& breaks,
                                            bool use_hac = false);

struct HpResult {
    Eigen::VectorXd trend;
    Eigen::VectorXd cycle;
};

/// Trend/cycle split: trend solves (I + lambda D'D) trend = x with D the
/// second-difference operator, via a pentadiagonal Cholesky with one
/// refinement pass. lambda = 0 returns the series unchanged.
HpResult hp_filter(const Eigen::VectorXd& x, double lambda);

}  // namespace icapm::premia
