#include "icapm/premia.hpp"

#include <algorithm>
#include <cmath>

#include "icapm/error.hpp"
#include "icapm/stats.hpp"

namespace icapm::premia {

Decomposition decompose(const ModelSpec& spec, const Parameters& params,
                        const std::vector<Eigen::MatrixXd>& h_path,
                        const Eigen::VectorXd& delta_market_path,
                        const Eigen::MatrixXd& delta_currency_path) {
    const int t_obs = static_cast<int>(h_path.size());
    const int n = spec.n_series();
    const int m = spec.market_row();
    if (delta_market_path.size() != t_obs ||
        (spec.n_currencies > 0 && delta_currency_path.rows() != t_obs))
        throw_input("E_PREMIA", "price paths and covariance path have different lengths");

    Decomposition d;
    d.market.setZero(t_obs, n);
    d.currency.setZero(t_obs, n);
    d.domestic.setZero(t_obs, n);
    d.total.setZero(t_obs, n);

    for (int t = 0; t < t_obs; ++t) {
        const Eigen::MatrixXd& h = h_path[t];
        if (h.rows() != n || h.cols() != n)
            throw_input("E_PREMIA", "covariance path dimension mismatch");
        for (int i = 0; i < n; ++i) d.market(t, i) = delta_market_path(t) * h(i, m);
        for (int k = 0; k < spec.n_currencies; ++k) {
            double dk = delta_currency_path(t, k);
            int col = spec.currency_row(k);
            for (int i = 0; i < n; ++i) d.currency(t, i) += dk * h(i, col);
        }
        if (spec.has_domestic()) {
            Eigen::VectorXd q = residual_risk(h, m);
            for (int i = 0; i < spec.n_assets; ++i)
                d.domestic(t, i) = params.domestic_price(i) * q(i);
        }
        for (int i = 0; i < n; ++i)
            d.total(t, i) = d.market(t, i) + d.currency(t, i) + d.domestic(t, i);
    }
    return d;
}

namespace {

double subperiod_se(const Eigen::VectorXd& x, bool use_hac) {
    const int t_obs = static_cast<int>(x.size());
    double mean = x.mean();
    if (t_obs < 2) return 0.0;
    if (!use_hac) {
        double ss = (x.array() - mean).square().sum() / (t_obs - 1);
        return std::sqrt(ss / t_obs);
    }
    // Newey-West with Bartlett weights at 12 lags (or T-1 if shorter).
    int lags = std::min(12, t_obs - 1);
    Eigen::VectorXd c = x.array() - mean;
    double s = c.squaredNorm() / t_obs;
    for (int l = 1; l <= lags; ++l) {
        double gamma = 0.0;
        for (int t = l; t < t_obs; ++t) gamma += c(t) * c(t - l);
        gamma /= t_obs;
        s += 2.0 * (1.0 - static_cast<double>(l) / (lags + 1)) * gamma;
    }
    return std::sqrt(std::max(s, 0.0) / t_obs);
}

}  // namespace

std::vector<SubperiodRow> subperiod_summary(const Eigen::VectorXd& series,
                                            const std::vector<YearMonth>& dates,
                                            const std::vector<YearMonth>& breaks,
                                            bool use_hac) {
    const int t_obs = static_cast<int>(series.size());
    if (t_obs == 0) throw_input("E_PREMIA", "empty series");
    if (static_cast<int>(dates.size()) != t_obs)
        throw_input("E_PREMIA", "dates/series length mismatch");

    std::vector<YearMonth> sorted_breaks = breaks;
    std::sort(sorted_breaks.begin(), sorted_breaks.end());
    for (const YearMonth& b : sorted_breaks)
        if (b < dates.front() || dates.back() < b)
            throw_input("E_PREMIA", "breakpoint " + b.str() + " outside the sample");

    auto make_row = [&](const std::string& label, int lo, int hi) {
        if (hi < lo) throw_input("E_PREMIA", "empty subperiod '" + label + "'");
        int n = hi - lo + 1;
        Eigen::VectorXd seg = series.segment(lo, n);
        SubperiodRow row;
        row.label = label;
        row.start = lo;
        row.end = hi;
        row.mean_pct_per_year = seg.mean() * 1200.0;
        row.se_pct_per_year = subperiod_se(seg, use_hac) * 1200.0;
        row.stars = row.se_pct_per_year > 0.0
                        ? stats::stars_from_zscore(row.mean_pct_per_year / row.se_pct_per_year)
                        : "";
        return row;
    };

    std::vector<SubperiodRow> rows;
    rows.push_back(
        make_row(dates.front().str() + ".." + dates.back().str(), 0, t_obs - 1));
    int lo = 0;
    for (const YearMonth& b : sorted_breaks) {
        int hi = b.index() - dates.front().index();
        rows.push_back(make_row(dates[lo].str() + ".." + dates[hi].str(), lo, hi));
        lo = hi + 1;
    }
    if (!sorted_breaks.empty()) {
        if (lo > t_obs - 1) throw_input("E_PREMIA", "empty subperiod after the last breakpoint");
        rows.push_back(make_row(dates[lo].str() + ".." + dates.back().str(), lo, t_obs - 1));
    }
    return rows;
}

HpResult hp_filter(const Eigen::VectorXd& x, double lambda) {
    if (lambda < 0.0) throw_input("E_PREMIA", "hp_filter: lambda must be non-negative");
    const int t_obs = static_cast<int>(x.size());
    HpResult out;
    if (lambda == 0.0) {
        out.trend = x;
        out.cycle = Eigen::VectorXd::Zero(t_obs);
        return out;
    }
    if (t_obs < 3) throw_input("E_PREMIA", "hp_filter: need at least 3 observations");

    // M = I + lambda D'D is symmetric pentadiagonal; store the three bands.
    Eigen::VectorXd d0(t_obs), d1(t_obs - 1), d2(t_obs - 2);
    for (int i = 0; i < t_obs; ++i) {
        double diag = 0.0;
        // D row r has pattern (1, -2, 1) at columns (r, r+1, r+2).
        for (int r = std::max(0, i - 2); r <= std::min(t_obs - 3, i); ++r) {
            double coef = (i == r || i == r + 2) ? 1.0 : -2.0;
            diag += coef * coef;
        }
        d0(i) = 1.0 + lambda * diag;
    }
    for (int i = 0; i + 1 < t_obs; ++i) {
        double v = 0.0;
        for (int r = std::max(0, i - 1); r <= std::min(t_obs - 3, i); ++r) {
            auto coef = [&](int col) -> double {
                if (col == r || col == r + 2) return 1.0;
                if (col == r + 1) return -2.0;
                return 0.0;
            };
            v += coef(i) * coef(i + 1);
        }
        d1(i) = lambda * v;
    }
    for (int i = 0; i + 2 < t_obs; ++i) d2(i) = lambda;  // rows r=i only: 1 * 1

    // Banded Cholesky M = L L' with bandwidth 2.
    Eigen::VectorXd l0(t_obs), l1(std::max(t_obs - 1, 0)), l2(std::max(t_obs - 2, 0));
    auto solve_banded = [&](const Eigen::VectorXd& rhs) {
        Eigen::VectorXd y(t_obs);
        for (int i = 0; i < t_obs; ++i) {
            double s = rhs(i);
            if (i >= 1) s -= l1(i - 1) * y(i - 1);
            if (i >= 2) s -= l2(i - 2) * y(i - 2);
            y(i) = s / l0(i);
        }
        Eigen::VectorXd z(t_obs);
        for (int i = t_obs - 1; i >= 0; --i) {
            double s = y(i);
            if (i + 1 < t_obs) s -= l1(i) * z(i + 1);
            if (i + 2 < t_obs) s -= l2(i) * z(i + 2);
            z(i) = s / l0(i);
        }
        return z;
    };

    for (int i = 0; i < t_obs; ++i) {
        double v = d0(i);
        if (i >= 1) v -= l1(i - 1) * l1(i - 1);
        if (i >= 2) v -= l2(i - 2) * l2(i - 2);
        if (v <= 0.0) throw_numeric("E_PREMIA", "hp_filter: factorization failed");
        l0(i) = std::sqrt(v);
        if (i + 1 < t_obs) {
            double s = d1(i);
            if (i >= 1) s -= l1(i - 1) * l2(i - 1);
            l1(i) = s / l0(i);
        }
        if (i + 2 < t_obs) l2(i) = d2(i) / l0(i);
    }

    Eigen::VectorXd trend = solve_banded(x);
    // One refinement pass keeps the residual at machine level for large lambda.
    auto apply_m = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd r(t_obs);
        for (int i = 0; i < t_obs; ++i) {
            double s = d0(i) * v(i);
            if (i >= 1) s += d1(i - 1) * v(i - 1);
            if (i + 1 < t_obs) s += d1(i) * v(i + 1);
            if (i >= 2) s += d2(i - 2) * v(i - 2);
            if (i + 2 < t_obs) s += d2(i) * v(i + 2);
            r(i) = s;
        }
        return r;
    };
    Eigen::VectorXd residual = x - apply_m(trend);
    trend += solve_banded(residual);

    out.trend = trend;
    out.cycle = x - trend;
    return out;
}

}  // namespace icapm::premia
