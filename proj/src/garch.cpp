#include "icapm/garch.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "icapm/error.hpp"

namespace icapm::garch {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kPsdTolerance = 1e-10;
constexpr double kPivotFloor = 1e-12;
constexpr double kJitter = 1e-10;
constexpr double kPenaltyWeight = 1e4;

// In-place lower Cholesky of the symmetric buffer src (n x n, full storage)
// into dst. Returns false on a non-positive pivot; min_pivot reports the
// smallest diagonal pivot encountered either way.
bool chol_lower(int n, const double* src, double* dst, double& min_pivot) {
    min_pivot = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        double d = src[j * n + j];
        for (int k = 0; k < j; ++k) d -= dst[j * n + k] * dst[j * n + k];
        if (d < min_pivot) min_pivot = d;
        if (d <= 0.0) return false;
        double root = std::sqrt(d);
        dst[j * n + j] = root;
        for (int i = j + 1; i < n; ++i) {
            double s = src[i * n + j];
            for (int k = 0; k < j; ++k) s -= dst[i * n + k] * dst[j * n + k];
            dst[i * n + j] = s / root;
        }
    }
    return true;
}

// Recursion update on flat buffers; upper triangle computed, mirrored.
void step_raw(int n, const double* c, const double* a, const double* b, const double* eps,
              double* h) {
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double v = c[i * n + j] + a[i] * a[j] * eps[i] * eps[j] + b[i] * b[j] * h[i * n + j];
            h[i * n + j] = v;
            h[j * n + i] = v;
        }
    }
}

double smallest_eigenvalue(int n, const double* h) {
    Eigen::Map<const Eigen::MatrixXd> m(h, n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

Eigen::MatrixXd intercept_matrix(const Eigen::MatrixXd& h0, const Eigen::VectorXd& a,
                                 const Eigen::VectorXd& b) {
    int n = static_cast<int>(h0.rows());
    if (h0.cols() != n || a.size() != n || b.size() != n)
        throw_input("E_GARCH", "intercept_matrix: dimension mismatch");
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = h0(i, j) * (1.0 - a(i) * a(j) - b(i) * b(j));
            c(i, j) = v;
            c(j, i) = v;
        }
    return c;
}

Eigen::MatrixXd step(const Eigen::MatrixXd& c, const Eigen::VectorXd& a,
                     const Eigen::VectorXd& b, const Eigen::VectorXd& eps_prev,
                     const Eigen::MatrixXd& h_prev) {
    int n = static_cast<int>(c.rows());
    if (c.cols() != n || a.size() != n || b.size() != n || eps_prev.size() != n ||
        h_prev.rows() != n || h_prev.cols() != n)
        throw_input("E_GARCH", "step: dimension mismatch");
    Eigen::MatrixXd h = h_prev;
    step_raw(n, c.data(), a.data(), b.data(), eps_prev.data(), h.data());
    return h;
}

std::string Admissibility::describe() const {
    std::ostringstream os;
    if (ok) {
        os << "admissible (min intercept eigenvalue " << min_intercept_eigenvalue << ")";
        return os.str();
    }
    os << "inadmissible:";
    for (auto [i, j] : violating_pairs) os << " a_i*a_j+b_i*b_j>=1 at (" << i << "," << j << ")";
    if (min_intercept_eigenvalue < -kPsdTolerance)
        os << " intercept not PSD (min eigenvalue " << min_intercept_eigenvalue << ")";
    return os.str();
}

Admissibility check_admissible(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                               const Eigen::MatrixXd& h0) {
    int n = static_cast<int>(a.size());
    Admissibility out;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = a(i) * a(j) + b(i) * b(j);
            if (s >= 1.0) out.violating_pairs.emplace_back(i, j);
            if (std::fabs(s - 1.0) <= 1e-12) out.boundary_pairs.emplace_back(i, j);
        }
    Eigen::MatrixXd c = intercept_matrix(h0, a, b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    out.min_intercept_eigenvalue = es.eigenvalues().minCoeff();
    out.ok = out.violating_pairs.empty() && out.min_intercept_eigenvalue >= -kPsdTolerance;
    return out;
}

double admissibility_penalty(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             const Eigen::MatrixXd& h0) {
    int n = static_cast<int>(a.size());
    double penalty = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double excess = a(i) * a(j) + b(i) * b(j) - 1.0;
            if (excess > 0.0) penalty += excess * excess;
        }
    Eigen::MatrixXd c = intercept_matrix(h0, a, b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    double lambda_min = es.eigenvalues().minCoeff();
    if (lambda_min < 0.0) penalty += lambda_min * lambda_min;
    return kPenaltyWeight * penalty;
}

FilterResult filter(const ModelSpec& spec, const Parameters& params,
                    const AlignedDataset& data, const FilterOptions& options) {
    const int n = spec.n_series();
    const int j = spec.n_instruments;
    const int l = spec.n_currencies;
    const int t_obs = data.n_obs();
    if (t_obs == 0) throw_input("E_GARCH", "empty sample after alignment");
    if (data.n_series() != n)
        throw_input("E_GARCH", "filter: dataset has " + std::to_string(data.n_series()) +
                                   " series, model expects " + std::to_string(n));
    if (static_cast<int>(data.instruments.cols()) != j)
        throw_input("E_GARCH", "filter: instrument count mismatch");

    const Eigen::MatrixXd& h0 = options.h0_override ? *options.h0_override : data.h0;
    if (h0.rows() != n || h0.cols() != n)
        throw_input("E_GARCH", "filter: H0 dimension mismatch");

    FilterResult out;
    out.contributions.resize(t_obs);
    if (options.keep_paths) {
        out.mu.resize(t_obs, n);
        out.eps.resize(t_obs, n);
        out.h.reserve(t_obs);
        out.delta_market.resize(t_obs);
        out.delta_currency.resize(t_obs, std::max(l, 0));
    }

    // Contiguous per-t columns for the hot loop.
    Eigen::MatrixXd returns_t = data.returns.transpose();
    Eigen::MatrixXd instruments_t = data.instruments.transpose();

    Eigen::MatrixXd c = intercept_matrix(h0, params.a, params.b);
    std::vector<double> h(h0.data(), h0.data() + n * n);
    std::vector<double> chol(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> hj(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> mu(n), eps(n), solve(n), prices(1 + l);
    bool clamped = false;

    for (int t = 0; t < t_obs; ++t) {
        const double* z = instruments_t.col(t).data();
        const double* r = returns_t.col(t).data();

        clamped = false;
        detail::conditional_mean_raw(spec, params, h.data(), z, mu.data(), prices.data(),
                                     &clamped);
        if (clamped) ++out.clamp_events;
        for (int i = 0; i < n; ++i) eps[i] = r[i] - mu[i];

        double min_pivot = 0.0;
        const double* h_fact = h.data();
        bool ok = chol_lower(n, h_fact, chol.data(), min_pivot);
        if (!ok || min_pivot < kPivotFloor) {
            double lambda_min = smallest_eigenvalue(n, h.data());
            if (lambda_min < -kPsdTolerance)
                throw_numeric("E_GARCH",
                              "covariance not positive semidefinite at t=" + std::to_string(t) +
                                  " (smallest eigenvalue " + std::to_string(lambda_min) + ")");
            for (int i = 0; i < n * n; ++i) hj[i] = h[i];
            for (int i = 0; i < n; ++i) hj[i * n + i] += kJitter;
            ++out.jitter_events;
            if (!chol_lower(n, hj.data(), chol.data(), min_pivot))
                throw_numeric("E_GARCH", "covariance factorization failed at t=" +
                                             std::to_string(t) + " even after diagonal bump");
        }

        // log|H| and eps' H^-1 eps from the factor: forward-solve L y = eps.
        double logdet = 0.0;
        for (int i = 0; i < n; ++i) logdet += std::log(chol[i * n + i]);
        logdet *= 2.0;
        double quad = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = eps[i];
            for (int k = 0; k < i; ++k) s -= chol[i * n + k] * solve[k];
            solve[i] = s / chol[i * n + i];
            quad += solve[i] * solve[i];
        }
        out.contributions[t] = -0.5 * (n * kLog2Pi + logdet + quad);

        if (options.keep_paths) {
            for (int i = 0; i < n; ++i) {
                out.mu(t, i) = mu[i];
                out.eps(t, i) = eps[i];
            }
            out.h.emplace_back(Eigen::Map<const Eigen::MatrixXd>(h.data(), n, n));
            out.delta_market(t) = prices[0];
            for (int k = 0; k < l; ++k) out.delta_currency(t, k) = prices[1 + k];
        }

        step_raw(n, c.data(), params.a.data(), params.b.data(), eps.data(), h.data());
    }

    double total = 0.0;
    for (double v : out.contributions) total += v;
    out.loglik = total;
    return out;
}

}  // namespace icapm::garch
