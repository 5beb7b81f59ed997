#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "icapm/data.hpp"
#include "icapm/model.hpp"

namespace icapm::garch {

/// State of the covariance recursion
///   H_t = C + aa' o eps_{t-1} eps'_{t-1} + bb' o H_{t-1}
/// (o = elementwise product) with covariance targeting through the
/// precomputed intercept C.
struct GarchState {
    Eigen::MatrixXd h;          // current covariance H_t
    Eigen::VectorXd eps_prev;   // lagged innovations (zero at start)
    Eigen::MatrixXd intercept;  // C, fixed over the sample
};

/// C(i,j) = H0(i,j) * (1 - a_i a_j - b_i b_j). Admissibility problems are
/// surfaced by check_admissible, not here.
Eigen::MatrixXd intercept_matrix(const Eigen::MatrixXd& h0, const Eigen::VectorXd& a,
                                 const Eigen::VectorXd& b);

/// One recursion update; symmetric by construction (upper triangle computed
/// and mirrored).
Eigen::MatrixXd step(const Eigen::MatrixXd& c, const Eigen::VectorXd& a,
                     const Eigen::VectorXd& b, const Eigen::VectorXd& eps_prev,
                     const Eigen::MatrixXd& h_prev);

struct Admissibility {
    bool ok = true;
    std::vector<std::pair<int, int>> violating_pairs;  // a_i a_j + b_i b_j >= 1
    std::vector<std::pair<int, int>> boundary_pairs;   // equal to 1 within 1e-12
    double min_intercept_eigenvalue = 0.0;
    std::string describe() const;
};

/// Passes iff a_i a_j + b_i b_j < 1 for every pair and the intercept matrix
/// is positive semidefinite within 1e-10 on its smallest eigenvalue.
Admissibility check_admissible(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                               const Eigen::MatrixXd& h0);

/// Smooth penalty added to the negative log-likelihood so optimizers can
/// roam unconstrained space: 1e4 * sum of squared pair violations plus
/// 1e4 * squared negative part of the intercept's smallest eigenvalue.
double admissibility_penalty(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             const Eigen::MatrixXd& h0);

struct FilterOptions {
    bool keep_paths = false;                       // store mu/eps/H/price paths
    const Eigen::MatrixXd* h0_override = nullptr;  // defaults to dataset.h0
};

struct FilterResult {
    double loglik = 0.0;                // Gaussian quasi-log-likelihood total
    std::vector<double> contributions;  // per-observation terms, sum to loglik
    Eigen::MatrixXd mu;                 // T x N (keep_paths only)
    Eigen::MatrixXd eps;                // T x N
    std::vector<Eigen::MatrixXd> h;     // T covariance matrices
    Eigen::VectorXd delta_market;       // T
    Eigen::MatrixXd delta_currency;     // T x L
    int clamp_events = 0;               // exponential-argument clamps
    int jitter_events = 0;              // factorizations that needed a diagonal bump
};

/// Runs the mean/covariance recursion over the aligned sample:
/// H_1 = H0, eps_0 = 0; each H_t must be positive semidefinite within
/// -1e-10 on its smallest eigenvalue or the filter aborts with the failing
/// t. Per-observation likelihood terms are computed from one symmetric
/// factorization per t (smallest pivot below 1e-12 triggers a one-time
/// 1e-10 diagonal bump before failing).
FilterResult filter(const ModelSpec& spec, const Parameters& params,
                    const AlignedDataset& data, const FilterOptions& options = {});

}  // namespace icapm::garch
