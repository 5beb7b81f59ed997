#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "icapm/data.hpp"
#include "icapm/garch.hpp"
#include "icapm/model.hpp"

namespace icapm::likelihood {

struct Loglik {
    double total = 0.0;
    std::vector<double> contributions;  // per observation, sum to total
};

/// Gaussian quasi-log-likelihood of the model on the aligned sample,
/// -TN/2 log(2pi) - 1/2 sum log|H_t| - 1/2 sum eps_t' H_t^-1 eps_t,
/// evaluated through the covariance filter.
Loglik loglik(const ModelSpec& spec, const Parameters& params, const AlignedDataset& data,
              const Eigen::MatrixXd* h0_override = nullptr);

/// Any parameter-indexed family of per-observation contributions; used so
/// the score machinery is testable on analytic toy models.
using ContributionFn = std::function<std::vector<double>(const Eigen::VectorXd&)>;

/// T x P matrix of central finite differences of each contribution with
/// respect to each parameter; step h_p = rel_step * max(1, |psi_p|).
/// Column sums equal the finite-difference gradient of the total by
/// construction up to summation order.
Eigen::MatrixXd per_observation_scores(const ContributionFn& contributions,
                                       const Eigen::VectorXd& psi, double rel_step = 1e-5,
                                       const std::vector<std::string>* param_names = nullptr);

/// Model-bound convenience wrapper.
Eigen::MatrixXd per_observation_scores(const ModelSpec& spec, const Eigen::VectorXd& psi,
                                       const AlignedDataset& data, double rel_step = 1e-5);

/// Bollerslev-Wooldridge sandwich (1/T) A^-1 B A^-1, symmetrized. A is the
/// (negated) finite-difference Hessian of the average log-likelihood at the
/// estimate, B the average outer product of per-observation scores.
Eigen::MatrixXd robust_covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  int t_obs);

/// Finite-difference Hessian of the average of `total`, negated so the
/// information equality reads A = B; step 1e-4 * max(1, |psi_p|) (second
/// differences need a wider step than scores for rounding control).
Eigen::MatrixXd negative_average_hessian(const std::function<double(const Eigen::VectorXd&)>& total,
                                         const Eigen::VectorXd& psi, int t_obs);

}  // namespace icapm::likelihood
