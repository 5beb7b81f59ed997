#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "icapm/data.hpp"
#include "icapm/model.hpp"

namespace icapm::opt {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
    int max_iter = 100000;
    long max_evals = 1000000;      // function-evaluation budget
    double tol_f = 1e-8;           // relative simplex f-spread
    double tol_x = 1e-8;           // relative simplex x-spread
    double initial_scale = 0.1;    // per-coordinate simplex displacement
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    long evals = 0;
    int iterations = 0;
    std::string stop_reason;
};

/// Downhill simplex minimizer with the standard reflection/expansion/
/// contraction/shrink coefficients (1, 2, 0.5, 0.5). Non-finite objective
/// values are treated as +infinity; the whole initial simplex being
/// non-finite is an error.
NelderMeadResult nelder_mead(const Objective& objective, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {});

struct BhhhTraceRow {
    int iter = 0;
    double loglik = 0.0;
    double step = 0.0;
    double grad_inf = 0.0;
};

enum class BhhhStatus { converged, max_iterations, no_ascent };

struct BhhhOptions {
    int max_iter = 200;
    double tol_grad = 1e-5;  // stop when the sup-norm of the gradient drops below
    int max_halvings = 20;
};

struct BhhhResult {
    Eigen::VectorXd x;
    double loglik = 0.0;
    std::vector<BhhhTraceRow> trace;
    BhhhStatus status = BhhhStatus::converged;
    bool ridged = false;
};

using ScoreFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Outer-product-of-scores ascent: direction (S'S)^-1 g with g the column
/// sums of the score matrix, then a halving line search that never accepts
/// a decrease in the objective. A singular S'S gets one ridge of
/// 1e-8 * trace/P before failing.
BhhhResult bhhh(const Objective& total, const ScoreFn& scores, const Eigen::VectorXd& x0,
                const BhhhOptions& options = {});

struct EstimateOptions {
    long nm_max_evals = 0;  // 0 = 500 * parameter count
    double nm_tol_f = 1e-8;
    double nm_tol_x = 1e-8;
    double nm_initial_scale = 0.1;
    int bhhh_max_iter = 200;
    double bhhh_tol_grad = 1e-5;
    double score_rel_step = 1e-5;
    bool two_step_h0 = false;  // refresh the covariance target from residuals once
    std::optional<Eigen::VectorXd> start;
};

struct EstimationResult {
    ModelSpec spec;
    Eigen::VectorXd psi;
    Eigen::VectorXd se;
    Eigen::MatrixXd vcov;  // sandwich
    double loglik = 0.0;   // unpenalized, at the estimate
    double penalty = 0.0;  // admissibility penalty at the estimate (0 in the interior)
    Eigen::MatrixXd h0;
    int t_obs = 0;

    // Filtered paths at the estimate.
    Eigen::MatrixXd mu, eps;
    std::vector<Eigen::MatrixXd> h;
    Eigen::VectorXd delta_market;
    Eigen::MatrixXd delta_currency;

    long nm_evals = 0;
    double nm_objective = 0.0;
    std::vector<BhhhTraceRow> trace;
    std::vector<std::string> warnings;
};

/// Documented default start: market price weight 0.5 on the constant under
/// the exponential form (2.0 under linear), all other prices zero,
/// a = 0.3 and b = 0.8 across series.
Eigen::VectorXd default_start(const ModelSpec& spec);

/// Full pipeline: simplex warm start on the penalized objective, BHHH
/// polish, sandwich covariance, filtered paths. Deterministic given
/// (spec, data, options).
EstimationResult estimate(const ModelSpec& spec, const AlignedDataset& data,
                          const EstimateOptions& options = {});

}  // namespace icapm::opt
