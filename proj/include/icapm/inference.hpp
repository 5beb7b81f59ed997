#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "icapm/model.hpp"

namespace icapm::inference {

/// Linear restriction R psi = r with q = rows(R) degrees of freedom.
struct Restriction {
    Eigen::MatrixXd r_matrix;  // q x P selection/contrast matrix
    Eigen::VectorXd r_value;   // q-vector, defaults to zero
    std::string label;
};

struct WaldResult {
    double stat = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Robust Wald statistic (R psi - r)' (R V R')^-1 (R psi - r) against
/// chi-square(q). A singular R V R' is an error naming the redundant rows.
WaldResult wald(const Restriction& restriction, const Eigen::VectorXd& psi,
                const Eigen::MatrixXd& vcov);

struct BatteryRow {
    std::string label;
    bool skipped = false;
    std::string note;  // set when skipped
    double stat = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// The restrictions behind the standard hypothesis battery for a layout:
/// market price constant; each currency price zero / constant; all currency
/// prices jointly zero / jointly constant; then per variant the domestic
/// prices, the intercepts and the shared instrument loadings jointly zero.
/// "Constant" restrictions exclude the leading constant weight, which fixes
/// the degrees of freedom at J-1 per price.
std::vector<Restriction> standard_restrictions(const ModelSpec& spec);

/// Runs the battery; hypotheses that need at least one non-constant
/// instrument are skipped with a note when J = 1.
std::vector<BatteryRow> standard_battery(const ModelSpec& spec, const Eigen::VectorXd& psi,
                                         const Eigen::MatrixXd& vcov);

}  // namespace icapm::inference
