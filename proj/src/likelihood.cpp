#include "icapm/likelihood.hpp"

#include <cmath>
#include <string>

#include "icapm/error.hpp"

namespace icapm::likelihood {

Loglik loglik(const ModelSpec& spec, const Parameters& params, const AlignedDataset& data,
              const Eigen::MatrixXd* h0_override) {
    garch::FilterOptions opts;
    opts.h0_override = h0_override;
    garch::FilterResult f = garch::filter(spec, params, data, opts);
    Loglik out;
    out.total = f.loglik;
    out.contributions = std::move(f.contributions);
    return out;
}

Eigen::MatrixXd per_observation_scores(const ContributionFn& contributions,
                                       const Eigen::VectorXd& psi, double rel_step,
                                       const std::vector<std::string>* param_names) {
    const int p = static_cast<int>(psi.size());
    Eigen::MatrixXd scores;
    for (int col = 0; col < p; ++col) {
        double h = rel_step * std::max(1.0, std::fabs(psi(col)));
        Eigen::VectorXd up = psi, down = psi;
        up(col) += h;
        down(col) -= h;
        std::vector<double> c_up, c_down;
        try {
            c_up = contributions(up);
            c_down = contributions(down);
        } catch (const Error& e) {
            std::string name = param_names && col < static_cast<int>(param_names->size())
                                   ? (*param_names)[col]
                                   : "psi[" + std::to_string(col) + "]";
            throw_numeric("E_LIKELIHOOD", "score perturbation of " + name +
                                              " left the feasible region: " + e.what());
        }
        if (c_up.size() != c_down.size())
            throw_numeric("E_LIKELIHOOD", "contribution count changed under perturbation");
        if (scores.size() == 0) scores.resize(static_cast<int>(c_up.size()), p);
        if (static_cast<int>(c_up.size()) != scores.rows())
            throw_numeric("E_LIKELIHOOD", "contribution count changed across parameters");
        for (int t = 0; t < scores.rows(); ++t) {
            double v = (c_up[t] - c_down[t]) / (2.0 * h);
            if (!std::isfinite(v)) {
                std::string name = param_names && col < static_cast<int>(param_names->size())
                                       ? (*param_names)[col]
                                       : "psi[" + std::to_string(col) + "]";
                throw_numeric("E_LIKELIHOOD",
                              "non-finite contribution while differencing " + name);
            }
            scores(t, col) = v;
        }
    }
    return scores;
}

Eigen::MatrixXd per_observation_scores(const ModelSpec& spec, const Eigen::VectorXd& psi,
                                       const AlignedDataset& data, double rel_step) {
    auto names = spec.param_names();
    ContributionFn fn = [&](const Eigen::VectorXd& x) {
        return loglik(spec, Parameters::unflatten(spec, x), data).contributions;
    };
    return per_observation_scores(fn, psi, rel_step, &names);
}

Eigen::MatrixXd robust_covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  int t_obs) {
    const int p = static_cast<int>(a.rows());
    if (a.cols() != p || b.rows() != p || b.cols() != p)
        throw_input("E_LIKELIHOOD", "robust_covariance: dimension mismatch");
    if (t_obs < 1) throw_input("E_LIKELIHOOD", "robust_covariance: T must be positive");

    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible())
        throw_numeric("E_LIKELIHOOD",
                      "singular curvature matrix; add a ridge or re-specify the model");
    Eigen::MatrixXd a_inv = lu.inverse();
    Eigen::MatrixXd v = a_inv * b * a_inv / static_cast<double>(t_obs);
    return 0.5 * (v + v.transpose());
}

Eigen::MatrixXd negative_average_hessian(
    const std::function<double(const Eigen::VectorXd&)>& total, const Eigen::VectorXd& psi,
    int t_obs) {
    const int p = static_cast<int>(psi.size());
    const double scale = 1.0 / static_cast<double>(t_obs);
    Eigen::VectorXd h(p);
    for (int i = 0; i < p; ++i) h(i) = 1e-4 * std::max(1.0, std::fabs(psi(i)));

    Eigen::MatrixXd hess(p, p);
    double f0 = total(psi) * scale;
    for (int i = 0; i < p; ++i) {
        // Diagonal: (f(+h) - 2 f0 + f(-h)) / h^2.
        Eigen::VectorXd up = psi, down = psi;
        up(i) += h(i);
        down(i) -= h(i);
        hess(i, i) = (total(up) * scale - 2.0 * f0 + total(down) * scale) / (h(i) * h(i));
        for (int j = i + 1; j < p; ++j) {
            Eigen::VectorXd pp = psi, pm = psi, mp = psi, mm = psi;
            pp(i) += h(i); pp(j) += h(j);
            pm(i) += h(i); pm(j) -= h(j);
            mp(i) -= h(i); mp(j) += h(j);
            mm(i) -= h(i); mm(j) -= h(j);
            double v = (total(pp) * scale - total(pm) * scale - total(mp) * scale +
                        total(mm) * scale) /
                       (4.0 * h(i) * h(j));
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    if (!hess.allFinite())
        throw_numeric("E_LIKELIHOOD", "non-finite Hessian entries at the estimate");
    return -hess;
}

}  // namespace icapm::likelihood
