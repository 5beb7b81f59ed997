#include "icapm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "icapm/error.hpp"
#include "icapm/garch.hpp"
#include "icapm/likelihood.hpp"

namespace icapm::opt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(const Objective& f, const Eigen::VectorXd& x, long& evals) {
    ++evals;
    double v;
    try {
        v = f(x);
    } catch (const Error&) {
        return kInf;
    }
    return std::isfinite(v) ? v : kInf;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options) {
    const int n = static_cast<int>(x0.size());
    if (n == 0) throw_input("E_OPTIMIZER", "nelder_mead: empty start vector");

    long evals = 0;
    std::vector<Eigen::VectorXd> v(n + 1, x0);
    std::vector<double> f(n + 1);
    for (int i = 1; i <= n; ++i)
        v[i](i - 1) += options.initial_scale * std::max(1.0, std::fabs(x0(i - 1)));
    for (int i = 0; i <= n; ++i) f[i] = guarded(objective, v[i], evals);
    if (std::all_of(f.begin(), f.end(), [](double x) { return x == kInf; }))
        throw_numeric("E_OPTIMIZER",
                      "objective non-finite at every vertex of the initial simplex");

    std::vector<int> order(n + 1);
    NelderMeadResult out;
    int iter = 0;
    std::string reason;
    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return f[a] < f[b]; });
        int best = order[0], worst = order[n], second = order[n - 1];

        // Converged once the simplex is small in both objective and vertex
        // spread; either alone can vanish spuriously (vertices symmetric
        // around a minimum give equal f at coarse width).
        double spread_f = f[worst] - f[best];
        double spread_x = 0.0;
        for (int i = 0; i <= n; ++i)
            spread_x = std::max(spread_x, (v[i] - v[best]).cwiseAbs().maxCoeff());
        bool f_small =
            std::isfinite(f[worst]) && spread_f <= options.tol_f * (1.0 + std::fabs(f[best]));
        bool x_small = spread_x <= options.tol_x * (1.0 + v[best].cwiseAbs().maxCoeff());
        if (f_small && x_small) {
            reason = "f-spread";
            break;
        }
        if (iter >= options.max_iter) {
            reason = "max iterations";
            break;
        }
        if (evals >= options.max_evals) {
            reason = "evaluation budget";
            break;
        }
        ++iter;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += v[i];
        centroid /= static_cast<double>(n);

        Eigen::VectorXd xr = centroid + (centroid - v[worst]);
        double fr = guarded(objective, xr, evals);
        if (fr < f[best]) {
            Eigen::VectorXd xe = centroid + 2.0 * (centroid - v[worst]);
            double fe = guarded(objective, xe, evals);
            if (fe < fr) {
                v[worst] = xe;
                f[worst] = fe;
            } else {
                v[worst] = xr;
                f[worst] = fr;
            }
        } else if (fr < f[second]) {
            v[worst] = xr;
            f[worst] = fr;
        } else {
            bool shrink = false;
            if (fr < f[worst]) {
                Eigen::VectorXd xc = centroid + 0.5 * (xr - centroid);
                double fc = guarded(objective, xc, evals);
                if (fc <= fr) {
                    v[worst] = xc;
                    f[worst] = fc;
                } else {
                    shrink = true;
                }
            } else {
                Eigen::VectorXd xc = centroid + 0.5 * (v[worst] - centroid);
                double fc = guarded(objective, xc, evals);
                if (fc < f[worst]) {
                    v[worst] = xc;
                    f[worst] = fc;
                } else {
                    shrink = true;
                }
            }
            if (shrink) {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    v[i] = v[best] + 0.5 * (v[i] - v[best]);
                    f[i] = guarded(objective, v[i], evals);
                }
            }
        }
    }

    int best = order[0];
    out.x = v[best];
    out.f = f[best];
    out.evals = evals;
    out.iterations = iter;
    out.stop_reason = reason;
    return out;
}

BhhhResult bhhh(const Objective& total, const ScoreFn& scores, const Eigen::VectorXd& x0,
                const BhhhOptions& options) {
    BhhhResult out;
    out.x = x0;
    out.loglik = total(x0);
    if (!std::isfinite(out.loglik))
        throw_numeric("E_OPTIMIZER", "bhhh: objective not finite at the start");

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        Eigen::MatrixXd s = scores(out.x);
        Eigen::VectorXd g = s.colwise().sum().transpose();
        double ginf = g.cwiseAbs().maxCoeff();
        if (iter == 1) out.trace.push_back({0, out.loglik, 0.0, ginf});
        if (ginf < options.tol_grad) {
            out.status = BhhhStatus::converged;
            return out;
        }

        const int p = static_cast<int>(s.cols());
        Eigen::MatrixXd m = s.transpose() * s;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        double lmax = es.eigenvalues().maxCoeff();
        if (!(lmax > 0.0) || es.eigenvalues().minCoeff() <= 1e-12 * lmax) {
            m.diagonal().array() += 1e-8 * m.trace() / static_cast<double>(p);
            es.compute(m);
            lmax = es.eigenvalues().maxCoeff();
            out.ridged = true;
            if (!(lmax > 0.0) || es.eigenvalues().minCoeff() <= 1e-14 * lmax)
                throw_numeric("E_OPTIMIZER",
                              "bhhh: singular score outer-product matrix even after ridge");
        }
        Eigen::VectorXd d = es.eigenvectors() *
                            (es.eigenvectors().transpose() * g).cwiseQuotient(es.eigenvalues());

        // Halving search, best candidate wins: the outer-product direction
        // can overshoot when S'S underestimates the curvature, in which case
        // the first non-decreasing halving contracts far too slowly.
        double step = 1.0;
        double best_step = 0.0;
        double best_f = out.loglik;
        long dummy = 0;
        double prev = -kInf;
        for (int h = 0; h <= options.max_halvings; ++h) {
            double f_new = guarded(total, out.x + step * d, dummy);
            if (f_new != kInf && f_new > best_f) {
                best_f = f_new;
                best_step = step;
            }
            if (best_step > 0.0 && f_new != kInf && f_new < prev) break;
            prev = f_new == kInf ? -kInf : f_new;
            step *= 0.5;
        }
        if (best_step == 0.0) {
            out.status = BhhhStatus::no_ascent;
            return out;
        }
        out.x += best_step * d;
        out.loglik = best_f;
        out.trace.push_back({iter, best_f, best_step, ginf});
    }
    out.status = BhhhStatus::max_iterations;
    return out;
}

Eigen::VectorXd default_start(const ModelSpec& spec) {
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(spec.param_count());
    psi(spec.kappa_market_offset()) = spec.price_form == PriceForm::exponential ? 0.5 : 2.0;
    for (int i = 0; i < spec.n_series(); ++i) {
        psi(spec.a_offset() + i) = 0.3;
        psi(spec.b_offset() + i) = 0.8;
    }
    return psi;
}

namespace {

EstimationResult estimate_pass(const ModelSpec& spec, const AlignedDataset& data,
                               const Eigen::MatrixXd& h0, const Eigen::VectorXd& x0,
                               const EstimateOptions& options) {
    const int p = spec.param_count();
    const int t_obs = data.n_obs();
    const auto names = spec.param_names();

    // Penalized objective: the admissibility hinge plus a push-back on the
    // exponential price argument once it enters the clamp range, where the
    // raw likelihood turns exactly flat and ascent directions vanish.
    auto penalty_at = [&](const Parameters& params) {
        double pen = garch::admissibility_penalty(params.a, params.b, h0);
        if (spec.price_form == PriceForm::exponential) {
            double s = 0.0;
            for (int t = 0; t < t_obs; ++t) {
                double inner = data.instruments.row(t).dot(params.kappa_market);
                double excess = std::fabs(inner) - 30.0;
                if (excess > 0.0) s += excess * excess;
            }
            pen += 1e4 * s;
        }
        return pen;
    };
    auto penalized_total = [&](const Eigen::VectorXd& x) {
        Parameters params = Parameters::unflatten(spec, x);
        return likelihood::loglik(spec, params, data, &h0).total - penalty_at(params);
    };
    auto penalized_contributions = [&](const Eigen::VectorXd& x) {
        Parameters params = Parameters::unflatten(spec, x);
        likelihood::Loglik ll = likelihood::loglik(spec, params, data, &h0);
        double pen_share = penalty_at(params) / static_cast<double>(t_obs);
        for (double& c : ll.contributions) c -= pen_share;
        return ll.contributions;
    };

    double f_start;
    try {
        f_start = penalized_total(x0);
    } catch (const Error& e) {
        throw_numeric("E_OPTIMIZER", std::string("objective not finite at the start: ") +
                                         e.what());
    }
    if (!std::isfinite(f_start))
        throw_numeric("E_OPTIMIZER", "objective not finite at the start");

    NelderMeadOptions nm;
    nm.max_evals = options.nm_max_evals > 0 ? options.nm_max_evals : 500L * p;
    nm.tol_f = options.nm_tol_f;
    nm.tol_x = options.nm_tol_x;
    nm.initial_scale = options.nm_initial_scale;
    Objective nm_objective = [&](const Eigen::VectorXd& x) { return -penalized_total(x); };
    NelderMeadResult warm = nelder_mead(nm_objective, x0, nm);

    BhhhOptions bo;
    bo.max_iter = options.bhhh_max_iter;
    bo.tol_grad = options.bhhh_tol_grad;
    ScoreFn score_fn = [&](const Eigen::VectorXd& x) {
        return likelihood::per_observation_scores(penalized_contributions, x,
                                                  options.score_rel_step, &names);
    };
    Eigen::VectorXd bhhh_start = std::isfinite(warm.f) ? warm.x : x0;
    BhhhResult polished = bhhh(penalized_total, score_fn, bhhh_start, bo);

    if (polished.loglik <= f_start && polished.status != BhhhStatus::converged) {
        std::ostringstream os;
        os << "optimization failed to improve on the start (loglik " << f_start << " -> "
           << polished.loglik << ", simplex stop: " << warm.stop_reason
           << ", ascent iterations: " << polished.trace.size() << ")";
        throw_numeric("E_OPTIMIZER", os.str());
    }

    EstimationResult res;
    res.spec = spec;
    res.psi = polished.x;
    res.h0 = h0;
    res.t_obs = t_obs;
    res.nm_evals = warm.evals;
    res.nm_objective = -warm.f;
    res.trace = polished.trace;
    if (polished.status == BhhhStatus::no_ascent)
        res.warnings.push_back("bhhh stopped without an ascent step (converged with warning)");
    if (polished.status == BhhhStatus::max_iterations)
        res.warnings.push_back("bhhh hit the iteration limit before the gradient tolerance");
    if (polished.ridged)
        res.warnings.push_back("bhhh applied a ridge to a singular score outer product");

    Parameters params = Parameters::unflatten(spec, res.psi);
    garch::Admissibility adm = garch::check_admissible(params.a, params.b, h0);
    if (!adm.ok) res.warnings.push_back("final estimate on/over the admissibility boundary: " +
                                        adm.describe());
    res.penalty = penalty_at(params);

    garch::FilterOptions fo;
    fo.keep_paths = true;
    fo.h0_override = &h0;
    garch::FilterResult filtered = garch::filter(spec, params, data, fo);
    res.loglik = filtered.loglik;
    res.mu = std::move(filtered.mu);
    res.eps = std::move(filtered.eps);
    res.h = std::move(filtered.h);
    res.delta_market = std::move(filtered.delta_market);
    res.delta_currency = std::move(filtered.delta_currency);
    if (filtered.clamp_events > 0)
        res.warnings.push_back("exponential market-price argument clamped " +
                               std::to_string(filtered.clamp_events) + " time(s)");
    if (filtered.jitter_events > 0)
        res.warnings.push_back("covariance factorization needed a diagonal bump " +
                               std::to_string(filtered.jitter_events) + " time(s)");

    // Sandwich covariance from the raw (unpenalized) likelihood.
    auto raw_total = [&](const Eigen::VectorXd& x) {
        return likelihood::loglik(spec, Parameters::unflatten(spec, x), data, &h0).total;
    };
    auto raw_contributions = [&](const Eigen::VectorXd& x) {
        return likelihood::loglik(spec, Parameters::unflatten(spec, x), data, &h0)
            .contributions;
    };
    Eigen::MatrixXd s = likelihood::per_observation_scores(raw_contributions, res.psi,
                                                           options.score_rel_step, &names);
    Eigen::MatrixXd b_mat = s.transpose() * s / static_cast<double>(t_obs);
    Eigen::MatrixXd a_mat = likelihood::negative_average_hessian(raw_total, res.psi, t_obs);
    res.vcov = likelihood::robust_covariance(a_mat, b_mat, t_obs);
    res.se.resize(p);
    bool clamped_var = false;
    for (int i = 0; i < p; ++i) {
        double v = res.vcov(i, i);
        if (v < 0.0) {
            clamped_var = true;
            v = 0.0;
        }
        res.se(i) = std::sqrt(v);
    }
    if (clamped_var)
        res.warnings.push_back("negative sandwich variance clamped to zero for some parameter");
    return res;
}

}  // namespace

EstimationResult estimate(const ModelSpec& spec, const AlignedDataset& data,
                          const EstimateOptions& options) {
    spec.validate();
    if (data.n_series() != spec.n_series() || data.n_assets() != spec.n_assets ||
        data.n_currencies() != spec.n_currencies)
        throw_input("E_OPTIMIZER", "dataset layout does not match the model specification");
    if (static_cast<int>(data.instruments.cols()) != spec.n_instruments)
        throw_input("E_OPTIMIZER", "instrument count does not match the model specification");
    const int p = spec.param_count();
    if (data.n_obs() < p)
        throw_input("E_OPTIMIZER", "insufficient observations: T=" +
                                       std::to_string(data.n_obs()) + " < P=" +
                                       std::to_string(p));

    Eigen::VectorXd x0 = options.start ? *options.start : default_start(spec);
    if (x0.size() != p)
        throw_input("E_OPTIMIZER", "start vector has wrong length");

    EstimationResult res = estimate_pass(spec, data, data.h0, x0, options);
    if (options.two_step_h0) {
        Eigen::MatrixXd h0_two =
            res.eps.transpose() * res.eps / static_cast<double>(res.t_obs);
        EstimationResult second = estimate_pass(spec, data, h0_two, res.psi, options);
        second.warnings.push_back("two-step: covariance target re-estimated from residuals");
        return second;
    }
    return res;
}

}  // namespace icapm::opt
