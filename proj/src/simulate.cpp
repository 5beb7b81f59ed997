#include "icapm/simulate.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "icapm/error.hpp"
#include "icapm/garch.hpp"
#include "icapm/inference.hpp"
#include "icapm/rng.hpp"
#include "icapm/stats.hpp"

namespace icapm::sim {

SimulationResult simulate(const SimulationConfig& config) {
    const ModelSpec& spec = config.spec;
    spec.validate();
    const int n = spec.n_series();
    const int j = spec.n_instruments;
    const int t_obs = config.t_obs;
    if (t_obs < 1) throw_input("E_SIMULATE", "simulate: T must be positive");
    if (config.h0.rows() != n || config.h0.cols() != n)
        throw_input("E_SIMULATE", "simulate: H0 dimension mismatch");
    garch::Admissibility adm =
        garch::check_admissible(config.params.a, config.params.b, config.h0);
    if (!adm.ok) throw_input("E_SIMULATE", "simulate: parameters " + adm.describe());
    if (config.instrument_process == InstrumentProcess::constant_only && j != 1)
        throw_input("E_SIMULATE", "constant-only instrument process needs J = 1");

    Rng rng(config.seed);

    // Instrument path z_0 .. z_{T-1}; z_{t-1} conditions return month t.
    Eigen::MatrixXd z(t_obs, j);
    z.col(0).setOnes();
    if (config.instrument_process == InstrumentProcess::gaussian_ar1) {
        double rho = config.ar_rho;
        double sd0 = std::fabs(rho) < 1.0
                         ? config.ar_scale / std::sqrt(1.0 - rho * rho)
                         : config.ar_scale;
        for (int t = 0; t < t_obs; ++t)
            for (int c = 1; c < j; ++c)
                z(t, c) = t == 0 ? sd0 * rng.gaussian()
                                 : rho * z(t - 1, c) + config.ar_scale * rng.gaussian();
    }

    Eigen::MatrixXd c = garch::intercept_matrix(config.h0, config.params.a, config.params.b);

    SimulationResult out;
    out.h.reserve(t_obs);
    out.mu.resize(t_obs, n);
    out.eps.resize(t_obs, n);
    Eigen::MatrixXd returns(t_obs, n);

    Eigen::MatrixXd h = config.h0;
    Eigen::VectorXd mu(n), eps(n), u(n);
    std::vector<double> prices(1 + spec.n_currencies);
    for (int t = 0; t < t_obs; ++t) {
        Eigen::VectorXd zrow = z.row(t).transpose();
        detail::conditional_mean_raw(spec, config.params, h.data(), zrow.data(), mu.data(),
                                     prices.data(), nullptr);
        Eigen::LLT<Eigen::MatrixXd> llt(h);
        if (llt.info() != Eigen::Success)
            throw_numeric("E_SIMULATE", "simulate: covariance factorization failed at t=" +
                                            std::to_string(t));
        for (int i = 0; i < n; ++i) u(i) = rng.gaussian();
        eps = llt.matrixL() * u;
        out.h.push_back(h);
        out.mu.row(t) = mu.transpose();
        out.eps.row(t) = eps.transpose();
        returns.row(t) = (mu + eps).transpose();
        h = garch::step(c, config.params.a, config.params.b, eps, h);
    }

    // Panels in the external format; instruments dated one month earlier.
    out.returns.dates.resize(t_obs);
    YearMonth d = config.start;
    for (int t = 0; t < t_obs; ++t, d = d.next()) out.returns.dates[t] = d;
    for (int i = 0; i < n; ++i) {
        ReturnsPanel::Series s;
        s.name = spec.series_label(i);
        s.role = i == spec.market_row()
                     ? SeriesRole::market
                     : (i < spec.n_assets ? SeriesRole::asset : SeriesRole::currency);
        s.values.resize(t_obs);
        for (int t = 0; t < t_obs; ++t) s.values[t] = returns(t, i);
        out.returns.series.push_back(std::move(s));
    }
    out.returns.validate();

    out.instruments.dates.resize(t_obs);
    d = config.start.prev();
    for (int t = 0; t < t_obs; ++t, d = d.next()) out.instruments.dates[t] = d;
    for (int col = 0; col < j; ++col) {
        InstrumentPanel::Variable v;
        v.name = spec.instrument_label(col);
        v.values.resize(t_obs);
        for (int t = 0; t < t_obs; ++t) v.values[t] = z(t, col);
        out.instruments.variables.push_back(std::move(v));
    }
    out.instruments.validate();
    return out;
}

namespace {

struct RepOutcome {
    bool ok = false;
    std::string message;
    Eigen::VectorXd psi;
    Eigen::VectorXd se;
    std::vector<double> pvalues;  // aligned with the tracked hypotheses
};

}  // namespace

McReport monte_carlo(const SimulationConfig& config, const McOptions& options) {
    if (options.reps < 2) throw_input("E_SIMULATE", "monte_carlo: reps >= 2 required");
    const ModelSpec& spec = config.spec;
    const Eigen::VectorXd psi_true = config.params.flatten(spec);
    const int p = spec.param_count();

    // Battery hypotheses satisfied exactly by the truth are the size targets.
    std::vector<inference::Restriction> tracked;
    for (const auto& r : inference::standard_restrictions(spec)) {
        Eigen::VectorXd rv =
            r.r_value.size() == 0 ? Eigen::VectorXd::Zero(r.r_matrix.rows()).eval() : r.r_value;
        if ((r.r_matrix * psi_true - rv).cwiseAbs().maxCoeff() == 0.0) tracked.push_back(r);
    }

    auto t0 = std::chrono::steady_clock::now();
    std::vector<RepOutcome> outcomes(options.reps);
    auto run_rep = [&](int rep) {
        RepOutcome& out = outcomes[rep];
        try {
            SimulationConfig rep_config = config;
            rep_config.seed = config.seed ^ static_cast<std::uint64_t>(rep);
            SimulationResult data = simulate(rep_config);
            AlignedDataset aligned = align(data.returns, data.instruments);
            opt::EstimationResult est = opt::estimate(spec, aligned, options.estimate);
            out.psi = est.psi;
            out.se = est.se;
            out.pvalues.reserve(tracked.size());
            for (const auto& r : tracked)
                out.pvalues.push_back(inference::wald(r, est.psi, est.vcov).p_value);
            out.ok = true;
        } catch (const Error& e) {
            out.message = e.line();
        } catch (const std::exception& e) {
            out.message = e.what();
        }
    };

    int threads = options.threads > 0
                      ? options.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, options.reps));
    if (threads == 1) {
        for (int rep = 0; rep < options.reps; ++rep) run_rep(rep);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&]() {
                for (int rep = next.fetch_add(1); rep < options.reps; rep = next.fetch_add(1))
                    run_rep(rep);
            });
        for (auto& th : pool) th.join();
    }

    McReport report;
    report.reps = options.reps;
    report.t_obs = config.t_obs;
    std::vector<const RepOutcome*> good;
    for (const RepOutcome& o : outcomes) {
        if (o.ok) {
            good.push_back(&o);
        } else {
            ++report.failures;
            report.failure_messages.push_back(o.message);
        }
    }
    if (good.size() < 2)
        throw_numeric("E_SIMULATE", "monte_carlo: fewer than 2 successful replications");

    const double n_good = static_cast<double>(good.size());
    const auto names = spec.param_names();
    for (int i = 0; i < p; ++i) {
        McParamStat stat;
        stat.name = names[i];
        stat.truth = psi_true(i);
        double mean = 0.0, mean_se = 0.0, covered = 0.0;
        for (const RepOutcome* o : good) {
            mean += o->psi(i);
            mean_se += o->se(i);
            if (std::fabs(o->psi(i) - psi_true(i)) <= stats::kCritical5pct * o->se(i))
                covered += 1.0;
        }
        mean /= n_good;
        mean_se /= n_good;
        double var = 0.0;
        for (const RepOutcome* o : good) var += (o->psi(i) - mean) * (o->psi(i) - mean);
        var /= (n_good - 1.0);
        stat.mean_bias = mean - psi_true(i);
        stat.mc_sd = std::sqrt(var);
        stat.mean_se = mean_se;
        stat.coverage95 = covered / n_good;
        report.params.push_back(std::move(stat));
    }
    for (size_t h = 0; h < tracked.size(); ++h) {
        McSizeStat s;
        s.label = tracked[h].label;
        s.df = static_cast<int>(tracked[h].r_matrix.rows());
        double rejections = 0.0;
        for (const RepOutcome* o : good)
            if (o->pvalues[h] < 0.05) rejections += 1.0;
        s.rejection_rate_5pct = rejections / n_good;
        report.size.push_back(std::move(s));
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace icapm::sim
