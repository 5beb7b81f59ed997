#include "report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "icapm/descriptive.hpp"
#include "icapm/error.hpp"
#include "icapm/stats.hpp"

namespace icapm::cli {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string num(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_input("E_IO", "cannot read input file '" + path + "'");
    std::uint64_t hash = 14695981039346656037ULL;
    char c;
    while (in.get(c)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_input("E_IO", "cannot write output file '" + path + "'");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_input("E_IO", "cannot read input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::vector<std::string>& input_paths,
                    const std::vector<std::string>& outputs, const std::string& config_echo,
                    std::uint64_t seed, bool has_seed) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    ordered_json inputs = ordered_json::array();
    for (const auto& p : input_paths)
        inputs.push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
    j["inputs"] = std::move(inputs);
    j["outputs"] = outputs;
    j["config_echo"] = config_echo;
    if (has_seed) j["seed"] = seed;
    auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    write_file((std::filesystem::path(out_dir) / "manifest.json").string(), j.dump(1) + "\n");
}

DescribeReport describe_report(const std::vector<std::string>& names,
                               const std::vector<std::vector<double>>& columns,
                               const std::string& market_name) {
    const int n = static_cast<int>(names.size());
    const int t_obs = static_cast<int>(columns.at(0).size());
    const int acf_lags = std::min(6, t_obs - 2);
    const int q_lags = std::min(12, t_obs - 2);
    const int xcf_lags = std::min(6, t_obs / 3);
    int market = -1;
    for (int i = 0; i < n; ++i)
        if (names[i] == market_name) market = i;
    if (!market_name.empty() && market < 0)
        throw_input("E_CONFIG", "market series '" + market_name + "' absent from data");

    std::ostringstream text;
    ordered_json j;
    j["schema_version"] = 1;
    j["T"] = t_obs;
    j["q_lags"] = q_lags;

    text << "# Panel A: summary statistics (T=" << t_obs << ")\n";
    text << "series\tmean_pct_yr\tsd_pct_yr\tskewness\texcess_kurtosis\tjarque_bera\tq"
         << q_lags << "\n";
    ordered_json panel_a = ordered_json::array();
    for (int i = 0; i < n; ++i) {
        Moments m = moments(columns[i]);
        Annualized ann = annualize(m.mean, m.sd);
        TestStat jb = jarque_bera(columns[i]);
        TestStat q = ljung_box(columns[i], q_lags);
        double t_skew = m.skewness / std::sqrt(6.0 / t_obs);
        double t_kurt = m.excess_kurtosis / std::sqrt(24.0 / t_obs);
        text << names[i] << '\t' << fixed(ann.mean_pct_per_year, 2) << '\t'
             << fixed(ann.sd_pct_per_year, 2) << '\t' << fixed(m.skewness, 2)
             << stats::stars_from_zscore(t_skew) << '\t' << fixed(m.excess_kurtosis, 2)
             << stats::stars_from_zscore(t_kurt) << '\t' << fixed(jb.stat, 2)
             << stats::stars_from_pvalue(jb.p_value) << '\t' << fixed(q.stat, 2)
             << stats::stars_from_pvalue(q.p_value) << '\n';
        panel_a.push_back({{"series", names[i]},
                           {"mean_pct_per_year", ann.mean_pct_per_year},
                           {"sd_pct_per_year", ann.sd_pct_per_year},
                           {"skewness", m.skewness},
                           {"excess_kurtosis", m.excess_kurtosis},
                           {"jarque_bera", jb.stat},
                           {"jarque_bera_p", jb.p_value},
                           {"ljung_box", q.stat},
                           {"ljung_box_p", q.p_value}});
    }
    j["summary"] = std::move(panel_a);

    text << "# Panel B: correlations\n";
    text << "series";
    for (int i = 0; i < n; ++i) text << '\t' << names[i];
    text << '\n';
    ordered_json corr_rows = ordered_json::array();
    for (int i = 0; i < n; ++i) {
        text << names[i];
        ordered_json row = ordered_json::array();
        for (int k = 0; k < n; ++k) {
            double c = k == i ? 1.0 : cross_correlations(columns[i], columns[k], 0)[0];
            row.push_back(c);
            if (k < i) text << '\t';
            else text << '\t' << fixed(c, 2);
        }
        text << '\n';
        corr_rows.push_back(std::move(row));
    }
    j["correlations"] = std::move(corr_rows);

    auto acf_panel = [&](const char* title, const char* key, bool squared) {
        text << "# " << title << "\n";
        text << "lag";
        for (int i = 0; i < n; ++i) text << '\t' << names[i];
        text << '\n';
        std::vector<std::vector<double>> acfs(n);
        for (int i = 0; i < n; ++i) {
            std::vector<double> x = columns[i];
            if (squared)
                for (double& v : x) v *= v;
            acfs[i] = autocorrelations(x, acf_lags);
        }
        ordered_json block;
        for (int lag = 1; lag <= acf_lags; ++lag) {
            text << lag;
            for (int i = 0; i < n; ++i) {
                double r = acfs[i][lag - 1];
                text << '\t' << fixed(r, 3)
                     << stats::stars_from_zscore(r * std::sqrt(static_cast<double>(t_obs)));
            }
            text << '\n';
        }
        for (int i = 0; i < n; ++i) block[names[i]] = acfs[i];
        j[key] = std::move(block);
    };
    acf_panel("Panel C: autocorrelations of returns", "autocorrelations", false);
    acf_panel("Panel D: autocorrelations of squared returns", "autocorrelations_squared", true);

    if (market >= 0) {
        text << "# Panel E: cross-correlations of squared series with squared "
             << names[market] << "\n";
        text << "lag";
        for (int i = 0; i < n; ++i)
            if (i != market) text << '\t' << names[i];
        text << '\n';
        std::vector<double> msq = columns[market];
        for (double& v : msq) v *= v;
        std::vector<std::vector<double>> xcfs(n);
        ordered_json block;
        for (int i = 0; i < n; ++i) {
            if (i == market) continue;
            std::vector<double> sq = columns[i];
            for (double& v : sq) v *= v;
            xcfs[i] = cross_correlations(sq, msq, xcf_lags);
            block[names[i]] = xcfs[i];
        }
        for (int lag = -xcf_lags; lag <= xcf_lags; ++lag) {
            text << lag;
            for (int i = 0; i < n; ++i) {
                if (i == market) continue;
                double r = xcfs[i][lag + xcf_lags];
                text << '\t' << fixed(r, 3)
                     << stats::stars_from_zscore(r * std::sqrt(static_cast<double>(t_obs)));
            }
            text << '\n';
        }
        j["cross_correlations_squared"] = std::move(block);
    }

    DescribeReport out;
    out.text = text.str();
    out.json = std::move(j);
    return out;
}

std::string estimate_text(const opt::EstimationResult& result) {
    std::ostringstream os;
    auto names = result.spec.param_names();
    os << "parameter\testimate\tse\tt\n";
    for (int i = 0; i < result.psi.size(); ++i) {
        double t = result.se(i) > 0.0 ? result.psi(i) / result.se(i) : 0.0;
        os << names[i] << '\t' << fixed(result.psi(i), 6) << '\t' << fixed(result.se(i), 6)
           << '\t' << fixed(t, 2) << stats::stars_from_zscore(t) << '\n';
    }
    os << "loglik\t" << fixed(result.loglik, 4) << '\n';
    os << "penalty\t" << num(result.penalty) << '\n';
    os << "T\t" << result.t_obs << '\n';
    os << "simplex_evals\t" << result.nm_evals << '\n';
    os << "ascent_iterations\t" << (result.trace.empty() ? 0 : result.trace.back().iter)
       << '\n';
    for (const auto& w : result.warnings) os << "warning\t" << w << '\n';
    return os.str();
}

std::string trace_csv(const opt::EstimationResult& result) {
    std::ostringstream os;
    os << "iter,loglik,step,grad_inf\n";
    for (const auto& row : result.trace)
        os << row.iter << ',' << num(row.loglik) << ',' << num(row.step) << ','
           << num(row.grad_inf) << '\n';
    return os.str();
}

std::string filtered_h_csv(const opt::EstimationResult& result,
                           const std::vector<YearMonth>& dates) {
    std::ostringstream os;
    os << "date,i,j,value\n";
    const auto& spec = result.spec;
    for (size_t t = 0; t < result.h.size(); ++t)
        for (int i = 0; i < spec.n_series(); ++i)
            for (int k = i; k < spec.n_series(); ++k)
                os << dates[t].str() << ',' << spec.series_label(i) << ','
                   << spec.series_label(k) << ',' << num(result.h[t](i, k)) << '\n';
    return os.str();
}

std::string battery_text(const std::vector<inference::BatteryRow>& rows) {
    std::ostringstream os;
    os << "hypothesis\tstat\tdf\tp_value\n";
    for (const auto& row : rows) {
        if (row.skipped) {
            os << row.label << '\t' << row.note << "\t\t\n";
        } else {
            os << row.label << '\t' << fixed(row.stat, 3) << '\t' << row.df << '\t'
               << fixed(row.p_value, 4) << stats::stars_from_pvalue(row.p_value) << '\n';
        }
    }
    return os.str();
}

ordered_json battery_json(const std::vector<inference::BatteryRow>& rows) {
    ordered_json out = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r;
        r["label"] = row.label;
        if (row.skipped) {
            r["skipped"] = true;
            r["note"] = row.note;
        } else {
            r["stat"] = row.stat;
            r["df"] = row.df;
            r["p_value"] = row.p_value;
        }
        out.push_back(std::move(r));
    }
    return out;
}

PremiaOutputs premia_outputs(const LoadedResult& result, const premia::Decomposition& d,
                             const std::vector<YearMonth>& breaks, bool hac,
                             double hp_lambda) {
    const ModelSpec& spec = result.spec;
    const int t_obs = static_cast<int>(result.dates.size());
    PremiaOutputs out;

    std::vector<std::pair<std::string, const Eigen::MatrixXd*>> components = {
        {"PT", &d.total}, {"PRM", &d.market}, {"PRC", &d.currency}};
    if (spec.has_domestic()) components.push_back({"PRD", &d.domestic});

    std::ostringstream lcsv;
    lcsv << "date,series,component,value\n";
    for (int t = 0; t < t_obs; ++t)
        for (int i = 0; i < spec.n_series(); ++i)
            for (const auto& [label, m] : components)
                lcsv << result.dates[t].str() << ',' << spec.series_label(i) << ',' << label
                     << ',' << num((*m)(t, i)) << '\n';
    out.long_csv = lcsv.str();

    premia::HpResult hp = premia::hp_filter(result.delta_market, hp_lambda);
    std::ostringstream pcsv;
    pcsv << "date,market_price,market_price_trend,market_price_cycle";
    for (int k = 0; k < spec.n_currencies; ++k) pcsv << ',' << spec.currency_label(k);
    pcsv << '\n';
    for (int t = 0; t < t_obs; ++t) {
        pcsv << result.dates[t].str() << ',' << num(result.delta_market(t)) << ','
             << num(hp.trend(t)) << ',' << num(hp.cycle(t));
        for (int k = 0; k < spec.n_currencies; ++k)
            pcsv << ',' << num(result.delta_currency(t, k));
        pcsv << '\n';
    }
    out.prices_csv = pcsv.str();

    std::ostringstream table;
    table << "series\tcomponent\tperiod\tmean_pct_yr\tse_pct_yr\n";
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < spec.n_series(); ++i) {
        for (const auto& [label, m] : components) {
            Eigen::VectorXd series = m->col(i);
            auto summary = premia::subperiod_summary(series, result.dates, breaks, hac);
            for (const auto& row : summary) {
                table << spec.series_label(i) << '\t' << label << '\t' << row.label << '\t'
                      << fixed(row.mean_pct_per_year, 3) << row.stars << '\t'
                      << fixed(row.se_pct_per_year, 3) << '\n';
                rows.push_back({{"series", spec.series_label(i)},
                                {"component", label},
                                {"period", row.label},
                                {"mean_pct_per_year", row.mean_pct_per_year},
                                {"se_pct_per_year", row.se_pct_per_year},
                                {"stars", row.stars}});
            }
        }
    }
    out.summary_text = table.str();
    out.summary_json["schema_version"] = 1;
    out.summary_json["hac"] = hac;
    out.summary_json["hp_lambda"] = hp_lambda;
    out.summary_json["rows"] = std::move(rows);
    return out;
}

std::string mc_text(const sim::McReport& report) {
    std::ostringstream os;
    os << "replications\t" << report.reps << "\nfailures\t" << report.failures << "\nT\t"
       << report.t_obs << "\nwall_seconds\t" << fixed(report.wall_seconds, 1) << '\n';
    os << "parameter\ttruth\tmean_bias\tmc_sd\tmean_se\tcoverage95\n";
    for (const auto& p : report.params)
        os << p.name << '\t' << fixed(p.truth, 4) << '\t' << fixed(p.mean_bias, 5) << '\t'
           << fixed(p.mc_sd, 5) << '\t' << fixed(p.mean_se, 5) << '\t'
           << fixed(p.coverage95, 3) << '\n';
    if (!report.size.empty()) {
        os << "hypothesis\tdf\trejection_rate_5pct\n";
        for (const auto& s : report.size)
            os << s.label << '\t' << s.df << '\t' << fixed(s.rejection_rate_5pct, 3) << '\n';
    }
    for (const auto& msg : report.failure_messages) os << "failure\t" << msg << '\n';
    return os.str();
}

ordered_json mc_json(const sim::McReport& report) {
    ordered_json j;
    j["schema_version"] = 1;
    j["replications"] = report.reps;
    j["failures"] = report.failures;
    j["T"] = report.t_obs;
    j["wall_seconds"] = report.wall_seconds;
    ordered_json params = ordered_json::array();
    for (const auto& p : report.params)
        params.push_back({{"name", p.name},
                          {"truth", p.truth},
                          {"mean_bias", p.mean_bias},
                          {"mc_sd", p.mc_sd},
                          {"mean_se", p.mean_se},
                          {"coverage95", p.coverage95}});
    j["parameters"] = std::move(params);
    ordered_json size = ordered_json::array();
    for (const auto& s : report.size)
        size.push_back(
            {{"label", s.label}, {"df", s.df}, {"rejection_rate_5pct", s.rejection_rate_5pct}});
    j["size"] = std::move(size);
    j["failure_messages"] = report.failure_messages;
    return j;
}

}  // namespace icapm::cli
