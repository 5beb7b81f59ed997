#include "icapm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "icapm/error.hpp"

namespace icapm {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw_input("E_CONFIG", "bad number '" + v + "' for key '" + key + "'");
    return out;
}

long to_long(const std::string& v, const std::string& key) {
    long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw_input("E_CONFIG", "bad integer '" + v + "' for key '" + key + "'");
    return out;
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw_input("E_CONFIG", "bad boolean '" + v + "' for key '" + key + "'");
}

std::vector<std::string> split_ws(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

Eigen::VectorXd to_vector(const std::string& v, const std::string& key) {
    auto toks = split_ws(v);
    if (toks.empty()) throw_input("E_CONFIG", "empty vector for key '" + key + "'");
    Eigen::VectorXd out(static_cast<int>(toks.size()));
    for (size_t i = 0; i < toks.size(); ++i) out(static_cast<int>(i)) = to_double(toks[i], key);
    return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig cfg;
    cfg.text = text;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw_input("E_CONFIG", "bad section header at line " + std::to_string(lineno));
            section = trim(s.substr(1, s.size() - 2));
            if (section != "model" && section != "roles" && section != "instruments" &&
                section != "optimizer" && section != "premia" && section != "simulate" &&
                section != "mc")
                throw_input("E_CONFIG", "unknown config section '" + section + "'");
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw_input("E_CONFIG", "expected key = value at line " + std::to_string(lineno));
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty())
            throw_input("E_CONFIG", "empty key or value at line " + std::to_string(lineno));

        if (section == "model") {
            if (key == "variant") cfg.variant = variant_from_string(value);
            else if (key == "price_form") cfg.price_form = price_form_from_string(value);
            else throw_input("E_CONFIG", "unknown key '" + key + "' in [model]");
        } else if (section == "roles") {
            cfg.roles[key] = role_from_string(value);
        } else if (section == "instruments") {
            if (key == "add_constant") cfg.add_constant = to_bool(value, key);
            else throw_input("E_CONFIG", "unknown key '" + key + "' in [instruments]");
        } else if (section == "optimizer") {
            if (key == "nm_max_evals") cfg.estimate.nm_max_evals = to_long(value, key);
            else if (key == "nm_tol_f") cfg.estimate.nm_tol_f = to_double(value, key);
            else if (key == "nm_tol_x") cfg.estimate.nm_tol_x = to_double(value, key);
            else if (key == "nm_initial_scale")
                cfg.estimate.nm_initial_scale = to_double(value, key);
            else if (key == "bhhh_max_iter")
                cfg.estimate.bhhh_max_iter = static_cast<int>(to_long(value, key));
            else if (key == "bhhh_tol_grad") cfg.estimate.bhhh_tol_grad = to_double(value, key);
            else if (key == "score_rel_step")
                cfg.estimate.score_rel_step = to_double(value, key);
            else if (key == "two_step_h0") cfg.estimate.two_step_h0 = to_bool(value, key);
            else throw_input("E_CONFIG", "unknown key '" + key + "' in [optimizer]");
        } else if (section == "premia") {
            if (key == "breaks") {
                cfg.breaks.clear();
                for (const auto& tok : split_ws(value)) cfg.breaks.push_back(YearMonth::parse(tok));
            } else if (key == "hac") {
                cfg.hac = to_bool(value, key);
            } else if (key == "hp_lambda") {
                cfg.hp_lambda = to_double(value, key);
            } else {
                throw_input("E_CONFIG", "unknown key '" + key + "' in [premia]");
            }
        } else if (section == "simulate") {
            auto& sc = cfg.simulate;
            if (key == "t") sc.t_obs = static_cast<int>(to_long(value, key));
            else if (key == "seed") sc.seed = static_cast<std::uint64_t>(to_long(value, key));
            else if (key == "n_assets") sc.n_assets = static_cast<int>(to_long(value, key));
            else if (key == "n_currencies")
                sc.n_currencies = static_cast<int>(to_long(value, key));
            else if (key == "n_instruments")
                sc.n_instruments = static_cast<int>(to_long(value, key));
            else if (key == "instrument_process") {
                if (value == "constant") sc.process = sim::InstrumentProcess::constant_only;
                else if (value == "ar1") sc.process = sim::InstrumentProcess::gaussian_ar1;
                else throw_input("E_CONFIG", "instrument_process must be constant or ar1");
            } else if (key == "ar_rho") sc.ar_rho = to_double(value, key);
            else if (key == "ar_scale") sc.ar_scale = to_double(value, key);
            else if (key == "start") sc.start = YearMonth::parse(value);
            else if (key == "names") sc.names = split_ws(value);
            else if (key == "kappa_w") sc.kappa_market = to_vector(value, key);
            else if (key.rfind("kappa_", 0) == 0) {
                long k = to_long(key.substr(6), key);
                if (k < 1) throw_input("E_CONFIG", "currency index in '" + key + "' must be >= 1");
                if (static_cast<size_t>(k) > sc.kappa_currency.size())
                    sc.kappa_currency.resize(static_cast<size_t>(k));
                sc.kappa_currency[static_cast<size_t>(k - 1)] = to_vector(value, key);
            } else if (key == "delta_d") sc.domestic_price = to_vector(value, key);
            else if (key == "alpha") sc.alpha = to_vector(value, key);
            else if (key == "phi") sc.phi = to_vector(value, key);
            else if (key == "a") sc.a = to_vector(value, key);
            else if (key == "b") sc.b = to_vector(value, key);
            else if (key == "h0") sc.h0_rowmajor = to_vector(value, key);
            else throw_input("E_CONFIG", "unknown key '" + key + "' in [simulate]");
        } else if (section == "mc") {
            if (key == "reps") cfg.mc_reps = static_cast<int>(to_long(value, key));
            else if (key == "threads") cfg.mc_threads = static_cast<int>(to_long(value, key));
            else throw_input("E_CONFIG", "unknown key '" + key + "' in [mc]");
        } else {
            throw_input("E_CONFIG", "key '" + key + "' outside any section");
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_input("E_CONFIG", "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

sim::SimulationConfig RunConfig::simulation_config() const {
    const auto& sc = simulate;
    sim::SimulationConfig out;
    out.spec.variant = variant;
    out.spec.price_form = price_form;
    out.spec.n_assets = sc.n_assets;
    out.spec.n_currencies = sc.n_currencies;
    out.spec.n_instruments = sc.n_instruments;
    if (!sc.names.empty()) {
        if (static_cast<int>(sc.names.size()) != out.spec.n_series())
            throw_input("E_CONFIG", "[simulate] names must list one name per series");
        out.spec.series_names = sc.names;
    }
    out.spec.validate();

    const int n = out.spec.n_series();
    const int j = out.spec.n_instruments;
    auto take = [&](const std::optional<Eigen::VectorXd>& v, int len, const std::string& key,
                    double fill = 0.0) {
        if (!v) return Eigen::VectorXd::Constant(len, fill).eval();
        if (v->size() != len)
            throw_input("E_CONFIG", "[simulate] " + key + " needs " + std::to_string(len) +
                                        " values, got " + std::to_string(v->size()));
        return *v;
    };

    Parameters params;
    params.kappa_market = take(sc.kappa_market, j, "kappa_w");
    params.kappa_currency.setZero(out.spec.n_currencies, j);
    if (static_cast<int>(sc.kappa_currency.size()) > out.spec.n_currencies)
        throw_input("E_CONFIG", "[simulate] kappa_<k> index exceeds n_currencies");
    for (size_t k = 0; k < sc.kappa_currency.size(); ++k) {
        if (sc.kappa_currency[k].size() == 0) continue;
        if (sc.kappa_currency[k].size() != j)
            throw_input("E_CONFIG", "[simulate] kappa_" + std::to_string(k + 1) + " needs " +
                                        std::to_string(j) + " values");
        params.kappa_currency.row(static_cast<int>(k)) = sc.kappa_currency[k].transpose();
    }
    if (out.spec.has_domestic())
        params.domestic_price = take(sc.domestic_price, out.spec.n_assets, "delta_d");
    if (out.spec.has_augmented_terms()) {
        params.alpha = take(sc.alpha, out.spec.n_assets, "alpha");
        params.phi = take(sc.phi, out.spec.phi_size(), "phi");
    }
    params.a = take(sc.a, n, "a", 0.3);
    params.b = take(sc.b, n, "b", 0.8);
    out.params = std::move(params);

    if (sc.h0_rowmajor) {
        if (sc.h0_rowmajor->size() != n * n)
            throw_input("E_CONFIG", "[simulate] h0 needs " + std::to_string(n * n) +
                                        " row-major values");
        out.h0.resize(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) out.h0(r, c) = (*sc.h0_rowmajor)(r * n + c);
        if (!out.h0.isApprox(out.h0.transpose(), 1e-12))
            throw_input("E_CONFIG", "[simulate] h0 must be symmetric");
    } else {
        out.h0 = Eigen::MatrixXd::Identity(n, n) * 0.002;
    }

    out.t_obs = sc.t_obs;
    out.seed = sc.seed;
    out.instrument_process = sc.process;
    out.ar_rho = sc.ar_rho;
    out.ar_scale = sc.ar_scale;
    out.start = sc.start;
    return out;
}

}  // namespace icapm
