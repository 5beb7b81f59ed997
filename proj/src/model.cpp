#include "icapm/model.hpp"

#include <cmath>
#include <vector>

#include "icapm/error.hpp"

namespace icapm {

Variant variant_from_string(const std::string& s) {
    if (s == "integrated") return Variant::integrated;
    if (s == "segmented") return Variant::segmented;
    if (s == "augmented") return Variant::augmented;
    throw_input("E_CONFIG", "unknown variant '" + s + "' (integrated|segmented|augmented)");
}

std::string variant_to_string(Variant v) {
    switch (v) {
        case Variant::integrated: return "integrated";
        case Variant::segmented: return "segmented";
        case Variant::augmented: return "augmented";
    }
    return "?";
}

PriceForm price_form_from_string(const std::string& s) {
    if (s == "exponential") return PriceForm::exponential;
    if (s == "linear") return PriceForm::linear;
    throw_input("E_CONFIG", "unknown price form '" + s + "' (exponential|linear)");
}

std::string price_form_to_string(PriceForm f) {
    return f == PriceForm::exponential ? "exponential" : "linear";
}

void ModelSpec::validate() const {
    if (n_assets < 0) throw_input("E_MODEL", "negative asset count");
    if (n_currencies < 0) throw_input("E_MODEL", "negative currency count");
    if (n_instruments < 1) throw_input("E_MODEL", "model needs at least the constant instrument");
    if (!series_names.empty() && static_cast<int>(series_names.size()) != n_series())
        throw_input("E_MODEL", "series name count does not match layout");
    if (!instrument_names.empty() &&
        static_cast<int>(instrument_names.size()) != n_instruments)
        throw_input("E_MODEL", "instrument name count does not match layout");
}

std::string ModelSpec::series_label(int i) const {
    if (!series_names.empty()) return series_names[i];
    if (i == market_row()) return "market";
    if (i >= n_assets) return "currency" + std::to_string(i - n_assets + 1);
    return "asset" + std::to_string(i + 1);
}

std::string ModelSpec::instrument_label(int j) const {
    if (!instrument_names.empty()) return instrument_names[j];
    return j == 0 ? "const" : "z" + std::to_string(j);
}

std::vector<std::string> ModelSpec::param_names() const {
    std::vector<std::string> names;
    names.reserve(param_count());
    for (int j = 0; j < n_instruments; ++j)
        names.push_back("kappa_mkt[" + instrument_label(j) + "]");
    for (int k = 0; k < n_currencies; ++k)
        for (int j = 0; j < n_instruments; ++j)
            names.push_back("kappa_" + currency_label(k) + "[" + instrument_label(j) + "]");
    if (has_domestic())
        for (int i = 0; i < n_assets; ++i)
            names.push_back("delta_dom[" + series_label(i) + "]");
    if (has_augmented_terms()) {
        for (int i = 0; i < n_assets; ++i)
            names.push_back("alpha[" + series_label(i) + "]");
        for (int j = 1; j < n_instruments; ++j)
            names.push_back("phi[" + instrument_label(j) + "]");
    }
    for (int i = 0; i < n_series(); ++i) names.push_back("a[" + series_label(i) + "]");
    for (int i = 0; i < n_series(); ++i) names.push_back("b[" + series_label(i) + "]");
    return names;
}

Parameters Parameters::unflatten(const ModelSpec& spec, const Eigen::VectorXd& psi) {
    if (psi.size() != spec.param_count())
        throw_input("E_MODEL", "parameter vector length " + std::to_string(psi.size()) +
                                   " != expected " + std::to_string(spec.param_count()));
    Parameters p;
    int j = spec.n_instruments;
    p.kappa_market = psi.segment(spec.kappa_market_offset(), j);
    p.kappa_currency.resize(spec.n_currencies, j);
    for (int k = 0; k < spec.n_currencies; ++k)
        p.kappa_currency.row(k) = psi.segment(spec.kappa_currency_offset(k), j).transpose();
    if (spec.has_domestic())
        p.domestic_price = psi.segment(spec.domestic_offset(), spec.n_assets);
    if (spec.has_augmented_terms()) {
        p.alpha = psi.segment(spec.alpha_offset(), spec.n_assets);
        p.phi = psi.segment(spec.phi_offset(), spec.phi_size());
    }
    p.a = psi.segment(spec.a_offset(), spec.n_series());
    p.b = psi.segment(spec.b_offset(), spec.n_series());
    return p;
}

Eigen::VectorXd Parameters::flatten(const ModelSpec& spec) const {
    Eigen::VectorXd psi(spec.param_count());
    int j = spec.n_instruments;
    psi.segment(spec.kappa_market_offset(), j) = kappa_market;
    for (int k = 0; k < spec.n_currencies; ++k)
        psi.segment(spec.kappa_currency_offset(k), j) = kappa_currency.row(k).transpose();
    if (spec.has_domestic()) psi.segment(spec.domestic_offset(), spec.n_assets) = domestic_price;
    if (spec.has_augmented_terms()) {
        psi.segment(spec.alpha_offset(), spec.n_assets) = alpha;
        psi.segment(spec.phi_offset(), spec.phi_size()) = phi;
    }
    psi.segment(spec.a_offset(), spec.n_series()) = a;
    psi.segment(spec.b_offset(), spec.n_series()) = b;
    return psi;
}

namespace detail {

double market_price_raw(const double* kappa, const double* z, int n_instruments,
                        PriceForm form, bool* clamped) {
    double inner = 0.0;
    for (int j = 0; j < n_instruments; ++j) inner += kappa[j] * z[j];
    if (form == PriceForm::linear) return inner;
    if (inner > 30.0 || inner < -30.0) {
        if (clamped) *clamped = true;
        inner = inner > 30.0 ? 30.0 : -30.0;
    }
    return std::exp(inner);
}

void conditional_mean_raw(const ModelSpec& spec, const Parameters& params, const double* h,
                          const double* z, double* mu, double* prices, bool* clamped) {
    const int n = spec.n_series();
    const int j = spec.n_instruments;
    const int m = spec.market_row();

    double delta_m =
        market_price_raw(params.kappa_market.data(), z, j, spec.price_form, clamped);
    prices[0] = delta_m;
    for (int i = 0; i < n; ++i) mu[i] = delta_m * h[i * n + m];

    for (int k = 0; k < spec.n_currencies; ++k) {
        double delta_k = 0.0;
        for (int c = 0; c < j; ++c) delta_k += params.kappa_currency(k, c) * z[c];
        prices[1 + k] = delta_k;
        int col = spec.currency_row(k);
        for (int i = 0; i < n; ++i) mu[i] += delta_k * h[i * n + col];
    }

    if (spec.has_domestic()) {
        double hmm = h[m * n + m];
        if (hmm <= 0.0)
            throw_numeric("E_MODEL", "residual_risk: non-positive market variance");
        for (int i = 0; i < spec.n_assets; ++i) {
            double him = h[i * n + m];
            double q = h[i * n + i] - him * him / hmm;
            mu[i] += params.domestic_price(i) * q;
        }
    }

    if (spec.has_augmented_terms()) {
        double zphi = 0.0;
        for (int c = 1; c < j; ++c) zphi += params.phi(c - 1) * z[c];
        for (int i = 0; i < spec.n_assets; ++i) mu[i] += params.alpha(i) + zphi;
    }
}

}  // namespace detail

double market_price(const Eigen::VectorXd& kappa_market, const Eigen::VectorXd& z,
                    PriceForm form, bool* clamped) {
    if (kappa_market.size() != z.size())
        throw_input("E_MODEL", "market_price: weight/instrument dimension mismatch");
    return detail::market_price_raw(kappa_market.data(), z.data(),
                                    static_cast<int>(z.size()), form, clamped);
}

Eigen::VectorXd currency_prices(const Eigen::MatrixXd& kappa_currency,
                                const Eigen::VectorXd& z) {
    if (kappa_currency.cols() != z.size())
        throw_input("E_MODEL", "currency_prices: weight/instrument dimension mismatch");
    return kappa_currency * z;
}

Eigen::VectorXd residual_risk(const Eigen::MatrixXd& h, int market_index) {
    int n = static_cast<int>(h.rows());
    double hmm = h(market_index, market_index);
    if (hmm <= 0.0)
        throw_numeric("E_MODEL", "residual_risk: non-positive market variance");
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) {
        double him = h(i, market_index);
        q(i) = h(i, i) - him * him / hmm;
    }
    q(market_index) = 0.0;
    return q;
}

Eigen::VectorXd conditional_mean(const ModelSpec& spec, const Parameters& params,
                                 const Eigen::MatrixXd& h, const Eigen::VectorXd& z,
                                 bool* clamped) {
    int n = spec.n_series();
    if (h.rows() != n || h.cols() != n)
        throw_input("E_MODEL", "conditional_mean: covariance dimension mismatch");
    if (z.size() != spec.n_instruments)
        throw_input("E_MODEL", "conditional_mean: instrument dimension mismatch");
    Eigen::VectorXd mu(n);
    std::vector<double> prices(1 + spec.n_currencies);
    detail::conditional_mean_raw(spec, params, h.data(), z.data(), mu.data(), prices.data(),
                                 clamped);
    return mu;
}

}  // namespace icapm
