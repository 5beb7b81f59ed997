#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace icapm {

/// Pricing regimes. `integrated` prices world-market and currency
/// covariance risk only; `segmented` adds a priced domestic residual
/// variance per asset; `augmented` further adds per-asset intercepts and a
/// shared loading on the non-constant instruments (a misspecification
/// check: both blocks should be zero when the base model holds).
enum class Variant { integrated, segmented, augmented };

/// Functional form of the world-market price of risk: exponential keeps it
/// positive, linear is the unconstrained robustness variant. Currency
/// prices are always linear in the instruments.
enum class PriceForm { exponential, linear };

Variant variant_from_string(const std::string& s);
std::string variant_to_string(Variant v);
PriceForm price_form_from_string(const std::string& s);
std::string price_form_to_string(PriceForm f);

/// Model layout. Rows are ordered assets first, then currencies, market
/// last; instruments carry a leading constant. Domestic-risk prices and the
/// augmented intercept/instrument terms attach to asset rows only.
struct ModelSpec {
    Variant variant = Variant::integrated;
    PriceForm price_form = PriceForm::exponential;
    int n_assets = 0;
    int n_currencies = 0;
    int n_instruments = 0;

    // Presentation metadata, echoed into reports; may be left empty.
    std::vector<std::string> series_names;
    std::vector<std::string> instrument_names;

    int n_series() const { return n_assets + n_currencies + 1; }
    int market_row() const { return n_series() - 1; }
    int currency_row(int k) const { return n_assets + k; }

    bool has_domestic() const { return variant != Variant::integrated; }
    bool has_augmented_terms() const { return variant == Variant::augmented; }
    int phi_size() const { return has_augmented_terms() ? n_instruments - 1 : 0; }

    // Offsets into the flat parameter vector; order is fixed as
    // kappa_market, kappa_currency (per currency), domestic, alpha, phi, a, b.
    int kappa_market_offset() const { return 0; }
    int kappa_currency_offset(int k) const { return n_instruments * (1 + k); }
    int domestic_offset() const { return n_instruments * (1 + n_currencies); }
    int alpha_offset() const { return domestic_offset() + (has_domestic() ? n_assets : 0); }
    int phi_offset() const { return alpha_offset() + (has_augmented_terms() ? n_assets : 0); }
    int a_offset() const { return phi_offset() + phi_size(); }
    int b_offset() const { return a_offset() + n_series(); }
    int param_count() const { return b_offset() + n_series(); }

    std::vector<std::string> param_names() const;
    std::string series_label(int i) const;
    std::string instrument_label(int j) const;
    std::string currency_label(int k) const { return series_label(currency_row(k)); }

    void validate() const;
};

/// Structured view of the flat parameter vector psi.
struct Parameters {
    Eigen::VectorXd kappa_market;    // J weights of the market risk price
    Eigen::MatrixXd kappa_currency;  // L x J, row k = weights of currency k price
    Eigen::VectorXd domestic_price;  // n_assets (segmented/augmented), else empty
    Eigen::VectorXd alpha;           // n_assets (augmented), else empty
    Eigen::VectorXd phi;             // J-1 shared loadings on non-constant instruments
    Eigen::VectorXd a;               // N innovation loadings of the covariance recursion
    Eigen::VectorXd b;               // N persistence loadings

    static Parameters unflatten(const ModelSpec& spec, const Eigen::VectorXd& psi);
    Eigen::VectorXd flatten(const ModelSpec& spec) const;
};

/// Conditional world-market price of risk at one information row z
/// (z[0] = 1). Exponential form clamps the inner product to [-30, 30]
/// before exponentiation; *clamped is set when that fires.
double market_price(const Eigen::VectorXd& kappa_market, const Eigen::VectorXd& z,
                    PriceForm form, bool* clamped = nullptr);

/// Conditional currency risk prices, linear in the instruments.
Eigen::VectorXd currency_prices(const Eigen::MatrixXd& kappa_currency,
                                const Eigen::VectorXd& z);

/// Residual domestic risk q_i = H(i,i) - H(i,m)^2 / H(m,m); the market entry
/// is exactly zero.
Eigen::VectorXd residual_risk(const Eigen::MatrixXd& h, int market_index);

/// Conditional mean system: expected excess returns priced by covariances
/// with the market column and the currency columns of H, plus the
/// variant-specific terms on asset rows.
Eigen::VectorXd conditional_mean(const ModelSpec& spec, const Parameters& params,
                                 const Eigen::MatrixXd& h, const Eigen::VectorXd& z,
                                 bool* clamped = nullptr);

namespace detail {

/// Allocation-free cores shared with the covariance filter's hot loop.
/// `h` is a full symmetric n x n buffer, `prices` receives the market price
/// followed by the currency prices.
double market_price_raw(const double* kappa, const double* z, int n_instruments,
                        PriceForm form, bool* clamped);
void conditional_mean_raw(const ModelSpec& spec, const Parameters& params, const double* h,
                          const double* z, double* mu, double* prices, bool* clamped);

}  // namespace detail

}  // namespace icapm
