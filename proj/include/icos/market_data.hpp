#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icos/black_scholes.hpp"
#include "icos/quadrature.hpp"

namespace icos {

struct OptionQuote {
    double strike = 0.0;
    double bid = 0.0;
    double ask = 0.0;
    Right right = Right::call;

    double mid() const { return 0.5 * (bid + ask); }
};

/// One expiry's observed OTM strip: the sole estimation input.
/// Invariants: strikes strictly ascending, alpha = K_1 <= F <= K_n = beta,
/// put price stored for K <= F and call price for K > F, n >= 5.
struct OptionChain {
    double maturity = 0.0;   // year fraction
    double rate = 0.0;       // continuously compounded
    double forward = 0.0;
    std::vector<double> strikes;
    std::vector<double> otm_prices;
    GridKind grid;

    double alpha() const { return strikes.front(); }
    double beta() const { return strikes.back(); }
    int n() const { return static_cast<int>(strikes.size()); }
    double discount() const { return std::exp(-rate * maturity); }
    double spot() const { return forward * discount(); }

    /// Observed call price at strike index i (parity-reconstructed below F).
    double call_price(int i) const {
        double k = strikes[i];
        return k <= forward ? otm_prices[i] + discount() * (forward - k) : otm_prices[i];
    }

    void validate() const;
};

struct IngestConfig {
    std::optional<double> forward_override;
    int min_strikes = 5;
};

/// Reads the chain CSV `expiry_days,rate,forward,strike,right,bid,ask`
/// (right in {C,P}; blank forward triggers put-call-parity implication).
/// Zero-bid quotes are dropped; the OTM side is selected by the forward.
OptionChain load_chain(const std::string& path, const IngestConfig& config = {});

/// Writes a chain back out in the same CSV schema (bid = ask = stored price),
/// with enough digits that a reload reproduces the chain exactly.
void save_chain(const OptionChain& chain, const std::string& path);

/// F = K* + e^{rT}(C(K*) - P(K*)) at the strike minimizing |C - P|
/// (ties broken toward the lowest strike).
double imply_forward(const std::vector<OptionQuote>& calls, const std::vector<OptionQuote>& puts,
                     double rate, double maturity);

/// Black-Scholes implied volatility by bracketed bisection refined with Newton
/// steps; tolerance 1e-10 on price, sigma in [1e-6, 5]. Prices outside the
/// no-arbitrage bounds raise std::domain_error, never a silent clamp.
double implied_vol(double price, double forward, double strike, double rate, double maturity,
                   Right right);

/// Fits a natural cubic spline to (log K_i, BSIV_i), evaluates it on a uniform
/// m-point strike grid over [alpha, beta], and converts back to OTM prices.
/// The endpoint quotes are preserved exactly. Requires m >= n.
OptionChain spline_iv_regrid(const OptionChain& chain, int m);

}  // namespace icos
