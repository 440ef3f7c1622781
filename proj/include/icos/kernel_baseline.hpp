#pragma once

#include <vector>

#include "icos/market_data.hpp"

namespace icos {

/// Nadaraya-Watson comparison estimator: Gaussian-kernel smoothing of the BSIV
/// curve, converted back to prices; RND by second-order finite differences of
/// the smoothed call prices (Breeden-Litzenberger); delta as the Black-Scholes
/// delta at the locally smoothed vol (sticky-strike).
class NwSmoother {
public:
    /// Bandwidth h = (c / log n) n^{-1/(2p+1)} with p = 2, on strikes scaled
    /// by (beta - alpha). Quotes that cannot be BSIV-inverted (noise pushed
    /// them outside the no-arbitrage bounds) are skipped and counted.
    NwSmoother(const OptionChain& chain, double bandwidth_const);

    double smoothed_vol(double strike) const;
    double call_price(double strike) const;
    double otm_price(double strike) const;
    /// e^{rT} d2C/dK2 mapped to the log-price density f(y) = s f_S(s).
    double rnd_log(double y) const;
    double delta(double strike) const;

    int skipped_quotes() const { return skipped_; }
    double bandwidth() const { return bandwidth_; }

private:
    double forward_, rate_, maturity_;
    double lo_, hi_;       // spanned strike range
    double fd_step_;       // grid step used for the density finite differences
    double bandwidth_;     // in strike units
    std::vector<double> strikes_, vols_;
    int skipped_ = 0;
};

}  // namespace icos
