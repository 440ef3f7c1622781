#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "icos/math_util.hpp"

namespace icos {

enum class Right { call, put };

/// Black-76 forms quoted off the forward: C = e^{-rT}(F N(d1) - K N(d2)).
namespace black {

inline double d1(double forward, double strike, double sigma, double t) {
    return (std::log(forward / strike) + 0.5 * sigma * sigma * t) / (sigma * std::sqrt(t));
}

inline double call(double forward, double strike, double sigma, double rate, double t) {
    if (sigma <= 0.0 || t <= 0.0)
        return std::exp(-rate * t) * std::max(forward - strike, 0.0);
    double d1v = d1(forward, strike, sigma, t);
    double d2v = d1v - sigma * std::sqrt(t);
    return std::exp(-rate * t) * (forward * norm_cdf(d1v) - strike * norm_cdf(d2v));
}

inline double put(double forward, double strike, double sigma, double rate, double t) {
    if (sigma <= 0.0 || t <= 0.0)
        return std::exp(-rate * t) * std::max(strike - forward, 0.0);
    double d1v = d1(forward, strike, sigma, t);
    double d2v = d1v - sigma * std::sqrt(t);
    return std::exp(-rate * t) * (strike * norm_cdf(-d2v) - forward * norm_cdf(-d1v));
}

inline double price(double forward, double strike, double sigma, double rate, double t, Right right) {
    return right == Right::call ? call(forward, strike, sigma, rate, t)
                                : put(forward, strike, sigma, rate, t);
}

/// OTM convention used throughout: put if K <= F, call if K > F.
inline double otm(double forward, double strike, double sigma, double rate, double t) {
    return strike <= forward ? put(forward, strike, sigma, rate, t)
                             : call(forward, strike, sigma, rate, t);
}

inline double vega(double forward, double strike, double sigma, double rate, double t) {
    double d1v = d1(forward, strike, sigma, t);
    return std::exp(-rate * t) * forward * norm_pdf(d1v) * std::sqrt(t);
}

/// Spot delta of a call (no dividends, F = S0 e^{rT}): N(d1).
inline double call_delta(double forward, double strike, double sigma, double t) {
    return norm_cdf(d1(forward, strike, sigma, t));
}

/// dC/dK evaluated at `strike`: -e^{-rT} N(d2).
inline double call_strike_slope(double forward, double strike, double sigma, double rate, double t) {
    double d2v = d1(forward, strike, sigma, t) - sigma * std::sqrt(t);
    return -std::exp(-rate * t) * norm_cdf(d2v);
}

/// dP/dK evaluated at `strike`: e^{-rT} N(-d2).
inline double put_strike_slope(double forward, double strike, double sigma, double rate, double t) {
    double d2v = d1(forward, strike, sigma, t) - sigma * std::sqrt(t);
    return std::exp(-rate * t) * norm_cdf(-d2v);
}

/// Density of y = log S_T: normal with mean log F - sigma^2 T / 2, variance sigma^2 T.
inline double logprice_density(double y, double forward, double sigma, double t) {
    double s = sigma * std::sqrt(t);
    double mean = std::log(forward) - 0.5 * sigma * sigma * t;
    return norm_pdf((y - mean) / s) / s;
}

}  // namespace black

}  // namespace icos
