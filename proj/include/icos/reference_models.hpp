#pragma once

#include <complex>
#include <functional>

#include "icos/black_scholes.hpp"

namespace icos {

/// Black-Scholes ground truth for the Monte Carlo study.
struct BsModel {
    double spot = 4000.0;
    double rate = 0.0;
    double sigma = 0.3;
    double maturity = 30.0 / 365.0;

    double forward() const { return spot * std::exp(rate * maturity); }
    double call(double k) const { return black::call(forward(), k, sigma, rate, maturity); }
    double put(double k) const { return black::put(forward(), k, sigma, rate, maturity); }
    double otm(double k) const { return black::otm(forward(), k, sigma, rate, maturity); }
    double delta(double k) const { return black::call_delta(forward(), k, sigma, maturity); }
    double rnd_log(double y) const { return black::logprice_density(y, forward(), sigma, maturity); }
    double call_strike_slope(double k) const {
        return black::call_strike_slope(forward(), k, sigma, rate, maturity);
    }
    double put_strike_slope(double k) const {
        return black::put_strike_slope(forward(), k, sigma, rate, maturity);
    }
    std::complex<double> cf(std::complex<double> u) const;  // CF of log S_T
};

/// Double-jump stochastic volatility model (risk-neutral):
///   d log S = (r - v/2 - mu_bar*lambda) dt + sqrt(v) dW1 + J dN,
///   d v     = kappa (v_bar - v) dt + sigma_v sqrt(v) dW2 + Jv dN,
/// corr(W1,W2) = rho, J ~ N(mu_j, sigma_j^2), Jv ~ Exp(mu_v), J and Jv independent.
struct SvcjParams {
    double v0 = 0.01;
    double kappa = 2.6;
    double v_bar = 0.02;
    double rho = -0.95;
    double sigma_v = 0.3;
    double lambda = 1.0;
    double mu_j = -0.05;
    double sigma_j = 0.03;
    double mu_v = 0.05;

    double jump_mean() const {  // expected relative jump size in returns
        return std::exp(mu_j + 0.5 * sigma_j * sigma_j) - 1.0;
    }
    void validate() const;
};

/// Characteristic function of log S_T under SVCJ, from the affine closed form.
std::complex<double> svcj_cf(const SvcjParams& p, std::complex<double> u, double spot, double rate,
                             double maturity);

/// First cumulant of log S_T (used to center the COS truncation interval).
double svcj_log_mean(const SvcjParams& p, double spot, double rate, double maturity);

using CharFn = std::function<std::complex<double>(double)>;

/// Classic parametric COS price from a characteristic function of log S_T.
/// The truncation interval is [c1 - L sqrt(T), c1 + L sqrt(T)] around the
/// first cumulant c1 = log_mean.
double cos_price(const CharFn& cf, double log_mean, double strike, double rate, double maturity,
                 Right right, int terms = 1024, double interval_scale = 4.0);

/// Density of log S_T recovered from the characteristic function by the same
/// cosine expansion on the centered interval.
double cos_log_density(const CharFn& cf, double log_mean, double y, double maturity,
                       int terms = 1024, double interval_scale = 4.0);

// SVCJ ground-truth wrappers for the Monte Carlo tables.
double svcj_price(const SvcjParams& p, double spot, double rate, double maturity, double strike,
                  Right right, int terms = 1024);
double svcj_rnd_log(const SvcjParams& p, double spot, double rate, double maturity, double y,
                    int terms = 1024);
/// Call delta by central finite difference of the COS price in the spot
/// (SVCJ returns are level-independent, so degree-one homogeneity is exact).
double svcj_delta(const SvcjParams& p, double spot, double rate, double maturity, double strike,
                  int terms = 1024);

}  // namespace icos
