#include "icos/reference_models.hpp"

#include <cmath>
#include <stdexcept>

#include "icos/cosine_basis.hpp"

namespace icos {

using cplx = std::complex<double>;
static constexpr cplx I{0.0, 1.0};

std::complex<double> BsModel::cf(std::complex<double> u) const {
    double m = std::log(spot) + (rate - 0.5 * sigma * sigma) * maturity;
    return std::exp(I * u * m - 0.5 * u * u * sigma * sigma * maturity);
}

void SvcjParams::validate() const {
    if (!(kappa > 0.0 && v_bar > 0.0 && sigma_v > 0.0 && lambda > 0.0 && mu_v > 0.0))
        throw std::invalid_argument("SvcjParams: kappa, v_bar, sigma_v, lambda, mu_v must be > 0");
    if (std::abs(rho) > 1.0) throw std::invalid_argument("SvcjParams: |rho| <= 1 required");
    if (v0 < 0.0) throw std::invalid_argument("SvcjParams: v0 >= 0 required");
}

std::complex<double> svcj_cf(const SvcjParams& p, std::complex<double> u, double spot, double rate,
                             double maturity) {
    const double tau = maturity;
    if (u == cplx(0.0, 0.0)) return 1.0;

    // Riccati for the variance loading: beta' = s2/2 beta^2 + b beta - (iu + u^2)/2,
    // beta(0) = 0, with b = iu rho sigma_v - kappa.
    const double s2 = p.sigma_v * p.sigma_v;
    const cplx iu = I * u;
    const cplx b = iu * p.rho * p.sigma_v - p.kappa;
    const cplx d = std::sqrt(b * b + s2 * (iu + u * u));
    const cplx r_minus = (-b - d) / s2;
    const cplx r_plus = (-b + d) / s2;
    const cplx g = r_minus / r_plus;

    const cplx e = std::exp(-d * tau);
    const cplx beta = r_minus * (1.0 - e) / (1.0 - g * e);
    // Integrated variance loading, the branch-stable (r_minus) formulation.
    const cplx beta_int = ((-b - d) * tau - 2.0 * std::log((1.0 - g * e) / (1.0 - g))) / s2;

    // Jump transform: Gaussian price jump independent of an exponential
    // variance co-jump fed through beta along the path.
    const cplx phi_j = std::exp(iu * p.mu_j - 0.5 * u * u * p.sigma_j * p.sigma_j);
    const cplx c1 = 1.0 - p.mu_v * r_minus;
    const cplx c2 = g - p.mu_v * r_minus;
    cplx jump_int;  // integral of 1/(1 - mu_v beta(s)) over [0, tau]
    if (std::abs(c2) < 1e-14) {
        jump_int = tau / c1 - g * (1.0 - e) / (c1 * d);
    } else {
        jump_int = tau / c1 +
                   p.mu_v * r_minus * (g - 1.0) / (c1 * c2 * d) * std::log((c1 - c2 * e) / (c1 - c2));
    }

    const cplx jump_part = p.lambda * (phi_j * jump_int - tau);
    const cplx drift = iu * (std::log(spot) + (rate - p.lambda * p.jump_mean()) * tau);
    return std::exp(drift + p.kappa * p.v_bar * beta_int + beta * p.v0 + jump_part);
}

double svcj_log_mean(const SvcjParams& p, double spot, double rate, double maturity) {
    double v_inf = p.v_bar + p.lambda * p.mu_v / p.kappa;  // jump-adjusted long-run variance
    double iv = v_inf * maturity + (p.v0 - v_inf) * (1.0 - std::exp(-p.kappa * maturity)) / p.kappa;
    return std::log(spot) + (rate - p.lambda * p.jump_mean()) * maturity + p.lambda * p.mu_j * maturity -
           0.5 * iv;
}

double cos_price(const CharFn& cf, double log_mean, double strike, double rate, double maturity,
                 Right right, int terms, double interval_scale) {
    const double half = interval_scale * std::sqrt(maturity);
    // Work in y = log(S_T/K) on [a, b] around the centered first cumulant; the
    // payoff coefficients come from the basis with alpha = K e^a, beta = K e^b.
    const double a = log_mean - std::log(strike) - half;
    const double b = log_mean - std::log(strike) + half;
    CosineBasis basis(Interval{strike * std::exp(a), strike * std::exp(b)}, terms);

    const double width = b - a;
    double acc = 0.0;
    for (int m = 0; m < terms; ++m) {
        double um = m * M_PI / width;
        cplx phi_y = cf(um) * std::exp(-I * um * std::log(strike));
        double am = std::real(phi_y * std::exp(-I * um * a));
        double hm = right == Right::call ? basis.h_call(m, strike) : basis.h_put(m, strike);
        acc += (m == 0 ? 0.5 : 1.0) * am * hm;
    }
    return std::exp(-rate * maturity) * acc;
}

double cos_log_density(const CharFn& cf, double log_mean, double y, double maturity, int terms,
                       double interval_scale) {
    const double half = interval_scale * std::sqrt(maturity);
    const double a = log_mean - half, b = log_mean + half;
    const double width = b - a;
    double acc = 0.0;
    for (int m = 0; m < terms; ++m) {
        double um = m * M_PI / width;
        double am = std::real(cf(um) * std::exp(-I * um * a));
        acc += (m == 0 ? 0.5 : 1.0) * am * std::cos(um * (y - a));
    }
    return 2.0 / width * acc;
}

double svcj_price(const SvcjParams& p, double spot, double rate, double maturity, double strike,
                  Right right, int terms) {
    CharFn cf = [&](double u) { return svcj_cf(p, cplx(u, 0.0), spot, rate, maturity); };
    return cos_price(cf, svcj_log_mean(p, spot, rate, maturity), strike, rate, maturity, right,
                     terms);
}

double svcj_rnd_log(const SvcjParams& p, double spot, double rate, double maturity, double y,
                    int terms) {
    CharFn cf = [&](double u) { return svcj_cf(p, cplx(u, 0.0), spot, rate, maturity); };
    return cos_log_density(cf, svcj_log_mean(p, spot, rate, maturity), y, maturity, terms);
}

double svcj_delta(const SvcjParams& p, double spot, double rate, double maturity, double strike,
                  int terms) {
    const double h = 1e-4 * spot;
    double up = svcj_price(p, spot + h, rate, maturity, strike, Right::call, terms);
    double dn = svcj_price(p, spot - h, rate, maturity, strike, Right::call, terms);
    return (up - dn) / (2.0 * h);
}

}  // namespace icos
