#include "icos/vix.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "icos/expansion_order.hpp"

namespace icos {

double vix_variance(const OptionChain& chain, std::span<const double> prices) {
    chain.validate();
    const int n = chain.n();
    if (static_cast<int>(prices.size()) != n)
        throw std::invalid_argument("vix_variance: price vector length mismatch");
    if (chain.forward <= chain.strikes.front())
        throw std::invalid_argument("vix_variance: forward at or below the smallest strike");

    // K0: largest strike below the forward.
    double k0 = chain.strikes.front();
    for (double k : chain.strikes)
        if (k < chain.forward) k0 = k;

    // White-paper strip: puts below K0, the put/call average at K0, calls
    // above. The chain stores the OTM-by-forward side, so the K0 cell and any
    // strike in (K0, F] are adjusted via put-call parity (same observation
    // error on both rights); the (F/K0 - 1)^2 term then cancels the half-call
    // overcount at K0.
    const double df = chain.discount();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double k = chain.strikes[i];
        double dk;
        if (i == 0) dk = chain.strikes[1] - chain.strikes[0];
        else if (i == n - 1) dk = chain.strikes[n - 1] - chain.strikes[n - 2];
        else dk = 0.5 * (chain.strikes[i + 1] - chain.strikes[i - 1]);
        double price = prices[i];
        if (k == k0) price += 0.5 * df * (chain.forward - k);
        else if (k > k0 && k <= chain.forward) price += df * (chain.forward - k);
        acc += dk / (k * k) * price;
    }
    const double t = chain.maturity;
    double var = 2.0 / t * std::exp(chain.rate * t) * acc -
                 (chain.forward / k0 - 1.0) * (chain.forward / k0 - 1.0) / t;
    return var;
}

namespace {

double blend_30d(double t1, double var1, double t2, double var2) {
    if (t2 <= t1) throw std::invalid_argument("vix_index: tenors must be ordered (near < next)");
    const double t30 = 30.0 / 365.0;
    double w1 = (t2 - t30) / (t2 - t1);
    double total = w1 * t1 * var1 + (1.0 - w1) * t2 * var2;
    return total / t30;
}

}  // namespace

double vix_index(const OptionChain& near, std::span<const double> near_prices,
                 const OptionChain* next, std::span<const double> next_prices) {
    double v1 = vix_variance(near, near_prices);
    double var = next ? blend_30d(near.maturity, v1, next->maturity, vix_variance(*next, next_prices))
                      : v1;
    if (var < 0.0) throw std::runtime_error("vix_index: negative index variance");
    return 100.0 * std::sqrt(var);
}

CorridorVariance civ_variance(const IcosFit& fit, int grid_points) {
    if (grid_points < 3 || grid_points % 2 == 0)
        throw std::invalid_argument("civ_variance: need an odd grid of >= 3 points");
    const OptionChain& chain = fit.design().chain;
    const double a = chain.alpha(), b = chain.beta();
    const double step = (b - a) / (grid_points - 1);

    CorridorVariance out;
    std::vector<double> integrand(static_cast<std::size_t>(grid_points));
    for (int j = 0; j < grid_points; ++j) {
        double x = (j == grid_points - 1) ? b : a + j * step;
        double price = x <= chain.forward ? fit.price_put_value(x) : fit.price_call_value(x);
        if (price < 0.0) {
            price = 0.0;
            ++out.floored;
        }
        integrand[j] = price / (x * x);
    }
    auto w = quad_weights(QuadScheme::simpson13, grid_points);
    double acc = 0.0;
    for (int j = 0; j < grid_points; ++j) acc += w[j] * integrand[j] * step;
    const double t = chain.maturity;
    out.variance = 2.0 / t * std::exp(chain.rate * t) * acc;
    return out;
}

namespace {

struct TenorFit {
    double vix_var = 0.0;
    double vix_hat_var = 0.0;
    double civ_var = 0.0;
    int floored = 0;
};

TenorFit dissect_tenor(const OptionChain& chain, const DissectConfig& cfg) {
    TenorFit out;
    out.vix_var = vix_variance(chain, chain.otm_prices);

    OptionChain fitted_chain =
        cfg.regrid_points == -1
            ? chain
            : spline_iv_regrid(chain, cfg.regrid_points > 0 ? cfg.regrid_points : 4 * chain.n() + 1);

    int terms = cfg.terms;
    if (terms <= 0) terms = optimal_terms(fitted_chain, cfg.scheme).optimal;
    FitOptions opts{terms, cfg.sine_terms, cfg.scheme, /*with_inference=*/false};
    IcosFit fit = fit_icos(fitted_chain, opts);

    std::vector<double> fitted(static_cast<std::size_t>(chain.n()));
    for (int i = 0; i < chain.n(); ++i) {
        double k = chain.strikes[i];
        fitted[i] = k <= chain.forward ? fit.price_put_value(k) : fit.price_call_value(k);
    }
    out.vix_hat_var = vix_variance(chain, fitted);

    CorridorVariance civ = civ_variance(fit, cfg.civ_grid);
    out.civ_var = civ.variance;
    out.floored = civ.floored;
    return out;
}

}  // namespace

VixDecomposition dissect(const OptionChain& near, const OptionChain* next,
                         const DissectConfig& config) {
    TenorFit f1 = dissect_tenor(near, config);
    VixDecomposition dec;
    if (next) {
        TenorFit f2 = dissect_tenor(*next, config);
        dec.vix = 100.0 * std::sqrt(blend_30d(near.maturity, f1.vix_var, next->maturity, f2.vix_var));
        dec.vix_hat =
            100.0 * std::sqrt(blend_30d(near.maturity, f1.vix_hat_var, next->maturity, f2.vix_hat_var));
        dec.civ_hat =
            100.0 * std::sqrt(blend_30d(near.maturity, f1.civ_var, next->maturity, f2.civ_var));
        dec.floored = f1.floored + f2.floored;
    } else {
        dec.vix = 100.0 * std::sqrt(f1.vix_var);
        dec.vix_hat = 100.0 * std::sqrt(f1.vix_hat_var);
        dec.civ_hat = 100.0 * std::sqrt(f1.civ_var);
        dec.floored = f1.floored;
    }
    dec.xi_hat = dec.vix - dec.vix_hat;
    dec.zeta_hat = dec.vix_hat - dec.civ_hat;
    return dec;
}

std::vector<VixDecomposition> dissect_panel(const std::vector<VixDay>& days,
                                            const DissectConfig& config, int threads) {
    std::vector<VixDecomposition> out(days.size());
    std::vector<std::string> errors(days.size());
#ifdef _OPENMP
    int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
    for (std::size_t i = 0; i < days.size(); ++i) {
        try {
            out[i] = dissect(days[i].near, days[i].next ? &*days[i].next : nullptr, config);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < days.size(); ++i)
        if (!errors[i].empty())
            throw std::runtime_error("dissect_panel: day " + std::to_string(i) + ": " + errors[i]);
    return out;
}

}  // namespace icos
