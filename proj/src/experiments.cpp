#include "icos/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "icos/inference.hpp"
#include "icos/kernel_baseline.hpp"
#include "icos/math_util.hpp"
#include "icos/rng.hpp"

namespace icos {

namespace {

std::vector<double> strike_grid(const McDesign& d) {
    std::vector<double> ks;
    for (double k = d.strike_lo_frac * d.spot; k <= d.strike_hi_frac * d.spot + 1e-9;
         k += d.strike_step)
        ks.push_back(k);
    return ks;
}

}  // namespace

OptionChain make_truth_chain(const McDesign& d) {
    OptionChain chain;
    chain.maturity = d.maturity;
    chain.rate = d.rate;
    chain.strikes = strike_grid(d);
    chain.otm_prices.resize(chain.strikes.size());
    if (d.model == McModel::bs) {
        BsModel m{d.spot, d.rate, d.sigma, d.maturity};
        chain.forward = m.forward();
        for (std::size_t i = 0; i < chain.strikes.size(); ++i)
            chain.otm_prices[i] = m.otm(chain.strikes[i]);
    } else {
        chain.forward = d.spot * std::exp(d.rate * d.maturity);
        CharFn cf = [&](double u) {
            return svcj_cf(d.svcj, std::complex<double>(u, 0.0), d.spot, d.rate, d.maturity);
        };
        double c1 = svcj_log_mean(d.svcj, d.spot, d.rate, d.maturity);
        for (std::size_t i = 0; i < chain.strikes.size(); ++i) {
            double k = chain.strikes[i];
            Right side = k <= chain.forward ? Right::put : Right::call;
            chain.otm_prices[i] = cos_price(cf, c1, k, d.rate, d.maturity, side);
        }
    }
    chain.grid = GridKind::of(chain.strikes);
    chain.validate();
    return chain;
}

OptionChain with_noise(const OptionChain& chain, double scale, std::uint64_t seed) {
    Rng rng(seed);
    OptionChain out = chain;
    for (auto& p : out.otm_prices) p += scale * rng.normal();
    return out;
}

OptionChain make_bs_chain(const BsModel& model, double lo_frac, double hi_frac, double step) {
    McDesign d;
    d.model = McModel::bs;
    d.maturity = model.maturity;
    d.spot = model.spot;
    d.rate = model.rate;
    d.sigma = model.sigma;
    d.strike_lo_frac = lo_frac;
    d.strike_hi_frac = hi_frac;
    d.strike_step = step;
    return make_truth_chain(d);
}

const McCell& McReport::cell(const std::string& estimator, double moneyness, double ks_c) const {
    for (const auto& c : cells) {
        if (c.estimator != estimator) continue;
        if (!std::isnan(moneyness) && std::abs(c.moneyness - moneyness) > 1e-12) continue;
        if (!std::isnan(ks_c) && !(std::abs(c.ks_c - ks_c) < 1e-12)) continue;
        return c;
    }
    throw std::out_of_range("McReport::cell: no such cell " + estimator);
}

std::string McReport::to_csv() const {
    std::ostringstream out;
    char buf[512];
    std::snprintf(buf, sizeof(buf), "# model=%s t_days=%.17g reps=%d seed=%llu N=%d Ntilde=%d scheme=%s failures=%d\n",
                  design.model == McModel::bs ? "bs" : "svcj", design.maturity * 365.0, design.reps,
                  static_cast<unsigned long long>(design.seed), terms, sine_terms,
                  quad_scheme_name(scheme).c_str(), failures);
    out << buf;
    out << "estimator,ks_c,k_over_f,point,truth,center,mc_bias,mc_std,as_std,cov_truth,cov_center\n";
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      c.estimator.c_str(), c.ks_c, c.moneyness, c.point, c.truth, c.center,
                      c.mc_bias, c.mc_std, c.as_std, c.cov_truth, c.cov_center);
        out << buf;
    }
    return out.str();
}

namespace {

struct CellSpec {
    std::string estimator;
    double ks_c = std::numeric_limits<double>::quiet_NaN();
    double moneyness = std::numeric_limits<double>::quiet_NaN();
    double point = 0.0;  // strike, log-strike, or unused for theta
    double truth = 0.0;
};

struct TruthFns {
    std::function<double(double)> call;      // strike -> price
    std::function<double(double)> rnd;       // log strike -> density
    std::function<double(double)> delta;     // strike -> delta
    double theta_bar = 0.0, theta_c = 0.0, theta_p = 0.0;
};

TruthFns make_truths(const McDesign& d, const OptionChain& chain) {
    TruthFns t;
    if (d.model == McModel::bs) {
        BsModel m{d.spot, d.rate, d.sigma, d.maturity};
        t.call = [m](double k) { return m.call(k); };
        t.rnd = [m](double y) { return m.rnd_log(y); };
        t.delta = [m](double k) { return m.delta(k); };
        t.theta_c = m.call_strike_slope(chain.beta());
        t.theta_p = m.put_strike_slope(chain.alpha());
    } else {
        SvcjParams p = d.svcj;
        double s0 = d.spot, r = d.rate, tau = d.maturity;
        t.call = [=](double k) { return svcj_price(p, s0, r, tau, k, Right::call); };
        t.rnd = [=](double y) { return svcj_rnd_log(p, s0, r, tau, y); };
        t.delta = [=](double k) { return svcj_delta(p, s0, r, tau, k); };
        const double hb = 1e-4 * chain.beta(), ha = 1e-4 * chain.alpha();
        t.theta_c = (svcj_price(p, s0, r, tau, chain.beta() + hb, Right::call) -
                     svcj_price(p, s0, r, tau, chain.beta() - hb, Right::call)) /
                    (2.0 * hb);
        t.theta_p = (svcj_price(p, s0, r, tau, chain.alpha() + ha, Right::put) -
                     svcj_price(p, s0, r, tau, chain.alpha() - ha, Right::put)) /
                    (2.0 * ha);
    }
    return t;
}

McReport run_mc_impl(const McDesign& d, const McRunConfig& cfg, bool parallel) {
    OptionChain truth_chain = make_truth_chain(d);
    TruthFns truths = make_truths(d, truth_chain);
    auto design = make_fit_design(truth_chain,
                                  FitOptions{cfg.terms, cfg.sine_terms, cfg.scheme, true});

    // Cell layout: per moneyness {call, rnd, delta}, then theta rows, then the
    // kernel-smoothing baseline cells per bandwidth constant.
    std::vector<CellSpec> specs;
    for (double f : cfg.moneyness) {
        double k = f * truth_chain.forward;
        specs.push_back({"call", NAN, f, k, truths.call(k)});
        specs.push_back({"rnd", NAN, f, std::log(k), truths.rnd(std::log(k))});
        specs.push_back({"delta", NAN, f, k, truths.delta(k)});
    }
    specs.push_back({"theta_bar", NAN, NAN, 0.0, truths.theta_bar});
    specs.push_back({"theta_c", NAN, NAN, 0.0, truths.theta_c});
    specs.push_back({"theta_p", NAN, NAN, 0.0, truths.theta_p});
    for (double c : cfg.ks_bandwidths)
        for (double f : cfg.moneyness) {
            double k = f * truth_chain.forward;
            specs.push_back({"ks_call", c, f, k, truths.call(k)});
            specs.push_back({"ks_rnd", c, f, std::log(k), truths.rnd(std::log(k))});
            specs.push_back({"ks_delta", c, f, k, truths.delta(k)});
        }
    const int ncells = static_cast<int>(specs.size());

    // Evaluate one price vector into (estimate, std err) pairs per cell.
    auto evaluate = [&](std::span<const double> prices, std::vector<double>& est,
                        std::vector<double>& se) {
        IcosFit fit = IcosFit::fit(design, prices);
        const Eigen::VectorXd& s2 = fit.error_variances();
        int idx = 0;
        for (double f : cfg.moneyness) {
            double k = f * truth_chain.forward;
            est[idx] = fit.price_call_value(k);
            se[idx++] = std::sqrt(std::max(0.0, var_call(fit, s2, k)));
            est[idx] = fit.rnd_value(std::log(k));
            se[idx++] = std::sqrt(std::max(0.0, var_rnd(fit, s2, std::log(k))));
            est[idx] = fit.delta_call_value(k);
            se[idx++] = std::sqrt(std::max(0.0, var_delta(fit, s2, k)));
        }
        const Eigen::Matrix3d& vt = fit.slope_covariance();
        est[idx] = fit.slopes().intercept;
        se[idx++] = std::sqrt(std::max(0.0, vt(0, 0)));
        est[idx] = fit.slopes().call_slope;
        se[idx++] = std::sqrt(std::max(0.0, vt(1, 1)));
        est[idx] = fit.slopes().put_slope;
        se[idx++] = std::sqrt(std::max(0.0, vt(2, 2)));
        if (!cfg.ks_bandwidths.empty()) {
            OptionChain noisy = truth_chain;
            noisy.otm_prices.assign(prices.begin(), prices.end());
            for (double c : cfg.ks_bandwidths) {
                NwSmoother nw(noisy, c);
                for (double f : cfg.moneyness) {
                    double k = f * truth_chain.forward;
                    est[idx] = nw.call_price(k);
                    se[idx++] = NAN;
                    est[idx] = nw.rnd_log(std::log(k));
                    se[idx++] = NAN;
                    est[idx] = nw.delta(k);
                    se[idx++] = NAN;
                }
            }
        }
    };

    // Noiseless-limit centers.
    std::vector<double> center(ncells), center_se(ncells);
    evaluate(truth_chain.otm_prices, center, center_se);

    const int reps = d.reps;
    std::vector<double> est(static_cast<std::size_t>(reps) * ncells);
    std::vector<double> se(static_cast<std::size_t>(reps) * ncells);
    std::vector<char> ok(reps, 0);

    auto run_rep = [&](int rep) {
        Rng rng = Rng::stream(d.seed, static_cast<std::uint64_t>(rep));
        std::vector<double> prices(truth_chain.otm_prices);
        for (auto& p : prices) p += d.noise_scale * rng.normal();
        std::vector<double> e(ncells), s(ncells);
        try {
            evaluate(prices, e, s);
        } catch (const std::exception&) {
            return;  // failure recorded via ok[rep] staying 0
        }
        std::copy(e.begin(), e.end(), est.begin() + static_cast<std::size_t>(rep) * ncells);
        std::copy(s.begin(), s.end(), se.begin() + static_cast<std::size_t>(rep) * ncells);
        ok[rep] = 1;
    };

    if (parallel) {
#ifdef _OPENMP
        int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int rep = 0; rep < reps; ++rep) run_rep(rep);
#else
        for (int rep = 0; rep < reps; ++rep) run_rep(rep);
#endif
    } else {
        for (int rep = 0; rep < reps; ++rep) run_rep(rep);
    }

    // Replication-ordered reduction; identical for serial and parallel fills.
    McReport report;
    report.design = d;
    report.terms = cfg.terms;
    report.sine_terms = cfg.sine_terms;
    report.scheme = cfg.scheme;
    int valid = 0;
    for (int rep = 0; rep < reps; ++rep) valid += ok[rep];
    report.failures = reps - valid;
    if (valid < 1) throw std::runtime_error("run_mc: no successful replications");

    const double z = norm_ppf(0.5 * (1.0 + cfg.conf));
    for (int c = 0; c < ncells; ++c) {
        McCell cell;
        cell.estimator = specs[c].estimator;
        cell.ks_c = specs[c].ks_c;
        cell.moneyness = specs[c].moneyness;
        cell.point = specs[c].point;
        cell.truth = specs[c].truth;
        cell.center = center[c];

        double mean = 0.0;
        for (int rep = 0; rep < reps; ++rep)
            if (ok[rep]) mean += est[static_cast<std::size_t>(rep) * ncells + c];
        mean /= valid;
        double var = 0.0, se_mean = 0.0;
        int cov_truth = 0, cov_center = 0, have_se = 0;
        for (int rep = 0; rep < reps; ++rep) {
            if (!ok[rep]) continue;
            double e = est[static_cast<std::size_t>(rep) * ncells + c];
            double s = se[static_cast<std::size_t>(rep) * ncells + c];
            var += (e - mean) * (e - mean);
            if (!std::isnan(s)) {
                ++have_se;
                se_mean += s;
                if (std::abs(e - cell.truth) <= z * s) ++cov_truth;
                if (std::abs(e - cell.center) <= z * s) ++cov_center;
            }
        }
        cell.mc_bias = mean - cell.truth;
        cell.mc_std = valid > 1 ? std::sqrt(var / (valid - 1)) : 0.0;
        if (have_se > 0) {
            cell.as_std = se_mean / have_se;
            cell.cov_truth = static_cast<double>(cov_truth) / have_se;
            cell.cov_center = static_cast<double>(cov_center) / have_se;
        }
        report.cells.push_back(std::move(cell));
    }
    return report;
}

}  // namespace

McReport run_mc(const McDesign& design, const McRunConfig& config) {
    return run_mc_impl(design, config, config.threads != 1);
}

McReport run_mc_serial(const McDesign& design, const McRunConfig& config) {
    return run_mc_impl(design, config, false);
}

// ---------------------------------------------------------------------------
// Fixtures

OptionChain spx_like_chain() {
    // 14 strikes at $25 spacing (2950..3275), then $5 spacing (3280..4400): 239 total.
    std::vector<double> strikes;
    for (double k = 2950.0; k <= 3275.0 + 1e-9; k += 25.0) strikes.push_back(k);
    for (double k = 3280.0; k <= 4400.0 + 1e-9; k += 5.0) strikes.push_back(k);
    if (strikes.size() != 239) throw std::logic_error("spx_like_chain: strike count drifted");

    const double forward = 4008.5;
    const double maturity = 29.0 / 365.0;
    const double rate = 0.0015;
    const double spot = forward * std::exp(-rate * maturity);

    SvcjParams p;  // printed simulation parameters with v0 lifted to an SPX-2021-like level
    p.v0 = 0.0256;
    p.v_bar = 0.04;
    CharFn cf = [&](double u) { return svcj_cf(p, std::complex<double>(u, 0.0), spot, rate, maturity); };
    double c1 = svcj_log_mean(p, spot, rate, maturity);

    OptionChain chain;
    chain.maturity = maturity;
    chain.rate = rate;
    chain.forward = forward;
    chain.strikes = strikes;
    chain.otm_prices.resize(strikes.size());
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        Right side = strikes[i] <= forward ? Right::put : Right::call;
        chain.otm_prices[i] = cos_price(cf, c1, strikes[i], rate, maturity, side);
    }
    chain.grid = GridKind::of(chain.strikes);
    chain.validate();
    return chain;
}

void write_spx_like_csv(const std::string& path) {
    OptionChain chain = spx_like_chain();
    const double hs = 0.025;  // half-spread around the model mid
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_spx_like_csv: cannot open " + path);
    out << "expiry_days,rate,forward,strike,right,bid,ask\n";
    char buf[256];
    auto row = [&](double k, const char* right, double mid) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,,%.17g,%s,%.17g,%.17g\n",
                      chain.maturity * 365.0, chain.rate, k, right, std::max(mid - hs, 0.01),
                      mid + hs);
        out << buf;
    };
    // Parity-consistent call/put pairs near the money let the loader imply the forward.
    const double df = chain.discount();
    for (int i = 0; i < chain.n(); ++i) {
        double k = chain.strikes[i], mid = chain.otm_prices[i];
        bool is_put = k <= chain.forward;
        row(k, is_put ? "P" : "C", mid);
        if (k >= 3980.0 && k <= 4040.0) {
            double other = is_put ? mid + df * (chain.forward - k)   // call via parity
                                  : mid - df * (chain.forward - k);  // put via parity
            row(k, is_put ? "C" : "P", other);
        }
    }
}

BimodalFixture amzn_like_chain() {
    // Lognormal mixture: log(S_T/S0) ~ w N(mu1, s^2) + (1-w) N(mu2, s^2).
    // Component S-density modes sit at exp(log S0 + mu_j - s^2).
    const double spot = 1518.96;
    const double maturity = 1.0 / 365.0;
    const double rate = 0.0;
    const double mode_lo = 1442.0, mode_hi = 1590.0;
    const double s = 0.025, w = 0.45;
    const double mu1 = std::log(mode_lo / spot) + s * s;
    const double mu2 = std::log(mode_hi / spot) + s * s;
    const double f1 = spot * std::exp(mu1 + 0.5 * s * s);
    const double f2 = spot * std::exp(mu2 + 0.5 * s * s);
    const double forward = w * f1 + (1.0 - w) * f2;
    const double sigma = s / std::sqrt(maturity);

    BimodalFixture fx;
    fx.mode_lo = mode_lo;
    fx.mode_hi = mode_hi;
    OptionChain& chain = fx.chain;
    chain.maturity = maturity;
    chain.rate = rate;
    chain.forward = forward;
    for (double k = 1250.0; k <= 1760.0 + 1e-9; k += 5.0) {
        double p1, p2;
        if (k <= forward) {
            p1 = black::put(f1, k, sigma, rate, maturity);
            p2 = black::put(f2, k, sigma, rate, maturity);
        } else {
            p1 = black::call(f1, k, sigma, rate, maturity);
            p2 = black::call(f2, k, sigma, rate, maturity);
        }
        chain.strikes.push_back(k);
        chain.otm_prices.push_back(w * p1 + (1.0 - w) * p2);
    }
    chain.grid = GridKind::of(chain.strikes);
    chain.validate();
    return fx;
}

void write_amzn_like_csv(const std::string& path) {
    save_chain(amzn_like_chain().chain, path);
}

VixDayFixture make_vix_day(double sigma, int near_days, int next_days, double noise,
                           std::uint64_t seed, double price_floor) {
    auto tenor = [&](int days) {
        BsModel m{4000.0, 0.0, sigma, days / 365.0};
        OptionChain chain;
        chain.maturity = m.maturity;
        chain.rate = m.rate;
        chain.forward = m.forward();
        // Exchange-style listing: $5 strikes near the money, $25 off the wings,
        // $50 far out; quotes below the floor (the zero-bid region) are absent.
        for (double k = 2000.0; k <= 6000.0 + 1e-9;) {
            double p = m.otm(k);
            if (p >= price_floor) {
                chain.strikes.push_back(k);
                chain.otm_prices.push_back(p);
            }
            double dist = std::abs(k - 4000.0);
            k += dist < 400.0 ? 5.0 : (dist < 1000.0 ? 25.0 : 50.0);
        }
        chain.grid = GridKind::of(chain.strikes);
        chain.validate();
        return chain;
    };
    VixDayFixture day;
    day.near_truth = tenor(near_days);
    day.next_truth = tenor(next_days);
    day.near_obs = with_noise(day.near_truth, noise, splitmix64(seed));
    day.next_obs = with_noise(day.next_truth, noise, splitmix64(seed ^ 0x9e3779b97f4a7c15ULL));
    return day;
}

}  // namespace icos
