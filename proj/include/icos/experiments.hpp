#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icos/estimators.hpp"
#include "icos/reference_models.hpp"

namespace icos {

enum class McModel { bs, svcj };

/// Monte Carlo design: spot 4000, r = 0, strikes 85%..110% of spot in steps
/// of 5 (201 contracts), i.i.d. N(0,1) observation noise scaled by 0.025.
struct McDesign {
    McModel model = McModel::bs;
    double maturity = 30.0 / 365.0;
    double spot = 4000.0;
    double rate = 0.0;
    double sigma = 0.3;  // BS volatility
    SvcjParams svcj{};
    double strike_lo_frac = 0.85;
    double strike_hi_frac = 1.10;
    double strike_step = 5.0;
    double noise_scale = 0.025;
    int reps = 500;
    std::uint64_t seed = 1;
};

struct McRunConfig {
    int terms = 14;
    int sine_terms = 25;
    QuadScheme scheme = QuadScheme::simpson13;
    std::vector<double> moneyness = {0.86, 0.90, 0.95, 1.00, 1.05, 1.09};
    double conf = 0.95;
    std::vector<double> ks_bandwidths;  // kernel-smoothing baseline constants; empty = off
    int threads = 0;                    // 0 = all available, 1 = serial reference loop
};

/// One row of the report: per (estimator, evaluation point) bias / std /
/// asymptotic std / CI coverage, replicating the paper's table layout.
struct McCell {
    std::string estimator;  // call | rnd | delta | theta_bar | theta_c | theta_p | ks_call | ks_rnd | ks_delta
    double ks_c = std::numeric_limits<double>::quiet_NaN();
    double moneyness = std::numeric_limits<double>::quiet_NaN();
    double point = std::numeric_limits<double>::quiet_NaN();
    double truth = 0.0;
    double center = 0.0;  // noiseless-limit estimate
    double mc_bias = 0.0;
    double mc_std = 0.0;
    double as_std = std::numeric_limits<double>::quiet_NaN();
    double cov_truth = std::numeric_limits<double>::quiet_NaN();
    double cov_center = std::numeric_limits<double>::quiet_NaN();
};

struct McReport {
    McDesign design;
    int terms = 0, sine_terms = 0;
    QuadScheme scheme = QuadScheme::simpson13;
    int failures = 0;
    std::vector<McCell> cells;

    const McCell& cell(const std::string& estimator, double moneyness,
                       double ks_c = std::numeric_limits<double>::quiet_NaN()) const;
    std::string to_csv() const;
};

/// Noiseless chain for a design (BS closed form or SVCJ COS prices).
OptionChain make_truth_chain(const McDesign& design);

/// Replication harness. `run_mc` parallelizes replications with OpenMP and
/// reduces in replication order; `run_mc_serial` is the plain-loop reference.
/// Identical seeds give bit-identical reports on any thread count.
McReport run_mc(const McDesign& design, const McRunConfig& config);
McReport run_mc_serial(const McDesign& design, const McRunConfig& config);

// Synthetic fixtures for the empirical-style tests.

/// Uniform-grid BS chain between the given spot fractions.
OptionChain make_bs_chain(const BsModel& model, double lo_frac = 0.85, double hi_frac = 1.10,
                          double step = 5.0);

/// SPX-style fixture: 239 non-equidistant strikes on [2950, 4400] ($25 spacing
/// up to 3275, $5 above), T = 29 days, forward 4008.5 recoverable from planted
/// put/call parity pairs. Prices from an SVCJ smile.
OptionChain spx_like_chain();
void write_spx_like_csv(const std::string& path);

/// Bimodal fixture in the style of an earnings-announcement single name:
/// lognormal mixture with S_T-density modes planted at 1442 and 1590,
/// spot 1518.96, [alpha, beta] = [1250, 1760], T = 1 day.
struct BimodalFixture {
    OptionChain chain;
    double mode_lo = 0.0, mode_hi = 0.0;  // planted S-density modes
};
BimodalFixture amzn_like_chain();
void write_amzn_like_csv(const std::string& path);

/// Adds N(0, scale) observation noise to every price unconditionally; noisy
/// prices are used as-is even if slightly negative.
OptionChain with_noise(const OptionChain& chain, double scale, std::uint64_t seed);

/// One synthetic day of a volatility-index panel: near and next BS tenors on
/// a $5 strip, truncated where the true OTM price falls under `price_floor`
/// (the zero-bid region), with observation noise on the kept quotes.
struct VixDayFixture {
    OptionChain near_truth, next_truth;  // noiseless
    OptionChain near_obs, next_obs;      // with noise
};
VixDayFixture make_vix_day(double sigma, int near_days, int next_days, double noise,
                           std::uint64_t seed, double price_floor = 0.15);

}  // namespace icos
