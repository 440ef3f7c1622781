#include <cmath>

#include "doctest.h"
#include "icos/experiments.hpp"

using namespace icos;

namespace {

McRunConfig quick_config() {
    McRunConfig cfg;
    cfg.terms = 14;
    cfg.sine_terms = 25;
    return cfg;
}

}  // namespace

TEST_CASE("identical seeds give bit-identical reports; serial matches parallel") {
    McDesign d;
    d.model = McModel::bs;
    d.reps = 60;
    d.seed = 7;
    McRunConfig cfg = quick_config();

    McReport parallel1 = run_mc(d, cfg);
    McReport parallel2 = run_mc(d, cfg);
    McReport serial = run_mc_serial(d, cfg);

    CHECK(parallel1.to_csv() == parallel2.to_csv());
    CHECK(parallel1.to_csv() == serial.to_csv());

    McDesign d2 = d;
    d2.seed = 8;
    CHECK(run_mc(d2, cfg).to_csv() != parallel1.to_csv());
}

TEST_CASE("degenerate run: one replication, zero noise") {
    McDesign d;
    d.model = McModel::bs;
    d.reps = 1;
    d.noise_scale = 0.0;
    McReport rep = run_mc(d, quick_config());
    CHECK(rep.failures == 0);
    for (const auto& c : rep.cells) {
        CHECK(c.mc_std == 0.0);
        // Bias equals the deterministic numerical bias (estimate == center).
        CHECK(c.mc_bias == doctest::Approx(c.center - c.truth).epsilon(1e-12));
    }
    const McCell& atm = rep.cell("call", 1.0);
    CHECK(std::abs(atm.mc_bias) < 0.01);
}

TEST_CASE("bs 30d: smoothing effect and standard error calibration at 200 reps") {
    McDesign d;
    d.model = McModel::bs;
    d.reps = 200;
    d.seed = 42;
    McReport rep = run_mc(d, quick_config());
    CHECK(rep.failures == 0);

    for (double f : {0.86, 0.90, 0.95, 1.00, 1.05, 1.09}) {
        const McCell& c = rep.cell("call", f);
        // MC stds of the price estimates sit below the injected noise scale.
        CHECK(c.mc_std < 0.025);
        // Asymptotic stds track the MC stds.
        CHECK(c.as_std / c.mc_std > 0.7);
        CHECK(c.as_std / c.mc_std < 1.4);
        // The stochastic part of the bias is bounded by the MC-mean band; the
        // deterministic numerical component (center - truth) is ~1e-3 at the
        // edge strikes and accounted for separately.
        CHECK(std::abs(c.mc_bias - (c.center - c.truth)) <= 3.5 * c.mc_std / std::sqrt(200.0));
        CHECK(std::abs(c.mc_bias) < 0.005);
    }
    const McCell& atm = rep.cell("call", 1.0);
    CHECK(atm.mc_std == doctest::Approx(0.0066).epsilon(0.30));
    const McCell& rnd = rep.cell("rnd", 1.0);
    CHECK(rnd.mc_std == doctest::Approx(0.0212).epsilon(0.30));
    const McCell& delta = rep.cell("delta", 1.0);
    CHECK(std::abs(delta.mc_bias) < 0.01);
    CHECK(delta.cov_center >= 0.88);
    CHECK(delta.cov_center <= 0.99);
}

TEST_CASE("truth chain endpoints stay strictly positive") {
    for (McModel m : {McModel::bs, McModel::svcj}) {
        McDesign d;
        d.model = m;
        OptionChain chain = make_truth_chain(d);
        CHECK(chain.otm_prices.front() > 0.0);
        CHECK(chain.otm_prices.back() > 0.0);
        CHECK(chain.n() == 201);
        CHECK(chain.grid.uniform);
    }
}

TEST_CASE("csv report shape mirrors the table layout") {
    McDesign d;
    d.model = McModel::bs;
    d.reps = 4;
    McRunConfig cfg = quick_config();
    cfg.ks_bandwidths = {0.2};
    McReport rep = run_mc(d, cfg);
    // 6 moneyness x (call, rnd, delta) + 3 theta rows + 6 x 3 KS rows.
    CHECK(rep.cells.size() == 18 + 3 + 18);
    std::string csv = rep.to_csv();
    CHECK(csv.find("estimator,ks_c,k_over_f") != std::string::npos);
    CHECK(csv.find("theta_c") != std::string::npos);
    CHECK(csv.find("ks_call") != std::string::npos);
    const McCell& ks = rep.cell("ks_call", 1.0, 0.2);
    CHECK(std::isnan(ks.as_std));  // no asymptotic theory for the baseline
}

TEST_CASE("bimodal fixture: estimated density has modes at the planted spots") {
    BimodalFixture fx = amzn_like_chain();
    IcosFit fit = fit_icos(fx.chain, FitOptions{13, 26, QuadScheme::simpson13, false});
    // Scan the S_T-density on the strike grid and pick local maxima.
    std::vector<double> s_values, density;
    for (double s = 1255.0; s <= 1755.0; s += 5.0) {
        s_values.push_back(s);
        density.push_back(fit.rnd_value(std::log(s)) / s);
    }
    std::vector<double> modes;
    for (std::size_t i = 1; i + 1 < density.size(); ++i)
        if (density[i] > density[i - 1] && density[i] > density[i + 1] && density[i] > 1e-4)
            modes.push_back(s_values[i]);
    REQUIRE(modes.size() == 2);
    CHECK(std::abs(modes[0] - fx.mode_lo) <= 5.0);
    CHECK(std::abs(modes[1] - fx.mode_hi) <= 5.0);
}
