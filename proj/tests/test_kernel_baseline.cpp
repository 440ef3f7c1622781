#include <cmath>

#include "doctest.h"
#include "icos/experiments.hpp"
#include "icos/kernel_baseline.hpp"
#include "icos/math_util.hpp"

using namespace icos;

namespace {

OptionChain bs_truth() {
    McDesign d;
    d.model = McModel::bs;
    return make_truth_chain(d);
}

}  // namespace

TEST_CASE("constant-IV chain is reproduced exactly at any bandwidth") {
    OptionChain chain = bs_truth();  // flat 30% BSIV by construction
    for (double c : {0.03, 0.2, 1.0}) {
        NwSmoother nw(chain, c);
        CHECK(nw.skipped_quotes() == 0);
        for (double k : {3500.0, 3987.0, 4000.0, 4399.0})
            CHECK(nw.smoothed_vol(k) == doctest::Approx(0.3).epsilon(1e-9));
        CHECK(nw.call_price(4000.0) == doctest::Approx(137.21).epsilon(1e-3));
    }
}

TEST_CASE("bandwidth follows (c / log n) n^{-1/5} on the forward-scaled strike axis") {
    OptionChain chain = bs_truth();
    double n = chain.n();
    NwSmoother nw(chain, 0.2);
    double expected = 0.2 / std::log(n) * std::pow(n, -0.2) * chain.forward;
    CHECK(nw.bandwidth() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("as c -> 0 with noiseless data the smoother interpolates the truth") {
    McDesign d;
    d.model = McModel::svcj;
    OptionChain chain = make_truth_chain(d);
    NwSmoother nw(chain, 0.001);  // bandwidth well under one strike step
    for (int i = 40; i < chain.n(); i += 37) {
        double k = chain.strikes[i];
        double truth = chain.strikes[i] <= chain.forward
                           ? chain.otm_prices[i] + chain.discount() * (chain.forward - k)
                           : chain.otm_prices[i];
        CHECK(nw.call_price(k) == doctest::Approx(truth).epsilon(1e-6));
    }
}

TEST_CASE("smoothed RND integrates back to roughly the truncated mass") {
    OptionChain chain = bs_truth();
    NwSmoother nw(chain, 0.2);
    // Trapezoid over the interior of [alpha, beta] in log space (the FD
    // stencil needs one step of margin on each side).
    double la = std::log(3400.0 + 6.0), lb = std::log(4400.0 - 6.0);
    int nodes = 2001;
    double h = (lb - la) / (nodes - 1), acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
        double y = la + i * h;
        acc += (i == 0 || i == nodes - 1 ? 0.5 : 1.0) * nw.rnd_log(y);
    }
    acc *= h;
    CHECK(acc == doctest::Approx(0.8428).epsilon(0.02));
}

TEST_CASE("oversmoothing shows up as bias at the smile turn (svcj)") {
    McDesign d;
    d.model = McModel::svcj;
    OptionChain chain = make_truth_chain(d);
    double k = 1.05 * 4000.0;
    double truth = svcj_price(d.svcj, d.spot, d.rate, d.maturity, k, Right::call);
    double wide = std::abs(NwSmoother(chain, 0.2).call_price(k) - truth);
    double narrow = std::abs(NwSmoother(chain, 0.03).call_price(k) - truth);
    CHECK(wide > 10.0 * narrow);
    CHECK(wide > 0.2);  // the tabulated 0.2-bandwidth bias is ~0.36 here
}

TEST_CASE("delta is the BS delta at the locally smoothed vol") {
    OptionChain chain = bs_truth();
    NwSmoother nw(chain, 0.1);
    double k = 3900.0;
    CHECK(nw.delta(k) ==
          doctest::Approx(black::call_delta(4000.0, k, nw.smoothed_vol(k), chain.maturity))
              .epsilon(1e-12));
}

TEST_CASE("quotes outside the no-arbitrage bounds are skipped and counted") {
    OptionChain chain = bs_truth();
    chain.otm_prices[3] = -0.01;  // unusable on BSIV space
    chain.otm_prices[7] = 0.0;
    NwSmoother nw(chain, 0.1);
    CHECK(nw.skipped_quotes() == 2);
    CHECK(nw.smoothed_vol(4000.0) == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("finite-difference stencil leaving the interval is an error") {
    OptionChain chain = bs_truth();
    NwSmoother nw(chain, 0.1);
    CHECK_THROWS_AS(nw.rnd_log(std::log(3401.0)), std::domain_error);
    CHECK_NOTHROW(nw.rnd_log(std::log(3900.0)));
}
