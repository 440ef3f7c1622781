#pragma once

#include <optional>
#include <span>
#include <vector>

#include "icos/estimators.hpp"

namespace icos {

/// Observation / discretization split of the volatility index:
/// xi = vix - vix_hat (observation), zeta = vix_hat - civ_hat (discretization),
/// so vix = civ_hat + zeta + xi by construction.
struct VixDecomposition {
    double vix = 0.0;
    double vix_hat = 0.0;
    double civ_hat = 0.0;
    double xi_hat = 0.0;
    double zeta_hat = 0.0;
    int floored = 0;  // negative interpolated prices floored in the CIV integrand
};

struct DissectConfig {
    int terms = 0;          // cosine expansion order; 0 = rule-of-thumb selection
    int sine_terms = 0;     // 0 = 2N
    int regrid_points = 0;  // uniform spline-regrid size per tenor; 0 = 4n+1, -1 = no regrid
    int civ_grid = 2001;    // uniform integration grid for the corridor integral
    QuadScheme scheme = QuadScheme::simpson13;
};

/// Single-tenor index variance per the CBOE-style formula
///   (2/T) e^{rT} sum_i (dK_i / K_i^2) prices_i - (1/T)(F/K0 - 1)^2
/// with K0 the largest strike below F, interior dK_i = (K_{i+1}-K_{i-1})/2 and
/// one-sided differences at the edges. `prices` may be the observed quotes or
/// fitted values at the same strikes.
double vix_variance(const OptionChain& chain, std::span<const double> prices);

/// 100 * sqrt of the single-tenor variance, or of the CBOE linear interpolation
/// of two tenors' total variances to the 30-day point.
double vix_index(const OptionChain& near, std::span<const double> near_prices,
                 const OptionChain* next = nullptr, std::span<const double> next_prices = {});

/// Corridor implied variance from iCOS-interpolated prices on a uniform grid:
/// (2/T) e^{rT} integral of O-hat(x)/x^2 over [alpha, beta], Simpson rule.
/// Negative interpolated prices are floored at 0 and counted.
struct CorridorVariance {
    double variance = 0.0;
    int floored = 0;
};
CorridorVariance civ_variance(const IcosFit& fit, int grid_points = 2001);

/// Full per-day dissection: spline regrid -> iCOS fit per tenor -> the three
/// indices and the observation/discretization split.
VixDecomposition dissect(const OptionChain& near, const OptionChain* next,
                         const DissectConfig& config = {});

/// Panel of daily dissections; days are independent and run in parallel.
struct VixDay {
    OptionChain near;
    std::optional<OptionChain> next;
};
std::vector<VixDecomposition> dissect_panel(const std::vector<VixDay>& days,
                                            const DissectConfig& config = {}, int threads = 0);

}  // namespace icos
