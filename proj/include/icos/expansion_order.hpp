#pragma once

#include <vector>

#include "icos/estimators.hpp"

namespace icos {

struct OrderTraceRow {
    int terms = 0;        // trial N
    double mean_log_a = 0.0;   // mean of log|A-hat| over indices N-2, N-1, N
    double log_sigma_a = 0.0;  // log of the A-hat std err at index N-1
};

struct OrderSelection {
    int optimal = 0;  // N*
    std::vector<OrderTraceRow> trace;
};

/// AMISE rule of thumb for the number of cosine expansion terms: starting at
/// N = 5, refit with N+1 terms, average log|A-hat| over the last three
/// coefficients, and stop once it drops to the coefficient noise floor
/// log sigma_A (or at n_max). Returns N - 1. Deterministic given the chain.
OrderSelection optimal_terms(const OptionChain& chain, QuadScheme scheme, int n_min = 5,
                             int n_max = 50);

}  // namespace icos
