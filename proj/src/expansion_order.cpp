#include "icos/expansion_order.hpp"

#include <cmath>
#include <stdexcept>

#include "icos/inference.hpp"

namespace icos {

OrderSelection optimal_terms(const OptionChain& chain, QuadScheme scheme, int n_min, int n_max) {
    if (n_min < 3 || n_max <= n_min)
        throw std::invalid_argument("optimal_terms: need 3 <= n_min < n_max");

    OrderSelection sel;
    int terms = n_min;
    double mean_log_a = 1.0, log_sigma_a = 0.0;

    while (mean_log_a > log_sigma_a && terms < n_max) {
        ++terms;
        FitOptions opts;
        opts.terms = terms;
        opts.sine_terms = 2 * terms;
        opts.scheme = scheme;
        IcosFit fit = [&] {
            try {
                return fit_icos(chain, opts);
            } catch (const std::exception& e) {
                throw std::runtime_error("optimal_terms: refit failed at N = " +
                                         std::to_string(terms) + ": " + e.what());
            }
        }();
        const Eigen::VectorXd& sigma2 = fit.error_variances();

        // A-hat and sigma_A are indexed 1..N (coefficient m); the rule compares
        // the last three coefficient magnitudes against the std err at N-1.
        mean_log_a = (std::log(std::abs(fit.a_coeff(terms - 2))) +
                      std::log(std::abs(fit.a_coeff(terms - 1))) +
                      std::log(std::abs(fit.a_coeff(terms)))) /
                     3.0;
        log_sigma_a = 0.5 * std::log(var_a_coeff(fit, sigma2, terms - 1));
        sel.trace.push_back({terms, mean_log_a, log_sigma_a});
    }
    sel.optimal = terms - 1;
    return sel;
}

}  // namespace icos
