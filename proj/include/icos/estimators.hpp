#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "icos/cosine_basis.hpp"
#include "icos/market_data.hpp"
#include "icos/quadrature.hpp"

namespace icos {

/// Point estimate with its asymptotic standard error and confidence band.
struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// OLS boundary-slope estimates: the intercept absorbs the average
/// finite-sample bias, call_slope estimates dC/dK at beta, put_slope dP/dK at alpha.
struct BoundarySlopes {
    double intercept = 0.0;
    double call_slope = 0.0;
    double put_slope = 0.0;
};

struct FitOptions {
    int terms = 0;        // cosine expansion order N (0 = pick via expansion_order)
    int sine_terms = 0;   // sine order for the delta (0 = 2N)
    QuadScheme scheme = QuadScheme::simpson13;
    bool with_inference = true;  // build the n x n error-propagation matrix
};

/// Everything about a fit that does not depend on the observed prices:
/// basis evaluations on the strike grid, quadrature weights, the regression
/// design, and the error-propagation matrices behind the standard errors.
/// Built once per (chain geometry, N, scheme) and shared across fits.
struct FitDesign {
    OptionChain chain;  // prices inside are the ones the design was built from; fits may override
    CosineBasis basis;
    QuadScheme scheme;
    int terms;       // N
    int sine_terms;  // N-tilde
    bool with_inference;

    std::vector<double> qw;       // per-node weights w_i * Delta (or folded, non-uniform)
    Eigen::MatrixXd h_call_mat;   // (terms+1) x n, H_m(K_i)
    Eigen::MatrixXd psi_mat;      // (terms+1) x n, psi_m(K_i)
    Eigen::MatrixXd psi_tilde_mat;  // sine_terms x n
    Eigen::MatrixXd design_z;     // n x 3, rows (1, Z_c^N(K_i), Z_p^N(K_i))
    Eigen::Matrix3d ztz_inv;
    Eigen::MatrixXd ols_proj;     // 3 x n, (Z'Z)^{-1} Z'

    // Inference blocks (empty when with_inference is false).
    Eigen::MatrixXd err_prop;     // n x n Psi: {qw_j psi(K_i,K_j)}, last column + 1
    double dof = 0.0;             // trace-corrected degrees of freedom nu
    Eigen::MatrixXd slope_noise;  // n x 3, (I - Psi)' Z (Z'Z)^{-1}; theta-hat noise = S' eps

    FitDesign(const OptionChain& chain, const FitOptions& opts);
};

std::shared_ptr<const FitDesign> make_fit_design(const OptionChain& chain, const FitOptions& opts);

/// A fitted iCOS model: cosine/sine coefficient estimates, boundary slopes,
/// regression residuals and the feasible error covariance. Evaluation methods
/// are read-only and safe to call concurrently.
class IcosFit {
public:
    /// Fit against the design's own chain prices.
    static IcosFit fit(std::shared_ptr<const FitDesign> design);
    /// Fit against an alternative price vector on the same strike grid.
    static IcosFit fit(std::shared_ptr<const FitDesign> design, std::span<const double> otm_prices);

    const FitDesign& design() const { return *design_; }
    const std::vector<double>& cos_coeffs() const { return cos_coeffs_; }   // D-hat, m = 0..N-1
    const std::vector<double>& sine_coeffs() const { return sine_coeffs_; } // B-hat, m = 0..Ntilde-1
    const BoundarySlopes& slopes() const { return slopes_; }
    const Eigen::VectorXd& residuals() const { return residuals_; }
    const Eigen::VectorXd& otm() const { return otm_; }

    double call_at_beta() const { return otm_[otm_.size() - 1]; }
    double put_at_alpha() const { return otm_[0]; }

    /// Implied cosine coefficients A-hat_m = e^{rT}(D-hat_m + (-1)^m theta_c - theta_p),
    /// m = 0..count-1 (count defaults to N; may extend past the expansion order).
    std::vector<double> a_coeffs(int count = 0) const;
    double a_coeff(int m) const;
    double cos_coeff(int m) const;  // D-hat_m for any m < basis.max_terms()

    // Point values (no standard errors).
    double price_call_value(double x) const;
    double price_put_value(double x) const;
    double rnd_value(double y) const;                      // density of log S_T
    double rnd_price_value(double s) const { return rnd_value(std::log(s)) / s; }
    double delta_call_value(double x) const;

    // Estimates with asymptotic standard errors (inference module).
    Estimate price_call(double x, double conf = 0.95) const;
    Estimate price_put(double x, double conf = 0.95) const;
    Estimate rnd(double y, double conf = 0.95) const;
    Estimate delta_call(double x, double conf = 0.95) const;
    Estimate theta_bar(double conf = 0.95) const;
    Estimate theta_call_slope(double conf = 0.95) const;
    Estimate theta_put_slope(double conf = 0.95) const;

    /// Per-strike feasible error variances (n/nu) * residual^2 (inference module).
    const Eigen::VectorXd& error_variances() const;
    const Eigen::Matrix3d& slope_covariance() const;

    double density_scale() const;  // nu_f = 2 e^{rT} / log(beta/alpha)

private:
    IcosFit(std::shared_ptr<const FitDesign> design, Eigen::VectorXd otm);

    std::shared_ptr<const FitDesign> design_;
    Eigen::VectorXd otm_;
    std::vector<double> cos_coeffs_;
    std::vector<double> sine_coeffs_;
    BoundarySlopes slopes_;
    Eigen::VectorXd residuals_;
    Eigen::VectorXd error_var_;      // feasible sigma_i^2
    Eigen::Matrix3d slope_cov_;
};

/// Cosine coefficient estimates D-hat_m, m = 0..count-1, for an arbitrary count.
std::vector<double> fit_cos_coeffs(const OptionChain& chain, const CosineBasis& basis,
                                   QuadScheme scheme, int count);

/// Convenience: build a design and fit in one step.
IcosFit fit_icos(const OptionChain& chain, const FitOptions& opts);

}  // namespace icos
