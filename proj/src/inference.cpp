#include "icos/inference.hpp"

#include <cmath>
#include <stdexcept>

namespace icos {

namespace {

double quad_form(const Eigen::VectorXd& g, const Eigen::VectorXd& sigma2) {
    return (g.array().square() * sigma2.array()).sum();
}

}  // namespace

ErrorCovariance feasible_sigma(const IcosFit& fit) {
    const FitDesign& d = fit.design();
    if (!d.with_inference) throw std::logic_error("feasible_sigma: design built without inference");
    ErrorCovariance out;
    out.dof = d.dof;
    out.sigma2 = (static_cast<double>(d.chain.n()) / d.dof) * fit.residuals().array().square();
    return out;
}

Eigen::Matrix3d var_theta(const IcosFit& fit, const Eigen::VectorXd& sigma2) {
    const FitDesign& d = fit.design();
    // slope_noise = (I-Psi)' Z (Z'Z)^{-1}; Var = S' Sigma S, PSD by construction.
    return d.slope_noise.transpose() * sigma2.asDiagonal() * d.slope_noise;
}

double var_call(const IcosFit& fit, const Eigen::VectorXd& sigma2, double x) {
    const FitDesign& d = fit.design();
    const int n = d.chain.n();
    // Observation-error loading: psi_w(x) with +1 on the C(beta) node, plus the
    // theta-hat propagation S z(x).
    Eigen::VectorXd hv(d.terms - 1);
    for (int m = 1; m < d.terms; ++m) hv[m - 1] = d.basis.h_call(m, x);
    Eigen::VectorXd g = d.psi_mat.middleRows(1, d.terms - 1).transpose() * hv;
    for (int i = 0; i < n; ++i) g[i] *= d.qw[i];
    g[n - 1] += 1.0;
    ZPair z = d.basis.z_call(d.terms, x);
    g += d.slope_noise * Eigen::Vector3d(1.0, z.zc, z.zp);
    return quad_form(g, sigma2);
}

double var_put(const IcosFit& fit, const Eigen::VectorXd& sigma2, double x) {
    const FitDesign& d = fit.design();
    const int n = d.chain.n();
    Eigen::VectorXd hv(d.terms - 1);
    for (int m = 1; m < d.terms; ++m) hv[m - 1] = d.basis.h_put(m, x);
    Eigen::VectorXd g = d.psi_mat.middleRows(1, d.terms - 1).transpose() * hv;
    for (int i = 0; i < n; ++i) g[i] *= d.qw[i];
    g[0] += 1.0;  // the P(alpha) observation enters the put estimator directly
    ZPair z = d.basis.z_put(d.terms, x);
    g += d.slope_noise * Eigen::Vector3d(1.0, z.zc, z.zp);
    return quad_form(g, sigma2);
}

double var_rnd(const IcosFit& fit, const Eigen::VectorXd& sigma2, double y) {
    const FitDesign& d = fit.design();
    const int n = d.chain.n();
    if (y < std::log(d.chain.alpha()) - 1e-12 || y > std::log(d.chain.beta()) + 1e-12)
        throw std::domain_error("var_rnd: point outside [log alpha, log beta]");
    Eigen::VectorXd hv(d.terms - 1);
    for (int m = 1; m < d.terms; ++m) hv[m - 1] = d.basis.h_density(m, y);
    Eigen::VectorXd g = d.psi_mat.middleRows(1, d.terms - 1).transpose() * hv;
    for (int i = 0; i < n; ++i) g[i] *= d.qw[i];
    // Loadings consistent with the estimator: +Z_c on call_slope, -Z_p on put_slope.
    ZPair z = d.basis.z_density(d.terms, y);
    g += d.slope_noise * Eigen::Vector3d(0.0, z.zc, -z.zp);
    double scale = fit.density_scale();
    return scale * scale * quad_form(g, sigma2);
}

double var_delta(const IcosFit& fit, const Eigen::VectorXd& sigma2, double x) {
    const FitDesign& d = fit.design();
    const int n = d.chain.n();
    // S0 (delta-hat - delta) = -sum_i qw_i psi_tilde(x,K_i) eps_i
    //   + Ztilde_c eps_n + Ztilde_p eps_1 - beta (theta_c-hat - theta_c).
    Eigen::VectorXd hv(d.sine_terms - 1);
    for (int m = 1; m < d.sine_terms; ++m) hv[m - 1] = d.basis.u(m) * d.basis.h_call(m, x);
    Eigen::VectorXd g = d.psi_tilde_mat.middleRows(1, d.sine_terms - 1).transpose() * hv;
    for (int i = 0; i < n; ++i) g[i] *= -d.qw[i];
    ZPair z = d.basis.z_delta(d.sine_terms, x);
    g[n - 1] += z.zc;
    g[0] += z.zp;
    g += d.slope_noise * Eigen::Vector3d(0.0, -d.chain.beta(), 0.0);
    double spot = d.chain.spot();
    return quad_form(g, sigma2) / (spot * spot);
}

double var_cos_coeff(const IcosFit& fit, const Eigen::VectorXd& sigma2, int m) {
    const FitDesign& d = fit.design();
    const int n = d.chain.n();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = d.qw[i] * (m <= d.terms ? d.psi_mat(m, i) : d.basis.psi(m, d.chain.strikes[i]));
        acc += w * w * sigma2[i];
    }
    return acc;
}

double var_a_coeff(const IcosFit& fit, const Eigen::VectorXd& sigma2, int m) {
    const FitDesign& d = fit.design();
    const int n = d.chain.n();
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i)
        g[i] = d.qw[i] * (m <= d.terms ? d.psi_mat(m, i) : d.basis.psi(m, d.chain.strikes[i]));
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    g += d.slope_noise * Eigen::Vector3d(0.0, sign, -1.0);
    // Reported on the same scale as A-hat_m (e^{rT}-scaled; a no-op at r = 0).
    double growth = std::exp(d.chain.rate * d.chain.maturity);
    return growth * growth * quad_form(g, sigma2);
}

}  // namespace icos
