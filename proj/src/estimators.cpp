#include "icos/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "icos/inference.hpp"
#include "icos/math_util.hpp"

namespace icos {

namespace {

Estimate with_band(double value, double variance, double conf) {
    Estimate e;
    e.value = value;
    e.std_err = std::sqrt(std::max(variance, 0.0));
    double z = norm_ppf(0.5 * (1.0 + conf));
    e.lo = value - z * e.std_err;
    e.hi = value + z * e.std_err;
    return e;
}

}  // namespace

FitDesign::FitDesign(const OptionChain& chain_in, const FitOptions& opts)
    : chain(chain_in),
      basis(Interval{chain_in.alpha(), chain_in.beta()},
            std::max(opts.terms + 2,
                     (opts.sine_terms > 0 ? opts.sine_terms : 2 * opts.terms) + 1)),
      scheme(opts.scheme),
      terms(opts.terms),
      sine_terms(opts.sine_terms > 0 ? opts.sine_terms : 2 * opts.terms),
      with_inference(opts.with_inference) {
    chain.validate();
    if (terms < 1) throw std::invalid_argument("FitDesign: terms >= 1 required");
    const int n = chain.n();

    qw = quad_node_weights(scheme, chain.strikes, chain.grid);

    const int mc = terms + 1;  // one spare coefficient row for expansion-order search
    h_call_mat.resize(mc, n);
    psi_mat.resize(mc, n);
    for (int m = 0; m < mc; ++m)
        for (int i = 0; i < n; ++i) {
            h_call_mat(m, i) = basis.h_call(m, chain.strikes[i]);
            psi_mat(m, i) = basis.psi(m, chain.strikes[i]);
        }
    psi_tilde_mat.resize(sine_terms, n);
    for (int m = 0; m < sine_terms; ++m)
        for (int i = 0; i < n; ++i)
            psi_tilde_mat(m, i) = basis.psi_tilde(m, chain.strikes[i]);

    design_z.resize(n, 3);
    for (int i = 0; i < n; ++i) {
        ZPair z = basis.z_call(terms, chain.strikes[i]);
        design_z(i, 0) = 1.0;
        design_z(i, 1) = z.zc;
        design_z(i, 2) = z.zp;
    }
    Eigen::Matrix3d ztz = design_z.transpose() * design_z;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(ztz);
    if (!lu.isInvertible())
        throw std::runtime_error("FitDesign: singular regression design (collinear Z columns)");
    ztz_inv = lu.inverse();
    ols_proj = ztz_inv * design_z.transpose();

    if (with_inference) {
        // Psi_ij = qw_j * sum_{m=1}^{N-1} psi_m(K_j) H_m(K_i); last column + 1.
        err_prop.resize(n, n);
        Eigen::MatrixXd psi_block = psi_mat.middleRows(1, terms - 1);   // (N-1) x n
        Eigen::MatrixXd h_block = h_call_mat.middleRows(1, terms - 1);  // (N-1) x n
        err_prop.noalias() = h_block.transpose() * psi_block;
        for (int j = 0; j < n; ++j) err_prop.col(j) *= qw[j];
        err_prop.col(n - 1).array() += 1.0;

        // nu = tr(Q) - 2 tr(Q Psi) + tr(Q Psi Psi'), Q = I - Z (Z'Z)^{-1} Z'.
        Eigen::MatrixXd zt_psi = design_z.transpose() * err_prop;  // 3 x n
        double tr_psi = err_prop.trace();
        double tr_proj_psi = (ols_proj.transpose().cwiseProduct(zt_psi.transpose())).sum();
        double tr_psi2 = err_prop.squaredNorm();
        double tr_proj_psi2 = (ztz_inv * zt_psi * zt_psi.transpose()).trace();
        dof = (n - 3) - 2.0 * (tr_psi - tr_proj_psi) + (tr_psi2 - tr_proj_psi2);
        if (dof <= 0.0)
            throw std::runtime_error(
                "FitDesign: nonpositive degrees of freedom nu (expansion order too close to n)");

        slope_noise.noalias() =
            (design_z - err_prop.transpose() * design_z) * ztz_inv;  // (I - Psi)' Z (Z'Z)^{-1}
    }
}

std::shared_ptr<const FitDesign> make_fit_design(const OptionChain& chain, const FitOptions& opts) {
    return std::make_shared<const FitDesign>(chain, opts);
}

std::vector<double> fit_cos_coeffs(const OptionChain& chain, const CosineBasis& basis,
                                   QuadScheme scheme, int count) {
    auto qw = quad_node_weights(scheme, chain.strikes, chain.grid);
    std::vector<double> d(static_cast<std::size_t>(count));
    const double df = chain.discount();
    const double lf = std::log(chain.forward / chain.alpha());
    d[0] = df;
    for (int m = 1; m < count; ++m) {
        double acc = df * std::cos(basis.u(m) * lf);
        for (int i = 0; i < chain.n(); ++i)
            acc += qw[i] * basis.psi(m, chain.strikes[i]) * chain.otm_prices[i];
        d[m] = acc;
    }
    return d;
}

IcosFit::IcosFit(std::shared_ptr<const FitDesign> design, Eigen::VectorXd otm)
    : design_(std::move(design)), otm_(std::move(otm)) {
    const FitDesign& d = *design_;
    const int n = d.chain.n();
    const int nterms = d.terms;
    if (otm_.size() != n) throw std::invalid_argument("IcosFit: price vector length mismatch");

    const double df = d.chain.discount();
    const double lf = std::log(d.chain.forward / d.chain.alpha());

    // D-hat_m, one spare term past the expansion order for the order search.
    cos_coeffs_.assign(static_cast<std::size_t>(nterms + 1), 0.0);
    cos_coeffs_[0] = df;
    for (int m = 1; m <= nterms; ++m) {
        double acc = df * std::cos(d.basis.u(m) * lf);
        for (int i = 0; i < n; ++i) acc += d.qw[i] * d.psi_mat(m, i) * otm_[i];
        cos_coeffs_[m] = acc;
    }

    // B-hat_m; the m = 0 sine coefficient is identically zero.
    const double c_beta = otm_[n - 1], p_alpha = otm_[0];
    sine_coeffs_.assign(static_cast<std::size_t>(d.sine_terms), 0.0);
    for (int m = 1; m < d.sine_terms; ++m) {
        double um = d.basis.u(m);
        double acc = df * std::sin(um * lf);
        for (int i = 0; i < n; ++i) acc += d.qw[i] * d.psi_tilde_mat(m, i) * otm_[i];
        double sign = (m % 2 == 0) ? 1.0 : -1.0;
        acc += -um / d.chain.beta() * sign * c_beta + um / d.chain.alpha() * p_alpha;
        sine_coeffs_[m] = acc;
    }

    // Boundary-slope regression: C(K_i) - Cbar-hat(K_i) - C(beta) on (1, Z_c, Z_p).
    Eigen::VectorXd dep(n);
    for (int i = 0; i < n; ++i) {
        double k = d.chain.strikes[i];
        double call = k <= d.chain.forward ? otm_[i] + df * (d.chain.forward - k) : otm_[i];
        double cbar = 0.0;
        for (int m = 0; m < nterms; ++m)
            cbar += (m == 0 ? 0.5 : 1.0) * cos_coeffs_[m] * d.h_call_mat(m, i);
        dep[i] = call - cbar - c_beta;
    }
    Eigen::Vector3d theta = d.ols_proj * dep;
    slopes_.intercept = theta[0];
    slopes_.call_slope = theta[1];
    slopes_.put_slope = theta[2];
    residuals_ = dep - d.design_z * theta;

    if (d.with_inference) {
        error_var_ = (static_cast<double>(n) / d.dof) * residuals_.array().square();
        slope_cov_ = var_theta(*this, error_var_);
    }
}

IcosFit IcosFit::fit(std::shared_ptr<const FitDesign> design) {
    Eigen::VectorXd otm = Eigen::Map<const Eigen::VectorXd>(design->chain.otm_prices.data(),
                                                            design->chain.n());
    return IcosFit(std::move(design), std::move(otm));
}

IcosFit IcosFit::fit(std::shared_ptr<const FitDesign> design, std::span<const double> otm_prices) {
    Eigen::VectorXd otm = Eigen::Map<const Eigen::VectorXd>(otm_prices.data(),
                                                            static_cast<Eigen::Index>(otm_prices.size()));
    return IcosFit(std::move(design), std::move(otm));
}

IcosFit fit_icos(const OptionChain& chain, const FitOptions& opts) {
    return IcosFit::fit(make_fit_design(chain, opts));
}

double IcosFit::cos_coeff(int m) const {
    if (m < static_cast<int>(cos_coeffs_.size())) return cos_coeffs_[m];
    const FitDesign& d = *design_;
    double acc = d.chain.discount() * std::cos(d.basis.u(m) * std::log(d.chain.forward / d.chain.alpha()));
    for (int i = 0; i < d.chain.n(); ++i)
        acc += d.qw[i] * d.basis.psi(m, d.chain.strikes[i]) * otm_[i];
    return acc;
}

double IcosFit::a_coeff(int m) const {
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return std::exp(design_->chain.rate * design_->chain.maturity) *
           (cos_coeff(m) + sign * slopes_.call_slope - slopes_.put_slope);
}

std::vector<double> IcosFit::a_coeffs(int count) const {
    if (count <= 0) count = design_->terms;
    std::vector<double> a(static_cast<std::size_t>(count));
    for (int m = 0; m < count; ++m) a[m] = a_coeff(m);
    return a;
}

double IcosFit::price_call_value(double x) const {
    const FitDesign& d = *design_;
    if (!d.basis.interval().contains(x))
        throw std::domain_error("price_call: strike outside [alpha, beta]");
    double cbar = 0.0;
    for (int m = 0; m < d.terms; ++m)
        cbar += (m == 0 ? 0.5 : 1.0) * cos_coeffs_[m] * d.basis.h_call(m, x);
    ZPair z = d.basis.z_call(d.terms, x);
    return cbar + call_at_beta() + z.zc * slopes_.call_slope + z.zp * slopes_.put_slope +
           slopes_.intercept;
}

double IcosFit::price_put_value(double x) const {
    const FitDesign& d = *design_;
    if (!d.basis.interval().contains(x))
        throw std::domain_error("price_put: strike outside [alpha, beta]");
    double pbar = 0.0;
    for (int m = 0; m < d.terms; ++m)
        pbar += (m == 0 ? 0.5 : 1.0) * cos_coeffs_[m] * d.basis.h_put(m, x);
    ZPair z = d.basis.z_put(d.terms, x);
    return pbar + put_at_alpha() + z.zc * slopes_.call_slope + z.zp * slopes_.put_slope +
           slopes_.intercept;
}

double IcosFit::density_scale() const {
    const FitDesign& d = *design_;
    return 2.0 * std::exp(d.chain.rate * d.chain.maturity) / d.basis.interval().log_width();
}

double IcosFit::rnd_value(double y) const {
    const FitDesign& d = *design_;
    double la = std::log(d.chain.alpha()), lb = std::log(d.chain.beta());
    if (y < la - 1e-12 || y > lb + 1e-12)
        throw std::domain_error("rnd: point outside [log alpha, log beta]");
    double acc = 0.0;
    for (int m = 0; m < d.terms; ++m) {
        double sign = (m % 2 == 0) ? 1.0 : -1.0;
        double coeff = cos_coeffs_[m] + sign * slopes_.call_slope - slopes_.put_slope;
        acc += (m == 0 ? 0.5 : 1.0) * coeff * d.basis.h_density(m, y);
    }
    return density_scale() * acc;
}

double IcosFit::delta_call_value(double x) const {
    const FitDesign& d = *design_;
    if (!d.basis.interval().contains(x))
        throw std::domain_error("delta_call: strike outside [alpha, beta]");
    double spot = d.chain.spot();
    if (spot <= 0.0) throw std::domain_error("delta_call: nonpositive spot");
    double acc = 0.0;
    for (int m = 1; m < d.sine_terms; ++m)
        acc += d.basis.u(m) * sine_coeffs_[m] * d.basis.h_call(m, x);
    return -acc / spot + (call_at_beta() - d.chain.beta() * slopes_.call_slope) / spot;
}

const Eigen::VectorXd& IcosFit::error_variances() const {
    if (!design_->with_inference)
        throw std::logic_error("IcosFit: design built without inference");
    return error_var_;
}

const Eigen::Matrix3d& IcosFit::slope_covariance() const {
    if (!design_->with_inference)
        throw std::logic_error("IcosFit: design built without inference");
    return slope_cov_;
}

Estimate IcosFit::price_call(double x, double conf) const {
    return with_band(price_call_value(x), var_call(*this, error_variances(), x), conf);
}

Estimate IcosFit::price_put(double x, double conf) const {
    return with_band(price_put_value(x), var_put(*this, error_variances(), x), conf);
}

Estimate IcosFit::rnd(double y, double conf) const {
    return with_band(rnd_value(y), var_rnd(*this, error_variances(), y), conf);
}

Estimate IcosFit::delta_call(double x, double conf) const {
    return with_band(delta_call_value(x), var_delta(*this, error_variances(), x), conf);
}

Estimate IcosFit::theta_bar(double conf) const {
    return with_band(slopes_.intercept, slope_covariance()(0, 0), conf);
}

Estimate IcosFit::theta_call_slope(double conf) const {
    return with_band(slopes_.call_slope, slope_covariance()(1, 1), conf);
}

Estimate IcosFit::theta_put_slope(double conf) const {
    return with_band(slopes_.put_slope, slope_covariance()(2, 2), conf);
}

}  // namespace icos
