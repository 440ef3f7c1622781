#pragma once

#include <Eigen/Dense>

#include "icos/estimators.hpp"

namespace icos {

/// Feasible diagonal error covariance: sigma_i^2 = (n/nu) e_i^2 with the
/// trace-corrected degrees of freedom nu = tr(Q) - 2 tr(Q Psi) + tr(Q Psi Psi').
struct ErrorCovariance {
    Eigen::VectorXd sigma2;  // per-strike variances, all >= 0
    double dof = 0.0;        // nu, 0 < nu <= n
};

ErrorCovariance feasible_sigma(const IcosFit& fit);

/// Exact sandwich Var(theta-hat) = (Z'Z)^{-1} Z'(I-Psi) Sigma (I-Psi)' Z (Z'Z)^{-1}.
Eigen::Matrix3d var_theta(const IcosFit& fit, const Eigen::VectorXd& sigma2);

/// Asymptotic variances of the point estimators. Each is the quadratic form
/// g' Sigma g of the exact observation-error loading vector g, which keeps the
/// results nonnegative by construction.
double var_call(const IcosFit& fit, const Eigen::VectorXd& sigma2, double x);
double var_put(const IcosFit& fit, const Eigen::VectorXd& sigma2, double x);
double var_rnd(const IcosFit& fit, const Eigen::VectorXd& sigma2, double y);    // of f-hat(y)
double var_delta(const IcosFit& fit, const Eigen::VectorXd& sigma2, double x);  // of delta-hat(x)
double var_cos_coeff(const IcosFit& fit, const Eigen::VectorXd& sigma2, int m); // of D-hat_m
double var_a_coeff(const IcosFit& fit, const Eigen::VectorXd& sigma2, int m);   // of A-hat_m

}  // namespace icos
