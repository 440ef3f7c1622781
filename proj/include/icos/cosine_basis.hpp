#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace icos {

/// Price interval [alpha, beta] with the log transforms used by the expansion:
/// for a reference level x, a(x) = log(alpha/x), b(x) = log(beta/x).
struct Interval {
    double alpha = 0.0;
    double beta = 0.0;

    double log_width() const { return std::log(beta / alpha); }
    bool contains(double x) const {
        return x >= alpha * (1.0 - 1e-12) && x <= beta * (1.0 + 1e-12);
    }
};

struct ZPair {
    double zc = 0.0;  // loading on the call strike-slope at beta
    double zp = 0.0;  // loading on the put strike-slope at alpha
};

/// Deterministic basis quantities on a fixed interval: frequencies u_m,
/// the strike-space derivatives of the cosine/sine payoffs, the analytic
/// payoff projection coefficients for calls and puts, the density cosines,
/// and the truncation-adjustment sums. Immutable after construction.
class CosineBasis {
public:
    CosineBasis(Interval interval, int max_terms);

    const Interval& interval() const { return interval_; }
    int max_terms() const { return static_cast<int>(u_.size()); }
    double u(int m) const { return u_[check_m(m)]; }

    /// Second strike-derivative of cos(u_m log(s/alpha)); identically 0 for m = 0.
    double psi(int m, double s) const;

    /// Second strike-derivative of sin(u_m log(s/alpha)); identically 0 for m = 0.
    double psi_tilde(int m, double s) const;

    /// Cosine projection coefficient of the call payoff x*max(e^y - 1, 0)
    /// on [log(alpha/x), log(beta/x)], closed form.
    double h_call(int m, double x) const;

    /// Cosine projection coefficient of the put payoff x*max(1 - e^y, 0).
    double h_put(int m, double x) const;

    /// Density cosine cos(u_m (y - log alpha)) for y in [log alpha, log beta].
    double h_density(int m, double y) const;

    /// Call interpolation loadings: Z_c = x - beta + sum' (-1)^m H_m(x),
    /// Z_p = -sum' H_m(x), with the m = 0 term half-weighted.
    ZPair z_call(int terms, double x) const;

    /// Put loadings: Z_c = sum' (-1)^m Hp_m(x), Z_p = x - alpha - sum' Hp_m(x).
    ZPair z_put(int terms, double x) const;

    /// Density loadings (raw signs): Z_c = sum' (-1)^m Hf_m(y), Z_p = sum' Hf_m(y).
    ZPair z_density(int terms, double y) const;

    /// Delta boundary loadings: Z_c = 1 + sum_{m>=1} (u_m^2/beta)(-1)^m H_m(x),
    /// Z_p = -sum_{m>=1} (u_m^2/alpha) H_m(x).
    ZPair z_delta(int terms, double x) const;

private:
    int check_m(int m) const {
        if (m < 0 || m >= max_terms()) throw std::out_of_range("CosineBasis: term index");
        return m;
    }
    void check_strike(double x) const {
        if (!interval_.contains(x)) throw std::domain_error("CosineBasis: strike outside interval");
    }

    Interval interval_;
    std::vector<double> u_;
};

}  // namespace icos
