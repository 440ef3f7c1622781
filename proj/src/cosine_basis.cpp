#include "icos/cosine_basis.hpp"

namespace icos {

CosineBasis::CosineBasis(Interval interval, int max_terms) : interval_(interval) {
    if (!(interval.alpha > 0.0 && interval.beta > interval.alpha))
        throw std::invalid_argument("CosineBasis: need 0 < alpha < beta");
    if (max_terms < 1) throw std::invalid_argument("CosineBasis: max_terms >= 1");
    u_.resize(static_cast<std::size_t>(max_terms));
    const double width = interval.log_width();
    for (int m = 0; m < max_terms; ++m) u_[m] = m * M_PI / width;
}

double CosineBasis::psi(int m, double s) const {
    check_m(m);
    if (s <= 0.0) throw std::domain_error("psi: s must be positive");
    if (m == 0) return 0.0;
    const double um = u_[m];
    const double w = um * std::log(s / interval_.alpha);
    return um / (s * s) * (std::sin(w) - um * std::cos(w));
}

double CosineBasis::psi_tilde(int m, double s) const {
    check_m(m);
    if (s <= 0.0) throw std::domain_error("psi_tilde: s must be positive");
    if (m == 0) return 0.0;
    const double um = u_[m];
    const double w = um * std::log(s / interval_.alpha);
    return -um / (s * s) * (std::cos(w) + um * std::sin(w));
}

double CosineBasis::h_call(int m, double x) const {
    check_m(m);
    check_strike(x);
    const double width = interval_.log_width();
    if (m == 0)
        return 2.0 / width * (interval_.beta - x - x * std::log(interval_.beta / x));
    const double um = u_[m];
    const double a = std::log(interval_.alpha / x);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return 2.0 * x / (um * (1.0 + um * um) * width) *
           (sign * um * interval_.beta / x - um * std::cos(um * a) - std::sin(um * a));
}

double CosineBasis::h_put(int m, double x) const {
    check_m(m);
    check_strike(x);
    const double width = interval_.log_width();
    const double a = std::log(interval_.alpha / x);
    if (m == 0)
        return 2.0 / width * (x * std::log(x / interval_.alpha) - x + interval_.alpha);
    const double um = u_[m];
    return 2.0 * x / (um * (1.0 + um * um) * width) *
           (-std::sin(um * a) - um * std::cos(um * a) + um * interval_.alpha / x);
}

double CosineBasis::h_density(int m, double y) const {
    check_m(m);
    return std::cos(u_[m] * (y - std::log(interval_.alpha)));
}

ZPair CosineBasis::z_call(int terms, double x) const {
    ZPair z;
    for (int m = 0; m < terms; ++m) {
        double h = h_call(m, x);
        double w = (m == 0) ? 0.5 : 1.0;
        z.zc += w * ((m % 2 == 0) ? h : -h);
        z.zp -= w * h;
    }
    z.zc += x - interval_.beta;
    return z;
}

ZPair CosineBasis::z_put(int terms, double x) const {
    ZPair z;
    for (int m = 0; m < terms; ++m) {
        double h = h_put(m, x);
        double w = (m == 0) ? 0.5 : 1.0;
        z.zc += w * ((m % 2 == 0) ? h : -h);
        z.zp -= w * h;
    }
    z.zp += x - interval_.alpha;
    return z;
}

ZPair CosineBasis::z_density(int terms, double y) const {
    ZPair z;
    for (int m = 0; m < terms; ++m) {
        double h = h_density(m, y);
        double w = (m == 0) ? 0.5 : 1.0;
        z.zc += w * ((m % 2 == 0) ? h : -h);
        z.zp += w * h;
    }
    return z;
}

ZPair CosineBasis::z_delta(int terms, double x) const {
    ZPair z;
    z.zc = 1.0;
    for (int m = 1; m < terms; ++m) {
        double h = h_call(m, x);
        double um2 = u_[m] * u_[m];
        z.zc += um2 / interval_.beta * ((m % 2 == 0) ? h : -h);
        z.zp -= um2 / interval_.alpha * h;
    }
    return z;
}

}  // namespace icos
