#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace icos {

/// Natural cubic spline on non-uniform knots (second derivative zero at the ends).
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 3 || y_.size() != n)
            throw std::invalid_argument("CubicSpline: need >= 3 knots with matching values");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (x_[i + 1] <= x_[i]) throw std::invalid_argument("CubicSpline: knots must be ascending");

        // Tridiagonal system for second derivatives, natural boundary conditions.
        m_.assign(n, 0.0);
        std::vector<double> diag(n, 1.0), sub(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
            sub[i] = hl / 6.0;
            diag[i] = (hl + hr) / 3.0;
            sup[i] = hr / 6.0;
            rhs[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
        }
        // Thomas algorithm (first and last rows are identity).
        for (std::size_t i = 1; i < n; ++i) {
            double f = sub[i] / diag[i - 1];
            diag[i] -= f * sup[i - 1];
            rhs[i] -= f * rhs[i - 1];
        }
        m_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
    }

    double operator()(double x) const {
        const std::size_t n = x_.size();
        if (x < x_[0] || x > x_[n - 1])
            throw std::domain_error("CubicSpline: evaluation outside knot range");
        std::size_t i = 0, j = n - 1;
        while (j - i > 1) {
            std::size_t k = (i + j) / 2;
            (x_[k] <= x ? i : j) = k;
        }
        double h = x_[i + 1] - x_[i];
        double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

private:
    std::vector<double> x_, y_, m_;
};

}  // namespace icos
