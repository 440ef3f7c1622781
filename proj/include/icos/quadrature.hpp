#pragma once

#include <span>
#include <string>
#include <vector>

namespace icos {

/// Composite integration rules on an equidistant grid,
/// integral ≈ sum_i w_i f(K_i) Δ.  Error orders: 1, 1, 2, 4.
enum class QuadScheme { left_riemann, right_riemann, trapezoid, simpson13 };

int quad_order(QuadScheme s);
QuadScheme quad_scheme_from_name(const std::string& name);  // left|right|trap|simpson
std::string quad_scheme_name(QuadScheme s);

/// Grid geometry of a strike list.
struct GridKind {
    bool uniform = true;
    double step = 0.0;                   // Δ when uniform
    std::vector<double> spacings;        // K_{i+1}-K_i when non-uniform

    static GridKind of(std::span<const double> nodes, double rel_tol = 1e-9);
};

/// Per-node weights for a uniform n-point grid (dimensionless; pair with Δ).
/// simpson13 requires n odd and is rejected otherwise.
std::vector<double> quad_weights(QuadScheme scheme, int n);

/// Per-node effective weights carrying the grid step: integral ≈ sum_i w_i f(K_i).
/// Uniform grids use the requested scheme; non-uniform grids always fall back to
/// the trapezoid rule folded into node weights.
std::vector<double> quad_node_weights(QuadScheme scheme, std::span<const double> nodes,
                                      const GridKind& grid);

/// Weighted sum of samples aligned with `nodes`.
double quad_integrate(std::span<const double> samples, QuadScheme scheme,
                      std::span<const double> nodes, const GridKind& grid);

}  // namespace icos
