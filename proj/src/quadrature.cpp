#include "icos/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace icos {

int quad_order(QuadScheme s) {
    switch (s) {
        case QuadScheme::left_riemann:
        case QuadScheme::right_riemann: return 1;
        case QuadScheme::trapezoid: return 2;
        case QuadScheme::simpson13: return 4;
    }
    return 0;
}

QuadScheme quad_scheme_from_name(const std::string& name) {
    if (name == "left") return QuadScheme::left_riemann;
    if (name == "right") return QuadScheme::right_riemann;
    if (name == "trap" || name == "trapezoid") return QuadScheme::trapezoid;
    if (name == "simpson") return QuadScheme::simpson13;
    throw std::invalid_argument("unknown quadrature scheme: " + name);
}

std::string quad_scheme_name(QuadScheme s) {
    switch (s) {
        case QuadScheme::left_riemann: return "left";
        case QuadScheme::right_riemann: return "right";
        case QuadScheme::trapezoid: return "trap";
        case QuadScheme::simpson13: return "simpson";
    }
    return "?";
}

GridKind GridKind::of(std::span<const double> nodes, double rel_tol) {
    if (nodes.size() < 2) throw std::invalid_argument("grid needs at least 2 nodes");
    GridKind g;
    const std::size_t n = nodes.size();
    double mean_step = (nodes[n - 1] - nodes[0]) / static_cast<double>(n - 1);
    g.spacings.resize(n - 1);
    double max_dev = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        g.spacings[i] = nodes[i + 1] - nodes[i];
        if (g.spacings[i] <= 0.0) throw std::invalid_argument("grid nodes must be strictly ascending");
        max_dev = std::max(max_dev, std::abs(g.spacings[i] - mean_step));
    }
    g.uniform = max_dev < rel_tol * std::abs(mean_step);
    g.step = mean_step;
    if (g.uniform) g.spacings.clear();
    return g;
}

std::vector<double> quad_weights(QuadScheme scheme, int n) {
    if (n < 2) throw std::invalid_argument("quad_weights: n >= 2 required");
    std::vector<double> w(static_cast<std::size_t>(n), 1.0);
    switch (scheme) {
        case QuadScheme::left_riemann:
            w[n - 1] = 0.0;
            break;
        case QuadScheme::right_riemann:
            w[0] = 0.0;
            break;
        case QuadScheme::trapezoid:
            w[0] = w[n - 1] = 0.5;
            break;
        case QuadScheme::simpson13: {
            if (n % 2 == 0)
                throw std::invalid_argument("simpson13 requires an odd node count");
            w[0] = w[n - 1] = 1.0 / 3.0;
            // 1-based interior index i: w_i = (3 + (-1)^i)/3, i.e. 4/3, 2/3 alternating.
            for (int i = 2; i <= n - 1; ++i)
                w[i - 1] = (3.0 + ((i % 2 == 0) ? 1.0 : -1.0)) / 3.0;
            break;
        }
    }
    return w;
}

std::vector<double> quad_node_weights(QuadScheme scheme, std::span<const double> nodes,
                                      const GridKind& grid) {
    const std::size_t n = nodes.size();
    if (n < 2) throw std::invalid_argument("quad_node_weights: need >= 2 nodes");
    std::vector<double> w(n);
    if (grid.uniform) {
        auto base = quad_weights(scheme, static_cast<int>(n));
        for (std::size_t i = 0; i < n; ++i) w[i] = base[i] * grid.step;
        return w;
    }
    // Non-uniform: trapezoid folded into per-node weights.
    w[0] = 0.5 * (nodes[1] - nodes[0]);
    w[n - 1] = 0.5 * (nodes[n - 1] - nodes[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (nodes[i + 1] - nodes[i - 1]);
    return w;
}

double quad_integrate(std::span<const double> samples, QuadScheme scheme,
                      std::span<const double> nodes, const GridKind& grid) {
    if (samples.size() != nodes.size())
        throw std::invalid_argument("quad_integrate: samples/nodes length mismatch");
    auto w = quad_node_weights(scheme, nodes, grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) acc += w[i] * samples[i];
    return acc;
}

}  // namespace icos
