#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gamow/error.hpp"
#include "gamow/potential.hpp"
#include "gamow/units.hpp"

namespace gamow {

inline constexpr double default_grid_density = 40.0;  // nodes per nm
inline constexpr double minimum_grid_density = 20.0;

/// Composite Simpson grid over [0, L]; every breakpoint is a node.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double density = 0.0;

    std::size_t size() const noexcept { return nodes.size(); }
    double length() const { return nodes.back(); }

    bool same_as(const QuadratureGrid& other) const {
        if (nodes.size() != other.nodes.size()) return false;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] != other.nodes[i]) return false;
        return true;
    }
};

inline QuadratureGrid build_quadrature_grid(const PiecewisePotential& potential,
                                            double density = default_grid_density) {
    if (!(density > 0.0)) throw ResolutionError("grid density must be positive");
    QuadratureGrid grid;
    grid.density = density;
    grid.nodes.push_back(0.0);
    grid.weights.push_back(0.0);
    for (std::size_t j = 0; j < potential.segment_count(); ++j) {
        const double x0 = potential.segment_start(j);
        const double d = potential.segment_width(j);
        auto n = static_cast<std::size_t>(std::ceil(density * d));
        if (n < 2) n = 2;
        if (n % 2) ++n;
        const double h = d / static_cast<double>(n);
        grid.weights.back() += h / 3.0;
        for (std::size_t i = 1; i <= n; ++i) {
            grid.nodes.push_back(i == n ? potential.segment_start(j) + d : x0 + h * static_cast<double>(i));
            grid.weights.push_back((i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * h / 3.0);
        }
    }
    return grid;
}

template <class F>
cplx integrate(const QuadratureGrid& grid, F&& f) {
    cplx sum{};
    for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * f(i);
    return sum;
}

}  // namespace gamow
