#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gamow/error.hpp"

namespace gamow {

/// Finite-range potential made of constant segments on [0, L]; zero outside.
class PiecewisePotential {
public:
    PiecewisePotential(std::vector<double> breakpoints, std::vector<double> heights)
        : breakpoints_(std::move(breakpoints)), heights_(std::move(heights)) {
        if (heights_.empty()) throw InvalidSpec("potential needs at least one segment");
        if (breakpoints_.size() != heights_.size() + 1)
            throw InvalidSpec("need one more breakpoint than segments");
        if (breakpoints_.front() != 0.0) throw InvalidSpec("first breakpoint must be 0");
        for (std::size_t i = 1; i < breakpoints_.size(); ++i)
            if (!(breakpoints_[i] > breakpoints_[i - 1]))
                throw InvalidSpec("breakpoints must be strictly increasing");
        for (double v : heights_)
            if (!std::isfinite(v)) throw InvalidSpec("segment heights must be finite");
    }

    std::size_t segment_count() const noexcept { return heights_.size(); }
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> heights() const noexcept { return heights_; }
    double length() const noexcept { return breakpoints_.back(); }
    double segment_start(std::size_t j) const { return breakpoints_[j]; }
    double segment_width(std::size_t j) const { return breakpoints_[j + 1] - breakpoints_[j]; }
    double height(std::size_t j) const { return heights_[j]; }

    double max_height() const {
        double m = 0.0;
        for (double v : heights_) m = std::max(m, v);
        return m;
    }

    /// Index of the segment containing x (right-closed on the last one).
    /// Only meaningful for 0 <= x <= L.
    std::size_t segment_of(double x) const {
        std::size_t j = 0;
        while (j + 1 < heights_.size() && x >= breakpoints_[j + 1]) ++j;
        return j;
    }

    double operator()(double x) const {
        if (x < 0.0 || x > length()) return 0.0;
        return heights_[segment_of(x)];
    }

private:
    std::vector<double> breakpoints_;
    std::vector<double> heights_;
};

struct DoubleBarrierSpec {
    double barrier_width;  // nm
    double well_width;     // nm
    double barrier_height;  // eV

    double length() const noexcept { return 2.0 * barrier_width + well_width; }
};

inline PiecewisePotential build_double_barrier(const DoubleBarrierSpec& spec) {
    const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(spec.barrier_width)) throw InvalidSpec("barrier width must be positive");
    if (!positive(spec.well_width)) throw InvalidSpec("well width must be positive");
    if (!positive(spec.barrier_height)) throw InvalidSpec("barrier height must be positive");
    const double b = spec.barrier_width;
    const double w = spec.well_width;
    return PiecewisePotential({0.0, b, b + w, 2.0 * b + w}, {spec.barrier_height, 0.0, spec.barrier_height});
}

}  // namespace gamow
