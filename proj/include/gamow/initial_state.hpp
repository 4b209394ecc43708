#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gamow/error.hpp"
#include "gamow/piecewise_wave.hpp"
#include "gamow/potential.hpp"
#include "gamow/quadrature.hpp"

namespace gamow {

enum class InitialStateKind { box_eigenstate, resonance_function, sampled };

inline std::string to_string(InitialStateKind kind) {
    switch (kind) {
        case InitialStateKind::box_eigenstate: return "box";
        case InitialStateKind::resonance_function: return "resonance";
        case InitialStateKind::sampled: return "sampled";
    }
    return "?";
}

/// psi(x, 0) supported on [0, L]. Samples live on a shared quadrature grid;
/// `evaluate` gives the same function at arbitrary x (used by the propagator);
/// `analytic` is present when a closed form aligned with the potential
/// segments exists.
class InitialState {
public:
    InitialState(InitialStateKind kind, QuadratureGrid grid, std::vector<cplx> samples,
                 std::function<cplx(double)> evaluate, std::optional<PiecewiseWave> analytic)
        : kind_(kind),
          grid_(std::move(grid)),
          samples_(std::move(samples)),
          evaluate_(std::move(evaluate)),
          analytic_(std::move(analytic)) {}

    InitialStateKind kind() const noexcept { return kind_; }
    const QuadratureGrid& grid() const noexcept { return grid_; }
    const std::vector<cplx>& samples() const noexcept { return samples_; }
    const std::optional<PiecewiseWave>& analytic() const noexcept { return analytic_; }
    cplx operator()(double x) const {
        if (x < 0.0 || x > grid_.length()) return {};
        return evaluate_(x);
    }

    bool is_real() const {
        for (const auto& s : samples_)
            if (s.imag() != 0.0) return false;
        return true;
    }

    double quadrature_norm() const {
        return integrate(grid_, [&](std::size_t i) { return cplx{std::norm(samples_[i])}; }).real();
    }

private:
    InitialStateKind kind_;
    QuadratureGrid grid_;
    std::vector<cplx> samples_;
    std::function<cplx(double)> evaluate_;
    std::optional<PiecewiseWave> analytic_;
};

namespace detail {

inline constexpr double norm_tolerance = 1e-8;

/// Checks the raw quadrature norm, then rescales samples and closed form so
/// the quadrature norm is one.
inline InitialState finish_state(InitialStateKind kind, QuadratureGrid grid, std::vector<cplx> samples,
                                 std::function<cplx(double)> evaluate, std::optional<PiecewiseWave> analytic,
                                 double expected_norm) {
    double raw = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) raw += grid.weights[i] * std::norm(samples[i]);
    if (std::abs(raw - expected_norm) > norm_tolerance * expected_norm)
        throw ResolutionError("quadrature norm " + std::to_string(raw) + " misses the exact value " +
                              std::to_string(expected_norm) + "; refine the grid");
    const double scale = 1.0 / std::sqrt(raw);
    for (auto& s : samples) s *= scale;
    auto eval = [f = std::move(evaluate), scale](double x) { return scale * f(x); };
    if (analytic) analytic = analytic->scaled(1.0 / std::sqrt(expected_norm));
    return InitialState(kind, std::move(grid), std::move(samples), std::move(eval), std::move(analytic));
}

}  // namespace detail

/// Box eigenstate sqrt(2/w) sin(pi (x - b)/w) on the well of a double barrier.
inline InitialState make_box_initial_state(const DoubleBarrierSpec& spec, double density = default_grid_density) {
    const auto potential = build_double_barrier(spec);
    if (density < minimum_grid_density)
        throw ResolutionError("grid density below " + std::to_string(minimum_grid_density) + " nodes/nm");
    auto grid = build_quadrature_grid(potential, density);
    const double b = spec.barrier_width;
    const double w = spec.well_width;
    const double amp = std::sqrt(2.0 / w);
    const double p = std::numbers::pi / w;
    auto f = [b, w, amp, p](double x) -> cplx {
        if (x <= b || x >= b + w) return {};
        return amp * std::sin(p * (x - b));
    };
    std::vector<cplx> samples(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = f(grid.nodes[i]);

    std::vector<SegmentWave> segs;
    for (std::size_t j = 0; j < potential.segment_count(); ++j) {
        SegmentWave s{potential.segment_start(j), potential.segment_width(j), cplx{p, 0.0}, {}, {}};
        if (j == 1) s.slope = amp * p;
        segs.push_back(s);
    }
    return detail::finish_state(InitialStateKind::box_eigenstate, std::move(grid), std::move(samples), f,
                                PiecewiseWave(std::move(segs)), 1.0);
}

/// Arbitrary state given as a function; normalized on the grid.
inline InitialState make_sampled_initial_state(const QuadratureGrid& grid, std::function<cplx(double)> f) {
    std::vector<cplx> samples(grid.size());
    double raw = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        samples[i] = f(grid.nodes[i]);
        raw += grid.weights[i] * std::norm(samples[i]);
    }
    if (!(raw > 0.0)) throw DomainError("sampled initial state has zero norm");
    return detail::finish_state(InitialStateKind::sampled, grid, std::move(samples), std::move(f), std::nullopt,
                                raw);
}

/// Closed-form state (e.g. a resonance function restricted to [0, L]).
inline InitialState make_wave_initial_state(InitialStateKind kind, const QuadratureGrid& grid,
                                            const PiecewiseWave& wave) {
    const double exact = hermitian_integral(wave, wave).real();
    if (!(exact > 0.0)) throw DomainError("initial state has zero norm");
    std::vector<cplx> samples(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = wave(grid.nodes[i]);
    return detail::finish_state(kind, grid, std::move(samples), [wave](double x) { return wave(x); }, wave,
                                exact);
}

}  // namespace gamow
