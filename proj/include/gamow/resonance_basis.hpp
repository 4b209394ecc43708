#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "gamow/error.hpp"
#include "gamow/initial_state.hpp"
#include "gamow/piecewise_wave.hpp"
#include "gamow/pole_finder.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/scattering.hpp"

namespace gamow {

/// Resonance function u_n normalized by
///   int_0^L u_n^2 dx + i (u_n(0)^2 + u_n(L)^2) / (2 k_n) = 1
/// (bilinear, no complex conjugation).
struct ResonanceState {
    ResonancePole pole;
    PiecewiseWave wave;
    QuadratureGrid grid;
    std::vector<cplx> samples;
    cplx u0;
    cplx uL;
    cplx norm_residual;  // value of the normalization form minus one

    cplx operator()(double x) const { return wave(x); }
};

/// Integral term and boundary term of the normalization form.
struct BilinearNorm {
    cplx integral;
    cplx boundary;
    cplx total() const { return integral + boundary; }
};

inline BilinearNorm bilinear_norm(const PiecewiseWave& u, cplx k) {
    const cplx u0 = u.left_value();
    const cplx uL = u.right_value();
    return {bilinear_integral(u, u), cplx{0.0, 1.0} * (u0 * u0 + uL * uL) / (2.0 * k)};
}

/// Scales the raw solution so the normalization form equals one. The global
/// sign is fixed by Re u(0) >= 0 (Im u(0) > 0 on a tie).
inline ResonanceState normalize_resonance_state(const PiecewiseWave& raw, const ResonancePole& pole,
                                                const QuadratureGrid& grid) {
    const cplx form = bilinear_norm(raw, pole.k).total();
    if (std::abs(form) < 1e-300 || !std::isfinite(std::abs(form))) throw DegenerateNormalization();
    cplx scale = 1.0 / std::sqrt(form);
    const cplx u0 = raw.left_value() * scale;
    if (u0.real() < 0.0 || (u0.real() == 0.0 && u0.imag() < 0.0)) scale = -scale;
    ResonanceState state{pole, raw.scaled(scale), grid, {}, {}, {}, {}};
    state.samples.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) state.samples[i] = state.wave(grid.nodes[i]);
    state.u0 = state.wave.left_value();
    state.uL = state.wave.right_value();
    state.norm_residual = bilinear_norm(state.wave, pole.k).total() - 1.0;
    return state;
}

inline ResonanceState build_resonance_state(const PiecewisePotential& potential, const ResonancePole& pole,
                                            const PhysicalSetup& setup, const QuadratureGrid& grid) {
    return normalize_resonance_state(assemble_wave(potential, pole.k, setup), pole, grid);
}

inline std::vector<ResonanceState> build_resonance_states(const PiecewisePotential& potential,
                                                          std::span<const ResonancePole> poles,
                                                          const PhysicalSetup& setup, const QuadratureGrid& grid) {
    std::vector<ResonanceState> out;
    out.reserve(poles.size());
    for (const auto& p : poles) out.push_back(build_resonance_state(potential, p, setup, grid));
    return out;
}

/// u_n restricted to [0, L] and normalized to unit L2 norm.
inline InitialState make_resonance_initial_state(const ResonanceState& state) {
    return make_wave_initial_state(InitialStateKind::resonance_function, state.grid, state.wave);
}

struct OverlapPair {
    int n = 0;
    cplx c;
    cplx c_bar;
    cplx product;
    double eta = 0.0;  // arg(c * c_bar)
};

enum class OverlapMethod { automatic, analytic, quadrature };

/// C_n = int psi(x,0) u_n dx and C_bar_n = int conj(psi(x,0)) u_n dx over [0, L].
/// `automatic` uses closed-form integrals when the initial state has one.
inline std::vector<OverlapPair> overlap_coefficients(const InitialState& state0,
                                                     std::span<const ResonanceState> states,
                                                     OverlapMethod method = OverlapMethod::automatic) {
    if (method == OverlapMethod::automatic)
        method = state0.analytic() ? OverlapMethod::analytic : OverlapMethod::quadrature;
    if (method == OverlapMethod::analytic && !state0.analytic())
        throw DomainError("initial state has no closed form");
    const bool real = state0.is_real();
    std::vector<OverlapPair> out;
    out.reserve(states.size());
    for (const auto& u : states) {
        if (!u.grid.same_as(state0.grid())) throw IncompatibleGrid("initial state and resonance state grids differ");
        OverlapPair p;
        p.n = u.pole.index;
        if (method == OverlapMethod::analytic) {
            p.c = bilinear_integral(*state0.analytic(), u.wave);
            p.c_bar = real ? p.c : hermitian_integral(*state0.analytic(), u.wave);
        } else {
            const auto& psi = state0.samples();
            p.c = integrate(u.grid, [&](std::size_t i) { return psi[i] * u.samples[i]; });
            p.c_bar = real ? p.c : integrate(u.grid, [&](std::size_t i) { return std::conj(psi[i]) * u.samples[i]; });
        }
        p.product = p.c * p.c_bar;
        p.eta = std::arg(p.product);
        out.push_back(p);
    }
    return out;
}

struct SumRuleResiduals {
    double r1;  // |Re sum C C_bar - 1|
    double r2;  // |Im sum C C_bar / k|
    std::size_t count;
};

inline SumRuleResiduals sum_rule_residuals(std::span<const OverlapPair> pairs, std::span<const ResonancePole> poles) {
    if (pairs.size() != poles.size()) throw DomainError("pairs and poles must be index-aligned");
    cplx s1{};
    cplx s2{};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        s1 += pairs[i].product;
        s2 += pairs[i].product / poles[i].k;
    }
    return {std::abs(s1.real() - 1.0), std::abs(s2.imag()), pairs.size()};
}

}  // namespace gamow
