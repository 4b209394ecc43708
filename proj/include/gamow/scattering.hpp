#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "gamow/error.hpp"
#include "gamow/piecewise_wave.hpp"
#include "gamow/potential.hpp"
#include "gamow/units.hpp"

namespace gamow {

/// Local wavenumber q = sqrt(k^2 - V/kinetic_scale), principal branch; k itself
/// in field-free segments. Downstream code only uses even functions of q.
inline cplx segment_momentum(cplx k, double height, const PhysicalSetup& setup) {
    if (height == 0.0) return k;
    return std::sqrt(k * k - height / setup.kinetic_scale());
}

/// Maps (right-going, left-going) plane-wave amplitudes at x = 0 to those at
/// x = L, each referenced to its own boundary: psi = c e^{ik(x-L)} + d e^{-ik(x-L)}.
struct TransferMatrix {
    cplx m11, m12, m21, m22;

    cplx determinant() const { return m11 * m22 - m12 * m21; }
    /// |t|^2 for real k.
    double transmission() const { return 1.0 / std::norm(m22); }
};

namespace detail {

/// (u, u') at x = L for the solution that is purely outgoing on the left,
/// u(0) = 1, u'(0) = -ik; also returns the piecewise closed form.
inline PiecewiseWave left_outgoing_wave(const PiecewisePotential& potential, cplx k, const PhysicalSetup& setup) {
    if (k == cplx{}) throw SingularMomentum();
    std::vector<SegmentWave> segs;
    segs.reserve(potential.segment_count());
    cplx value{1.0, 0.0};
    cplx slope = cplx{0.0, -1.0} * k;
    for (std::size_t j = 0; j < potential.segment_count(); ++j) {
        SegmentWave s{potential.segment_start(j), potential.segment_width(j),
                      segment_momentum(k, potential.height(j), setup), value, slope};
        value = s.at(s.width);
        slope = s.derivative_at(s.width);
        segs.push_back(s);
    }
    return PiecewiseWave(std::move(segs));
}

/// 2x2 propagator of (u, u') across one segment; unimodular, even in q.
inline std::array<cplx, 4> segment_propagator(cplx q, double d) {
    const cplx c = std::cos(q * d);
    const cplx s = d * sinc(q * d);
    return {c, s, -q * q * s, c};
}

}  // namespace detail

inline TransferMatrix transfer_matrix(const PiecewisePotential& potential, cplx k, const PhysicalSetup& setup) {
    if (k == cplx{}) throw SingularMomentum();
    std::array<cplx, 4> p{1.0, 0.0, 0.0, 1.0};
    for (std::size_t j = 0; j < potential.segment_count(); ++j) {
        const auto s = detail::segment_propagator(segment_momentum(k, potential.height(j), setup),
                                                  potential.segment_width(j));
        p = {s[0] * p[0] + s[1] * p[2], s[0] * p[1] + s[1] * p[3], s[2] * p[0] + s[3] * p[2],
             s[2] * p[1] + s[3] * p[3]};
    }
    // M = W^{-1} P W with W = [[1, 1], [ik, -ik]] mapping amplitudes to (u, u').
    const cplx ik = cplx{0.0, 1.0} * k;
    const cplx a = p[0] + p[1] * ik;  // u(L) for a right-going unit wave
    const cplx b = p[0] - p[1] * ik;  // u(L) for a left-going unit wave
    const cplx c = p[2] + p[3] * ik;  // u'(L), right-going
    const cplx d = p[2] - p[3] * ik;  // u'(L), left-going
    return {0.5 * (a + c / ik), 0.5 * (b + d / ik), 0.5 * (a - c / ik), 0.5 * (b - d / ik)};
}

/// Amplitude J(k) of the incoming wave on the right when the left side is
/// purely outgoing, normalized so J = 1 for a vanishing potential. Resonance
/// poles are its zeros. J(-conj(k)) = conj(J(k)) for real potentials.
inline cplx outgoing_condition(const PiecewisePotential& potential, cplx k, const PhysicalSetup& setup) {
    const auto wave = detail::left_outgoing_wave(potential, k, setup);
    const cplx ik = cplx{0.0, 1.0} * k;
    return (ik * wave.right_value() - wave.right_slope()) * std::exp(ik * potential.length()) / (2.0 * ik);
}

/// Un-normalized solution with u(0) = 1 and u'(0) = -ik, in closed form.
inline PiecewiseWave assemble_wave(const PiecewisePotential& potential, cplx k, const PhysicalSetup& setup) {
    return detail::left_outgoing_wave(potential, k, setup);
}

inline std::vector<cplx> assemble_wavefunction(const PiecewisePotential& potential, cplx k,
                                               const PhysicalSetup& setup, std::span<const double> xs) {
    const auto wave = assemble_wave(potential, k, setup);
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = wave(xs[i]);
    return out;
}

}  // namespace gamow
