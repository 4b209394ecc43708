#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "gamow/error.hpp"
#include "gamow/faddeeva.hpp"
#include "gamow/units.hpp"

namespace gamow {

/// Constants of the large-t expansion M(y_q) ~ -a/(s k_q t^{1/2}) - b/((s k_q)^3 t^{3/2}),
/// s = sqrt(hbar/2m), with (pi i)^{1/2} on the principal branch.
struct AsymptoticConstants {
    cplx a;
    cplx b;
};

inline AsymptoticConstants asymptotic_constants() {
    const cplx root = std::sqrt(cplx{0.0, std::numbers::pi});
    return {cplx{0.0, 1.0} / (2.0 * root), 1.0 / (4.0 * root)};
}

/// y_q = -exp(-i pi/4) sqrt(hbar/2m) k_q t^{1/2}.
inline cplx y_argument(cplx kq, double t, const PhysicalSetup& setup) {
    const cplx phase = std::polar(1.0, -0.25 * std::numbers::pi);
    return -phase * std::sqrt(setup.hbar_over_2m()) * kq * std::sqrt(t);
}

/// M(y_q) = (i/2pi) int exp(-i hbar k^2 t/2m)/(k - k_q) dk = w(i y_q)/2.
inline cplx m_function(cplx kq, double t, const PhysicalSetup& setup) {
    if (t < 0.0) throw DomainError("M-function needs t >= 0");
    if (t == 0.0) return 0.5;
    const cplx y = y_argument(kq, t, setup);
    return 0.5 * faddeeva_w(cplx{0.0, 1.0} * y);
}

/// The leading t^{-1/2} part of M, -a/(s k_q t^{1/2}).
inline cplx m_leading_term(cplx kq, double t, const PhysicalSetup& setup) {
    if (!(t > 0.0)) throw DomainError("leading term needs t > 0");
    return -asymptotic_constants().a / (std::sqrt(setup.hbar_over_2m()) * kq * std::sqrt(t));
}

/// M with the t^{-1/2} term removed; decays as t^{-3/2}. Computed as
/// (w(iy) - i/(sqrt(pi) iy))/2, which is the same subtraction written with
/// the same y, so the cancellation is exact rather than numerical.
inline cplx m_regularized(cplx kq, double t, const PhysicalSetup& setup) {
    if (!(t > 0.0)) throw DomainError("regularized M-function needs t > 0");
    const cplx y = y_argument(kq, t, setup);
    return 0.5 * faddeeva_w_tail(cplx{0.0, 1.0} * y);
}

}  // namespace gamow
