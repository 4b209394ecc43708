#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "gamow/error.hpp"
#include "gamow/units.hpp"

// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
//
// Upper half-plane, three regions:
//   |z| < 1        Maclaurin series  sum (iz)^n / Gamma(n/2 + 1)
//   1 <= |z| < 6   Weideman's rational expansion with 40 terms
//   |z| >= 6       Laplace continued fraction, 40 levels
// The lower half-plane follows from w(-z) = 2 exp(-z^2) - w(z).
// Relative accuracy is ~1e-14 in the upper half-plane.

namespace gamow {

namespace detail {

inline constexpr double inv_sqrt_pi = 0.56418958354775628695;  // 1/sqrt(pi)
inline constexpr double maclaurin_radius = 1.0;
inline constexpr double fraction_radius = 6.0;
inline constexpr int fraction_depth = 40;
inline constexpr int weideman_terms = 40;

struct WeidemanTable {
    std::array<double, weideman_terms> a{};  // a[n] multiplies Z^n
    double L = 0.0;
};

/// Coefficients from the discrete Fourier transform of
/// exp(-t^2)(L^2 + t^2) sampled at t = L tan(theta/2).
inline const WeidemanTable& weideman_table() {
    static const WeidemanTable table = [] {
        constexpr int N = weideman_terms;
        constexpr int M = 2 * N;
        constexpr int M2 = 2 * M;
        WeidemanTable t;
        t.L = std::sqrt(N / std::numbers::sqrt2);
        std::array<double, M2> f{};
        // f[0] = 0, f[1 + (k + M - 1)] for k = -M+1 .. M-1, then fftshift by M.
        std::array<double, M2> raw{};
        for (int k = -M + 1; k <= M - 1; ++k) {
            const double theta = k * std::numbers::pi / M;
            const double x = t.L * std::tan(0.5 * theta);
            raw[static_cast<std::size_t>(k + M)] = std::exp(-x * x) * (t.L * t.L + x * x);
        }
        for (int i = 0; i < M2; ++i) f[static_cast<std::size_t>(i)] = raw[static_cast<std::size_t>((i + M) % M2)];
        for (int n = 1; n <= N; ++n) {
            double re = 0.0;
            for (int i = 0; i < M2; ++i) re += f[static_cast<std::size_t>(i)] * std::cos(2.0 * std::numbers::pi * n * i / M2);
            t.a[static_cast<std::size_t>(n - 1)] = re / M2;
        }
        return t;
    }();
    return table;
}

inline cplx w_maclaurin(cplx z) {
    const cplx iz{-z.imag(), z.real()};
    const cplx iz2 = iz * iz;
    cplx even{1.0, 0.0};
    cplx odd = iz * (2.0 * inv_sqrt_pi);  // (iz) / Gamma(3/2)
    cplx sum = even + odd;
    for (int n = 0; n < 200; n += 2) {
        even *= iz2 / (0.5 * n + 1.0);
        odd *= iz2 / (0.5 * (n + 1) + 1.0);
        sum += even + odd;
        if (std::abs(even) + std::abs(odd) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

inline cplx w_weideman(cplx z) {
    const auto& t = weideman_table();
    const cplx iz{-z.imag(), z.real()};
    const cplx den = t.L - iz;
    const cplx Z = (t.L + iz) / den;
    cplx p{};
    for (int n = weideman_terms - 1; n >= 0; --n) p = p * Z + t.a[static_cast<std::size_t>(n)];
    return 2.0 * p / (den * den) + inv_sqrt_pi / den;
}

/// Tail of the continued fraction: z - D(z), where
/// w(z) = (i/sqrt(pi)) / D(z), D = z - (1/2)/(z - 1/(z - (3/2)/(z - ...))).
inline cplx fraction_remainder(cplx z) {
    cplx d = z;
    for (int m = fraction_depth; m >= 2; --m) d = z - (0.5 * m) / d;
    return 0.5 / d;
}

/// w(z) for Im z >= 0.
inline cplx w_upper(cplx z) {
    const double r = std::abs(z);
    if (r < maclaurin_radius) return w_maclaurin(z);
    if (r < fraction_radius) return w_weideman(z);
    const cplx D = z - fraction_remainder(z);
    return cplx{0.0, inv_sqrt_pi} / D;
}

/// w(z) - i/(sqrt(pi) z) for Im z >= 0, without cancellation at large |z|.
inline cplx w_upper_tail(cplx z) {
    if (std::abs(z) < fraction_radius) return w_upper(z) - cplx{0.0, inv_sqrt_pi} / z;
    const cplx rem = fraction_remainder(z);
    const cplx D = z - rem;
    return cplx{0.0, inv_sqrt_pi} * rem / (z * D);
}

inline cplx reflection_term(cplx z) {
    const cplx mz2 = -z * z;
    if (mz2.real() > 700.0) throw OverflowError(z);
    return 2.0 * std::exp(mz2);
}

}  // namespace detail

inline cplx faddeeva_w(cplx z) {
    if (z.imag() >= 0.0) return detail::w_upper(z);
    return detail::reflection_term(z) - detail::w_upper(-z);
}

/// w(z) - i/(sqrt(pi) z): the Faddeeva function with its leading large-|z|
/// behaviour removed. z must be nonzero.
inline cplx faddeeva_w_tail(cplx z) {
    if (z == cplx{}) throw DomainError("w tail undefined at z = 0");
    if (z.imag() >= 0.0) return detail::w_upper_tail(z);
    // i/(sqrt(pi) z) is odd, so the reflection formula carries over.
    return detail::reflection_term(z) - detail::w_upper_tail(-z);
}

}  // namespace gamow
