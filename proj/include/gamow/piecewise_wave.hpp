#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "gamow/error.hpp"
#include "gamow/units.hpp"

namespace gamow {

namespace detail {

/// sin(x)/x for complex x, even in x.
inline cplx sinc(cplx x) {
    if (std::abs(x) < 1e-3) {
        const cplx x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

/// (e^z - 1) / z with the removable singularity handled.
inline cplx expm1_over(cplx z) {
    if (std::abs(z) < 0.5) {
        cplx term = 1.0;
        cplx sum = 1.0;
        for (int n = 2; n < 30; ++n) {
            term *= z / static_cast<double>(n);
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

/// 20-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
inline constexpr std::array<double, 10> gl20_x = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271, 0.6360536807265150,
    0.7463319064601508, 0.8391169718222188, 0.9122344282513259, 0.9639719272779138, 0.9931285991850949};
inline constexpr std::array<double, 10> gl20_w = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766, 0.1181945319615184,
    0.1019301198172404, 0.0832767415767048, 0.0626720483341091, 0.0406014298003869, 0.0176140071391521};

}  // namespace detail

/// Solution of u'' = -q^2 u on one segment, stored by its value and slope at
/// the left end: u(s) = value cos(qs) + slope sin(qs)/q for 0 <= s <= width.
/// The representation depends only on q^2, so the branch of q is immaterial.
struct SegmentWave {
    double start = 0.0;
    double width = 0.0;
    cplx q{0.0, 0.0};
    cplx value{0.0, 0.0};
    cplx slope{0.0, 0.0};

    cplx at(double s) const {
        const cplx qs = q * s;
        return value * std::cos(qs) + slope * s * detail::sinc(qs);
    }
    cplx derivative_at(double s) const {
        const cplx qs = q * s;
        return slope * std::cos(qs) - value * q * q * s * detail::sinc(qs);
    }
    bool is_zero() const { return value == cplx{} && slope == cplx{}; }
    /// Exponential amplitudes (P, Q) of u = P e^{iqs} + Q e^{-iqs}.
    std::array<cplx, 2> exponential_amplitudes() const {
        const cplx r = slope / (cplx{0.0, 1.0} * q);
        return {0.5 * (value + r), 0.5 * (value - r)};
    }
};

/// A function on [0, L] given segment by segment in closed form.
class PiecewiseWave {
public:
    PiecewiseWave() = default;
    explicit PiecewiseWave(std::vector<SegmentWave> segments) : segments_(std::move(segments)) {}

    const std::vector<SegmentWave>& segments() const noexcept { return segments_; }
    double length() const {
        return segments_.empty() ? 0.0 : segments_.back().start + segments_.back().width;
    }

    cplx operator()(double x) const {
        if (segments_.empty() || x < 0.0 || x > length()) return {};
        std::size_t j = 0;
        while (j + 1 < segments_.size() && x >= segments_[j + 1].start) ++j;
        return segments_[j].at(x - segments_[j].start);
    }

    cplx left_value() const { return segments_.front().value; }
    cplx left_slope() const { return segments_.front().slope; }
    cplx right_value() const { return segments_.back().at(segments_.back().width); }
    cplx right_slope() const { return segments_.back().derivative_at(segments_.back().width); }

    PiecewiseWave scaled(cplx c) const {
        auto out = segments_;
        for (auto& s : out) {
            s.value *= c;
            s.slope *= c;
        }
        return PiecewiseWave(std::move(out));
    }

    PiecewiseWave conjugated() const {
        auto out = segments_;
        for (auto& s : out) {
            s.q = std::conj(s.q);
            s.value = std::conj(s.value);
            s.slope = std::conj(s.slope);
        }
        return PiecewiseWave(std::move(out));
    }

private:
    std::vector<SegmentWave> segments_;
};

namespace detail {

inline cplx segment_product_integral(const SegmentWave& f, const SegmentWave& g) {
    if (f.is_zero() || g.is_zero()) return {};
    const double d = f.width;
    // Near q = 0 the exponential split is ill-conditioned; the functions are
    // nearly polynomial there and Gauss-Legendre is exact enough.
    if (std::abs(f.q) * d < 1e-3 || std::abs(g.q) * d < 1e-3) {
        cplx sum{};
        for (std::size_t i = 0; i < gl20_x.size(); ++i) {
            for (double sign : {-1.0, 1.0}) {
                const double s = 0.5 * d * (1.0 + sign * gl20_x[i]);
                sum += gl20_w[i] * f.at(s) * g.at(s);
            }
        }
        return 0.5 * d * sum;
    }
    const auto [fp, fm] = f.exponential_amplitudes();
    const auto [gp, gm] = g.exponential_amplitudes();
    const cplx i{0.0, 1.0};
    const auto piece = [d](cplx c) { return d * expm1_over(c * d); };
    return fp * gp * piece(i * (f.q + g.q)) + fp * gm * piece(i * (f.q - g.q)) +
           fm * gp * piece(i * (g.q - f.q)) + fm * gm * piece(-i * (f.q + g.q));
}

inline void require_aligned(const PiecewiseWave& f, const PiecewiseWave& g) {
    const auto& a = f.segments();
    const auto& b = g.segments();
    if (a.size() != b.size()) throw IncompatibleGrid("piecewise waves have different segment counts");
    for (std::size_t j = 0; j < a.size(); ++j)
        if (std::abs(a[j].start - b[j].start) > 1e-12 || std::abs(a[j].width - b[j].width) > 1e-12)
            throw IncompatibleGrid("piecewise waves have different breakpoints");
}

}  // namespace detail

/// Integral of f(x) g(x) over [0, L], no conjugation.
inline cplx bilinear_integral(const PiecewiseWave& f, const PiecewiseWave& g) {
    detail::require_aligned(f, g);
    cplx sum{};
    for (std::size_t j = 0; j < f.segments().size(); ++j)
        sum += detail::segment_product_integral(f.segments()[j], g.segments()[j]);
    return sum;
}

/// Integral of conj(f(x)) g(x) over [0, L].
inline cplx hermitian_integral(const PiecewiseWave& f, const PiecewiseWave& g) {
    return bilinear_integral(f.conjugated(), g);
}

}  // namespace gamow
