#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gamow/error.hpp"
#include "gamow/m_function.hpp"
#include "gamow/pole_finder.hpp"
#include "gamow/resonance_basis.hpp"
#include "gamow/units.hpp"

namespace gamow {

namespace detail {

inline cplx pole_exponential(cplx k, double t, const PhysicalSetup& setup) {
    const cplx energy = setup.kinetic_scale() * k * k;
    return std::exp(cplx{0.0, -1.0} * energy * t / setup.hbar());
}

}  // namespace detail

/// Full pole expansion of the survival amplitude:
///   A(t) = sum_n { P_n e^{-i E_n t / hbar} - P_n M(-k_n) + conj(P_n) M(-conj k_n) },  P_n = C_n C_bar_n.
/// Exact at t = 0, where every M equals 1/2.
inline cplx survival_amplitude_full(std::span<const OverlapPair> pairs, std::span<const ResonancePole> poles,
                                    double t, const PhysicalSetup& setup) {
    if (pairs.size() != poles.size()) throw DomainError("pairs and poles must be index-aligned");
    if (t < 0.0) throw DomainError("survival amplitude requires t >= 0");
    cplx sum{};
    for (std::size_t n = 0; n < poles.size(); ++n) {
        const cplx p = pairs[n].product;
        const cplx k = poles[n].k;
        const cplx exp_part = t == 0.0 ? p : p * detail::pole_exponential(k, t, setup);
        sum += exp_part - p * m_function(-k, t, setup) + std::conj(p) * m_function(-std::conj(k), t, setup);
    }
    return sum;
}

struct OneTermAmplitude {
    cplx a_exp;
    cplx a_non;
};

inline OneTermAmplitude survival_one_term(const OverlapPair& pair, const ResonancePole& pole, double t,
                                          const PhysicalSetup& setup) {
    if (!(t > 0.0)) throw DomainError("one-term amplitude requires t > 0");
    const cplx p = pair.product;
    const double phase = pole.energy.epsilon * t / setup.hbar();
    const double decay = std::exp(-pole.energy.gamma * t / (2.0 * setup.hbar()));
    OneTermAmplitude out;
    out.a_exp = p * decay * cplx{std::cos(phase), -std::sin(phase)};
    out.a_non = -(p * m_regularized(-pole.k, t, setup) - std::conj(p) * m_regularized(-std::conj(pole.k), t, setup));
    return out;
}

struct SurvivalDecomposition {
    std::vector<double> times;
    std::vector<cplx> a_exp;
    std::vector<cplx> a_non;
    std::vector<double> s_exp;
    std::vector<double> s_non;
    std::vector<double> s_int;
    std::vector<double> s_int_cosine;
    std::vector<double> s_total;
    std::vector<double> phi;
    double eta = 0.0;
    double tau = 0.0;

    std::size_t size() const noexcept { return times.size(); }
};

inline SurvivalDecomposition decompose_survival(const OverlapPair& pair, const ResonancePole& pole,
                                                std::span<const double> times, const PhysicalSetup& setup) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) throw DomainError("time grid must be strictly positive");
        if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("time grid must be increasing");
    }
    SurvivalDecomposition d;
    const std::size_t n = times.size();
    d.times.assign(times.begin(), times.end());
    d.a_exp.resize(n);
    d.a_non.resize(n);
    d.s_exp.resize(n);
    d.s_non.resize(n);
    d.s_int.resize(n);
    d.s_int_cosine.resize(n);
    d.s_total.resize(n);
    d.phi.resize(n);
    d.eta = std::arg(pair.product);
    d.tau = lifetime_and_R(pole, setup).tau;
    const double modulus = std::abs(pair.product);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = times[i];
        const auto [ae, an] = survival_one_term(pair, pole, t, setup);
        d.a_exp[i] = ae;
        d.a_non[i] = an;
        d.s_exp[i] = modulus * modulus * std::exp(-pole.energy.gamma * t / setup.hbar());
        d.s_non[i] = std::norm(an);
        d.s_int[i] = 2.0 * (std::conj(ae) * an).real();
        d.phi[i] = std::arg(an);
        d.s_int_cosine[i] = 2.0 * modulus * std::cos(pole.energy.epsilon * t / setup.hbar() - d.eta + d.phi[i]) *
                            std::exp(-pole.energy.gamma * t / (2.0 * setup.hbar())) * std::abs(an);
        d.s_total[i] = d.s_exp[i] + d.s_non[i] + d.s_int[i];
    }
    return d;
}

/// Leading long-time forms of the nonexponential amplitude, its probability
/// and the interference term.
struct AsymptoticTail {
    cplx a_non;
    double s_non;
    double s_int;
};

inline AsymptoticTail asymptotic_tail(const OverlapPair& pair, const ResonancePole& pole, double t,
                                      const PhysicalSetup& setup) {
    if (!(t > 0.0)) throw DomainError("asymptotic tail requires t > 0");
    const double s = std::sqrt(setup.hbar_over_2m());
    const double s3 = s * s * s;
    const double im = (pair.product / (pole.k * pole.k * pole.k)).imag();
    const double t32 = t * std::sqrt(t);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    const cplx a = std::polar(1.0, std::numbers::pi / 4.0) / (2.0 * sqrt_pi);
    AsymptoticTail out;
    out.a_non = -a * im / (s3 * t32);
    out.s_non = im * im / (4.0 * std::numbers::pi * s3 * s3 * t * t * t);
    const double eta = std::arg(pair.product);
    out.s_int = -std::abs(pair.product) * im / (sqrt_pi * s3) *
                std::cos(pole.energy.epsilon * t / setup.hbar() - eta + std::numbers::pi / 4.0) *
                std::exp(-pole.energy.gamma * t / (2.0 * setup.hbar())) / t32;
    return out;
}

enum class Regime { full_nonexponential, early_transition, exponential_dominated };

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::full_nonexponential: return "full-nonexponential";
        case Regime::early_transition: return "early-transition";
        case Regime::exponential_dominated: return "exponential-dominated";
    }
    return "unknown";
}

inline constexpr double nonexponential_threshold = 0.3;
inline constexpr double transition_threshold = 2.0;

inline Regime classify_regime(double R) {
    if (!(R > 0.0)) throw DomainError("R must be positive");
    if (R <= nonexponential_threshold) return Regime::full_nonexponential;
    if (R <= transition_threshold) return Regime::early_transition;
    return Regime::exponential_dominated;
}

/// First time, in lifetimes, after which S_non >= S_exp on every later node.
/// The crossing between the last two bracketing nodes is located by linear
/// interpolation of log(S_non / S_exp). Empty when the grid does not bracket it.
inline std::optional<double> crossover_time(const SurvivalDecomposition& d) {
    const std::size_t n = d.size();
    if (n < 2) return std::nullopt;
    std::optional<std::size_t> last_below;
    for (std::size_t i = n; i-- > 0;) {
        if (d.s_non[i] < d.s_exp[i]) {
            last_below = i;
            break;
        }
    }
    if (!last_below || *last_below + 1 >= n) return std::nullopt;
    const std::size_t i = *last_below;
    const double g0 = std::log(d.s_non[i] / d.s_exp[i]);
    const double g1 = std::log(d.s_non[i + 1] / d.s_exp[i + 1]);
    double t = d.times[i + 1];
    if (std::isfinite(g0) && std::isfinite(g1) && g1 > g0) t = d.times[i] + (d.times[i + 1] - d.times[i]) * (-g0) / (g1 - g0);
    return t / d.tau;
}

inline constexpr int default_points_per_decade = 200;

/// Log-spaced times from first*tau to last*tau (both in lifetimes).
inline std::vector<double> geometric_time_grid(double tau, double first = 1e-3, double last = 1e3,
                                               int per_decade = default_points_per_decade) {
    if (!(tau > 0.0) || !(first > 0.0) || !(last > first) || per_decade < 1)
        throw DomainError("invalid geometric time grid");
    const double decades = std::log10(last / first);
    const auto count = static_cast<std::size_t>(std::llround(decades * per_decade)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = tau * first * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

inline constexpr int min_points_per_oscillation = 20;

/// Uniform grid on [t0, t1] that must sample the period 2 pi hbar / epsilon at
/// least min_points_per_oscillation times.
inline std::vector<double> linear_time_grid(double t0, double t1, std::size_t count, double epsilon,
                                            const PhysicalSetup& setup) {
    if (!(t0 > 0.0) || !(t1 > t0) || count < 2) throw DomainError("invalid linear time grid");
    const double dt = (t1 - t0) / static_cast<double>(count - 1);
    const double period = 2.0 * std::numbers::pi * setup.hbar() / epsilon;
    if (dt > period / min_points_per_oscillation)
        throw ResolutionError("linear time grid under-samples the interference oscillation");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = t0 + dt * static_cast<double>(i);
    return out;
}

/// Least-squares slope of log S versus log t over nodes with t in [t_lo, t_hi].
inline double long_time_slope(std::span<const double> times, std::span<const double> values, double t_lo,
                              double t_hi) {
    if (times.size() != values.size()) throw DomainError("times and values differ in length");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(values[i] > 0.0)) throw DomainError("slope fit needs positive values");
        const double x = std::log(times[i]);
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) throw DomainError("slope fit window holds fewer than two nodes");
    const double md = static_cast<double>(m);
    return (md * sxy - sx * sy) / (md * sxx - sx * sx);
}

}  // namespace gamow
