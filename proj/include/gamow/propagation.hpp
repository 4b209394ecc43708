#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "gamow/error.hpp"
#include "gamow/initial_state.hpp"
#include "gamow/potential.hpp"
#include "gamow/units.hpp"

namespace gamow {

/// Direct integration of the time-dependent equation on [-D, L + D].
/// The absorber is a quartic negative-imaginary ramp occupying the outer
/// `absorber_width` of each side.
struct PropagationConfig {
    double margin = 0.0;           // D, nm
    double dx = 0.005;             // nm
    double dt = 0.01;              // fs
    double absorber_strength = 1.0;  // eV
    double absorber_width = 0.0;   // nm
    double max_energy = 0.0;       // eV, largest energy scale the run must resolve
    bool verify_unitarity = true;
};

inline constexpr double max_oracle_dx = 0.01;
inline constexpr double min_margin_factor = 10.0;
inline constexpr double min_steps_per_period = 20.0;
inline constexpr double unitarity_bound = 1e-8;

namespace detail {

inline long aligned_index(double x, double dx, const char* what) {
    const double r = x / dx;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r)))
        throw ConfigError(std::string(what) + " is not a multiple of dx");
    return static_cast<long>(n);
}

inline void validate(const PiecewisePotential& potential, const PropagationConfig& c) {
    const double L = potential.length();
    if (!(c.dx > 0.0) || c.dx > max_oracle_dx) throw ConfigError("dx must lie in (0, 0.01] nm");
    if (!(c.margin >= min_margin_factor * L)) throw ConfigError("margin D must be at least 10 L");
    if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
    const double scale = std::max(potential.max_height(), c.max_energy);
    if (hbar_eV_fs / c.dt < min_steps_per_period * scale)
        throw ConfigError("dt too large: hbar/dt must be at least 20 times max(V, energy)");
    if (c.absorber_strength < 0.0) throw ConfigError("absorber strength must be non-negative");
    if (c.absorber_strength > 0.0 && !(c.absorber_width > 0.0 && c.absorber_width <= c.margin / 2.0))
        throw ConfigError("absorber width must lie in (0, D/2]");
    aligned_index(c.margin, c.dx, "margin");
    for (double x : potential.breakpoints()) aligned_index(x, c.dx, "breakpoint");
}

/// Crank-Nicolson stepper with a prefactored tridiagonal left-hand side.
class CrankNicolson {
public:
    CrankNicolson(const PiecewisePotential& potential, const PropagationConfig& c, const PhysicalSetup& setup,
                  bool absorb)
        : dx_(c.dx), offset_(aligned_index(c.margin, c.dx, "margin")) {
        const long n_core = aligned_index(potential.length(), c.dx, "length");
        const auto n = static_cast<std::size_t>(n_core + 2 * offset_ + 1);
        const double kin = setup.kinetic_scale() / (c.dx * c.dx);
        const cplx mu{0.0, c.dt / (2.0 * hbar_eV_fs)};
        const double lo = -c.margin + c.absorber_width;
        const double hi = potential.length() + c.margin - c.absorber_width;
        const auto bps = potential.breakpoints();

        std::vector<cplx> diag(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = position(i);
            double v = potential(x);
            for (std::size_t j = 0; j < bps.size(); ++j) {
                if (std::abs(x - bps[j]) < 0.5 * c.dx) {
                    const double left = j == 0 ? 0.0 : potential.height(j - 1);
                    const double right = j + 1 == bps.size() ? 0.0 : potential.height(j);
                    v = 0.5 * (left + right);
                }
            }
            double w = 0.0;
            if (absorb && c.absorber_strength > 0.0) {
                if (x < lo) w = c.absorber_strength * std::pow((lo - x) / c.absorber_width, 4);
                if (x > hi) w = c.absorber_strength * std::pow((x - hi) / c.absorber_width, 4);
            }
            diag[i] = cplx{2.0 * kin + v, -w};
        }
        off_rhs_ = mu * kin;      // -mu * (-kin)
        const cplx off_lhs = -mu * kin;
        rhs_diag_.resize(n);
        inv_pivot_.resize(n);
        lower_.resize(n);
        cplx prev_pivot{};
        for (std::size_t i = 0; i < n; ++i) {
            rhs_diag_[i] = 1.0 - mu * diag[i];
            const cplx a = 1.0 + mu * diag[i];
            const cplx l = i == 0 ? cplx{} : off_lhs / prev_pivot;
            lower_[i] = l;
            prev_pivot = a - l * off_lhs;
            inv_pivot_[i] = 1.0 / prev_pivot;
        }
        off_lhs_ = off_lhs;
        work_.resize(n);
    }

    std::size_t size() const noexcept { return rhs_diag_.size(); }
    double position(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(offset_)) * dx_; }
    std::size_t core_begin() const { return static_cast<std::size_t>(offset_); }

    void step(std::vector<cplx>& psi) {
        const std::size_t n = psi.size();
        for (std::size_t i = 0; i < n; ++i) {
            cplx r = rhs_diag_[i] * psi[i];
            if (i > 0) r += off_rhs_ * psi[i - 1];
            if (i + 1 < n) r += off_rhs_ * psi[i + 1];
            work_[i] = r;
        }
        for (std::size_t i = 1; i < n; ++i) work_[i] -= lower_[i] * work_[i - 1];
        psi[n - 1] = work_[n - 1] * inv_pivot_[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) psi[i] = (work_[i] - off_lhs_ * psi[i + 1]) * inv_pivot_[i];
    }

private:
    double dx_;
    long offset_;
    cplx off_rhs_;
    cplx off_lhs_;
    std::vector<cplx> rhs_diag_;
    std::vector<cplx> lower_;
    std::vector<cplx> inv_pivot_;
    std::vector<cplx> work_;
};

struct CoreState {
    std::vector<cplx> psi0;    // full-grid initial vector
    std::vector<double> weights;  // trapezoid weights on [0, L], zero elsewhere
};

inline CoreState sample_initial(const CrankNicolson& cn, const InitialState& state0, double length, double dx) {
    CoreState s;
    s.psi0.assign(cn.size(), cplx{});
    s.weights.assign(cn.size(), 0.0);
    const std::size_t first = cn.core_begin();
    const auto m = static_cast<std::size_t>(std::llround(length / dx));
    double norm = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
        const std::size_t i = first + j;
        const double x = std::clamp(static_cast<double>(j) * dx, 0.0, length);
        s.psi0[i] = state0(x);
        s.weights[i] = (j == 0 || j == m) ? 0.5 * dx : dx;
        norm += s.weights[i] * std::norm(s.psi0[i]);
    }
    if (!(norm > 0.0)) throw DomainError("initial state vanishes on the propagation grid");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : s.psi0) v *= scale;
    return s;
}

inline std::vector<long> step_counts(std::span<const double> times, double dt) {
    std::vector<long> out;
    out.reserve(times.size());
    long prev = -1;
    for (double t : times) {
        if (t < 0.0) throw DomainError("propagation times must be non-negative");
        const long n = std::lround(t / dt);
        if (n < prev) throw DomainError("propagation times must be non-decreasing");
        out.push_back(n);
        prev = n;
    }
    return out;
}

inline std::vector<double> survival_run(const PiecewisePotential& potential, const InitialState& state0,
                                        std::span<const long> steps, const PropagationConfig& c,
                                        const PhysicalSetup& setup) {
    CrankNicolson cn(potential, c, setup, true);
    auto core = sample_initial(cn, state0, potential.length(), c.dx);
    std::vector<cplx> psi = core.psi0;
    std::vector<double> out;
    out.reserve(steps.size());
    long done = 0;
    for (long target : steps) {
        for (; done < target; ++done) cn.step(psi);
        cplx a{};
        for (std::size_t i = 0; i < psi.size(); ++i)
            if (core.weights[i] != 0.0) a += core.weights[i] * std::conj(core.psi0[i]) * psi[i];
        out.push_back(std::norm(a));
    }
    return out;
}

}  // namespace detail

struct PropagationResult {
    std::vector<double> times;     // requested times rounded to whole coarse steps
    std::vector<double> survival;  // fine-resolution S(t)
    std::vector<double> coarse;    // S(t) at (dx, dt)
    std::vector<double> error;     // Richardson estimate |fine - coarse| / 3
};

/// Norm bookkeeping from an absorber-free run with doubled margin.
struct NormAudit {
    double total_drift = 0.0;     // max |N(t) - N(0)| / N(0)
    double max_step_drift = 0.0;  // max per-step relative change
};

inline NormAudit core_norm_drift(const PiecewisePotential& potential, const InitialState& state0, double t_final,
                                 const PropagationConfig& config, const PhysicalSetup& setup) {
    PropagationConfig c = config;
    c.margin *= 2.0;
    detail::validate(potential, c);
    detail::CrankNicolson cn(potential, c, setup, false);
    auto core = detail::sample_initial(cn, state0, potential.length(), c.dx);
    auto psi = core.psi0;
    auto norm = [&] {
        double s = 0.0;
        for (const auto& v : psi) s += std::norm(v);
        return s;
    };
    const double n0 = norm();
    double prev = n0;
    NormAudit audit;
    const long steps = std::lround(t_final / c.dt);
    for (long k = 0; k < steps; ++k) {
        cn.step(psi);
        const double nk = norm();
        audit.max_step_drift = std::max(audit.max_step_drift, std::abs(nk - prev) / n0);
        audit.total_drift = std::max(audit.total_drift, std::abs(nk - n0) / n0);
        prev = nk;
    }
    return audit;
}

/// S(t) = |int_0^L conj(psi(x,0)) psi(x,t) dx|^2 from direct propagation at
/// (dx, dt) and (dx/2, dt/2).
inline PropagationResult propagate_survival(const PiecewisePotential& potential, const InitialState& state0,
                                            std::span<const double> times, const PropagationConfig& config,
                                            const PhysicalSetup& setup) {
    detail::validate(potential, config);
    const auto steps = detail::step_counts(times, config.dt);
    if (config.verify_unitarity && !steps.empty()) {
        const auto audit = core_norm_drift(potential, state0, static_cast<double>(steps.back()) * config.dt, config,
                                           setup);
        if (audit.total_drift > unitarity_bound)
            throw OracleInvalid("absorber-free norm drift " + std::to_string(audit.total_drift) +
                                " exceeds the bound");
    }
    PropagationConfig fine = config;
    fine.dx /= 2.0;
    fine.dt /= 2.0;
    std::vector<long> fine_steps(steps.size());
    std::transform(steps.begin(), steps.end(), fine_steps.begin(), [](long n) { return 2 * n; });

    PropagationResult r;
    r.coarse = detail::survival_run(potential, state0, steps, config, setup);
    r.survival = detail::survival_run(potential, state0, fine_steps, fine, setup);
    r.times.resize(steps.size());
    r.error.resize(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) {
        r.times[i] = static_cast<double>(steps[i]) * config.dt;
        r.error[i] = std::abs(r.survival[i] - r.coarse[i]) / 3.0;
    }
    return r;
}

}  // namespace gamow
