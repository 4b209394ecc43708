#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gamow/error.hpp"
#include "gamow/potential.hpp"
#include "gamow/scattering.hpp"
#include "gamow/units.hpp"

namespace gamow {

struct ResonancePole {
    int index = 0;
    cplx k;
    ComplexEnergy energy{};
    double residual = 0.0;  // |J(k)| at convergence
    bool proper = false;
    int iterations = 0;

    double alpha() const { return k.real(); }
    double beta() const { return -k.imag(); }
};

inline ResonancePole make_pole(int index, cplx k, double residual, const PhysicalSetup& setup, int iterations = 0) {
    return {index, k, complex_energy(k, setup), residual, k.real() > -k.imag(), iterations};
}

/// Rectangle alpha_min < Re k < alpha_max, im_min < Im k < im_max < 0.
struct ScanRegion {
    double alpha_min;
    double alpha_max;
    double im_min;
    double im_max;

    bool contains(cplx k, double margin = 0.0) const {
        const double ma = margin * (alpha_max - alpha_min);
        const double mi = margin * (im_max - im_min);
        return k.real() > alpha_min - ma && k.real() < alpha_max + ma && k.imag() > im_min - mi &&
               k.imag() < im_max + mi;
    }
};

/// Default search rectangle and cell size for a well of width `w` (nm).
inline ScanRegion default_scan_region(double w) {
    return {1e-4, 5.0 * std::numbers::pi / w, -2.5 / w, -1e-6};
}
inline double default_cell_size(double w) { return std::numbers::pi / (4.0 * w); }

/// Width of the widest field-free segment, or L when there is none.
inline double characteristic_well_width(const PiecewisePotential& potential) {
    double w = 0.0;
    for (std::size_t j = 0; j < potential.segment_count(); ++j)
        if (potential.height(j) == 0.0) w = std::max(w, potential.segment_width(j));
    return w > 0.0 ? w : potential.length();
}

/// Damped Newton iteration on J(k): steps are capped by a trust radius and
/// halved until |J| decreases; a secant step replaces a degenerate derivative.
/// Throws NoConvergence when the iterate leaves `region` (if given) or after
/// 100 iterations.
inline ResonancePole refine_pole(const PiecewisePotential& potential, const PhysicalSetup& setup, cplx seed,
                                 std::optional<ScanRegion> region = std::nullopt) {
    const auto J = [&](cplx k) { return outgoing_condition(potential, k, setup); };
    std::vector<cplx> trail{seed};
    cplx k = seed;
    cplx prev_k = seed;
    cplx prev_j{};
    bool have_prev = false;
    double prev_step = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= 100; ++it) {
        const cplx jk = J(k);
        if (!std::isfinite(jk.real()) || !std::isfinite(jk.imag()))
            throw NoConvergence("J(k) not finite", trail);
        const double h = 1e-7 * std::max(std::abs(k), 1.0);
        cplx d = (J(k + h) - J(k - h)) / (2.0 * h);
        if ((d == cplx{} || !std::isfinite(std::abs(d))) && have_prev) d = (jk - prev_j) / (k - prev_k);
        if (d == cplx{} || !std::isfinite(std::abs(d))) throw NoConvergence("vanishing derivative", trail);
        if (std::abs(jk) <= 1e-15 * std::abs(d) * std::max(std::abs(k), 1.0))
            return make_pole(0, k, std::abs(jk), setup, it - 1);
        cplx step = jk / d;
        const double trust = 0.05 * std::max(std::abs(k), 1.0);
        if (std::abs(step) > trust) step *= trust / std::abs(step);
        for (int halving = 0; halving < 30 && !(std::abs(J(k - step)) < std::abs(jk)); ++halving) step *= 0.5;
        prev_k = k;
        prev_j = jk;
        have_prev = true;
        k -= step;
        trail.push_back(k);
        if (region && !region->contains(k, 0.25)) throw NoConvergence("iterate escaped the search region", trail);
        if (k.real() == 0.0 && k.imag() == 0.0) throw NoConvergence("iterate hit k = 0", trail);
        const double s = std::abs(step);
        // Below ~1e-11 relative the step is at the rounding floor of J.
        if (s < 1e-13 || (s < 1e-11 * std::abs(k) && s >= prev_step))
            return make_pole(0, k, std::abs(J(k)), setup, it);
        prev_step = s;
    }
    throw NoConvergence("iteration limit reached", trail);
}

/// k_{-n} = -conj(k_n); the energy becomes its complex conjugate.
inline ResonancePole mirror_pole(const ResonancePole& p) {
    ResonancePole m = p;
    m.index = -p.index;
    m.k = -std::conj(p.k);
    m.energy = {p.energy.epsilon, -p.energy.gamma};
    m.proper = p.proper;
    return m;
}

struct LifetimeAndR {
    double tau;  // fs
    double R;
};

inline LifetimeAndR lifetime_and_R(const ResonancePole& p, const PhysicalSetup& setup) {
    if (p.energy.gamma == 0.0) throw DegeneratePole();
    return {setup.hbar() / p.energy.gamma, p.energy.epsilon / p.energy.gamma};
}

struct ScanResult {
    std::vector<ResonancePole> poles;  // sorted by alpha, indexed from 1
    int winding_total = 0;             // argument-principle count over the region
    bool truncated = false;
    std::vector<std::string> warnings;
};

namespace detail {

class WindingScanner {
public:
    WindingScanner(const PiecewisePotential& potential, const PhysicalSetup& setup)
        : potential_(potential), setup_(setup) {}

    cplx J(cplx k) const { return outgoing_condition(potential_, k, setup_); }

    /// Phase change of J along the straight segment a -> b.
    double edge_phase(cplx a, cplx b, int pieces = 8) const {
        double total = 0.0;
        cplx za = a;
        cplx ja = checked(za);
        for (int i = 1; i <= pieces; ++i) {
            const cplx zb = a + (b - a) * (static_cast<double>(i) / pieces);
            const cplx jb = checked(zb);
            total += refine_edge(za, zb, ja, jb, 0);
            za = zb;
            ja = jb;
        }
        return total;
    }

    int winding(cplx lo, cplx hi) const {
        const cplx br{hi.real(), lo.imag()};
        const cplx tl{lo.real(), hi.imag()};
        const double phase = edge_phase(lo, br) + edge_phase(br, hi) + edge_phase(hi, tl) + edge_phase(tl, lo);
        return rounded_winding(phase);
    }

    static int rounded_winding(double phase) {
        const double n = phase / (2.0 * std::numbers::pi);
        const double r = std::round(n);
        if (std::abs(n - r) > 0.05) throw IncompleteScan("non-integer winding " + std::to_string(n));
        return static_cast<int>(r);
    }

    /// Finds the `count` zeros inside the cell [lo, hi] by quadtree splitting.
    void locate(cplx lo, cplx hi, int count, std::vector<ResonancePole>& out, int depth = 0) const {
        if (count <= 0) return;
        if (count == 1) {
            try {
                auto p = refine_pole(potential_, setup_, 0.5 * (lo + hi));
                if (p.k.real() >= lo.real() && p.k.real() < hi.real() && p.k.imag() >= lo.imag() &&
                    p.k.imag() < hi.imag()) {
                    out.push_back(p);
                    return;
                }
            } catch (const NoConvergence&) {
            }
        }
        if (depth > 40) throw IncompleteScan("cell subdivision limit reached without isolating a zero");
        const cplx mid = 0.5 * (lo + hi);
        const cplx quads[4][2] = {{lo, mid},
                                  {{mid.real(), lo.imag()}, {hi.real(), mid.imag()}},
                                  {{lo.real(), mid.imag()}, {mid.real(), hi.imag()}},
                                  {mid, hi}};
        int found = 0;
        for (const auto& q : quads) {
            const int n = winding(q[0], q[1]);
            if (n < 0) throw IncompleteScan("negative winding: J has a pole inside the region");
            found += n;
            locate(q[0], q[1], n, out, depth + 1);
        }
        if (found != count) throw IncompleteScan("sub-cell windings do not add up");
    }

private:
    cplx checked(cplx k) const {
        const cplx j = J(k);
        if (!std::isfinite(j.real()) || !std::isfinite(j.imag()) || j == cplx{})
            throw IncompleteScan("J vanishes or overflows on a cell edge");
        return j;
    }

    double refine_edge(cplx a, cplx b, cplx ja, cplx jb, int depth) const {
        const double d = std::arg(jb / ja);
        if (std::abs(d) <= 0.5 * std::numbers::pi) return d;
        if (depth > 60) throw IncompleteScan("zero of J on or too close to a cell edge");
        const cplx m = 0.5 * (a + b);
        const cplx jm = checked(m);
        return refine_edge(a, m, ja, jm, depth + 1) + refine_edge(m, b, jm, jb, depth + 1);
    }

    const PiecewisePotential& potential_;
    const PhysicalSetup& setup_;
};

}  // namespace detail

/// Locates all zeros of J(k) inside `region` by an argument-principle count on
/// a lattice of square-ish cells followed by Newton refinement. The total
/// winding over the region must equal the number of returned poles.
inline ScanResult scan_poles(const PiecewisePotential& potential, const PhysicalSetup& setup,
                             const ScanRegion& region, std::size_t max_count, double cell_size) {
    if (!(region.alpha_min >= 1e-4) || !(region.im_max <= -1e-6) || !(region.im_min < region.im_max) ||
        !(region.alpha_min < region.alpha_max))
        throw DomainError("scan region must lie in the open fourth quadrant, away from k = 0 and the real axis");
    const detail::WindingScanner scanner(potential, setup);
    const auto nx = static_cast<std::size_t>(std::ceil((region.alpha_max - region.alpha_min) / cell_size));
    const auto ny = static_cast<std::size_t>(std::ceil((region.im_max - region.im_min) / cell_size));
    const double dx = (region.alpha_max - region.alpha_min) / static_cast<double>(nx);
    const double dy = (region.im_max - region.im_min) / static_cast<double>(ny);
    const auto corner = [&](std::size_t i, std::size_t j) {
        return cplx{region.alpha_min + dx * static_cast<double>(i), region.im_min + dy * static_cast<double>(j)};
    };

    // Phase increments along shared edges, computed once.
    std::vector<double> horiz((nx) * (ny + 1));
    std::vector<double> vert((nx + 1) * (ny));
    for (std::size_t j = 0; j <= ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) horiz[j * nx + i] = scanner.edge_phase(corner(i, j), corner(i + 1, j));
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i <= nx; ++i)
            vert[j * (nx + 1) + i] = scanner.edge_phase(corner(i, j), corner(i, j + 1));

    double boundary = 0.0;
    for (std::size_t i = 0; i < nx; ++i) boundary += horiz[i] - horiz[ny * nx + i];
    for (std::size_t j = 0; j < ny; ++j) boundary += vert[j * (nx + 1) + nx] - vert[j * (nx + 1)];

    ScanResult result;
    result.winding_total = detail::WindingScanner::rounded_winding(boundary);

    std::vector<ResonancePole> found;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double phase =
                horiz[j * nx + i] + vert[j * (nx + 1) + i + 1] - horiz[(j + 1) * nx + i] - vert[j * (nx + 1) + i];
            const int n = detail::WindingScanner::rounded_winding(phase);
            if (n < 0) throw IncompleteScan("negative winding: J has a pole inside the region");
            scanner.locate(corner(i, j), corner(i + 1, j + 1), n, found);
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.k.real() < b.k.real(); });
    for (std::size_t i = 1; i < found.size(); ++i)
        if (std::abs(found[i].k - found[i - 1].k) < 1e-9 * std::max(1.0, std::abs(found[i].k)))
            throw IncompleteScan("duplicate zero located by two cells");
    if (static_cast<int>(found.size()) != result.winding_total)
        throw IncompleteScan("winding count " + std::to_string(result.winding_total) + " but " +
                             std::to_string(found.size()) + " poles located");
    if (found.size() > max_count) {
        result.truncated = true;
        result.warnings.push_back("pole list truncated from " + std::to_string(found.size()) + " to " +
                                  std::to_string(max_count));
        found.resize(max_count);
    }
    for (std::size_t i = 0; i < found.size(); ++i) found[i].index = static_cast<int>(i + 1);
    result.poles = std::move(found);
    return result;
}

/// The `count` lowest poles (by alpha). Starts from the default region for
/// the potential's well and enlarges it until `count` poles are found and the
/// deepest of them sits well inside the region.
inline std::vector<ResonancePole> find_poles(const PiecewisePotential& potential, const PhysicalSetup& setup,
                                             std::size_t count) {
    const double w = characteristic_well_width(potential);
    ScanRegion region = default_scan_region(w);
    const double cell = default_cell_size(w);
    for (int attempt = 0; attempt < 12; ++attempt) {
        auto scan = scan_poles(potential, setup, region, std::numeric_limits<std::size_t>::max(), cell);
        auto& poles = scan.poles;
        bool deep_enough = true;
        if (poles.size() >= count) {
            double deepest = 0.0;
            for (std::size_t i = 0; i < count; ++i) deepest = std::min(deepest, poles[i].k.imag());
            deep_enough = deepest > 0.7 * region.im_min;
            if (deep_enough) {
                poles.resize(count);
                return poles;
            }
        }
        if (poles.size() < count) region.alpha_max *= 1.5;
        if (!deep_enough || poles.size() < count) region.im_min *= 1.4;
    }
    throw IncompleteScan("could not enclose " + std::to_string(count) + " poles");
}

}  // namespace gamow
