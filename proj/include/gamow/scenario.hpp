#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gamow/config.hpp"
#include "gamow/csv.hpp"
#include "gamow/error.hpp"
#include "gamow/initial_state.hpp"
#include "gamow/pole_finder.hpp"
#include "gamow/propagation.hpp"
#include "gamow/resonance_basis.hpp"
#include "gamow/survival.hpp"
#include "gamow/version.hpp"

namespace gamow {

inline constexpr double oracle_log_tolerance = 0.02;

struct SweepRow {
    double well_width = 0.0;
    std::optional<ResonancePole> pole;
    double tau = 0.0;
    double R = 0.0;
    std::optional<Regime> regime;
    bool flagged = false;
    std::string note;
};

/// Lowest resonance across well widths from w_first to w_last. Each step is
/// seeded from the previous pole; a step whose continuation fails or lands on
/// a different pole than a fresh scan is flagged and the sweep carries on.
inline std::vector<SweepRow> sweep_well_width(const ScenarioConfig& base, double w_first, double w_last, int steps) {
    if (steps < 2) throw ConfigError("sweep needs at least 2 steps");
    if (!(w_first > 0.0) || !(w_last > 0.0)) throw ConfigError("sweep well widths must be positive");
    const PhysicalSetup setup(base.effective_mass);
    std::vector<SweepRow> rows;
    std::optional<cplx> previous;
    for (int i = 0; i < steps; ++i) {
        SweepRow row;
        row.well_width = w_first + (w_last - w_first) * i / (steps - 1);
        DoubleBarrierSpec spec = base.geometry;
        spec.well_width = row.well_width;
        try {
            const auto potential = build_double_barrier(spec);
            const auto scanned = find_poles(potential, setup, 1).front();
            if (previous) {
                try {
                    const auto tracked = refine_pole(potential, setup, *previous);
                    if (std::abs(tracked.k - scanned.k) > 1e-6 * std::abs(scanned.k)) {
                        row.flagged = true;
                        row.note = "continuation reached a different pole";
                    }
                } catch (const NoConvergence&) {
                    row.flagged = true;
                    row.note = "continuation lost the pole";
                }
            }
            row.pole = scanned;
            const auto lr = lifetime_and_R(scanned, setup);
            row.tau = lr.tau;
            row.R = lr.R;
            if (lr.R > 0.0) row.regime = classify_regime(lr.R);
            previous = scanned.k;
        } catch (const Error& e) {
            row.flagged = true;
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    CsvWriter w(path, {"w_nm", "eps_eV", "gamma_eV", "R", "tau_fs", "regime", "flagged"});
    const double nan = std::nan("");
    for (const auto& r : rows)
        w.write_row({format_number(r.well_width), format_number(r.pole ? r.pole->energy.epsilon : nan),
                     format_number(r.pole ? r.pole->energy.gamma : nan), format_number(r.pole ? r.R : nan),
                     format_number(r.pole ? r.tau : nan), r.regime ? to_string(*r.regime) : "none",
                     r.flagged ? "1" : "0"});
}

struct ScenarioReport {
    std::vector<std::filesystem::path> files;
    nlohmann::json manifest;
};

namespace detail {

/// Owns the files of one run; unless committed, removes them (and the output
/// directory if it created it) on destruction.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
        if (dir_.empty()) throw ConfigError("output_dir is empty");
        if (!std::filesystem::exists(dir_)) {
            std::filesystem::create_directories(dir_);
            created_dir_ = true;
        }
    }
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;
    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& f : files_) std::filesystem::remove(f, ec);
        if (created_dir_) std::filesystem::remove(dir_, ec);
    }

    std::filesystem::path add(const std::string& name) {
        files_.push_back(dir_ / name);
        return files_.back();
    }
    void commit() { committed_ = true; }
    const std::vector<std::filesystem::path>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> files_;
    bool created_dir_ = false;
    bool committed_ = false;
};

template <class F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        throw Error(e.category(), "stage '" + name + "': " + e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        throw ConfigError("stage '" + name + "': " + e.what());
    }
}

inline nlohmann::json pole_json(const ResonancePole& p, const PhysicalSetup& setup) {
    const auto lr = lifetime_and_R(p, setup);
    return {{"n", p.index},       {"alpha_nm_inv", p.alpha()}, {"beta_nm_inv", p.beta()},
            {"eps_eV", p.energy.epsilon}, {"gamma_eV", p.energy.gamma}, {"R", lr.R},
            {"tau_fs", lr.tau},   {"residual", p.residual},   {"proper", p.proper}};
}

inline nlohmann::json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline std::string plot_script(const ScenarioConfig& c) {
    std::string s = "# gnuplot script for scenario '" + c.name + "'\nset datafile separator ','\nset key autotitle columnhead\n";
    s += "set logscale xy\nset xlabel 't / tau'\nset ylabel 'S(t)'\n";
    if (c.wants(Output::survival))
        s += "set title 'survival probability'\nplot 'survival.csv' using 2:3 with lines title 'S (pole sum)', "
             "'' using 2:4 with lines dt 2 title 'S_exp'\npause -1\n";
    if (c.wants(Output::decompose))
        s += "set title 'decomposition'\nunset logscale y\nplot 'decompose.csv' using 2:3 with lines, '' using 2:4 "
             "with lines, '' using 2:5 with lines, '' using 2:6 with lines\nset logscale y\npause -1\n";
    if (c.wants(Output::tail))
        s += "set title 'long-time tail'\nplot 'tail.csv' using 2:3 with lines, '' using 2:4 with lines dt 2\npause -1\n";
    if (c.wants(Output::initial_states))
        s += "set title 'initial states'\nplot 'initial_states.csv' using 2:3 with lines, '' using 2:4 with lines, "
             "'' using 2:5 with lines, '' using 2:6 with lines dt 2\npause -1\n";
    if (c.wants(Output::oracle))
        s += "set title 'direct propagation'\nplot 'oracle.csv' using 2:3 with points, '' using 2:5 with lines\npause -1\n";
    if (c.wants(Output::sweep))
        s += "unset logscale\nset xlabel 'w (nm)'\nset ylabel 'R'\nset title 'well-width sweep'\n"
             "plot 'sweep.csv' using 1:4 with linespoints\npause -1\n";
    return s;
}

}  // namespace detail

/// Runs every requested stage and writes CSV files, `manifest.json` and
/// `plot.gp` into the output directory. On error the files written so far
/// are deleted and the error names the failing stage.
inline ScenarioReport run_scenario(const ScenarioConfig& c) {
    detail::OutputSet out(c.output_dir);
    const PhysicalSetup setup(c.effective_mass);
    nlohmann::json m;
    m["version"] = version;
    m["scenario"] = c.name;
    m["geometry"] = {{"barrier_width_nm", c.geometry.barrier_width},
                     {"well_width_nm", c.geometry.well_width},
                     {"barrier_height_eV", c.geometry.barrier_height},
                     {"effective_mass", c.effective_mass}};
    m["initial_state"] = to_string(c.initial_state);
    m["tolerances"] = {{"normalization", detail::norm_tolerance},
                       {"oracle_log_S", oracle_log_tolerance},
                       {"unitarity", unitarity_bound},
                       {"points_per_oscillation", min_points_per_oscillation}};

    const auto potential = detail::stage("geometry", [&] { return build_double_barrier(c.geometry); });
    const auto poles = detail::stage("poles", [&] { return find_poles(potential, setup, c.pole_count); });
    const auto& p1 = poles.front();
    const auto lr = detail::stage("poles", [&] { return lifetime_and_R(p1, setup); });
    m["poles"] = nlohmann::json::array();
    for (const auto& p : poles) m["poles"].push_back(detail::pole_json(p, setup));
    m["lifetime_fs"] = lr.tau;
    m["R"] = lr.R;
    m["regime"] = to_string(detail::stage("poles", [&] { return classify_regime(lr.R); }));

    const auto box = detail::stage("basis", [&] { return make_box_initial_state(c.geometry, c.grid_density); });
    const auto states = detail::stage("basis", [&] { return build_resonance_states(potential, poles, setup, box.grid()); });
    const auto u1_state = detail::stage("basis", [&] { return make_resonance_initial_state(states.front()); });
    const InitialState& psi0 = c.initial_state == InitialStateKind::resonance_function ? u1_state : box;
    const auto pairs = detail::stage("basis", [&] { return overlap_coefficients(psi0, states); });
    double worst_norm = 0.0;
    for (const auto& s : states) worst_norm = std::max(worst_norm, std::abs(s.norm_residual));
    m["norm_residual_max"] = worst_norm;
    m["c1_cbar1"] = detail::complex_json(pairs.front().product);
    m["eta_rad"] = pairs.front().eta;

    nlohmann::json sumrule = nlohmann::json::array();
    for (std::size_t n = 1; n <= pairs.size(); ++n) {
        const auto r = sum_rule_residuals(std::span(pairs).first(n), std::span(poles).first(n));
        sumrule.push_back({{"N", n}, {"r1", r.r1}, {"r2", r.r2}});
    }
    m["sum_rules"] = sumrule;
    const cplx a0 = survival_amplitude_full(pairs, poles, 0.0, setup);
    m["A0_minus_1"] = std::abs(a0 - 1.0);

    detail::stage("write", [&] {
        if (c.wants(Output::poles)) {
            CsvWriter w(out.add("poles.csv"),
                        {"n", "alpha_nm_inv", "beta_nm_inv", "eps_eV", "gamma_eV", "R", "tau_fs", "residual", "proper"});
            for (const auto& p : poles) {
                const auto q = lifetime_and_R(p, setup);
                w.row({double(p.index), p.alpha(), p.beta(), p.energy.epsilon, p.energy.gamma, q.R, q.tau,
                       p.residual, p.proper ? 1.0 : 0.0});
            }
        }
        if (c.wants(Output::sumrule)) {
            CsvWriter w(out.add("sumrule.csv"), {"N", "r1", "r2"});
            for (const auto& r : sumrule) w.row({r["N"].get<double>(), r["r1"].get<double>(), r["r2"].get<double>()});
        }
    });

    const auto times = detail::stage("survival", [&] {
        return geometric_time_grid(lr.tau, c.t_first, c.t_last, c.points_per_decade);
    });
    const auto d = detail::stage("decompose", [&] { return decompose_survival(pairs.front(), p1, times, setup); });
    if (const auto tc = crossover_time(d)) m["crossover_tau"] = *tc;
    else m["crossover_tau"] = nullptr;
    double identity = 0.0;
    double cosine = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        identity = std::max(identity, std::abs(d.s_total[i] - std::norm(d.a_exp[i] + d.a_non[i])));
        cosine = std::max(cosine, std::abs(d.s_int[i] - d.s_int_cosine[i]));
    }
    m["decomposition_identity_max"] = identity;
    m["interference_forms_max"] = cosine;
    if (c.t_first <= 50.0 && c.t_last >= 200.0)
        m["long_time_slope"] = long_time_slope(d.times, d.s_total, 50.0 * lr.tau, 200.0 * lr.tau);

    if (c.wants(Output::survival)) {
        detail::stage("survival", [&] {
            CsvWriter w(out.add("survival.csv"),
                        {"t_fs", "t_over_tau", "S_total", "S_exp", "S_non", "S_int", "phi_rad"});
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double s = std::norm(survival_amplitude_full(pairs, poles, d.times[i], setup));
                w.row({d.times[i], d.times[i] / lr.tau, s, d.s_exp[i], d.s_non[i], d.s_int[i], d.phi[i]});
            }
        });
    }
    if (c.wants(Output::decompose)) {
        detail::stage("decompose", [&] {
            CsvWriter w(out.add("decompose.csv"),
                        {"t_fs", "t_over_tau", "S_total", "S_exp", "S_non", "S_int", "phi_rad"});
            for (std::size_t i = 0; i < d.size(); ++i)
                w.row({d.times[i], d.times[i] / lr.tau, d.s_total[i], d.s_exp[i], d.s_non[i], d.s_int[i], d.phi[i]});
        });
    }
    if (c.wants(Output::tail)) {
        detail::stage("tail", [&] {
            CsvWriter w(out.add("tail.csv"), {"t_fs", "t_over_tau", "S_non", "S_non_asym", "S_int", "S_int_asym"});
            for (std::size_t i = 0; i < d.size(); ++i) {
                const auto tl = asymptotic_tail(pairs.front(), p1, d.times[i], setup);
                w.row({d.times[i], d.times[i] / lr.tau, d.s_non[i], tl.s_non, d.s_int[i], tl.s_int});
            }
            if (c.t_last >= 100.0) {
                const double t = 100.0 * lr.tau;
                const double s_non = std::norm(survival_one_term(pairs.front(), p1, t, setup).a_non);
                m["tail_relative_gap_100tau"] = std::abs(asymptotic_tail(pairs.front(), p1, t, setup).s_non - s_non) / s_non;
            }
        });
    }
    if (c.wants(Output::initial_states)) {
        detail::stage("initial_states", [&] {
            const auto box_pair = overlap_coefficients(box, std::span(states).first(1)).front();
            const auto u1_pair = overlap_coefficients(u1_state, std::span(states).first(1)).front();
            OverlapPair unit{p1.index, 1.0, 1.0, 1.0, 0.0};
            m["initial_states"] = {{"box", detail::complex_json(box_pair.product)},
                                   {"single_resonance", detail::complex_json(unit.product)},
                                   {"u1", detail::complex_json(u1_pair.product)}};
            CsvWriter w(out.add("initial_states.csv"),
                        {"t_fs", "t_over_tau", "S_box", "S_single", "S_u1", "S_pure_exp"});
            for (double t : times) {
                auto s = [&](const OverlapPair& p) {
                    const auto a = survival_one_term(p, p1, t, setup);
                    return std::norm(a.a_exp + a.a_non);
                };
                w.row({t, t / lr.tau, s(box_pair), s(unit), s(u1_pair), std::exp(-t / lr.tau)});
            }
        });
    }
    if (c.wants(Output::oracle)) {
        detail::stage("oracle", [&] {
            PropagationConfig pc;
            pc.dx = c.oracle.dx;
            pc.dt = c.oracle.dt;
            pc.margin = std::ceil(c.oracle.margin_factor * potential.length() / pc.dx - 1e-9) * pc.dx;
            pc.absorber_width = pc.margin / 2.0;
            pc.absorber_strength = c.oracle.absorber_strength;
            pc.max_energy = p1.energy.epsilon;
            std::vector<double> ts(static_cast<std::size_t>(c.oracle.points));
            for (std::size_t i = 0; i < ts.size(); ++i)
                ts[i] = lr.tau * c.oracle.t_first *
                        std::pow(c.oracle.t_last / c.oracle.t_first, double(i) / double(ts.size() - 1));
            const auto r = propagate_survival(potential, psi0, ts, pc, setup);
            CsvWriter w(out.add("oracle.csv"),
                        {"t_fs", "t_over_tau", "S_oracle", "S_oracle_error", "S_pole_sum", "abs_dlog"});
            double worst = 0.0;
            double worst_err = 0.0;
            for (std::size_t i = 0; i < r.times.size(); ++i) {
                const double s = std::norm(survival_amplitude_full(pairs, poles, r.times[i], setup));
                const double dl = std::abs(std::log(s) - std::log(r.survival[i]));
                worst = std::max(worst, dl);
                worst_err = std::max(worst_err, r.error[i] / r.survival[i]);
                w.row({r.times[i], r.times[i] / lr.tau, r.survival[i], r.error[i], s, dl});
            }
            m["oracle"] = {{"max_abs_dlog", worst},
                           {"max_relative_richardson_error", worst_err},
                           {"dx_nm", pc.dx},
                           {"dt_fs", pc.dt},
                           {"margin_nm", pc.margin}};
            if (worst > oracle_log_tolerance)
                throw OracleInvalid("pole sum and direct propagation differ by " + std::to_string(worst) + " in log S");
        });
    }
    if (c.wants(Output::sweep)) {
        detail::stage("sweep", [&] {
            const auto rows = sweep_well_width(c, c.sweep.w_first, c.sweep.w_last, c.sweep.steps);
            write_sweep_csv(out.add("sweep.csv"), rows);
            nlohmann::json js = nlohmann::json::array();
            for (const auto& r : rows)
                js.push_back({{"w_nm", r.well_width}, {"R", r.pole ? r.R : 0.0}, {"flagged", r.flagged}, {"note", r.note}});
            m["sweep"] = js;
        });
    }

    detail::stage("write", [&] {
        std::ofstream(out.add("plot.gp"), std::ios::binary) << detail::plot_script(c);
        std::ofstream(out.add("manifest.json"), std::ios::binary) << m.dump(2) << '\n';
    });
    out.commit();
    return {out.files(), std::move(m)};
}

}  // namespace gamow
