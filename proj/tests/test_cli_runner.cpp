#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "gamow/config.hpp"
#include "gamow/scenario.hpp"

using namespace gamow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("gamow_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

const char* fast_fig3 = R"(
# compact Fig. 3 geometry run
name = fast
barrier_width = 1.0
well_width = 1.5
barrier_height = 0.23
effective_mass = 0.067
poles = 6
t_first = 0.01
t_last = 300
points_per_decade = 40
outputs = poles, sumrule, survival, decompose, tail, initial_states
)";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GAMOW_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, EmptyFileListsMissingKeys) {
    try {
        parse_config_string("");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        for (const auto& k : required_config_keys()) EXPECT_NE(what.find(k), std::string::npos) << k;
    }
}

TEST(Config, UnknownKeyIsAnError) {
    EXPECT_THROW(parse_config_string(std::string(fast_fig3) + "output_dir = x\nwell_depth = 3\n"), ConfigError);
}

TEST(Config, RepeatedKeyIsAnError) {
    EXPECT_THROW(parse_config_string(std::string(fast_fig3) + "output_dir = x\npoles = 3\n"), ConfigError);
}

TEST(Config, MalformedValues) {
    EXPECT_THROW(parse_config_string(std::string(fast_fig3) + "output_dir = x\nname2\n"), ConfigError);
    const std::string base = "barrier_width = 1\nwell_width = 1.5\nbarrier_height = 0.23\noutput_dir = x\n";
    EXPECT_THROW(parse_config_string(base + "effective_mass = heavy\n"), ConfigError);
    EXPECT_THROW(parse_config_string(base + "effective_mass = 0.067\npoles = 2.5\n"), ConfigError);
    EXPECT_THROW(parse_config_string(base + "effective_mass = 0.067\noutputs = poles, movie\n"), ConfigError);
    EXPECT_THROW(parse_config_string(base + "effective_mass = 0.067\ninitial_state = gaussian\n"), ConfigError);
}

TEST(Config, ParsesAllFields) {
    const auto c = parse_config_string(std::string(fast_fig3) + "output_dir = out/x  # trailing comment\n"
                                                                 "initial_state = resonance\n");
    EXPECT_EQ(c.name, "fast");
    EXPECT_EQ(c.geometry.well_width, 1.5);
    EXPECT_EQ(c.pole_count, 6);
    EXPECT_EQ(c.output_dir, fs::path("out/x"));
    EXPECT_EQ(c.initial_state, InitialStateKind::resonance_function);
    EXPECT_TRUE(c.wants(Output::initial_states));
    EXPECT_FALSE(c.wants(Output::oracle));
}

TEST(RunScenario, WritesSpecifiedColumnsAndManifest) {
    auto c = parse_config_string(std::string(fast_fig3) + "output_dir = unused\n");
    c.output_dir = scratch("columns");
    const auto report = run_scenario(c);
    EXPECT_EQ(first_line(c.output_dir / "poles.csv"), "n,alpha_nm_inv,beta_nm_inv,eps_eV,gamma_eV,R,tau_fs,residual,proper");
    EXPECT_EQ(first_line(c.output_dir / "survival.csv"), "t_fs,t_over_tau,S_total,S_exp,S_non,S_int,phi_rad");
    EXPECT_EQ(first_line(c.output_dir / "decompose.csv"), "t_fs,t_over_tau,S_total,S_exp,S_non,S_int,phi_rad");
    EXPECT_TRUE(fs::exists(c.output_dir / "plot.gp"));
    const auto& m = report.manifest;
    EXPECT_EQ(m["poles"].size(), 6u);
    EXPECT_NEAR(m["c1_cbar1"]["re"].get<double>(), 0.611, 0.00611);
    EXPECT_TRUE(m.contains("sum_rules"));
    EXPECT_TRUE(m.contains("tolerances"));
    EXPECT_TRUE(m.contains("version"));
    EXPECT_NEAR(m["initial_states"]["u1"]["re"].get<double>(), 2.070, 0.0207);
    EXPECT_EQ(m["regime"], "full-nonexponential");
    const std::string text = slurp(c.output_dir / "survival.csv");
    EXPECT_EQ(text.find('\r'), std::string::npos);
    fs::remove_all(c.output_dir);
}

TEST(RunScenario, Fig3DecompositionInterferenceNegative) {
    auto c = parse_config_string(std::string(fast_fig3) + "output_dir = unused\n");
    c.output_dir = scratch("fig3neg");
    run_scenario(c);
    std::ifstream in(c.output_dir / "decompose.csv");
    std::string line;
    std::getline(in, line);
    int negative = 0, total = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        if (v[1] < 0.5 || v[1] > 10.0) continue;
        ++total;
        negative += v[5] < 0.0;
    }
    EXPECT_GT(total, 0);
    EXPECT_GT(2 * negative, total);
    fs::remove_all(c.output_dir);
}

TEST(RunScenario, Deterministic) {
    auto c = parse_config_string(std::string(fast_fig3) + "output_dir = unused\n");
    c.output_dir = scratch("det_a");
    run_scenario(c);
    auto d = c;
    d.output_dir = scratch("det_b");
    run_scenario(d);
    for (const char* f : {"poles.csv", "survival.csv", "decompose.csv", "tail.csv", "sumrule.csv", "manifest.json"})
        EXPECT_EQ(slurp(c.output_dir / f), slurp(d.output_dir / f)) << f;
    fs::remove_all(c.output_dir);
    fs::remove_all(d.output_dir);
}

TEST(RunScenario, FailureRemovesPartialOutputs) {
    auto c = parse_config_string(std::string(fast_fig3) + "output_dir = unused\noracle_dx = 0.05\n");
    c.outputs.insert(Output::oracle);
    c.output_dir = scratch("partial");
    try {
        run_scenario(c);
        FAIL() << "expected ConfigError";
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), Error::Category::config);
        EXPECT_NE(std::string(e.what()).find("oracle"), std::string::npos);
    }
    EXPECT_FALSE(fs::exists(c.output_dir));
}

TEST(Sweep, StepsBelowTwoRejected) {
    const auto c = parse_config_string(std::string(fast_fig3) + "output_dir = x\n");
    EXPECT_THROW(sweep_well_width(c, 5.0, 1.5, 1), ConfigError);
}

TEST(Sweep, RatioFallsFromBroadToVeryBroad) {
    const auto c = parse_config_string(std::string(fast_fig3) + "output_dir = x\n");
    const auto rows = sweep_well_width(c, 5.0, 1.5, 8);
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) {
        ASSERT_TRUE(r.pole.has_value());
        EXPECT_FALSE(r.flagged) << r.well_width << ": " << r.note;
    }
    EXPECT_NEAR(rows.front().R, 0.91, 0.0091);
    EXPECT_NEAR(rows.back().R, 0.1753, 0.001753);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].R, rows[i - 1].R);
    EXPECT_EQ(*rows.back().regime, Regime::full_nonexponential);
}

TEST(Sweep, NarrowGeometryRatio) {
    auto c = parse_config_string(std::string(fast_fig3) + "output_dir = x\n");
    c.geometry = {2.5, 6.2, 1.36};
    const auto rows = sweep_well_width(c, 6.2, 6.2, 2);
    EXPECT_NEAR(rows.front().R, 2469.78, 2469.78 * 0.01);
    EXPECT_EQ(*rows.front().regime, Regime::exponential_dominated);
}

TEST(Cli, ExitCodes) {
    const auto dir = scratch("cli");
    fs::create_directories(dir);
    std::ofstream(dir / "empty.cfg") << "";
    EXPECT_EQ(run_cli("run " + (dir / "empty.cfg").string()), 2);
    std::ofstream(dir / "fast.cfg") << fast_fig3 << "output_dir = " << (dir / "out").string() << "\n";
    EXPECT_EQ(run_cli("run " + (dir / "fast.cfg").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
    EXPECT_EQ(run_cli("sweep " + (dir / "fast.cfg").string() + " --w-first 5 --w-last 1.5 --steps 1"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    fs::remove_all(dir);
}
