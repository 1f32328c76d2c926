#pragma once
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stefan/oracle.hpp"
#include "stefan/profile.hpp"
#include "stefan/stepper.hpp"

namespace stefan {

// One run wired from a JSON config document.
struct Scenario {
    std::string name = "scenario";
    StefanGraph graph = StefanGraph::two_phase(1.0);
    bool local = false;  // local Laplacian instead of (-Delta)^s
    double s = 0.5;
    double dx = 0.1;
    double window_lo = -10.0, window_hi = 10.0;
    FarField farfield;
    double final_time = 1.0;
    double theta = 0.9;
    std::vector<double> snapshot_times;
    InitialDatum datum;
    int r_cut = 0;  // 0 = full window
    SamplingRule rule = SamplingRule::cell_average;
    std::vector<std::string> analyses;
};

// Throws config_error naming the offending field path.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario_file(const std::filesystem::path& path);
nlohmann::json scenario_json(const Scenario& sc);

// Cell-centered grid over the window; Riemann jumps are nudged onto a cell
// boundary (shift at most dx/2).
Grid1D scenario_grid(const Scenario& sc);
Stencil scenario_stencil(const Scenario& sc, int grid_n);
RunConfig make_run_config(const Scenario& sc);
Field make_initial(const Scenario& sc);

struct SimulateResult {
    SnapshotSeries series;
    nlohmann::json metadata;
};

// Runs the scenario and writes snapshots, metadata, manifest, plots and any
// requested analyses under out_dir.
SimulateResult run_scenario(const Scenario& sc, const std::filesystem::path& out_dir,
                            bool write_plots = true);

struct Figure2Row {
    double s = 0.0, p2 = 0.0;
    double xi_water = 0.0, xi_ice = 0.0, mushy_width = 0.0;
    bool no_crossing = false;  // window too small; reported as "window"
};
struct Figure2Result {
    std::vector<Figure2Row> rows;
    double dx = 0.0;
};
// Two-phase Riemann sweep (P1 = 1, L = 1): mushy-region table over (s, P2).
Figure2Result run_figure2(const std::vector<double>& s_list, const std::vector<double>& p2_list,
                          const std::filesystem::path& out_dir, double dx = 0.02);

struct FrontHistory {
    std::string name;
    std::vector<double> times;
    std::vector<double> pos_lo, pos_hi;  // extent of {u > tol}
    std::vector<double> neg_lo, neg_hi;  // extent of {u < -tol}
    bool negative_front_infinite = false;
    bool positive_envelope_ok = true;
};
struct Figure4Result {
    FrontHistory first, second;
    bool sanity_negative_empty = true;
    double xi0_companion = 0.0;
};
// The two captioned compact data at s = 1/4: finite vs infinite negative
// front, plus the one-phase envelope check on the positive part.
Figure4Result run_figure4(const std::filesystem::path& out_dir, double dx = 0.02);

struct Figure5Result {
    std::vector<double> times;
    std::vector<double> water_measure;
    bool nonmonotone = false;
    bool vanishes = false;
    bool envelope_ok = true;
    double companion_xi_water = 0.0, companion_xi_ice = 0.0;
};
// Compact warm region against deep ice at s = 1/4: water measure history and
// the two-phase selfsimilar envelope.
Figure5Result run_figure5(const std::filesystem::path& out_dir, double dx = 0.025);

struct PositivityResult {
    bool applicable = false;  // false for two-phase scenarios (check skipped)
    bool pass = false;
    std::string note;
};
// One-phase positivity-set conservation on omega = (omega_lo, omega_hi) from
// time t_star on. Two-phase scenarios are reported as skipped.
PositivityResult run_positivity_check(const Scenario& sc, double omega_lo, double omega_hi,
                                      double t_star);

struct SandwichResult {
    bool pass = false;
    double max_upper_violation = 0.0;  // max(h - h_bar)
    double max_lower_violation = 0.0;  // max(h_low - h)
    double upper_gap = 0.0;            // max|h - h_bar| (equality detector)
    double lower_gap = 0.0;
};
// One-phase envelopes of a two-phase run: h_bar from max(h0,0), h_low from
// the reflected run of -min(h0,L)+L. Nodewise sandwich at every snapshot.
SandwichResult run_sandwich_check(const Scenario& sc);

struct ConvergeResult {
    std::vector<ConvergenceRow> rows;
};
// Ladder config: {"scenario": {...}, "ladder_dx": [...], "reference_dx": r,
// "K": [lo, hi]}.
ConvergeResult run_converge(const nlohmann::json& ladder_cfg,
                            const std::filesystem::path& out_dir);

}  // namespace stefan
