#pragma once
#include <string>
#include <utility>
#include <vector>

#include "stefan/grid.hpp"
#include "stefan/nonlinearity.hpp"
#include "stefan/stencil.hpp"

namespace stefan {

struct RunConfig {
    StefanGraph graph;
    Stencil stencil;
    Grid1D grid;
    FarField farfield;
    double final_time = 1.0;
    double theta = 0.9;  // CFL safety factor in (0,1]
    std::vector<double> snapshot_times;
    bool record_monitors = true;
};

// Per-step invariant monitor. deposit is the mass pushed beyond the window
// that step (computed from weight suffix sums, independently of the update);
// mass_residual is |dM + deposit|, zero in exact arithmetic.
struct MonitorRecord {
    double t = 0.0;
    double sup_norm = 0.0;
    double vmin = 0.0;
    double vmax = 0.0;
    double excess = 0.0;
    double deposit = 0.0;
    double mass_residual = 0.0;
    double pair_min_gap = 0.0;  // min(b - a) when stepping a coupled pair
};

struct RunSummary {
    double dt = 0.0;
    long steps = 0;
    double wall_seconds = 0.0;
    double mass_residual_rate = 0.0;  // max over steps of mass_residual / dt
    double max_u_jump_final = 0.0;    // continuity surrogate, reported only
    std::string init_rule = "cell_average";
};

struct SnapshotSeries {
    std::vector<double> times;
    std::vector<Field> fields;
    std::vector<MonitorRecord> monitor_log;
    RunSummary summary;

    // provenance for the analysis modules
    StefanGraph graph;
    FarField farfield;
    double s_order = 0.5;
    double dx = 0.0;
    bool riemann_data = false;
    double jump = 0.0;

    int index_of_time(double t) const;          // throws if t is not a snapshot
    const Field& at_time(double t) const;
};

// theta / (Lip(Phi) * row_sum): the largest time step for which the explicit
// update is monotone in every nodal value. row_sum ~ dx^{-2s}, so this
// realizes dt ~ dx^{2s}.
double cfl_dt(const Stencil& st, const StefanGraph& graph, double theta);

// One explicit update V - dt * L(Phi(V)). Rejects dt above the monotonicity
// bound. Far-field constants are invariant and are not updated.
Field step(const Field& state, const Stencil& st, const StefanGraph& graph, double dt);

SnapshotSeries run(const RunConfig& cfg, const Field& initial);

// Two states advanced in lockstep with a shared dt; the monitor log of the
// first series records the per-step minimum of (b - a).
std::pair<SnapshotSeries, SnapshotSeries> run_pair(const RunConfig& cfg, const Field& a,
                                                   const Field& b);

struct ConvergenceRow {
    double dx = 0.0;
    double error = 0.0;  // max over snapshots of the L1(K) distance to the restricted reference
    double ratio = 0.0;  // error / previous level's error (0 for the first row)
};

// Errors of each level against the block-averaged restriction of the finest
// run. Grids must be nested (integer spacing ratio, identical windows).
std::vector<ConvergenceRow> convergence_study(const std::vector<SnapshotSeries>& levels,
                                              const SnapshotSeries& reference, double k_lo,
                                              double k_hi);

// Block-average a fine field onto a coarser nested grid.
Field restrict_to(const Field& fine, const Grid1D& coarse);

}  // namespace stefan
