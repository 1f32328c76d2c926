#include "stefan/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "stefan/errors.hpp"

namespace stefan {

int SnapshotSeries::index_of_time(double t) const {
    const double tol = std::max(summary.dt, 1e-9) * (1.0 + 1e-9);
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= tol) return static_cast<int>(i);
    throw std::invalid_argument("SnapshotSeries: no snapshot near requested time");
}

const Field& SnapshotSeries::at_time(double t) const {
    return fields[static_cast<std::size_t>(index_of_time(t))];
}

double cfl_dt(const Stencil& st, const StefanGraph& graph, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("cfl_dt: need theta in (0,1]");
    return theta / (graph.lipschitz_bound() * st.row_sum);
}

namespace {

struct StepWorkspace {
    std::vector<double> u;     // Phi(V)
    std::vector<double> lphi;  // discrete operator of u
};

void step_into(const Field& state, const Stencil& st, const StefanGraph& graph, double dt,
               StepWorkspace& ws, Field& out) {
    const int n = state.grid.n;
    ws.u.resize(static_cast<std::size_t>(n));
    ws.lphi.resize(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) ws.u[b] = graph.temperature(state.values[b]);
    const double phi_l = graph.temperature(state.farfield.left);
    const double phi_r = graph.temperature(state.farfield.right);
    apply_into(st, ws.u, phi_l, phi_r, ws.lphi);
    out.grid = state.grid;
    out.farfield = state.farfield;
    out.values.resize(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) out.values[b] = state.values[b] - dt * ws.lphi[b];
}

// Mass pushed to the frozen exterior this step, via weight suffix sums. In
// exact arithmetic this equals minus the change of the window excess mass.
double exterior_deposit(const Stencil& st, const std::vector<double>& u, double phi_l,
                        double phi_r, const std::vector<double>& suffix, double dx, double dt) {
    const int n = static_cast<int>(u.size());
    const int r = st.r_cut;
    double acc = 0.0;
    for (int b = 0; b < n; ++b) {
        const double wl = suffix[static_cast<std::size_t>(std::min(b, r))];
        const double wr = suffix[static_cast<std::size_t>(std::min(n - 1 - b, r))];
        acc += (u[b] - phi_l) * wl + (u[b] - phi_r) * wr;
    }
    return dt * dx * acc;
}

std::vector<double> weight_suffix(const Stencil& st) {
    // suffix[m] = sum_{g=m+1..r} omega_g + tail
    std::vector<double> s(static_cast<std::size_t>(st.r_cut) + 1, st.tail_coeff);
    for (int m = st.r_cut - 1; m >= 0; --m) s[m] = s[m + 1] + st.omega[m];
    return s;
}

struct Bounds {
    double lo, hi;
};

Bounds stability_bounds(const Field& f) {
    double lo = std::min(f.farfield.left, f.farfield.right);
    double hi = std::max(f.farfield.left, f.farfield.right);
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo - 1e-9, hi + 1e-9};
}

void check_bounds(const Field& f, const Bounds& bounds, double t) {
    for (int b = 0; b < f.grid.n; ++b) {
        const double v = f.values[b];
        if (v < bounds.lo || v > bounds.hi)
            throw stability_error("discrete L-infinity stability violated at t=" +
                                  std::to_string(t) + ", x=" + std::to_string(f.grid.node(b)) +
                                  ", value=" + std::to_string(v));
    }
}

double max_temperature_jump(const Field& f, const StefanGraph& graph) {
    double m = 0.0;
    for (int b = 0; b + 1 < f.grid.n; ++b)
        m = std::max(m, std::abs(graph.temperature(f.values[b + 1]) -
                                 graph.temperature(f.values[b])));
    return m;
}

// Shared driver for single runs and coupled pairs.
SnapshotSeries make_series(const RunConfig& cfg) {
    SnapshotSeries s;
    s.graph = cfg.graph;
    s.farfield = cfg.farfield;
    s.s_order = cfg.stencil.s;
    s.dx = cfg.grid.dx;
    return s;
}

}  // namespace

Field step(const Field& state, const Stencil& st, const StefanGraph& graph, double dt) {
    state.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("step: need dt > 0");
    const double dt_max = cfl_dt(st, graph, 1.0);
    if (dt > dt_max * (1.0 + 1e-12))
        throw std::invalid_argument("step: dt violates the CFL monotonicity bound");
    StepWorkspace ws;
    Field out;
    step_into(state, st, graph, dt, ws, out);
    return out;
}

SnapshotSeries run(const RunConfig& cfg, const Field& initial) {
    auto pair = run_pair(cfg, initial, initial);
    return std::move(pair.first);
}

std::pair<SnapshotSeries, SnapshotSeries> run_pair(const RunConfig& cfg, const Field& a,
                                                   const Field& b) {
    const auto t0 = std::chrono::steady_clock::now();
    a.validate();
    b.validate();
    if (!same_grid(a.grid, cfg.grid) || !same_grid(b.grid, cfg.grid))
        throw std::invalid_argument("run: initial fields must live on the configured grid");
    if (!(cfg.final_time > 0.0)) throw std::invalid_argument("run: need final_time > 0");

    const double dt = cfl_dt(cfg.stencil, cfg.graph, cfg.theta);
    const bool coupled = a.values != b.values || a.farfield.left != b.farfield.left ||
                         a.farfield.right != b.farfield.right;

    SnapshotSeries sa = make_series(cfg);
    SnapshotSeries sb = make_series(cfg);
    sa.farfield = a.farfield;
    sb.farfield = b.farfield;
    sa.summary.dt = sb.summary.dt = dt;

    std::vector<double> wanted = cfg.snapshot_times;
    std::sort(wanted.begin(), wanted.end());

    const Bounds bounds_a = stability_bounds(a);
    const Bounds bounds_b = stability_bounds(b);
    const std::vector<double> suffix = weight_suffix(cfg.stencil);
    const double phi_la = cfg.graph.temperature(a.farfield.left);
    const double phi_ra = cfg.graph.temperature(a.farfield.right);

    Field cur_a = a, cur_b = b, next_a, next_b;
    StepWorkspace ws_a, ws_b;

    double t = 0.0;
    std::size_t next_snap = 0;
    auto take_snapshot = [&](double now) {
        sa.times.push_back(now);
        sa.fields.push_back(cur_a);
        if (coupled) {
            sb.times.push_back(now);
            sb.fields.push_back(cur_b);
        }
    };
    take_snapshot(0.0);
    while (next_snap < wanted.size() && wanted[next_snap] <= 0.0) ++next_snap;

    long steps = 0;
    double max_residual_rate = 0.0;
    const double t_end = std::max(cfg.final_time, wanted.empty() ? 0.0 : wanted.back());
    while (t < t_end - 1e-12) {
        const double excess_before = cfg.record_monitors ? excess_mass(cur_a, cur_a.farfield) : 0.0;
        step_into(cur_a, cfg.stencil, cfg.graph, dt, ws_a, next_a);
        if (coupled) step_into(cur_b, cfg.stencil, cfg.graph, dt, ws_b, next_b);
        t += dt;
        ++steps;
        std::swap(cur_a, next_a);
        if (coupled) std::swap(cur_b, next_b);

        check_bounds(cur_a, bounds_a, t);
        if (coupled) check_bounds(cur_b, bounds_b, t);

        if (cfg.record_monitors) {
            MonitorRecord rec;
            rec.t = t;
            rec.vmin = *std::min_element(cur_a.values.begin(), cur_a.values.end());
            rec.vmax = *std::max_element(cur_a.values.begin(), cur_a.values.end());
            rec.sup_norm = std::max(std::abs(rec.vmin), std::abs(rec.vmax));
            rec.excess = excess_mass(cur_a, cur_a.farfield);
            rec.deposit =
                exterior_deposit(cfg.stencil, ws_a.u, phi_la, phi_ra, suffix, cfg.grid.dx, dt);
            rec.mass_residual = std::abs(rec.excess - excess_before + rec.deposit);
            max_residual_rate = std::max(max_residual_rate, rec.mass_residual / dt);
            if (coupled) {
                double gap = cur_b.values[0] - cur_a.values[0];
                for (int i = 1; i < cfg.grid.n; ++i)
                    gap = std::min(gap, cur_b.values[i] - cur_a.values[i]);
                rec.pair_min_gap = gap;
            }
            sa.monitor_log.push_back(rec);
        }
        if (next_snap < wanted.size() && t >= wanted[next_snap] - 1e-12) {
            take_snapshot(t);
            while (next_snap < wanted.size() && t >= wanted[next_snap] - 1e-12) ++next_snap;
        }
    }

    sa.summary.steps = steps;
    sa.summary.mass_residual_rate = max_residual_rate;
    sa.summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sa.summary.max_u_jump_final = max_temperature_jump(cur_a, cfg.graph);
    if (coupled) {
        sb.summary = sa.summary;
        sb.summary.max_u_jump_final = max_temperature_jump(cur_b, cfg.graph);
    } else {
        sb = sa;
    }
    return {std::move(sa), std::move(sb)};
}

Field restrict_to(const Field& fine, const Grid1D& coarse) {
    const double ratio_real = coarse.dx / fine.grid.dx;
    const int ratio = static_cast<int>(std::llround(ratio_real));
    const double cell_lo_c = coarse.x_min - 0.5 * coarse.dx;
    const double cell_lo_f = fine.grid.x_min - 0.5 * fine.grid.dx;
    if (ratio < 1 || std::abs(ratio - ratio_real) > 1e-9 ||
        std::abs(cell_lo_c - cell_lo_f) > 1e-9 * coarse.dx ||
        coarse.n * ratio != fine.grid.n)
        throw std::invalid_argument("restrict_to: grids are not nested");
    Field out{coarse, std::vector<double>(static_cast<std::size_t>(coarse.n)), fine.farfield};
    for (int i = 0; i < coarse.n; ++i) {
        double acc = 0.0;
        for (int k = 0; k < ratio; ++k) acc += fine.values[i * ratio + k];
        out.values[i] = acc / ratio;
    }
    return out;
}

std::vector<ConvergenceRow> convergence_study(const std::vector<SnapshotSeries>& levels,
                                              const SnapshotSeries& reference, double k_lo,
                                              double k_hi) {
    std::vector<ConvergenceRow> rows;
    for (const SnapshotSeries& lvl : levels) {
        if (lvl.fields.empty() || lvl.fields.size() != reference.fields.size())
            throw std::invalid_argument("convergence_study: snapshot counts differ");
        double err = 0.0;
        for (std::size_t i = 0; i < lvl.fields.size(); ++i) {
            const Field restricted = restrict_to(reference.fields[i], lvl.fields[i].grid);
            err = std::max(err, l1_local_distance(lvl.fields[i], restricted, k_lo, k_hi));
        }
        ConvergenceRow row;
        row.dx = lvl.dx;
        row.error = err;
        row.ratio = rows.empty() ? 0.0 : err / rows.back().error;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace stefan
