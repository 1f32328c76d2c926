// Acceptance suite: drives the full solver through the standard experiment
// battery and prints one pass/fail line per criterion.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stefan/experiments.hpp"
#include "stefan/io.hpp"
#include "stefan/oracle.hpp"
#include "stefan/profile.hpp"

using namespace stefan;

namespace {

int g_failures = 0;
std::set<int> g_selected;

bool selected(int crit) { return g_selected.empty() || g_selected.count(crit) > 0; }

void report(int crit, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  (%s)\n", ok ? "PASS" : "FAIL", crit, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

SnapshotSeries riemann_run(const StefanGraph& graph, double s, double b1, double b2, double dx,
                           double window, double T, std::vector<double> snaps,
                           double theta = 0.9) {
    Scenario sc;
    sc.graph = graph;
    sc.s = s;
    sc.dx = dx;
    sc.window_lo = -window;
    sc.window_hi = window;
    sc.farfield = {b1, b2, 0.0};
    sc.final_time = T;
    sc.theta = theta;
    sc.snapshot_times = std::move(snaps);
    sc.datum = InitialDatum::riemann_step(b1, b2, 0.0);
    SnapshotSeries series = run(make_run_config(sc), make_initial(sc));
    series.riemann_data = true;
    series.jump = 0.0;
    return series;
}

double interp_u_at(const Field& f, const StefanGraph& graph, double x) {
    for (int b = 0; b + 1 < f.grid.n; ++b) {
        const double xl = f.grid.node(b), xr = f.grid.node(b + 1);
        if (xl <= x && x <= xr) {
            const double w = (x - xl) / (xr - xl);
            return (1.0 - w) * graph.temperature(f.values[b]) +
                   w * graph.temperature(f.values[b + 1]);
        }
    }
    return graph.temperature(f.interp(x));
}

double origin_slope(const Field& f, const StefanGraph& graph) {
    for (int b = 0; b + 1 < f.grid.n; ++b)
        if (f.grid.node(b) < 0.0 && f.grid.node(b + 1) >= 0.0)
            return (graph.temperature(f.values[b + 1]) - graph.temperature(f.values[b])) /
                   f.grid.dx;
    return 0.0;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- criteria 1-3 share the antisymmetric s = 1/2 run -------------------

void criteria_1_2_3() {
    if (!(selected(1) || selected(2) || selected(3))) return;
    const StefanGraph graph = StefanGraph::two_phase(1.0);
    const double P = 1.0;

    const auto t0 = std::chrono::steady_clock::now();
    const SnapshotSeries half = riemann_run(graph, 0.5, 2.0, -1.0, 0.02, 40.0, 1.0, {1.0});
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Field& f = half.fields.back();
    const double t_final = half.times.back();

    if (selected(1)) {
        double max_err = 0.0;
        for (int b = 0; b < f.grid.n; ++b) {
            const double x = f.grid.node(b);
            if (std::abs(x) > 2.0) continue;
            const double exact = (2.0 * P / M_PI) * std::atan(-x / t_final);
            max_err = std::max(max_err, std::abs(graph.temperature(f.values[b]) - exact));
        }
        const double u0 = std::abs(interp_u_at(f, graph, 0.0));
        report(1, "oracle equivalence at s=1/2",
               max_err <= 2e-2 && u0 <= 1e-3 && half.summary.mass_residual_rate <= 1e-6,
               fmt("max|u-exact|=%.3e<=2e-2, |u(0)|=%.2e<=1e-3, run=%.1fs", max_err, u0, wall));
    }
    if (selected(2)) {
        const Profile prof = extract_profile(half, 0.5, 1.0);
        const InterfaceReport rep = detect_interfaces(prof, 1.0, default_tol_u(prof));
        const double defect = antisymmetry_defect(prof, 1.0);
        report(2, "stationary interface and antisymmetry",
               std::abs(rep.xi_water) <= 2.0 * 0.02 && std::abs(rep.xi_ice) <= 2.0 * 0.02 &&
                   defect <= 1e-8,
               fmt("xi_w=%.4f, xi_i=%.4f (|.|<=0.04), defect=%.2e<=1e-8", rep.xi_water,
                   rep.xi_ice, defect));
    }
    if (selected(3)) {
        const double slope_half = origin_slope(f, graph);
        const double c_half = 2.0 * P * heat_kernel(0.5, 0.0, 1.0);
        const double rel_half = std::abs(slope_half + c_half) / c_half;

        const SnapshotSeries tq = riemann_run(graph, 0.75, 2.0, -1.0, 0.02, 20.0, 1.0, {1.0});
        const double slope_tq = origin_slope(tq.fields.back(), graph);
        const double c_tq = 2.0 * P * heat_kernel(0.75, 0.0, 1.0);
        const double rel_tq = std::abs(slope_tq + c_tq) / c_tq;
        report(3, "origin slope matches -2P P_s(0,1)", rel_half <= 0.10 && rel_tq <= 0.10,
               fmt("s=0.5: slope=%.4f vs -%.4f (rel %.1f%%); s=0.75: %.4f vs -%.4f (rel %.1f%%)",
                   slope_half, c_half, 100 * rel_half, slope_tq, c_tq, 100 * rel_tq));
    }
}

// ---- criteria 4-6: one-phase selfsimilar structure ----------------------

void criteria_4_5_6() {
    if (!(selected(4) || selected(5) || selected(6))) return;
    const StefanGraph one = StefanGraph::one_phase(1.0);

    // s = 1/2 run to T = 4 serves both the interface-curve fit and the tails
    SnapshotSeries run_half;
    if (selected(4) || selected(5))
        run_half = riemann_run(one, 0.5, 2.0, 0.5, 0.02, 40.0, 4.0, {0.25, 0.5, 1.0, 2.0, 4.0});

    if (selected(4)) {
        std::vector<double> lt, lx;
        for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const Profile prof = extract_profile(run_half, 0.5, t);
            const InterfaceReport rep = detect_interfaces(prof, 1.0, default_tol_u(prof));
            lt.push_back(std::log(prof.t_ref));
            lx.push_back(std::log(rep.xi_water * prof.t_ref));  // x_w = xi_w t^{1/(2s)}, s=1/2
        }
        const double expo = ols_slope(lt, lx);

        const Profile p_base = extract_profile(run_half, 0.5, 1.0);
        const double xi0 = detect_interfaces(p_base, 1.0, default_tol_u(p_base)).xi_water;
        const StefanGraph scaled = StefanGraph::one_phase(2.0);
        const SnapshotSeries run_scaled =
            riemann_run(scaled, 0.5, 4.0, 1.0, 0.02, 40.0, 1.0, {1.0});
        const Profile p_scaled = extract_profile(run_scaled, 0.5, 1.0);
        const double xi0_scaled =
            detect_interfaces(p_scaled, 2.0, default_tol_u(p_scaled)).xi_water;
        report(4, "one-phase free boundary x_w ~ t^{1/2s}, xi0 scale-invariant",
               std::abs(expo - 1.0) <= 0.10 && std::abs(xi0 - xi0_scaled) <= 2.0 * 0.02,
               fmt("exponent=%.4f in 1+-0.1; xi0=%.4f vs %.4f (|diff|<=0.04)", expo, xi0,
                   xi0_scaled));
    }

    SnapshotSeries run_q;  // s = 0.25, reused by criterion 6
    if (selected(5) || selected(6))
        run_q = riemann_run(one, 0.25, 2.0, 0.5, 0.02, 40.0, 1.0, {1.0});

    if (selected(5)) {
        bool ok = true;
        std::string detail;
        const SnapshotSeries run_tq = riemann_run(one, 0.75, 2.0, 0.5, 0.02, 40.0, 1.0, {1.0});
        const SnapshotSeries* runs[] = {&run_q, &run_half, &run_tq};
        const double svals[] = {0.25, 0.5, 0.75};
        for (int i = 0; i < 3; ++i) {
            const Profile prof = extract_profile(*runs[i], svals[i], 1.0);
            const double xi0 = detect_interfaces(prof, 1.0, default_tol_u(prof)).xi_water;
            const double slope = fit_tail_exponent(prof, 0.5, 4.0 * xi0, 20.0);
            const double target = -2.0 * svals[i];
            if (std::abs(slope - target) > 0.15 * std::abs(target)) ok = false;
            detail += fmt("s=%.2f: %.3f vs %.2f; ", svals[i], slope, target);
        }
        report(5, "enthalpy tail exponent -2s (+-15%)", ok, detail);
    }

    if (selected(6)) {
        const SnapshotSeries wide = riemann_run(one, 0.75, 2.0, 0.5, 0.03, 120.0, 1.0, {1.0});
        const Profile p_wide = extract_profile(wide, 0.75, 1.0);
        const MassTransferReport conv =
            mass_transfer(p_wide, 2.0, 0.5, {0.5, 10.0, 20.0, 40.0, 80.0, 110.0});
        const double im = conv.I_minus.back(), ip = conv.I_plus.back();
        const double balance = std::abs(im - ip) / std::max(im, ip);

        const Profile p_q = extract_profile(run_q, 0.25, 1.0);
        const MassTransferReport div =
            mass_transfer(p_q, 2.0, 0.5, {2.0, 4.0, 8.0, 16.0, 32.0});
        report(6, "mass transfer dichotomy",
               conv.cls == MassTransfer::convergent && balance <= 0.10 &&
                   div.cls == MassTransfer::divergent,
               fmt("s=0.75: %s, I-=%.4f vs I+=%.4f (%.1f%%); s=0.25: %s", to_string(conv.cls),
                   im, ip, 100 * balance, to_string(div.cls)));

        // profile-limit invariant, checked where the tail decay affords it
        const std::size_t n = p_wide.H.size(), outer = n / 20;
        double mean_l = 0.0, mean_r = 0.0;
        for (std::size_t i = 0; i < outer; ++i) {
            mean_l += p_wide.H[i];
            mean_r += p_wide.H[n - 1 - i];
        }
        mean_l /= outer;
        mean_r /= outer;
        const double span = p_wide.b1 - p_wide.b2;
        const bool limits_ok = std::abs(mean_l - p_wide.b1) <= 1e-3 * span &&
                               std::abs(mean_r - p_wide.b2) <= 1e-3 * span;
        report(6, "profile limits over the outer 5% (invariant)", limits_ok,
               fmt("|mean_l-b1|=%.2e, |mean_r-b2|=%.2e <= %.2e", std::abs(mean_l - p_wide.b1),
                   std::abs(mean_r - p_wide.b2), 1e-3 * span));
    }
}

void criterion_7() {
    if (!selected(7)) return;
    const StefanGraph graph = StefanGraph::two_phase(1.0);
    const SnapshotSeries series = riemann_run(graph, 0.5, 2.0, -0.1, 0.01, 40.0, 1.0, {1.0});
    const Profile prof = extract_profile(series, 0.5, 1.0);
    const InterfaceReport rep = detect_interfaces(prof, 1.0, default_tol_u(prof));
    report(7, "mushy region at s=1/2 with strict positivity",
           rep.mushy_width > 2.0 * 0.01 && rep.xi_water > 2.0 * 0.01,
           fmt("xi_w=%.4f>0.02, xi_i=%.4f, mushy=%.4f>0.02", rep.xi_water, rep.xi_ice,
               rep.mushy_width));
}

void criterion_8() {
    if (!selected(8)) return;
    const StefanGraph graph = StefanGraph::two_phase(1.0);
    const Grid1D grid = Grid1D::cover(-10.0, 10.0, 0.05);
    const Stencil st = build_stencil(0.5, 0.05, grid.n);
    std::mt19937 rng(2024);

    bool comparison_ok = true, bounds_ok = true, contraction_ok = true, mass_ok = true;
    double worst_gap = 0.0, worst_leak = 0.0, worst_rate = 0.0;

    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_real_distribution<double> bdist(-1.5, 2.5);
        const double b1 = bdist(rng), b2 = bdist(rng);
        const FarField ff{b1, b2, 0.0};
        std::uniform_real_distribution<double> vdist(-2.0, 3.0);
        std::uniform_real_distribution<double> bump(0.0, 1.0);
        std::uniform_real_distribution<double> signed_bump(-0.5, 0.5);

        Field v = constant_field(grid, 0.0, ff);
        for (int b = 0; b < grid.n; ++b)
            v.values[b] = (b >= 40 && b < grid.n - 40) ? vdist(rng) : ff.at(grid.node(b));
        Field w = v;  // ordered partner
        for (int b = 80; b < grid.n - 80; ++b) w.values[b] += bump(rng);
        Field w2 = v;  // unordered partner, compact difference
        for (int b = 80; b < grid.n - 80; ++b) w2.values[b] += signed_bump(rng);

        const double theta = trial % 2 == 0 ? 1.0 : 0.9;
        const double dt = cfl_dt(st, graph, theta);
        const Field v1 = step(v, st, graph, dt);
        const Field w1 = step(w, st, graph, dt);
        const Field w21 = step(w2, st, graph, dt);

        double vmin = std::min(b1, b2), vmax = std::max(b1, b2);
        for (double val : v.values) {
            vmin = std::min(vmin, val);
            vmax = std::max(vmax, val);
        }
        double pos_before = 0.0, pos_after = 0.0;
        for (int b = 0; b < grid.n; ++b) {
            const double gap = w1.values[b] - v1.values[b];
            worst_gap = std::min(worst_gap, gap);
            if (gap < -1e-12) comparison_ok = false;
            if (v1.values[b] < vmin - 1e-12 || v1.values[b] > vmax + 1e-12) bounds_ok = false;
            pos_before += std::max(v.values[b] - w2.values[b], 0.0);
            pos_after += std::max(v1.values[b] - w21.values[b], 0.0);
        }
        const double leak = grid.dx * (pos_after - pos_before);
        worst_leak = std::max(worst_leak, leak);
        if (leak > 1e-8) contraction_ok = false;

        if (trial % 20 == 0) {  // short monitored runs for the mass identity
            RunConfig cfg;
            cfg.graph = graph;
            cfg.grid = grid;
            cfg.stencil = st;
            cfg.farfield = ff;
            cfg.final_time = 10.0 * dt;
            cfg.theta = theta;
            cfg.snapshot_times = {10.0 * dt};
            const SnapshotSeries series = run(cfg, v);
            worst_rate = std::max(worst_rate, series.summary.mass_residual_rate);
            if (series.summary.mass_residual_rate > 1e-6) mass_ok = false;
        }
    }
    report(8, "discrete comparison/stability/contraction/mass on 200 random pairs",
           comparison_ok && bounds_ok && contraction_ok && mass_ok,
           fmt("min gap=%.1e>=-1e-12, max leak=%.1e<=1e-8, mass rate=%.1e<=1e-6", worst_gap,
               worst_leak, worst_rate));
}

void criterion_9() {
    if (!selected(9)) return;
    const StefanGraph one = StefanGraph::one_phase(1.0);
    auto make = [&](double dx) {
        return riemann_run(one, 0.5, 2.0, 0.5, dx, 20.0, 1.0, {0.25, 0.5, 1.0});
    };
    std::vector<SnapshotSeries> levels;
    for (double dx : {0.08, 0.04, 0.02}) levels.push_back(make(dx));
    const SnapshotSeries reference = make(0.005);
    const std::vector<ConvergenceRow> rows = convergence_study(levels, reference, -5.0, 5.0);
    const bool decreasing = rows[0].error > rows[1].error && rows[1].error > rows[2].error;
    report(9, "convergence on K=[-5,5]", decreasing && rows[2].ratio <= 0.7,
           fmt("errors %.4e > %.4e > %.4e, last ratio=%.3f<=0.7", rows[0].error, rows[1].error,
               rows[2].error, rows[2].ratio));
}

void criterion_10() {
    if (!selected(10)) return;
    const TestFunction1D fn = gaussian_test_function();
    bool ok = true;
    std::string detail;
    for (double s : {0.25, 0.5, 0.75}) {
        std::vector<double> errs;
        for (double dx : {0.2, 0.1, 0.05, 0.025}) {
            const Grid1D grid = Grid1D::cover(-16.0, 16.0, dx);
            errs.push_back(consistency_error(build_stencil(s, dx, grid.n), fn, grid));
        }
        const bool dec = errs[0] > errs[1] && errs[1] > errs[2] && errs[2] > errs[3];
        if (!dec) ok = false;
        detail += fmt("s=%.2f: %.1e>%.1e>%.1e>%.1e; ", s, errs[0], errs[1], errs[2], errs[3]);
    }
    report(10, "operator consistency under three dx-halvings", ok, detail);
}

void criterion_11() {
    if (!selected(11)) return;
    const Figure2Result fig2 = run_figure2({0.6, 0.75}, {0.05}, "acceptance_out/figure2", 0.02);
    bool fig2_ok = fig2.rows.size() == 2;
    std::string d2;
    for (const Figure2Row& row : fig2.rows) {
        if (row.no_crossing || row.mushy_width <= 2.0 * fig2.dx) fig2_ok = false;
        d2 += fmt("(s=%.2f,P2=%.2f): mushy=%.4f; ", row.s, row.p2, row.mushy_width);
    }

    const Figure4Result fig4 = run_figure4("acceptance_out/figure4", 0.02);
    const bool fig4_ok =
        fig4.first.negative_front_infinite != fig4.second.negative_front_infinite &&
        fig4.first.positive_envelope_ok && fig4.second.positive_envelope_ok &&
        fig4.sanity_negative_empty;

    const Figure5Result fig5 = run_figure5("acceptance_out/figure5", 0.025);
    const bool fig5_ok = fig5.nonmonotone && fig5.vanishes && fig5.envelope_ok;

    report(11, "qualitative figures 2/4/5", fig2_ok && fig4_ok && fig5_ok,
           d2 + fmt("fig4: %s/%s env=%d/%d sane=%d; fig5: nonmono=%d vanish=%d env=%d",
                    fig4.first.negative_front_infinite ? "inf" : "fin",
                    fig4.second.negative_front_infinite ? "inf" : "fin",
                    fig4.first.positive_envelope_ok ? 1 : 0,
                    fig4.second.positive_envelope_ok ? 1 : 0,
                    fig4.sanity_negative_empty ? 1 : 0, fig5.nonmonotone ? 1 : 0,
                    fig5.vanishes ? 1 : 0, fig5.envelope_ok ? 1 : 0));
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) g_selected.insert(std::atoi(argv[i]));
    const auto t0 = std::chrono::steady_clock::now();
    criteria_1_2_3();
    criteria_4_5_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("acceptance: %s (%.1f s)\n", g_failures == 0 ? "ALL PASS" : "FAILURES", wall);
    return g_failures == 0 ? 0 : 1;
}
