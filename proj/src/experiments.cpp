#include "stefan/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stefan/errors.hpp"
#include "stefan/io.hpp"

namespace stefan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw config_error("config error at " + path + ": expected object");
    auto it = j.find(key);
    if (it == j.end())
        throw config_error("config error at " + path + "." + key + ": missing field");
    return *it;
}

double need_num(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number())
        throw config_error("config error at " + path + "." + key + ": expected number");
    return v.get<double>();
}

double opt_num(const json& j, const char* key, double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return j.at(key).get<double>();
}

InitialDatum parse_datum(const json& j, const std::string& path) {
    const std::string type = need(j, "type", path).get<std::string>();
    if (type == "riemann")
        return InitialDatum::riemann_step(need_num(j, "b1", path), need_num(j, "b2", path),
                                          opt_num(j, "jump", 0.0));
    if (type == "constant") return InitialDatum::constant(need_num(j, "value", path));
    if (type == "bump_cos")
        return InitialDatum::bump_cos(need_num(j, "amplitude", path), opt_num(j, "offset", 0.0),
                                      need_num(j, "radius", path),
                                      opt_num(j, "background", 0.0));
    if (type == "box")
        return InitialDatum::box(need_num(j, "height", path), need_num(j, "radius", path),
                                 opt_num(j, "background", 0.0));
    if (type == "terrace")
        return InitialDatum::terrace(need_num(j, "height", path), need_num(j, "radius", path),
                                     need_num(j, "collar", path),
                                     need_num(j, "collar_radius", path),
                                     opt_num(j, "background", 0.0));
    if (type == "tabulated") {
        const json& v = need(j, "values", path);
        if (!v.is_array())
            throw config_error("config error at " + path + ".values: expected array");
        return InitialDatum::tabulated(v.get<std::vector<double>>());
    }
    throw config_error("config error at " + path + ".type: unknown datum type '" + type + "'");
}

json datum_json(const InitialDatum& d) {
    switch (d.type) {
        case InitialDatum::Type::riemann:
            return {{"type", "riemann"}, {"b1", d.b1}, {"b2", d.b2}, {"jump", d.jump}};
        case InitialDatum::Type::constant: return {{"type", "constant"}, {"value", d.value}};
        case InitialDatum::Type::bump_cos:
            return {{"type", "bump_cos"},
                    {"amplitude", d.amplitude},
                    {"offset", d.offset},
                    {"radius", d.radius},
                    {"background", d.background}};
        case InitialDatum::Type::box:
            return {{"type", "box"},
                    {"height", d.amplitude},
                    {"radius", d.radius},
                    {"background", d.background}};
        case InitialDatum::Type::terrace:
            return {{"type", "terrace"},
                    {"height", d.amplitude},
                    {"radius", d.radius},
                    {"collar", d.collar},
                    {"collar_radius", d.collar_radius},
                    {"background", d.background}};
        case InitialDatum::Type::tabulated: return {{"type", "tabulated"}, {"values", d.table}};
    }
    return {};
}

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

}  // namespace

Scenario parse_scenario(const json& j) {
    Scenario sc;
    try {
        if (j.contains("scenario")) sc.name = j.at("scenario").get<std::string>();

        const json& g = need(j, "graph", "$");
        sc.graph.kind = graph_kind_from_string(need(g, "kind", "$.graph").get<std::string>());
        sc.graph.latent_heat = need_num(g, "L", "$.graph");
        if (g.contains("k")) {
            const auto ks = g.at("k").get<std::vector<double>>();
            if (ks.size() != 3)
                throw config_error("config error at $.graph.k: expected [k0,k1,k2]");
            sc.graph.k0 = ks[0];
            sc.graph.k1 = ks[1];
            sc.graph.k2 = ks[2];
        }
        sc.graph.validate();

        const json& s_field = need(j, "s", "$");
        if (s_field.is_string() && s_field.get<std::string>() == "local") {
            sc.local = true;
            sc.s = 1.0;
        } else if (s_field.is_number()) {
            sc.s = s_field.get<double>();
            if (!(sc.s > 0.0 && sc.s < 1.0))
                throw config_error("config error at $.s: need s in (0,1) or \"local\"");
        } else {
            throw config_error("config error at $.s: expected number or \"local\"");
        }

        sc.dx = need_num(j, "dx", "$");
        if (!(sc.dx > 0.0)) throw config_error("config error at $.dx: need dx > 0");
        const json& w = need(j, "window", "$");
        if (!w.is_array() || w.size() != 2)
            throw config_error("config error at $.window: expected [x_min, x_max]");
        sc.window_lo = w.at(0).get<double>();
        sc.window_hi = w.at(1).get<double>();
        if (!(sc.window_hi > sc.window_lo))
            throw config_error("config error at $.window: empty window");

        const json& ff = need(j, "farfield", "$");
        if (!ff.is_array() || ff.size() != 2)
            throw config_error("config error at $.farfield: expected [b1, b2]");
        sc.farfield.left = ff.at(0).get<double>();
        sc.farfield.right = ff.at(1).get<double>();

        sc.final_time = need_num(j, "T", "$");
        if (!(sc.final_time > 0.0)) throw config_error("config error at $.T: need T > 0");
        sc.theta = opt_num(j, "theta", 0.9);
        if (!(sc.theta > 0.0 && sc.theta <= 1.0))
            throw config_error("config error at $.theta: need theta in (0,1]");
        if (j.contains("snapshot_times"))
            sc.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
        if (sc.snapshot_times.empty()) sc.snapshot_times = {sc.final_time};

        sc.datum = parse_datum(need(j, "datum", "$"), "$.datum");
        sc.farfield.split = sc.datum.type == InitialDatum::Type::riemann ? sc.datum.jump : 0.0;
        if (j.contains("R_cut")) sc.r_cut = j.at("R_cut").get<int>();
        if (j.contains("sampling") && j.at("sampling").get<std::string>() == "pointwise")
            sc.rule = SamplingRule::pointwise;
        if (j.contains("analyses")) {
            sc.analyses = j.at("analyses").get<std::vector<std::string>>();
            static const std::set<std::string> known{"profile",     "interfaces",
                                                     "antisymmetry", "sss_residual",
                                                     "collapse",    "oracle_antisym"};
            for (const std::string& a : sc.analyses)
                if (!known.count(a))
                    throw config_error("config error at $.analyses: unknown directive '" + a +
                                       "'");
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("config error: ") + e.what());
    }
    return sc;
}

Scenario load_scenario_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return parse_scenario(j);
}

json scenario_json(const Scenario& sc) {
    return {{"scenario", sc.name},
            {"graph",
             {{"kind", to_string(sc.graph.kind)},
              {"L", sc.graph.latent_heat},
              {"k", {sc.graph.k0, sc.graph.k1, sc.graph.k2}}}},
            {"s", sc.local ? json("local") : json(sc.s)},
            {"dx", sc.dx},
            {"window", {sc.window_lo, sc.window_hi}},
            {"farfield", {sc.farfield.left, sc.farfield.right}},
            {"T", sc.final_time},
            {"theta", sc.theta},
            {"snapshot_times", sc.snapshot_times},
            {"datum", datum_json(sc.datum)},
            {"R_cut", sc.r_cut},
            {"sampling", sc.rule == SamplingRule::pointwise ? "pointwise" : "cell_average"},
            {"analyses", sc.analyses}};
}

Grid1D scenario_grid(const Scenario& sc) {
    Grid1D g = Grid1D::cover(sc.window_lo, sc.window_hi, sc.dx);
    if (sc.datum.type == InitialDatum::Type::riemann) {
        // put the jump on a cell boundary (removes an O(dx) interface bias)
        const double cell_lo = g.x_min - 0.5 * g.dx;
        const double shift =
            sc.datum.jump - (cell_lo + std::round((sc.datum.jump - cell_lo) / g.dx) * g.dx);
        g.x_min += shift;
    }
    return g;
}

Stencil scenario_stencil(const Scenario& sc, int grid_n) {
    if (sc.local) return build_local_stencil(sc.dx);
    return build_stencil(sc.s, sc.dx, sc.r_cut > 0 ? sc.r_cut : grid_n);
}

RunConfig make_run_config(const Scenario& sc) {
    RunConfig cfg;
    cfg.graph = sc.graph;
    cfg.grid = scenario_grid(sc);
    cfg.stencil = scenario_stencil(sc, cfg.grid.n);
    cfg.farfield = sc.farfield;
    cfg.final_time = sc.final_time;
    cfg.theta = sc.theta;
    cfg.snapshot_times = sc.snapshot_times;
    return cfg;
}

Field make_initial(const Scenario& sc) {
    return sample_initial(scenario_grid(sc), sc.datum, sc.farfield, sc.rule);
}

namespace {

// analyses directives for run_scenario
json analyze(const Scenario& sc, const SnapshotSeries& series, const fs::path& out_dir,
             std::vector<fs::path>& artifacts) {
    json out = json::object();
    const double t_last = series.times.back();
    auto enabled = [&](const char* key) {
        return std::find(sc.analyses.begin(), sc.analyses.end(), key) != sc.analyses.end();
    };

    std::optional<Profile> prof;
    auto profile_ref = [&]() -> const Profile& {
        if (!prof) prof = extract_profile(series, sc.local ? 1.0 : sc.s, t_last);
        return *prof;
    };

    if (enabled("profile")) {
        const fs::path p = out_dir / "profile.csv";
        write_profile_csv(p, profile_ref());
        artifacts.push_back(p);
        out["profile"] = {{"t_ref", profile_ref().t_ref}, {"file", p.filename().string()}};
    }
    if (enabled("interfaces")) {
        const Profile& p = profile_ref();
        try {
            out["interfaces"] = interface_report_json(
                detect_interfaces(p, sc.graph.latent_heat, default_tol_u(p)));
        } catch (const no_crossing_error& e) {
            out["interfaces"] = {{"error", e.what()}};
        }
    }
    if (enabled("antisymmetry")) {
        const Profile& p = profile_ref();
        out["antisymmetry"] = {
            {"defect_u", antisymmetry_defect(p, sc.graph.latent_heat)},
            {"defect_h", enthalpy_antisymmetry_defect(p, sc.graph.latent_heat)}};
    }
    if (enabled("sss_residual")) {
        const Profile& p = profile_ref();
        Stencil st = sc.local ? build_local_stencil(p.dxi)
                              : build_stencil(sc.s, p.dxi,
                                              sc.r_cut > 0 ? sc.r_cut
                                                           : static_cast<int>(p.xi.size()));
        out["sss_residual"] = sss_residual(p, st);
    }
    if (enabled("collapse") && series.times.size() >= 3) {
        const double t1 = series.times[1], t2 = series.times.back();
        out["collapse"] = {{"t1", t1},
                           {"t2", t2},
                           {"l1", collapse_error(series, sc.local ? 1.0 : sc.s, t1, t2, -5.0, 5.0)}};
    }
    if (enabled("oracle_antisym")) {
        // error against the exact stationary-interface temperature
        const double P = series.farfield.left - sc.graph.latent_heat;
        json table = json::array();
        std::vector<double> xs, us;
        for (std::size_t i = 0; i < series.times.size(); ++i) {
            const double t = series.times[i];
            if (t <= 0.0) continue;
            const Field& f = series.fields[i];
            double max_err = 0.0;
            for (int b = 0; b < f.grid.n; ++b) {
                const double x = f.grid.node(b);
                if (std::abs(x) > 2.0) continue;
                const double u_num = sc.graph.temperature(f.values[b]);
                max_err = std::max(max_err, std::abs(u_num - antisym_exact_u(P, sc.s, x, t)));
            }
            // u at the origin: interpolate the (continuous) temperature
            double u0 = 0.0;
            for (int b = 0; b + 1 < f.grid.n; ++b) {
                const double xl = f.grid.node(b), xr = f.grid.node(b + 1);
                if (xl <= 0.0 && 0.0 <= xr) {
                    const double ul = sc.graph.temperature(f.values[b]);
                    const double ur = sc.graph.temperature(f.values[b + 1]);
                    const double w = (0.0 - xl) / (xr - xl);
                    u0 = (1.0 - w) * ul + w * ur;
                    break;
                }
            }
            table.push_back({{"t", t}, {"max_err_abs_x_le_2", max_err}, {"u_at_0", u0}});
        }
        const Field& f = series.fields.back();
        for (int b = 0; b < f.grid.n; ++b) {
            const double x = f.grid.node(b);
            if (std::abs(x) > 5.0) continue;
            xs.push_back(x);
            us.push_back(antisym_exact_u(P, sc.s, x, series.times.back()));
        }
        const fs::path p = out_dir / "oracle_u.csv";
        write_oracle_csv(p, xs, us);
        artifacts.push_back(p);
        out["oracle_antisym"] = {{"P", P}, {"table", table}, {"file", p.filename().string()}};
    }
    return out;
}

}  // namespace

SimulateResult run_scenario(const Scenario& sc, const fs::path& out_dir, bool write_plots) {
    fs::create_directories(out_dir);
    const RunConfig cfg = make_run_config(sc);
    Field init = make_initial(sc);

    // rule of thumb: interfaces travel like t^{1/(2s)}, keep them well inside
    std::string warning;
    const double reach = 10.0 * std::pow(sc.final_time, 1.0 / (2.0 * (sc.local ? 1.0 : sc.s)));
    if (-sc.window_lo < reach || sc.window_hi < reach) {
        warning = "window smaller than 10 T^{1/(2s)}; interfaces may feel the truncation";
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    }
    SnapshotSeries series = run(cfg, init);
    series.riemann_data = sc.datum.type == InitialDatum::Type::riemann;
    series.jump = sc.datum.jump;
    series.summary.init_rule =
        sc.rule == SamplingRule::pointwise ? "pointwise" : "cell_average";

    std::vector<fs::path> artifacts;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const fs::path p = out_dir / ("snap_t" + time_tag(series.times[i]) + ".csv");
        write_field_csv(p, series.fields[i], sc.graph);
        artifacts.push_back(p);
        if (write_plots) {
            std::vector<double> xs(series.fields[i].values.size());
            std::vector<double> us(xs.size());
            for (int b = 0; b < series.fields[i].grid.n; ++b) {
                xs[b] = series.fields[i].grid.node(b);
                us[b] = sc.graph.temperature(series.fields[i].values[b]);
            }
            const fs::path sp = out_dir / ("snap_t" + time_tag(series.times[i]) + ".svg");
            write_svg_lines(sp, sc.name + " t=" + time_tag(series.times[i]), xs,
                            {{"h", &series.fields[i].values, "#1f77b4"}, {"u", &us, "#d62728"}});
            artifacts.push_back(sp);
        }
    }

    json meta;
    meta["config"] = scenario_json(sc);
    meta["dt"] = series.summary.dt;
    meta["steps"] = series.summary.steps;
    meta["wall_seconds"] = series.summary.wall_seconds;
    meta["init_rule"] = series.summary.init_rule;
    meta["snapshot_times"] = series.times;
    meta["monitors"] = {{"mass_residual_rate", series.summary.mass_residual_rate},
                        {"max_u_jump_final", series.summary.max_u_jump_final}};
    if (!warning.empty()) meta["warnings"] = {warning};
    if (!series.monitor_log.empty()) {
        const MonitorRecord& last = series.monitor_log.back();
        meta["monitors"]["final"] = {{"t", last.t},
                                     {"sup_norm", last.sup_norm},
                                     {"excess_mass", last.excess},
                                     {"vmin", last.vmin},
                                     {"vmax", last.vmax}};
    }
    meta["analyses"] = analyze(sc, series, out_dir, artifacts);
    write_json(out_dir / "metadata.json", meta);

    json manifest;
    manifest["inputs"] = {{"config", scenario_json(sc)},
                          {"dx", sc.dx},
                          {"dt", series.summary.dt},
                          {"theta", sc.theta}};
    json hashes = json::object();
    for (const fs::path& p : artifacts) hashes[p.filename().string()] = file_hash(p);
    manifest["outputs"] = hashes;
    write_json(out_dir / "manifest.json", manifest);

    return {std::move(series), std::move(meta)};
}

Figure2Result run_figure2(const std::vector<double>& s_list, const std::vector<double>& p2_list,
                          const fs::path& out_dir, double dx) {
    if (s_list.empty() || p2_list.empty())
        throw config_error("figure2: s list and P2 list must be nonempty");
    fs::create_directories(out_dir);
    Figure2Result result;
    result.dx = dx;

    std::string table = "s,P2,xi_w,xi_i,mushy_width\n";
    for (double s : s_list) {
        for (double p2 : p2_list) {
            Scenario sc;
            sc.name = "figure2_s" + time_tag(s) + "_p2" + time_tag(p2);
            sc.graph = StefanGraph::two_phase(1.0);
            sc.s = s;
            sc.dx = dx;
            sc.window_lo = -30.0;
            sc.window_hi = 30.0;
            sc.farfield = {2.0, -p2, 0.0};
            sc.final_time = 1.0;
            sc.snapshot_times = {1.0};
            sc.datum = InitialDatum::riemann_step(2.0, -p2);

            const RunConfig cfg = make_run_config(sc);
            SnapshotSeries series = run(cfg, make_initial(sc));
            series.riemann_data = true;

            const Profile prof = extract_profile(series, s, 1.0);
            write_profile_csv(out_dir / (sc.name + "_profile.csv"), prof);
            std::vector<double> H = prof.H;
            write_svg_lines(out_dir / (sc.name + ".svg"), sc.name, prof.xi,
                            {{"H", &H, "#1f77b4"}});

            Figure2Row row;
            row.s = s;
            row.p2 = p2;
            try {
                const InterfaceReport rep =
                    detect_interfaces(prof, sc.graph.latent_heat, default_tol_u(prof));
                row.xi_water = rep.xi_water;
                row.xi_ice = rep.xi_ice;
                row.mushy_width = rep.mushy_width;
                table += format17(s) + "," + format17(p2) + "," + format17(row.xi_water) +
                         "," + format17(row.xi_ice) + "," + format17(row.mushy_width) + "\n";
            } catch (const no_crossing_error&) {
                row.no_crossing = true;
                table += format17(s) + "," + format17(p2) + ",window,window,window\n";
            }
            result.rows.push_back(row);
        }
    }
    write_text(out_dir / "mushy_table.csv", table);
    write_dir_manifest(out_dir, {{"s_list", s_list},
                                 {"p2_list", p2_list},
                                 {"P1", 1.0},
                                 {"L", 1.0},
                                 {"dx", dx},
                                 {"window", {-30.0, 30.0}},
                                 {"T", 1.0},
                                 {"theta", 0.9}});
    return result;
}

namespace {

struct SetExtent {
    double lo = 0.0, hi = 0.0;
    bool empty = true;
};

template <class Pred>
SetExtent field_extent(const Field& f, Pred&& pred) {
    SetExtent e;
    for (int b = 0; b < f.grid.n; ++b) {
        if (!pred(f.values[b])) continue;
        const double x = f.grid.node(b);
        if (e.empty) {
            e.lo = e.hi = x;
            e.empty = false;
        } else {
            e.lo = std::min(e.lo, x);
            e.hi = std::max(e.hi, x);
        }
    }
    return e;
}

FrontHistory front_history(const std::string& name, const SnapshotSeries& series,
                           const StefanGraph& graph, double tol_u, double sentinel) {
    FrontHistory h;
    h.name = name;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const Field& f = series.fields[i];
        const SetExtent pos =
            field_extent(f, [&](double v) { return graph.temperature(v) > tol_u; });
        const SetExtent neg =
            field_extent(f, [&](double v) { return graph.temperature(v) < -tol_u; });
        h.times.push_back(series.times[i]);
        h.pos_lo.push_back(pos.empty ? 0.0 : pos.lo);
        h.pos_hi.push_back(pos.empty ? 0.0 : pos.hi);
        h.neg_lo.push_back(neg.empty ? 0.0 : neg.lo);
        h.neg_hi.push_back(neg.empty ? 0.0 : neg.hi);
        if (!neg.empty && std::max(std::abs(neg.lo), neg.hi) >= sentinel)
            h.negative_front_infinite = true;
    }
    return h;
}

json front_history_json(const FrontHistory& h) {
    return {{"name", h.name},
            {"times", h.times},
            {"pos_lo", h.pos_lo},
            {"pos_hi", h.pos_hi},
            {"neg_lo", h.neg_lo},
            {"neg_hi", h.neg_hi},
            {"negative_front_infinite", h.negative_front_infinite},
            {"positive_envelope_ok", h.positive_envelope_ok}};
}

}  // namespace

Figure4Result run_figure4(const fs::path& out_dir, double dx) {
    fs::create_directories(out_dir);
    const double s = 0.25, L = 1.0;
    const double window = 30.0, sentinel = 0.75 * window;
    const double T = 2.0;
    const std::vector<double> snaps{0.1, 0.5, 1.0, 2.0};
    const double tol_u = 1e-6;

    auto bump_scenario = [&](const std::string& name, double offset, double radius) {
        Scenario sc;
        sc.name = name;
        sc.graph = StefanGraph::two_phase(L);
        sc.s = s;
        sc.dx = dx;
        sc.window_lo = -window;
        sc.window_hi = window;
        sc.farfield = {0.0, 0.0, 0.0};
        sc.final_time = T;
        sc.snapshot_times = snaps;
        sc.datum = InitialDatum::bump_cos(L + 1.0, offset, radius, 0.0);
        return sc;
    };

    const Scenario first = bump_scenario("figure4_cos", 0.0, 1.5 * M_PI);
    const Scenario second = bump_scenario("figure4_cos_plus", 0.75, 1.2 * M_PI);

    SnapshotSeries run_first = run(make_run_config(first), make_initial(first));
    SnapshotSeries run_second = run(make_run_config(second), make_initial(second));

    Figure4Result result;
    result.first = front_history("cos", run_first, first.graph, tol_u, sentinel);
    result.second = front_history("cos_plus", run_second, second.graph, tol_u, sentinel);

    // One-phase selfsimilar envelope for the positive-temperature part:
    // companion Riemann run (b1 = sup h0 = L+1, b2 = 0) at the same spacing.
    Scenario comp;
    comp.name = "figure4_companion";
    comp.graph = StefanGraph::one_phase(L);
    comp.s = s;
    comp.dx = dx;
    comp.window_lo = -window;
    comp.window_hi = window;
    comp.farfield = {L + 1.0, 0.0, 0.0};
    comp.final_time = 1.0;
    comp.snapshot_times = {1.0};
    comp.datum = InitialDatum::riemann_step(L + 1.0, 0.0);
    SnapshotSeries comp_series = run(make_run_config(comp), make_initial(comp));
    comp_series.riemann_data = true;
    const Profile comp_prof = extract_profile(comp_series, s, 1.0);
    const InterfaceReport comp_rep =
        detect_interfaces(comp_prof, L, default_tol_u(comp_prof));
    result.xi0_companion = comp_rep.xi_water;

    auto check_envelope = [&](FrontHistory& h, double support_radius) {
        for (std::size_t i = 0; i < h.times.size(); ++i) {
            const double reach =
                support_radius +
                result.xi0_companion * std::pow(h.times[i], 1.0 / (2.0 * s)) + 2.0 * dx;
            if (std::max(std::abs(h.pos_lo[i]), h.pos_hi[i]) > reach)
                h.positive_envelope_ok = false;
        }
    };
    // radii of supp max(h0, 0): cos > 0 resp. cos > -3/4
    check_envelope(result.first, 0.5 * M_PI);
    check_envelope(result.second, std::acos(-0.75));

    // sanity: nonnegative data never grow a negative set
    Scenario sane = bump_scenario("figure4_sanity", 0.0, 1.5 * M_PI);
    sane.datum = InitialDatum::box(L + 1.0, 2.0, 0.0);
    SnapshotSeries run_sane = run(make_run_config(sane), make_initial(sane));
    const FrontHistory sane_hist = front_history("sanity", run_sane, sane.graph, tol_u, sentinel);
    result.sanity_negative_empty = true;
    for (std::size_t i = 0; i < sane_hist.times.size(); ++i)
        if (sane_hist.neg_lo[i] != 0.0 || sane_hist.neg_hi[i] != 0.0)
            result.sanity_negative_empty = false;

    const std::pair<const Scenario*, const SnapshotSeries*> outputs[] = {
        {&first, &run_first}, {&second, &run_second}};
    for (const auto& pr : outputs) {
        const Scenario& sc = *pr.first;
        const SnapshotSeries& series = *pr.second;
        for (std::size_t i = 0; i < series.times.size(); ++i)
            write_field_csv(out_dir / (sc.name + "_t" + time_tag(series.times[i]) + ".csv"),
                            series.fields[i], sc.graph);
    }
    json report = {{"s", s},
                   {"dx", dx},
                   {"sentinel", sentinel},
                   {"tol_u", tol_u},
                   {"xi0_companion", result.xi0_companion},
                   {"first", front_history_json(result.first)},
                   {"second", front_history_json(result.second)},
                   {"sanity_negative_empty", result.sanity_negative_empty}};
    write_json(out_dir / "figure4_report.json", report);
    write_dir_manifest(out_dir, report);
    return result;
}

Figure5Result run_figure5(const fs::path& out_dir, double dx) {
    fs::create_directories(out_dir);
    const double s = 0.25, L = 1.0;
    const double window = 60.0;
    // hot core over a shallow ice collar inside deep ice: the water region
    // first advances into the collar, then the deep ice drains it away
    const double core_h = L + 4.0, core_r = 6.0, collar = -0.2, collar_r = 20.0, deep = -3.0;
    const std::vector<double> snaps{0.25, 0.5,  0.75, 1.0, 1.5, 2.0,
                                    3.0,  4.0,  6.0,  8.0, 12.0, 16.0};
    const double T = snaps.back();

    Scenario sc;
    sc.name = "figure5";
    sc.graph = StefanGraph::two_phase(L);
    sc.s = s;
    sc.dx = dx;
    sc.window_lo = -window;
    sc.window_hi = window;
    sc.farfield = {deep, deep, 0.0};
    sc.final_time = T;
    sc.snapshot_times = snaps;
    sc.datum = InitialDatum::terrace(core_h, core_r, collar, collar_r, deep);

    SnapshotSeries series = run(make_run_config(sc), make_initial(sc));

    // Companion two-phase Riemann datum dominating h0: sup h0 left of the
    // collar edge, deep ice beyond. Its interfaces drive the envelope.
    Scenario comp = sc;
    comp.name = "figure5_companion";
    comp.farfield = {core_h, deep, collar_r};
    comp.datum = InitialDatum::riemann_step(core_h, deep, collar_r);
    SnapshotSeries comp_series = run(make_run_config(comp), make_initial(comp));
    comp_series.riemann_data = true;
    comp_series.jump = collar_r;

    Figure5Result result;
    const double tol_h = 1e-6 * (core_h - L);
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const Field& f = series.fields[i];
        int count = 0;
        for (double v : f.values)
            if (v > L + tol_h) ++count;
        result.times.push_back(series.times[i]);
        result.water_measure.push_back(count * dx);
    }
    const double m0 = result.water_measure.front();
    for (double m : result.water_measure)
        if (m > m0 + 2.0 * dx) result.nonmonotone = true;
    result.vanishes = result.water_measure.back() == 0.0;

    // Envelope: discrete comparison with the companion run, both sides of the
    // symmetric datum against the companion's right-moving fronts.
    result.envelope_ok = true;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const Field& f = series.fields[i];
        const Field& g = comp_series.fields[i];
        const SetExtent water = field_extent(f, [&](double v) { return v > L + tol_h; });
        const SetExtent melt = field_extent(f, [&](double v) { return v > tol_h; });
        const SetExtent comp_water = field_extent(g, [&](double v) { return v > L + tol_h; });
        const SetExtent comp_melt = field_extent(g, [&](double v) { return v > tol_h; });
        if (!water.empty) {
            const double bound = (comp_water.empty ? sc.window_lo : comp_water.hi) + 2.0 * dx;
            if (std::max(std::abs(water.lo), water.hi) > bound) result.envelope_ok = false;
        }
        if (!melt.empty) {
            const double bound = (comp_melt.empty ? sc.window_lo : comp_melt.hi) + 2.0 * dx;
            if (std::max(std::abs(melt.lo), melt.hi) > bound) result.envelope_ok = false;
        }
    }

    // companion interface abscissae, for the report
    const Profile comp_prof = extract_profile(comp_series, s, 1.0);
    try {
        const InterfaceReport rep = detect_interfaces(comp_prof, L, default_tol_u(comp_prof));
        result.companion_xi_water = rep.xi_water;
        result.companion_xi_ice = rep.xi_ice;
    } catch (const no_crossing_error&) {
    }

    for (std::size_t i = 0; i < series.times.size(); ++i)
        write_field_csv(out_dir / ("figure5_t" + time_tag(series.times[i]) + ".csv"),
                        series.fields[i], sc.graph);
    std::vector<double> wm = result.water_measure;
    write_svg_lines(out_dir / "figure5_water_measure.svg", "water measure", result.times,
                    {{"measure", &wm, "#1f77b4"}});
    json report = {{"s", s},
                   {"dx", dx},
                   {"times", result.times},
                   {"water_measure", result.water_measure},
                   {"nonmonotone", result.nonmonotone},
                   {"vanishes", result.vanishes},
                   {"envelope_ok", result.envelope_ok},
                   {"companion_xi_w", result.companion_xi_water},
                   {"companion_xi_i", result.companion_xi_ice}};
    write_json(out_dir / "figure5_report.json", report);
    report["datum"] = datum_json(sc.datum);
    report["window"] = {sc.window_lo, sc.window_hi};
    report["theta"] = sc.theta;
    write_dir_manifest(out_dir, report);
    return result;
}

PositivityResult run_positivity_check(const Scenario& sc, double omega_lo, double omega_hi,
                                      double t_star) {
    PositivityResult result;
    if (sc.graph.kind != GraphKind::one_phase) {
        result.applicable = false;
        result.pass = true;
        result.note = "SKIPPED: positivity conservation only holds one-phase";
        return result;
    }
    result.applicable = true;
    SnapshotSeries series = run(make_run_config(sc), make_initial(sc));
    const int start = series.index_of_time(t_star);
    const Field& at_star = series.fields[static_cast<std::size_t>(start)];

    std::vector<int> omega_nodes;
    for (int b = 0; b < at_star.grid.n; ++b) {
        const double x = at_star.grid.node(b);
        if (x <= omega_lo || x >= omega_hi) continue;
        if (sc.graph.temperature(at_star.values[b]) > 0.0) omega_nodes.push_back(b);
    }
    if (omega_nodes.empty()) {
        result.pass = true;
        result.note = "vacuous: u <= 0 on Omega at t*";
        return result;
    }
    result.pass = true;
    for (std::size_t i = static_cast<std::size_t>(start) + 1; i < series.times.size(); ++i)
        for (int b : omega_nodes)
            if (!(sc.graph.temperature(series.fields[i].values[b]) > 0.0)) result.pass = false;
    result.note = result.pass ? "positivity set conserved" : "positivity set lost";
    return result;
}

SandwichResult run_sandwich_check(const Scenario& sc) {
    if (sc.graph.kind != GraphKind::two_phase)
        throw config_error("sandwich check needs a two-phase scenario");
    const double L = sc.graph.latent_heat;
    const RunConfig cfg = make_run_config(sc);
    const Field init = make_initial(sc);
    SnapshotSeries main_run = run(cfg, init);

    RunConfig upper_cfg = cfg;
    upper_cfg.graph = StefanGraph::one_phase(L, sc.graph.k1);
    Field upper_init = init;
    for (double& v : upper_init.values) v = std::max(v, 0.0);
    upper_init.farfield.left = std::max(init.farfield.left, 0.0);
    upper_init.farfield.right = std::max(init.farfield.right, 0.0);
    upper_cfg.farfield = upper_init.farfield;
    SnapshotSeries upper_run = run(upper_cfg, upper_init);

    RunConfig lower_cfg = cfg;
    lower_cfg.graph = StefanGraph::one_phase(L, sc.graph.k2);
    Field lower_init = init;
    for (double& v : lower_init.values) v = -std::min(v, L) + L;
    lower_init.farfield.left = -std::min(init.farfield.left, L) + L;
    lower_init.farfield.right = -std::min(init.farfield.right, L) + L;
    lower_cfg.farfield = lower_init.farfield;
    SnapshotSeries lower_run = run(lower_cfg, lower_init);

    SandwichResult result;
    result.pass = true;
    for (std::size_t i = 0; i < main_run.times.size(); ++i) {
        const Field& h = main_run.fields[i];
        const Field& hb = upper_run.fields[i];
        const Field low = reflect_two_to_one(lower_run.fields[i], L);
        for (int b = 0; b < h.grid.n; ++b) {
            result.max_upper_violation =
                std::max(result.max_upper_violation, h.values[b] - hb.values[b]);
            result.max_lower_violation =
                std::max(result.max_lower_violation, low.values[b] - h.values[b]);
            result.upper_gap = std::max(result.upper_gap, std::abs(h.values[b] - hb.values[b]));
            result.lower_gap = std::max(result.lower_gap, std::abs(low.values[b] - h.values[b]));
        }
    }
    result.pass = result.max_upper_violation <= 1e-9 && result.max_lower_violation <= 1e-9;
    return result;
}

ConvergeResult run_converge(const json& ladder_cfg, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    Scenario base = parse_scenario(need(ladder_cfg, "scenario", "$"));
    const std::vector<double> ladder =
        need(ladder_cfg, "ladder_dx", "$").get<std::vector<double>>();
    const double ref_dx = need_num(ladder_cfg, "reference_dx", "$");
    const json& K = need(ladder_cfg, "K", "$");
    if (!K.is_array() || K.size() != 2)
        throw config_error("config error at $.K: expected [lo, hi]");
    const double k_lo = K.at(0).get<double>(), k_hi = K.at(1).get<double>();

    auto run_at = [&](double dx) {
        Scenario sc = base;
        sc.dx = dx;
        SnapshotSeries series = run(make_run_config(sc), make_initial(sc));
        series.riemann_data = sc.datum.type == InitialDatum::Type::riemann;
        series.jump = sc.datum.jump;
        return series;
    };

    std::vector<SnapshotSeries> levels;
    for (double dx : ladder) levels.push_back(run_at(dx));
    const SnapshotSeries reference = run_at(ref_dx);

    ConvergeResult result;
    result.rows = convergence_study(levels, reference, k_lo, k_hi);

    std::string table = "dx,error,ratio\n";
    for (const ConvergenceRow& row : result.rows)
        table += format17(row.dx) + "," + format17(row.error) + "," + format17(row.ratio) + "\n";
    write_text(out_dir / "convergence.csv", table);
    json meta = {{"ladder_dx", ladder}, {"reference_dx", ref_dx}, {"K", {k_lo, k_hi}}};
    write_json(out_dir / "convergence_meta.json", meta);
    return result;
}

}  // namespace stefan
