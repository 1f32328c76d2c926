// Command-line front end: wires JSON scenario configs to runs and reproduces
// the standard experiment batteries.
#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stefan/errors.hpp"
#include "stefan/experiments.hpp"
#include "stefan/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int do_simulate(const std::string& config_path, const std::string& out_dir) {
    const stefan::Scenario sc = stefan::load_scenario_file(config_path);
    const stefan::SimulateResult res = stefan::run_scenario(sc, out_dir);
    std::printf("simulate: %s -> %s (%ld steps, dt=%g)\n", sc.name.c_str(), out_dir.c_str(),
                res.series.summary.steps, res.series.summary.dt);
    return kExitOk;
}

int do_profile(const std::string& config_path, const std::string& out_dir) {
    stefan::Scenario sc = stefan::load_scenario_file(config_path);
    if (sc.analyses.empty()) sc.analyses = {"profile", "interfaces", "sss_residual", "collapse"};
    const stefan::SimulateResult res = stefan::run_scenario(sc, out_dir);
    std::printf("profile: %s\n", res.metadata["analyses"].dump(2).c_str());
    return kExitOk;
}

int do_figure2(std::vector<double> s_list, std::vector<double> p2_list, double dx,
               const std::string& out_dir) {
    if (s_list.empty()) s_list = {0.3, 0.5, 0.6, 0.75};
    if (p2_list.empty()) p2_list = {0.05, 0.3, 0.6, 0.9};
    const stefan::Figure2Result res = stefan::run_figure2(s_list, p2_list, out_dir, dx);
    for (const stefan::Figure2Row& row : res.rows) {
        if (row.no_crossing)
            std::printf("s=%-5g P2=%-5g mushy=window\n", row.s, row.p2);
        else
            std::printf("s=%-5g P2=%-5g xi_w=%-10.5f xi_i=%-10.5f mushy=%.5f\n", row.s, row.p2,
                        row.xi_water, row.xi_ice, row.mushy_width);
    }
    return kExitOk;
}

int do_figure4(double dx, const std::string& out_dir) {
    const stefan::Figure4Result res = stefan::run_figure4(out_dir, dx);
    std::printf("cos bump:       negative front %s, positive envelope %s\n",
                res.first.negative_front_infinite ? "INFINITE" : "FINITE",
                res.first.positive_envelope_ok ? "ok" : "VIOLATED");
    std::printf("cos+3/4 bump:   negative front %s, positive envelope %s\n",
                res.second.negative_front_infinite ? "INFINITE" : "FINITE",
                res.second.positive_envelope_ok ? "ok" : "VIOLATED");
    std::printf("sanity (h0>=0): negative set %s\n",
                res.sanity_negative_empty ? "empty" : "NON-EMPTY");
    return kExitOk;
}

int do_figure5(double dx, const std::string& out_dir) {
    const stefan::Figure5Result res = stefan::run_figure5(out_dir, dx);
    std::printf("water measure:");
    for (std::size_t i = 0; i < res.times.size(); ++i)
        std::printf(" %g:%g", res.times[i], res.water_measure[i]);
    std::printf("\nnon-monotone=%s vanishes=%s envelope=%s\n",
                res.nonmonotone ? "yes" : "no", res.vanishes ? "yes" : "no",
                res.envelope_ok ? "ok" : "VIOLATED");
    return kExitOk;
}

int do_converge(const std::string& ladder_path, const std::string& out_dir) {
    std::ifstream in(ladder_path);
    if (!in) throw stefan::config_error("cannot open ladder file: " + ladder_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw stefan::config_error(std::string("config parse error: ") + e.what());
    }
    const stefan::ConvergeResult res = stefan::run_converge(j, out_dir);
    std::printf("%-10s %-14s %s\n", "dx", "error", "ratio");
    for (const stefan::ConvergenceRow& row : res.rows)
        std::printf("%-10g %-14.8g %.4g\n", row.dx, row.error, row.ratio);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D enthalpy solver for local and fractional Stefan problems"};
    app.require_subcommand(1);

    std::string config_path, ladder_path, out_dir = "out";
    std::vector<double> s_list, p2_list;
    double dx2 = 0.02, dx4 = 0.02, dx5 = 0.025;

    CLI::App* sim = app.add_subcommand("simulate", "run one scenario from a JSON config");
    sim->add_option("config", config_path, "scenario config JSON")->required();
    sim->add_option("--out", out_dir, "output directory");

    CLI::App* prof = app.add_subcommand("profile", "run a scenario and analyze its profile");
    prof->add_option("config", config_path, "scenario config JSON")->required();
    prof->add_option("--out", out_dir, "output directory");

    CLI::App* fig2 = app.add_subcommand("figure2", "mushy-region sweep over (s, P2)");
    fig2->add_option("--s", s_list, "fractional orders");
    fig2->add_option("--p2", p2_list, "ice depths P2");
    fig2->add_option("--dx", dx2, "grid spacing");
    fig2->add_option("--out", out_dir, "output directory");

    CLI::App* fig4 = app.add_subcommand("figure4", "finite vs infinite speed fronts");
    fig4->add_option("--dx", dx4, "grid spacing");
    fig4->add_option("--out", out_dir, "output directory");

    CLI::App* fig5 = app.add_subcommand("figure5", "expanding/contracting water region");
    fig5->add_option("--dx", dx5, "grid spacing");
    fig5->add_option("--out", out_dir, "output directory");

    CLI::App* conv = app.add_subcommand("converge", "refinement study from a ladder config");
    conv->add_option("ladder", ladder_path, "ladder config JSON")->required();
    conv->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return do_simulate(config_path, out_dir);
        if (prof->parsed()) return do_profile(config_path, out_dir);
        if (fig2->parsed()) return do_figure2(s_list, p2_list, dx2, out_dir);
        if (fig4->parsed()) return do_figure4(dx4, out_dir);
        if (fig5->parsed()) return do_figure5(dx5, out_dir);
        if (conv->parsed()) return do_converge(ladder_path, out_dir);
    } catch (const stefan::config_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const stefan::stability_error& e) {
        std::fprintf(stderr, "runtime invariant violated: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
