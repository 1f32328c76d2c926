#include "stefan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stefan/quadrature.hpp"

namespace stefan {

namespace {

// Composite Gauss over [lo,hi] with panels sized to resolve both the
// integrand scale and an oscillation of frequency `freq`.
template <class G>
double osc_panel(G&& g, double lo, double hi, double freq, int mult) {
    const double width = hi - lo;
    const int sub =
        mult * std::max({1, static_cast<int>(std::ceil(freq * width / 3.0)),
                         static_cast<int>(std::ceil(width / 4.0))});
    return gl_composite(g, lo, hi, sub, 24);
}

// Integrals int_0^rho_max g with g smooth except for a rho^{2s}-type branch
// point at 0 (handled by graded dyadic panels) and cos/sin oscillation of
// frequency `freq`. g0 is the limit of g at 0.
template <class G>
double singular_osc_integral(G&& g, double g0, double rho_max, double freq, int mult) {
    const double eps = 1e-14;
    double acc = g0 * eps;
    double lo = eps;
    const double graded_top = std::min(1.0, rho_max);
    while (lo < graded_top) {
        const double hi = std::min(2.0 * lo, graded_top);
        acc += osc_panel(g, lo, hi, freq, mult);
        lo = hi;
    }
    if (rho_max > 1.0) acc += osc_panel(g, 1.0, rho_max, freq, mult);
    return acc;
}

// Panel count doubled until two successive values agree to 1e-10.
template <class G>
double adaptive_singular_osc(G&& g, double g0, double rho_max, double freq) {
    double prev = singular_osc_integral(g, g0, rho_max, freq, 1);
    for (int mult = 2; mult <= 64; mult *= 2) {
        const double cur = singular_osc_integral(g, g0, rho_max, freq, mult);
        if (std::abs(cur - prev) <= 1e-10 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

double rho_cutoff(double s, double t) {
    // exp(-t rho^{2s}) below 1e-14 past the cutoff
    return std::pow(14.0 * std::log(10.0) / t, 1.0 / (2.0 * s));
}

}  // namespace

double heat_kernel(const HeatKernelSpec& spec, double x, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_kernel: need t > 0");
    if (!(spec.s > 0.0 && spec.s < 1.0))
        throw std::invalid_argument("heat_kernel: need s in (0,1)");
    if (spec.s == 0.5 && !spec.force_quadrature) return t / (M_PI * (t * t + x * x));
    const double s = spec.s;
    const auto g = [&](double rho) {
        return std::exp(-t * std::pow(rho, 2.0 * s)) * std::cos(x * rho);
    };
    return adaptive_singular_osc(g, 1.0, rho_cutoff(s, t), std::abs(x)) / M_PI;
}

double heat_kernel(double s, double x, double t) { return heat_kernel({s, false}, x, t); }

double heat_kernel_cdf(double s, double a, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_cdf: need t > 0");
    if (a == 0.0) return 0.0;
    if (a < 0.0) return -heat_kernel_cdf(s, -a, t);
    if (s == 0.5) return std::atan(a / t) / M_PI;
    const auto g = [&](double rho) {
        return std::exp(-t * std::pow(rho, 2.0 * s)) * std::sin(a * rho) / rho;
    };
    return adaptive_singular_osc(g, a, rho_cutoff(s, t), a) / M_PI;
}

double heat_kernel_tail_mass(double s, double x_cut) {
    // int_{|x| > X} P_s(x,1) dx from the large-x expansion
    //   P_s(x,1) = (1/pi) sum_k (-1)^{k+1} Gamma(2sk+1) sin(pi s k) x^{-2sk-1} / k!,
    // summed until terms stop decreasing (asymptotic regime) or fade out.
    double acc = 0.0;
    double prev_mag = HUGE_VAL;
    double factorial = 1.0;
    for (int k = 1; k <= 24; ++k) {
        factorial *= k;
        const double sine = std::sin(M_PI * s * k);
        if (std::abs(sine) < 1e-12) continue;  // exact zero of the expansion
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        const double term = sign * std::tgamma(2.0 * s * k + 1.0) * sine *
                            std::pow(x_cut, -2.0 * s * k) / (factorial * s * k);
        const double mag = std::abs(term);
        if (mag > prev_mag) break;
        acc += term;
        if (mag < 1e-16 * std::max(1.0, std::abs(acc))) break;
        prev_mag = mag;
    }
    return acc / M_PI;
}

double antisym_exact_u(double P, double s, double x, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("antisym_exact_u: need t > 0");
    if (s == 0.5) return (2.0 * P / M_PI) * std::atan(-x / t);
    const double xi = x / std::pow(t, 1.0 / (2.0 * s));
    const double mass = 2.0 * heat_kernel_cdf(s, std::abs(xi), 1.0);
    return (x <= 0.0 ? P : -P) * mass;
}

double antisym_origin_slope(double P, double s) { return 2.0 * P * heat_kernel(s, 0.0, 1.0); }

SpaceTimeTestFn gaussian_space_time_test(double sigma, double t_end) {
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    SpaceTimeTestFn psi;
    psi.value = [inv2s2, t_end](double x, double t) {
        const double q = 1.0 - t / t_end;
        return std::exp(-x * x * inv2s2) * q * q;
    };
    psi.dt = [inv2s2, t_end](double x, double t) {
        const double q = 1.0 - t / t_end;
        return std::exp(-x * x * inv2s2) * (-2.0 * q / t_end);
    };
    psi.support_radius = 9.0 * sigma;
    psi.t_end = t_end;
    return psi;
}

double weak_residual(const SnapshotSeries& series, const StefanGraph& graph,
                     const SpaceTimeTestFn& psi, const Stencil& st) {
    if (series.fields.empty()) throw std::invalid_argument("weak_residual: empty series");
    const Grid1D& grid = series.fields.front().grid;
    if (psi.support_radius >= std::min(-grid.x_min, grid.x_max()))
        throw std::invalid_argument("weak_residual: psi support touches the window edge");
    if (std::abs(series.times.front()) > 1e-12)
        throw std::invalid_argument("weak_residual: series must start at t = 0");

    const int n = grid.n;
    std::vector<double> psi_samples(static_cast<std::size_t>(n));
    std::vector<double> lpsi(static_cast<std::size_t>(n));

    const auto space_term = [&](std::size_t j) {
        const Field& f = series.fields[j];
        const double t = series.times[j];
        for (int b = 0; b < n; ++b) psi_samples[b] = psi.value(grid.node(b), t);
        apply_into(st, psi_samples, 0.0, 0.0, lpsi);
        double acc = 0.0;
        for (int b = 0; b < n; ++b) {
            const double x = grid.node(b);
            acc += f.values[b] * psi.dt(x, t) - graph.temperature(f.values[b]) * lpsi[b];
        }
        return grid.dx * acc;
    };

    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < series.times.size(); ++j) {
        const double w = 0.5 * (series.times[j + 1] - series.times[j]);
        acc += w * (space_term(j) + space_term(j + 1));
    }

    const Field& h0 = series.fields.front();
    double init = 0.0;
    for (int b = 0; b < n; ++b) init += h0.values[b] * psi.value(grid.node(b), 0.0);
    return acc + grid.dx * init;
}

}  // namespace stefan
