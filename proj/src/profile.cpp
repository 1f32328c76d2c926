#include "stefan/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stefan/errors.hpp"

namespace stefan {

namespace {

void check_profile_invariants(const Profile& p) {
    const double span = std::abs(p.b1 - p.b2);
    const double tol = 1e-9 * std::max(span, 1.0);
    const double lo = std::min(p.b1, p.b2) - tol, hi = std::max(p.b1, p.b2) + tol;
    const double dir = p.b1 >= p.b2 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < p.H.size(); ++i) {
        if (p.H[i] < lo || p.H[i] > hi)
            throw stability_error("profile exits the [min(b),max(b)] band");
        if (i > 0 && dir * (p.H[i] - p.H[i - 1]) > tol)
            throw stability_error("profile violates monotonicity");
    }
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

// Trapezoid integral of f over [0, r] given nodal samples on the xi grid,
// walking outward from xi = 0 with interpolated endpoints.
double trapezoid_to(const Profile& p, const std::vector<double>& f, double lo, double hi) {
    // generic [lo,hi] within the grid
    const double d = p.dxi;
    const double x0 = p.xi.front();
    auto value_at = [&](double x) {
        const double u = (x - x0) / d;
        const int b = std::clamp(static_cast<int>(std::floor(u)), 0,
                                 static_cast<int>(f.size()) - 2);
        const double w = u - b;
        return (1.0 - w) * f[b] + w * f[b + 1];
    };
    if (lo < p.xi.front() - 1e-12 || hi > p.xi.back() + 1e-12)
        throw std::invalid_argument("mass_transfer: radius beyond the window");
    double acc = 0.0;
    const int first = static_cast<int>(std::ceil((lo - x0) / d - 1e-12));
    const int last = static_cast<int>(std::floor((hi - x0) / d + 1e-12));
    if (first > last) return 0.5 * (value_at(lo) + value_at(hi)) * (hi - lo);
    // partial cells at both ends
    acc += 0.5 * (value_at(lo) + f[first]) * (p.xi[first] - lo);
    for (int b = first; b < last; ++b) acc += 0.5 * (f[b] + f[b + 1]) * d;
    acc += 0.5 * (f[last] + value_at(hi)) * (hi - p.xi[last]);
    return acc;
}

}  // namespace

Profile extract_profile(const SnapshotSeries& series, double s, double t_ref) {
    if (!series.riemann_data)
        throw std::invalid_argument("extract_profile: series does not come from Riemann data");
    const Field& f = series.at_time(t_ref);
    const double actual_t = series.times[static_cast<std::size_t>(series.index_of_time(t_ref))];
    const double scale = std::pow(actual_t, -1.0 / (2.0 * s));

    Profile p;
    p.s = s;
    p.t_ref = actual_t;
    p.dx = f.grid.dx;
    p.dxi = f.grid.dx * scale;
    p.b1 = f.farfield.left;
    p.b2 = f.farfield.right;
    p.latent_heat = series.graph.latent_heat;
    p.u_left = series.graph.temperature(p.b1);
    p.u_right = series.graph.temperature(p.b2);
    p.xi.resize(f.values.size());
    p.H = f.values;
    p.U.resize(f.values.size());
    // xi centered on the jump, so translated data analyze the same way
    for (std::size_t b = 0; b < f.values.size(); ++b) {
        p.xi[b] = (f.grid.node(static_cast<int>(b)) - series.jump) * scale;
        p.U[b] = series.graph.temperature(p.H[b]);
    }
    check_profile_invariants(p);
    return p;
}

double collapse_error(const SnapshotSeries& series, double s, double t1, double t2, double k_lo,
                      double k_hi) {
    const Profile a = extract_profile(series, s, std::min(t1, t2));
    const Profile b = extract_profile(series, s, std::max(t1, t2));
    auto interp_b = [&](double xi) {
        if (xi <= b.xi.front()) return b.H.front();
        if (xi >= b.xi.back()) return b.H.back();
        const double u = (xi - b.xi.front()) / b.dxi;
        const int i = std::min(static_cast<int>(u), static_cast<int>(b.H.size()) - 2);
        const double w = u - i;
        return (1.0 - w) * b.H[i] + w * b.H[i + 1];
    };
    double acc = 0.0;
    int hits = 0;
    for (std::size_t i = 0; i < a.xi.size(); ++i) {
        if (a.xi[i] < k_lo || a.xi[i] > k_hi) continue;
        acc += std::abs(a.H[i] - interp_b(a.xi[i]));
        ++hits;
    }
    if (hits == 0) throw std::invalid_argument("collapse_error: K misses the xi window");
    return acc * a.dxi;
}

double default_tol_u(const Profile& p) {
    double m = 0.0;
    for (double u : p.U) m = std::max(m, std::abs(u));
    return std::max(1e-10, 1e-6 * m);
}

InterfaceReport detect_interfaces(const Profile& p, double latent_heat, double tol_u) {
    const int n = static_cast<int>(p.U.size());
    InterfaceReport rep;
    rep.tol_u = tol_u;
    rep.dx = p.dx;

    int last_water = -1;
    for (int i = 0; i < n; ++i)
        if (p.U[i] > tol_u) last_water = i;
    if (last_water < 0)
        throw no_crossing_error("detect_interfaces: no water phase inside the window");
    if (last_water == n - 1)
        throw no_crossing_error("detect_interfaces: water reaches the window edge");
    {
        const double hj = p.H[last_water], hj1 = p.H[last_water + 1];
        const double t = hj == hj1 ? 0.0 : std::clamp((hj - latent_heat) / (hj - hj1), 0.0, 1.0);
        rep.xi_water = p.xi[last_water] + t * p.dxi;
    }

    const bool ice_expected = p.u_right < -tol_u;
    if (!ice_expected) {
        rep.xi_ice = rep.xi_water;
        rep.coincident = true;
        rep.mushy_width = 0.0;
        return rep;
    }
    int first_ice = -1;
    for (int i = 0; i < n; ++i)
        if (p.U[i] < -tol_u) {
            first_ice = i;
            break;
        }
    if (first_ice <= 0) throw no_crossing_error("detect_interfaces: no ice crossing in window");
    {
        const double hm1 = p.H[first_ice - 1], hm = p.H[first_ice];
        const double t = hm1 == hm ? 0.0 : std::clamp(hm1 / (hm1 - hm), 0.0, 1.0);
        rep.xi_ice = p.xi[first_ice - 1] + t * p.dxi;
    }
    rep.mushy_width = std::max(0.0, rep.xi_ice - rep.xi_water);
    return rep;
}

double fit_tail_exponent(const Profile& p, double level, double xi_lo, double xi_hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < p.xi.size(); ++i) {
        if (p.xi[i] < xi_lo || p.xi[i] > xi_hi) continue;
        if (p.xi[i] <= 0.0) throw std::invalid_argument("fit_tail_exponent: window must be in xi > 0");
        const double v = p.H[i] - level;
        if (!(v > 0.0))
            throw std::invalid_argument("fit_tail_exponent: H - level not positive in window");
        lx.push_back(std::log(p.xi[i]));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 8) throw std::invalid_argument("fit_tail_exponent: fewer than 8 points");
    return ols_slope(lx, ly);
}

double fit_boundary_exponent(const Profile& p, double xi0, double xi_lo, double xi_hi) {
    if (xi_hi > xi0 - 3.0 * p.dxi)
        throw std::invalid_argument(
            "fit_boundary_exponent: window must stop 3 nodes short of xi0");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < p.xi.size(); ++i) {
        if (p.xi[i] < xi_lo || p.xi[i] > xi_hi) continue;
        const double v = p.H[i] - p.latent_heat;
        if (!(v > 0.0))
            throw std::invalid_argument("fit_boundary_exponent: H - L not positive in window");
        lx.push_back(std::log(xi0 - p.xi[i]));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 8) throw std::invalid_argument("fit_boundary_exponent: fewer than 8 points");
    return ols_slope(lx, ly);
}

MassTransferReport mass_transfer(const Profile& p, double b1, double b2,
                                 const std::vector<double>& radii) {
    MassTransferReport rep;
    rep.radii = radii;
    std::vector<double> fminus(p.H.size()), fplus(p.H.size());
    for (std::size_t i = 0; i < p.H.size(); ++i) {
        fminus[i] = b1 - p.H[i];
        fplus[i] = p.H[i] - b2;
    }
    for (double r : radii) {
        if (!(r > 0.0)) throw std::invalid_argument("mass_transfer: radii must be positive");
        rep.I_minus.push_back(trapezoid_to(p, fminus, -r, 0.0));
        rep.I_plus.push_back(trapezoid_to(p, fplus, 0.0, r));
    }
    for (std::size_t k = 0; k + 1 < radii.size(); ++k)
        rep.increments.push_back(rep.I_minus[k + 1] + rep.I_plus[k + 1] - rep.I_minus[k] -
                                 rep.I_plus[k]);
    if (rep.increments.size() >= 2) {
        const double first = rep.increments.front(), last = rep.increments.back();
        bool nondecreasing = true;
        for (std::size_t k = 0; k + 1 < rep.increments.size(); ++k)
            if (rep.increments[k + 1] < 0.8 * rep.increments[k]) nondecreasing = false;
        if (first > 0.0 && last / first < 0.1)
            rep.cls = MassTransfer::convergent;
        else if (nondecreasing)
            rep.cls = MassTransfer::divergent;
    }
    return rep;
}

double sss_residual(const Profile& p, const Stencil& st) {
    if (std::abs(st.dx - p.dxi) > 1e-12 * std::max(1.0, p.dxi))
        throw std::invalid_argument("sss_residual: stencil spacing != profile spacing");
    const int n = static_cast<int>(p.U.size());
    const std::vector<double> lu = apply(st, p.U, p.u_left, p.u_right);

    double xi_w = 0.0, xi_i = 0.0;
    bool have_interfaces = false;
    try {
        const InterfaceReport rep = detect_interfaces(p, p.latent_heat, default_tol_u(p));
        xi_w = rep.xi_water;
        xi_i = rep.xi_ice;
        have_interfaces = true;
    } catch (const no_crossing_error&) {
    }

    const double guard = 5.0 * p.dxi;
    // the outer quarter of the window per side is truncation-polluted
    const double span = p.xi.back() - p.xi.front();
    const double lo_edge = p.xi.front() + 0.25 * span;
    const double hi_edge = p.xi.back() - 0.25 * span;
    double acc = 0.0;
    int hits = 0;
    for (int b = 5; b < n - 5; ++b) {
        if (p.xi[b] < lo_edge || p.xi[b] > hi_edge) continue;
        if (have_interfaces &&
            (std::abs(p.xi[b] - xi_w) <= guard || std::abs(p.xi[b] - xi_i) <= guard))
            continue;
        const double h_prev = b > 0 ? p.H[b - 1] : p.b1;
        const double h_next = b < n - 1 ? p.H[b + 1] : p.b2;
        const double dh = (h_next - h_prev) / (2.0 * p.dxi);
        acc += std::abs(-p.xi[b] * dh / (2.0 * p.s) + lu[b]);
        ++hits;
    }
    return hits > 0 ? acc / hits : 0.0;
}

namespace {

void require_symmetric_grid(const Profile& p) {
    const int n = static_cast<int>(p.xi.size());
    if (std::abs(p.xi.front() + p.xi.back()) > 1e-9 * std::max(1.0, std::abs(p.xi.back())))
        throw std::invalid_argument("antisymmetry_defect: xi-grid is not symmetric about 0");
    (void)n;
}

}  // namespace

double antisymmetry_defect(const Profile& p, double) {
    require_symmetric_grid(p);
    const int n = static_cast<int>(p.U.size());
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(p.U[i] + p.U[n - 1 - i]));
    return m;
}

double enthalpy_antisymmetry_defect(const Profile& p, double latent_heat) {
    require_symmetric_grid(p);
    const int n = static_cast<int>(p.H.size());
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(p.H[i] + p.H[n - 1 - i] - latent_heat));
    return m;
}

const char* to_string(MassTransfer cls) {
    switch (cls) {
        case MassTransfer::convergent: return "CONVERGENT";
        case MassTransfer::divergent: return "DIVERGENT";
        case MassTransfer::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

}  // namespace stefan
