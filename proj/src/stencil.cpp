#include "stefan/stencil.hpp"

#include <cmath>
#include <stdexcept>

#include "stefan/quadrature.hpp"

namespace stefan {

double kernel_constant(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("kernel_constant: need s in (0,1)");
    return std::pow(4.0, s) * std::tgamma(0.5 + s) * s /
           (std::sqrt(M_PI) * std::tgamma(1.0 - s));
}

Stencil build_stencil(double s, double dx, int r_cut) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("build_stencil: need s in (0,1)");
    if (!(dx > 0.0)) throw std::invalid_argument("build_stencil: need dx > 0");
    if (r_cut < 2) throw std::invalid_argument("build_stencil: need r_cut >= 2");

    Stencil st;
    st.kind = Stencil::Kind::fractional;
    st.s = s;
    st.dx = dx;
    st.r_cut = r_cut;
    st.c1s = kernel_constant(s);

    // integral of z^{-1-2s} over [a,b]
    const auto kernel_mass = [s](double a, double b) {
        return (std::pow(a, -2.0 * s) - std::pow(b, -2.0 * s)) / (2.0 * s);
    };

    st.omega.resize(static_cast<std::size_t>(r_cut));
    st.omega[0] = st.c1s * (kernel_mass(0.5 * dx, 1.5 * dx) +
                            (2.0 / (2.0 - 2.0 * s)) * std::pow(0.5 * dx, 2.0 - 2.0 * s) /
                                (dx * dx));
    for (int g = 2; g <= r_cut; ++g)
        st.omega[g - 1] = st.c1s * kernel_mass((g - 0.5) * dx, (g + 0.5) * dx);

    st.tail_coeff = st.c1s / (2.0 * s) * std::pow((r_cut + 0.5) * dx, -2.0 * s);

    double acc = 0.0;
    for (double w : st.omega) {
        if (!(w >= 0.0)) throw std::logic_error("build_stencil: negative weight");
        acc += 2.0 * w;
    }
    st.row_sum = acc + 2.0 * st.tail_coeff;
    return st;
}

Stencil build_local_stencil(double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("build_local_stencil: need dx > 0");
    Stencil st;
    st.kind = Stencil::Kind::local;
    st.s = 1.0;
    st.dx = dx;
    st.r_cut = 1;
    st.omega = {1.0 / (dx * dx)};
    st.tail_coeff = 0.0;
    st.c1s = 0.0;
    st.row_sum = 2.0 / (dx * dx);
    return st;
}

void apply_into(const Stencil& st, std::span<const double> w, double phi_left, double phi_right,
                std::span<double> out) {
    const int n = static_cast<int>(w.size());
    if (static_cast<int>(out.size()) != n) throw std::invalid_argument("apply_into: size mismatch");
    const int r = st.r_cut;

    // Constant-extended copy so the inner loop is branch-free.
    std::vector<double> ext(static_cast<std::size_t>(n + 2 * r));
    for (int i = 0; i < r; ++i) ext[i] = phi_left;
    for (int i = 0; i < n; ++i) ext[r + i] = w[i];
    for (int i = 0; i < r; ++i) ext[r + n + i] = phi_right;

    const double* om = st.omega.data();
    for (int b = 0; b < n; ++b) {
        const double* c = ext.data() + r + b;
        const double wb = w[b];
        double acc = 0.0;
        for (int g = 1; g <= r; ++g) acc += om[g - 1] * ((wb - c[-g]) + (wb - c[g]));
        acc += st.tail_coeff * (wb - phi_left);
        acc += st.tail_coeff * (wb - phi_right);
        out[b] = acc;
    }
}

std::vector<double> apply(const Stencil& st, std::span<const double> w, double phi_left,
                          double phi_right) {
    std::vector<double> out(w.size());
    apply_into(st, w, phi_left, phi_right, out);
    return out;
}

TestFunction1D gaussian_test_function() {
    // exp(-144) ~ 1e-63: numerically supported well inside |x| <= 12
    return {[](double x) { return std::exp(-x * x); },
            [](double x) { return (4.0 * x * x - 2.0) * std::exp(-x * x); }, 12.0};
}

double pv_frac_laplacian(const TestFunction1D& fn, double s, double x) {
    const double c = kernel_constant(s);
    const double head_cut = 1e-4;
    const double z_max = fn.support_radius + std::abs(x) + 10.0;

    // |z| < head_cut: second-order Taylor of the symmetrized difference.
    const double head =
        -fn.f_dd(x) * std::pow(head_cut, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    const double fx = fn.f(x);
    const auto integrand = [&](double z) {
        return (2.0 * fx - fn.f(x + z) - fn.f(x - z)) * std::pow(z, -1.0 - 2.0 * s);
    };
    const double body = gl_dyadic(integrand, head_cut, z_max, 24);
    // beyond z_max the function has no support left: only 2 f(x) survives
    const double tail = 2.0 * fx * std::pow(z_max, -2.0 * s) / (2.0 * s);
    return c * (head + body + tail);
}

double consistency_error(const Stencil& st, const TestFunction1D& fn, const Grid1D& grid) {
    grid.validate();
    if (fn.support_radius >= std::min(-grid.x_min, grid.x_max()))
        throw std::invalid_argument("consistency_error: support must sit inside the window");

    std::vector<double> samples(static_cast<std::size_t>(grid.n));
    for (int b = 0; b < grid.n; ++b) samples[b] = fn.f(grid.node(b));
    const std::vector<double> lw = apply(st, samples, 0.0, 0.0);

    double acc = 0.0;
    for (int b = 0; b < grid.n; ++b) {
        const double x = grid.node(b);
        const double ref = st.kind == Stencil::Kind::local ? -fn.f_dd(x)
                                                           : pv_frac_laplacian(fn, st.s, x);
        acc += std::abs(lw[b] - ref);
    }
    return grid.dx * acc;
}

}  // namespace stefan
