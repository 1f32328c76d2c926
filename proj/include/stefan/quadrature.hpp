#pragma once
#include <algorithm>
#include <vector>

namespace stefan {

// Gauss-Legendre rule on [-1,1]; nodes/weights cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

// Single n-point Gauss panel over [a,b].
template <class F>
double gl_panel(F&& f, double a, double b, int order = 16) {
    const GaussRule& r = gauss_legendre(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        acc += r.weights[i] * f(mid + half * r.nodes[i]);
    return acc * half;
}

// [a,b] split into equal panels.
template <class F>
double gl_composite(F&& f, double a, double b, int panels, int order = 16) {
    double acc = 0.0;
    const double w = (b - a) / panels;
    for (int k = 0; k < panels; ++k)
        acc += gl_panel(f, a + k * w, a + (k + 1) * w, order);
    return acc;
}

// Dyadic panels [a,2a],[2a,4a],... clipped at b. Suits kernels that are
// smooth on each octave but steep globally.
template <class F>
double gl_dyadic(F&& f, double a, double b, int order = 24) {
    double acc = 0.0, lo = a;
    while (lo < b) {
        const double hi = std::min(2.0 * lo, b);
        acc += gl_panel(f, lo, hi, order);
        lo = hi;
    }
    return acc;
}

}  // namespace stefan
