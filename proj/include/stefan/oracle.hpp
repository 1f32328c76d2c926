#pragma once
#include <functional>

#include "stefan/stepper.hpp"

namespace stefan {

// Fundamental solution of d_t + (-Delta)^s. Closed form (Cauchy kernel) at
// s = 1/2; otherwise the cosine transform
//   P_s(x,t) = (1/pi) int_0^inf exp(-t rho^{2s}) cos(x rho) drho
// on oscillation-resolving Gauss panels, panel density doubled until two
// successive values agree to 1e-10.
struct HeatKernelSpec {
    double s = 0.5;
    bool force_quadrature = false;  // evaluate s=1/2 by quadrature too (cross-check)
};

double heat_kernel(const HeatKernelSpec& spec, double x, double t);
double heat_kernel(double s, double x, double t);

// int_0^a P_s(z,t) dz, evaluated as a single cosine-transform integral.
double heat_kernel_cdf(double s, double a, double t);

// int_{|x| > X} P_s(x,1) dx from the alternating large-x expansion of the
// kernel, truncated at the smallest term.
double heat_kernel_tail_mass(double s, double x_cut);

// Temperature of the stationary-interface solution: step data +-P evolved by
// the fractional heat flow. At s = 1/2 this is (2P/pi) atan(-x/t).
double antisym_exact_u(double P, double s, double x, double t);

// Slope magnitude of that profile at the origin, 2 P P_s(0,1).
double antisym_origin_slope(double P, double s);

// Smooth space-time test function with closed-form time derivative,
// numerically supported in |x| <= support_radius and t in [0, t_end).
struct SpaceTimeTestFn {
    std::function<double(double, double)> value;
    std::function<double(double, double)> dt;
    double support_radius = 1.0;
    double t_end = 1.0;
};

SpaceTimeTestFn gaussian_space_time_test(double sigma, double t_end);

// Space-time trapezoid quadrature of the very-weak-solution identity
//   int int (h dpsi/dt - Phi(h) L^{dx} psi) + int h0 psi(.,0),
// using the discrete operator on psi. Consistency makes this a valid
// surrogate; it vanishes under refinement for convergent runs.
double weak_residual(const SnapshotSeries& series, const StefanGraph& graph,
                     const SpaceTimeTestFn& psi, const Stencil& st);

}  // namespace stefan
