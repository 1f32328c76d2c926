#pragma once
#include <vector>

#include "stefan/stepper.hpp"

namespace stefan {

// Selfsimilar profile H(xi) pulled out of a Riemann run at a reference time,
// with xi = x * t_ref^{-1/(2s)} and U = Phi(H). For the local Laplacian the
// scaling order is s = 1 (classical xi = x / sqrt(t)).
struct Profile {
    std::vector<double> xi;
    std::vector<double> H;
    std::vector<double> U;
    double s = 0.5;
    double t_ref = 1.0;
    double dxi = 0.0;
    double b1 = 0.0, b2 = 0.0;       // far-field enthalpy limits
    double u_left = 0.0, u_right = 0.0;
    double latent_heat = 1.0;
    double dx = 0.0;                 // grid spacing of the source run
};

Profile extract_profile(const SnapshotSeries& series, double s, double t_ref);

// L1(K) distance between the rescaled profiles at two times, the later one
// re-interpolated linearly onto the xi-grid of the earlier.
double collapse_error(const SnapshotSeries& series, double s, double t1, double t2, double k_lo,
                      double k_hi);

struct InterfaceReport {
    double xi_water = 0.0;  // level-L crossing of H from above
    double xi_ice = 0.0;    // level-0 crossing into the ice
    double mushy_width = 0.0;
    double tol_u = 0.0;
    double dx = 0.0;
    bool coincident = false;  // one-phase data: both interfaces at the level-L crossing
};

double default_tol_u(const Profile& p);  // max(1e-10, 1e-6 * max|U|)

// Crossing abscissae by linear interpolation between the bracketing nodes,
// using U > tol_u (water) and U < -tol_u (ice) as phase predicates. Throws
// no_crossing_error when a requested level never shows inside the window.
InterfaceReport detect_interfaces(const Profile& p, double latent_heat, double tol_u);

// Least-squares slope of log(H - level) against log(xi) over xi in [lo, hi].
// Needs at least 8 usable points and strictly positive values of H - level.
double fit_tail_exponent(const Profile& p, double level, double xi_lo, double xi_hi);

// Log-log slope of (H - L) against (xi0 - xi) on the water side; the window
// must stop at least 3 nodes short of xi0.
double fit_boundary_exponent(const Profile& p, double xi0, double xi_lo, double xi_hi);

enum class MassTransfer { convergent, divergent, inconclusive };

struct MassTransferReport {
    std::vector<double> radii;
    std::vector<double> I_minus;  // int_{-R}^0 (b1 - H)
    std::vector<double> I_plus;   // int_0^R  (H - b2)
    std::vector<double> increments;
    MassTransfer cls = MassTransfer::inconclusive;
};

// Truncated-integral dichotomy: CONVERGENT when the last two-sided increment
// drops below 0.1 of the first, DIVERGENT when increments never decay by more
// than 20%.
MassTransferReport mass_transfer(const Profile& p, double b1, double b2,
                                 const std::vector<double>& radii);

// Mean |residual| of the stationary profile equation
//   -(1/2s) xi dH/dxi + L^{dx} Phi(H)
// with centered differences, 5 nodes away from each interface and skipping
// the truncation-polluted outer quarter of the window per side. Stencil
// spacing must equal the profile spacing.
double sss_residual(const Profile& p, const Stencil& st);

// max over paired nodes of |U(xi) + U(-xi)|; requires a symmetric xi-grid.
double antisymmetry_defect(const Profile& p, double latent_heat);

// Same pairing for the enthalpy: max |H(xi) + H(-xi) - L|.
double enthalpy_antisymmetry_defect(const Profile& p, double latent_heat);

const char* to_string(MassTransfer cls);

}  // namespace stefan
