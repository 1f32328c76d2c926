#pragma once
#include <functional>
#include <span>
#include <vector>

#include "stefan/grid.hpp"

namespace stefan {

// Singular-integral normalization of (-Delta)^s in one dimension,
// c_{1,s} = 4^s Gamma(1/2+s) s / (sqrt(pi) Gamma(1-s)),
// the constant for which the operator has Fourier symbol |xi|^{2s}.
double kernel_constant(double s);

// Monotone finite-difference discretization of (-Delta)^s (or of -Delta for
// the local variant). Weights are cell integrals of the kernel; the cell
// around the singularity is folded into omega_1 as a second-difference
// correction; the mass beyond the truncation radius is kept analytically in
// tail_coeff so constant far fields are handled exactly.
struct Stencil {
    enum class Kind { fractional, local };
    Kind kind = Kind::fractional;
    double s = 0.5;  // 1.0 for the local Laplacian (classical scaling)
    double dx = 1.0;
    int r_cut = 0;
    std::vector<double> omega;  // omega[g-1] for offsets g = 1..r_cut
    double tail_coeff = 0.0;    // per-side weight of the |z| > (r_cut+1/2)dx mass
    double c1s = 0.0;
    double row_sum = 0.0;  // sum_g 2*omega_g + 2*tail_coeff; scales like dx^{-2s}

    double scaling_exponent() const { return 1.0 / (2.0 * s); }
};

// Weights for s in (0,1); requires r_cut >= 2. All weights come out
// nonnegative, which is asserted at build time.
Stencil build_stencil(double s, double dx, int r_cut);

// Standard 3-point discretization of -Delta with constant far-field reads.
Stencil build_local_stencil(double dx);

// Discrete operator on nodal values w with constant extension: off-window and
// beyond-truncation reads use phi_left / phi_right. Per node the sum runs in
// fixed order g = 1..r_cut, then the two tail terms, so output is
// reproducible bit for bit.
void apply_into(const Stencil& st, std::span<const double> w, double phi_left, double phi_right,
                std::span<double> out);
std::vector<double> apply(const Stencil& st, std::span<const double> w, double phi_left,
                          double phi_right);

// Closed-form test function with analytic second derivative; numerically
// compactly supported within |x| <= support_radius.
struct TestFunction1D {
    std::function<double(double)> f;
    std::function<double(double)> f_dd;
    double support_radius = 1.0;
};

TestFunction1D gaussian_test_function();

// Quadrature reference for (-Delta)^s f at a point: symmetrized principal
// value with a Taylor head near the singularity and dyadic Gauss panels.
// Independent of the stencil path; used as the consistency oracle.
double pv_frac_laplacian(const TestFunction1D& fn, double s, double x);

// Discrete L1(grid) distance between the stencil applied to f-samples and the
// pointwise quadrature reference (or -f'' for the local stencil).
double consistency_error(const Stencil& st, const TestFunction1D& fn, const Grid1D& grid);

}  // namespace stefan
