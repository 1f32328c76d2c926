#pragma once
#include <string>
#include <vector>

namespace stefan {

// Uniform 1-D grid: nodes x_b = x_min + b*dx for b = 0..n-1.
struct Grid1D {
    double x_min = 0.0;
    double dx = 1.0;
    int n = 0;

    double node(int b) const { return x_min + b * dx; }
    double x_max() const { return node(n - 1); }
    void validate() const;

    // Cell-centered cover of [lo,hi]: n = round((hi-lo)/dx) nodes at the cell
    // midpoints, so cell boundaries land on lo + k*dx. Riemann data jump at a
    // cell boundary on such grids whenever (jump - lo)/dx is an integer.
    static Grid1D cover(double lo, double hi, double dx);
};

bool same_grid(const Grid1D& a, const Grid1D& b, double tol = 1e-12);

// Constant extension values outside the window; `split` marks where the
// left/right background changes (the Riemann jump; irrelevant if left==right).
struct FarField {
    double left = 0.0;
    double right = 0.0;
    double split = 0.0;

    double at(double x) const { return x <= split ? left : right; }
};

// Nodal enthalpy values plus the far-field extension policy. Treated as
// immutable once built; the stepper produces new fields.
struct Field {
    Grid1D grid;
    std::vector<double> values;
    FarField farfield;

    // Value with constant far-field extension for out-of-window indices.
    double extended(int b) const {
        if (b < 0) return farfield.left;
        if (b >= grid.n) return farfield.right;
        return values[static_cast<std::size_t>(b)];
    }
    // Linear interpolation between nodes; far-field constants outside.
    double interp(double x) const;
    void validate() const;
};

Field constant_field(const Grid1D& grid, double value, const FarField& ff);

// Closed-form initial data. Piecewise definitions expose their breakpoints so
// the sampler can integrate each smooth piece exactly.
struct InitialDatum {
    enum class Type { riemann, constant, bump_cos, box, terrace, tabulated };
    Type type = Type::constant;

    double b1 = 0.0, b2 = 0.0, jump = 0.0;  // riemann: b1 for x<=jump, b2 after
    double value = 0.0;                     // constant
    double amplitude = 0.0;                 // bump_cos / box / terrace core height
    double offset = 0.0;                    // bump_cos: amplitude*(cos x + offset)
    double radius = 0.0;                    // support half-width, |x| < radius
    double background = 0.0;                // value outside the support
    double collar = 0.0;                    // terrace: value on radius <= |x| < collar_radius
    double collar_radius = 0.0;
    std::vector<double> table;              // tabulated nodal values

    static InitialDatum riemann_step(double b1, double b2, double jump = 0.0);
    static InitialDatum constant(double v);
    static InitialDatum bump_cos(double amplitude, double offset, double radius,
                                 double background = 0.0);
    static InitialDatum box(double height, double radius, double background);
    static InitialDatum terrace(double height, double radius, double collar,
                                double collar_radius, double background);
    static InitialDatum tabulated(std::vector<double> values);

    double eval(double x) const;
    std::vector<double> breakpoints() const;
    bool is_continuous() const;
    FarField natural_farfield() const;
};

enum class SamplingRule { cell_average, pointwise };

// Nodal initialization: cell averages over [x_b - dx/2, x_b + dx/2] by
// composite Gauss quadrature split at datum breakpoints, or the pointwise
// rule for data with pointwise values. Rejects data whose support leaks past
// the window while disagreeing with the declared far field.
Field sample_initial(const Grid1D& grid, const InitialDatum& datum, const FarField& farfield,
                     SamplingRule rule = SamplingRule::cell_average);

// dx * sum_{x_b in [k_lo,k_hi]} |a_b - b_b|; the discrete L1 distance on a
// compact set. Errors if no node lies in the interval.
double l1_local_distance(const Field& a, const Field& b, double k_lo, double k_hi);

// dx * sum_b (f_b - ff(x_b)): the conserved window mass relative to the
// piecewise-constant background.
double excess_mass(const Field& f, const FarField& reference);

}  // namespace stefan
