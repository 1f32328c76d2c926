#include "stefan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stefan/quadrature.hpp"

namespace stefan {

void Grid1D::validate() const {
    if (!(dx > 0.0)) throw std::invalid_argument("Grid1D: dx must be > 0");
    if (n < 3) throw std::invalid_argument("Grid1D: need at least 3 nodes");
    if (!std::isfinite(x_min)) throw std::invalid_argument("Grid1D: x_min must be finite");
}

Grid1D Grid1D::cover(double lo, double hi, double dx) {
    if (!(hi > lo)) throw std::invalid_argument("Grid1D::cover: empty window");
    const int cells = static_cast<int>(std::llround((hi - lo) / dx));
    Grid1D g{lo + 0.5 * dx, dx, cells};
    g.validate();
    return g;
}

bool same_grid(const Grid1D& a, const Grid1D& b, double tol) {
    return a.n == b.n && std::abs(a.dx - b.dx) <= tol && std::abs(a.x_min - b.x_min) <= tol;
}

double Field::interp(double x) const {
    if (x <= grid.x_min) return x <= farfield.split ? farfield.left : values.front();
    if (x >= grid.x_max()) return x > farfield.split ? farfield.right : values.back();
    const double u = (x - grid.x_min) / grid.dx;
    const int b = std::min(static_cast<int>(u), grid.n - 2);
    const double w = u - b;
    return (1.0 - w) * values[b] + w * values[b + 1];
}

void Field::validate() const {
    grid.validate();
    if (static_cast<int>(values.size()) != grid.n)
        throw std::invalid_argument("Field: value count does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("Field: non-finite value");
    if (!std::isfinite(farfield.left) || !std::isfinite(farfield.right))
        throw std::invalid_argument("Field: non-finite far field");
}

Field constant_field(const Grid1D& grid, double value, const FarField& ff) {
    Field f{grid, std::vector<double>(static_cast<std::size_t>(grid.n), value), ff};
    f.validate();
    return f;
}

InitialDatum InitialDatum::riemann_step(double b1, double b2, double jump) {
    InitialDatum d;
    d.type = Type::riemann;
    d.b1 = b1;
    d.b2 = b2;
    d.jump = jump;
    return d;
}

InitialDatum InitialDatum::constant(double v) {
    InitialDatum d;
    d.type = Type::constant;
    d.value = v;
    return d;
}

InitialDatum InitialDatum::bump_cos(double amplitude, double offset, double radius,
                                    double background) {
    InitialDatum d;
    d.type = Type::bump_cos;
    d.amplitude = amplitude;
    d.offset = offset;
    d.radius = radius;
    d.background = background;
    return d;
}

InitialDatum InitialDatum::box(double height, double radius, double background) {
    InitialDatum d;
    d.type = Type::box;
    d.amplitude = height;
    d.radius = radius;
    d.background = background;
    return d;
}

InitialDatum InitialDatum::terrace(double height, double radius, double collar,
                                   double collar_radius, double background) {
    InitialDatum d;
    d.type = Type::terrace;
    d.amplitude = height;
    d.radius = radius;
    d.collar = collar;
    d.collar_radius = collar_radius;
    d.background = background;
    return d;
}

InitialDatum InitialDatum::tabulated(std::vector<double> values) {
    InitialDatum d;
    d.type = Type::tabulated;
    d.table = std::move(values);
    return d;
}

double InitialDatum::eval(double x) const {
    switch (type) {
        case Type::riemann: return x <= jump ? b1 : b2;
        case Type::constant: return value;
        case Type::bump_cos:
            return std::abs(x) < radius ? amplitude * (std::cos(x) + offset) : background;
        case Type::box: return std::abs(x) < radius ? amplitude : background;
        case Type::terrace:
            if (std::abs(x) < radius) return amplitude;
            return std::abs(x) < collar_radius ? collar : background;
        case Type::tabulated:
            throw std::logic_error("InitialDatum: tabulated data has no closed form");
    }
    return 0.0;
}

std::vector<double> InitialDatum::breakpoints() const {
    switch (type) {
        case Type::riemann: return {jump};
        case Type::bump_cos:
        case Type::box: return {-radius, radius};
        case Type::terrace: return {-collar_radius, -radius, radius, collar_radius};
        default: return {};
    }
}

bool InitialDatum::is_continuous() const {
    switch (type) {
        case Type::riemann: return b1 == b2;
        case Type::constant: return true;
        case Type::bump_cos:
            return std::abs(amplitude * (std::cos(radius) + offset) - background) == 0.0;
        case Type::box: return amplitude == background;
        case Type::terrace: return amplitude == collar && collar == background;
        case Type::tabulated: return true;
    }
    return true;
}

FarField InitialDatum::natural_farfield() const {
    switch (type) {
        case Type::riemann: return {b1, b2, jump};
        case Type::constant: return {value, value, 0.0};
        case Type::bump_cos:
        case Type::box:
        case Type::terrace: return {background, background, 0.0};
        case Type::tabulated: return {};
    }
    return {};
}

namespace {

bool piecewise_constant(const InitialDatum& d) {
    switch (d.type) {
        case InitialDatum::Type::riemann:
        case InitialDatum::Type::constant:
        case InitialDatum::Type::box:
        case InitialDatum::Type::terrace: return true;
        default: return false;
    }
}

// Average of the datum over one cell, integrating each smooth piece. Pieces
// of piecewise-constant data contribute exactly, so constant regions sample
// bit-exactly to their level.
double cell_average(const InitialDatum& d, double lo, double hi,
                    const std::vector<double>& breaks) {
    std::vector<double> cuts{lo};
    for (double b : breaks)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    if (piecewise_constant(d)) {
        if (cuts.size() == 2) return d.eval(0.5 * (lo + hi));
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            acc += d.eval(0.5 * (cuts[k] + cuts[k + 1])) * (cuts[k + 1] - cuts[k]);
        return acc / (hi - lo);
    }
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        acc += gl_panel([&](double x) { return d.eval(x); }, cuts[k], cuts[k + 1], 16);
    return acc / (hi - lo);
}

void check_support_fits(const Grid1D& grid, const InitialDatum& d, const FarField& ff) {
    const double lo = grid.x_min - 0.5 * grid.dx;
    const double hi = grid.x_max() + 0.5 * grid.dx;
    auto mismatch = [](double a, double b) { return std::abs(a - b) > 0.0; };
    switch (d.type) {
        case InitialDatum::Type::riemann:
            if (d.jump < lo || d.jump > hi)
                throw std::invalid_argument("sample_initial: riemann jump outside window");
            if (mismatch(d.b1, ff.left) || mismatch(d.b2, ff.right))
                throw std::invalid_argument(
                    "sample_initial: riemann levels disagree with far field");
            break;
        case InitialDatum::Type::constant:
            if (mismatch(d.value, ff.left) || mismatch(d.value, ff.right))
                throw std::invalid_argument(
                    "sample_initial: constant datum disagrees with far field");
            break;
        case InitialDatum::Type::bump_cos:
        case InitialDatum::Type::box:
        case InitialDatum::Type::terrace:
            if (std::max(d.radius, d.collar_radius) >= std::min(-lo, hi))
                throw std::invalid_argument("sample_initial: datum support exceeds the window");
            if (mismatch(d.background, ff.left) || mismatch(d.background, ff.right))
                throw std::invalid_argument(
                    "sample_initial: datum background disagrees with far field");
            break;
        case InitialDatum::Type::tabulated: break;
    }
}

}  // namespace

Field sample_initial(const Grid1D& grid, const InitialDatum& datum, const FarField& farfield,
                     SamplingRule rule) {
    grid.validate();
    check_support_fits(grid, datum, farfield);

    Field f{grid, std::vector<double>(static_cast<std::size_t>(grid.n)), farfield};
    if (datum.type == InitialDatum::Type::tabulated) {
        if (static_cast<int>(datum.table.size()) != grid.n)
            throw std::invalid_argument("sample_initial: tabulated size mismatch");
        f.values = datum.table;
        f.validate();
        return f;
    }
    if (rule == SamplingRule::pointwise) {
        for (int b = 0; b < grid.n; ++b) f.values[b] = datum.eval(grid.node(b));
        f.validate();
        return f;
    }
    const std::vector<double> breaks = datum.breakpoints();
    for (int b = 0; b < grid.n; ++b) {
        const double x = grid.node(b);
        f.values[b] = cell_average(datum, x - 0.5 * grid.dx, x + 0.5 * grid.dx, breaks);
    }
    f.validate();
    return f;
}

double l1_local_distance(const Field& a, const Field& b, double k_lo, double k_hi) {
    if (!same_grid(a.grid, b.grid))
        throw std::invalid_argument("l1_local_distance: fields live on different grids");
    double acc = 0.0;
    int hits = 0;
    for (int i = 0; i < a.grid.n; ++i) {
        const double x = a.grid.node(i);
        if (x < k_lo || x > k_hi) continue;
        acc += std::abs(a.values[i] - b.values[i]);
        ++hits;
    }
    if (hits == 0) throw std::invalid_argument("l1_local_distance: K misses the window");
    return a.grid.dx * acc;
}

double excess_mass(const Field& f, const FarField& reference) {
    double acc = 0.0;
    for (int b = 0; b < f.grid.n; ++b) acc += f.values[b] - reference.at(f.grid.node(b));
    return f.grid.dx * acc;
}

}  // namespace stefan
