#include "stefan/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stefan {

StefanGraph StefanGraph::one_phase(double latent_heat, double k0) {
    StefanGraph g{GraphKind::one_phase, latent_heat, k0, 1.0, 1.0};
    g.validate();
    return g;
}

StefanGraph StefanGraph::two_phase(double latent_heat, double k1, double k2) {
    StefanGraph g{GraphKind::two_phase, latent_heat, 1.0, k1, k2};
    g.validate();
    return g;
}

StefanGraph StefanGraph::two_phase_centered(double latent_heat, double k1, double k2) {
    StefanGraph g{GraphKind::two_phase_centered, latent_heat, 1.0, k1, k2};
    g.validate();
    return g;
}

double StefanGraph::temperature(double h) const {
    const double L = latent_heat;
    switch (kind) {
        case GraphKind::one_phase: return k0 * std::max(h - L, 0.0);
        case GraphKind::two_phase: return k1 * std::max(h - L, 0.0) + k2 * std::min(h, 0.0);
        case GraphKind::two_phase_centered:
            return k1 * std::max(h - 0.5 * L, 0.0) + k2 * std::min(h + 0.5 * L, 0.0);
    }
    return 0.0;
}

double StefanGraph::lipschitz_bound() const {
    switch (kind) {
        case GraphKind::one_phase: return k0;
        default: return std::max(k1, k2);
    }
}

void StefanGraph::validate() const {
    if (!(latent_heat > 0.0)) throw std::invalid_argument("StefanGraph: latent heat must be > 0");
    if (!(k0 > 0.0 && k1 > 0.0 && k2 > 0.0))
        throw std::invalid_argument("StefanGraph: conductivities must be > 0");
}

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::one_phase: return "one_phase";
        case GraphKind::two_phase: return "two_phase";
        case GraphKind::two_phase_centered: return "two_phase_centered";
    }
    return "?";
}

GraphKind graph_kind_from_string(const std::string& s) {
    if (s == "one_phase") return GraphKind::one_phase;
    if (s == "two_phase") return GraphKind::two_phase;
    if (s == "two_phase_centered") return GraphKind::two_phase_centered;
    throw std::invalid_argument("unknown graph kind: " + s);
}

Field reflect_two_to_one(const Field& f, double latent_heat) {
    Field out = f;
    for (double& v : out.values) v = -v + latent_heat;
    out.farfield.left = -f.farfield.left + latent_heat;
    out.farfield.right = -f.farfield.right + latent_heat;
    return out;
}

Field center_shift(const Field& f, double latent_heat) {
    Field out = f;
    for (double& v : out.values) v -= 0.5 * latent_heat;
    out.farfield.left -= 0.5 * latent_heat;
    out.farfield.right -= 0.5 * latent_heat;
    return out;
}

}  // namespace stefan
