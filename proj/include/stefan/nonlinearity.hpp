#pragma once
#include <string>

#include "stefan/grid.hpp"

namespace stefan {

enum class GraphKind { one_phase, two_phase, two_phase_centered };

// Piecewise-linear enthalpy-temperature graph. The flat interval where the
// temperature vanishes is (-inf, L] for one_phase, [0, L] for two_phase and
// [-L/2, L/2] for the centered variant.
struct StefanGraph {
    GraphKind kind = GraphKind::two_phase;
    double latent_heat = 1.0;
    double k0 = 1.0, k1 = 1.0, k2 = 1.0;

    static StefanGraph one_phase(double latent_heat, double k0 = 1.0);
    static StefanGraph two_phase(double latent_heat, double k1 = 1.0, double k2 = 1.0);
    static StefanGraph two_phase_centered(double latent_heat, double k1 = 1.0, double k2 = 1.0);

    // Exact piecewise-linear evaluation, no smoothing of the kinks.
    double temperature(double h) const;
    // Largest branch slope; feeds the CFL rule.
    double lipschitz_bound() const;
    void validate() const;
};

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& s);

// x -> -h(x) + latent_heat, with the far field reflected the same way.
// An involution; maps two-phase solutions with h <= L onto one-phase ones.
Field reflect_two_to_one(const Field& f, double latent_heat);

// x -> h(x) - latent_heat/2; pairs with the centered graph so that the
// temperature is unchanged pointwise.
Field center_shift(const Field& f, double latent_heat);

}  // namespace stefan
