#pragma once

#include "ppc/transforms.hpp"

#include <string>

namespace ppc {

enum class DecayLaw { Unsaturated, Saturated, Fixed };

/// Which decay-rate update law drives delta. `Fixed` holds delta at `fixed_delta`.
struct DecayLawKind {
    DecayLaw law = DecayLaw::Saturated;
    double fixed_delta = 0.0;

    static DecayLawKind unsaturated() { return {DecayLaw::Unsaturated, 0.0}; }
    static DecayLawKind saturated() { return {DecayLaw::Saturated, 0.0}; }
    static DecayLawKind fixed(double delta_c) { return {DecayLaw::Fixed, delta_c}; }

    /// Initial delta: 0 for the adaptive laws, delta_c for Fixed.
    double initial_delta() const { return law == DecayLaw::Fixed ? fixed_delta : 0.0; }

    void validate() const;
};

std::string to_string(DecayLaw law);
DecayLaw decay_law_from_string(const std::string& name);

/// Delta_1(r) = rho1 (r - 1)^2 with r = |e| / p.
inline double delta1(double ratio, const PerfSpec& spec) {
    return spec.rho1 * (ratio - 1.0) * (ratio - 1.0);
}

/// Delta_2(|e|) = rho2 log((p - |e|) / (P - p) + 1); negative on (p, P).
double delta2(double abs_e, double p, double P, const PerfSpec& spec);

/// Law without saturation: 0 once p <= Psi_inf, else rho1 (|e|/p - 1)^2.
/// Throws DomainError if p <= 0.
double delta_dot_unsat(double e, double p, const PerfSpec& spec);

/// Law under saturation: Delta_1 inside the index function, Delta_2 * delta outside it.
/// Throws DomainError if |e| >= P or p <= 0.
double delta_dot_sat(double e, double p, double P, double delta, const PerfSpec& spec);

double delta_dot(const DecayLawKind& kind, double e, double p, double P, double delta,
                 const PerfSpec& spec);

}  // namespace ppc
