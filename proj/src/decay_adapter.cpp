#include "ppc/decay_adapter.hpp"

#include "ppc/errors.hpp"

#include <cmath>

namespace ppc {

void DecayLawKind::validate() const {
    if (law == DecayLaw::Fixed && !(fixed_delta > 0.0)) {
        throw ConfigError("decay.delta: fixed decay rate must be > 0");
    }
}

std::string to_string(DecayLaw law) {
    switch (law) {
        case DecayLaw::Unsaturated: return "unsaturated";
        case DecayLaw::Saturated: return "saturated";
        case DecayLaw::Fixed: return "fixed";
    }
    return "unknown";
}

DecayLaw decay_law_from_string(const std::string& name) {
    if (name == "unsaturated") return DecayLaw::Unsaturated;
    if (name == "saturated") return DecayLaw::Saturated;
    if (name == "fixed") return DecayLaw::Fixed;
    throw ConfigError("decay.law: unknown law '" + name + "' (expected unsaturated|saturated|fixed)");
}

double delta2(double abs_e, double p, double P, const PerfSpec& spec) {
    if (std::isinf(P)) return 0.0;
    return spec.rho2 * std::log((p - abs_e) / (P - p) + 1.0);
}

double delta_dot_unsat(double e, double p, const PerfSpec& spec) {
    if (!(p > 0.0)) throw DomainError("delta_dot_unsat: p must be > 0");
    if (p <= spec.psi_inf) return 0.0;
    return delta1(std::abs(e) / p, spec);
}

double delta_dot_sat(double e, double p, double P, double delta, const PerfSpec& spec) {
    if (!(p > 0.0)) throw DomainError("delta_dot_sat: p must be > 0");
    const double abs_e = std::abs(e);
    if (!(abs_e < P)) throw DomainError("delta_dot_sat: |e| reached the envelope P");
    if (p <= spec.psi_inf) return 0.0;
    if (abs_e <= p) return delta1(abs_e / p, spec);
    return delta2(abs_e, p, P, spec) * delta;
}

double delta_dot(const DecayLawKind& kind, double e, double p, double P, double delta,
                 const PerfSpec& spec) {
    switch (kind.law) {
        case DecayLaw::Unsaturated: return delta_dot_unsat(e, p, spec);
        case DecayLaw::Saturated: return delta_dot_sat(e, p, P, delta, spec);
        case DecayLaw::Fixed: return 0.0;
    }
    return 0.0;
}

}  // namespace ppc
