#pragma once

// Performance envelope and the scalar maps used by the error transformation.
//
//   Psi(t)  = (1 - Psi_inf) exp(-delta t) + Psi_inf
//   P       = I(Psi) = sqrt(1 - Psi_inf^2) Psi / sqrt(1 - Psi^2)
//   eta(e)  = e / sqrt(e^2 + 1 - Psi_inf^2),   rho = d eta / d e
//   zeta    = beta eta,  beta = 1 / Psi
//   S(zeta) = zeta / (1 - zeta^2),  mu = dS/dzeta = (1 + zeta^2) / (1 - zeta^2)^2

#include "ppc/dual.hpp"

#include <span>
#include <vector>

namespace ppc {

/// |zeta| must stay below 1 - kZetaGuard.
inline constexpr double kZetaGuard = 1e-6;

struct PerfSpec {
    double psi_inf = 0.05;
    double rho1 = 1.0;
    double rho2 = 10.0;
    double eps0 = 0.0;

    /// Throws ConfigError listing every violated range.
    void validate() const;
};

struct FunnelState {
    double t = 0.0;
    double delta = 0.0;
    double delta_dot = 0.0;
    double delta_ddot_est = 0.0;
};

// ---- generic kernels (double or Dual) ---------------------------------------

template <class T>
T s_kernel(const T& zeta) {
    return zeta / (1.0 - zeta * zeta);
}

template <class T>
T mu_kernel(const T& zeta) {
    T w = 1.0 - zeta * zeta;
    return (1.0 + zeta * zeta) / (w * w);
}

template <class T>
struct EtaRho {
    T eta;
    T rho;
};

template <class T>
EtaRho<T> eta_kernel(const T& e, double psi_inf) {
    const double a = 1.0 - psi_inf * psi_inf;
    T q = e * e + a;
    T r = sqrt(q);
    return {e / r, a / (q * r)};
}

// ---- checked double-precision API -------------------------------------------

double eval_psi(const FunnelState& fs, const PerfSpec& spec);

/// Throws DomainError when |psi| >= 1.
double envelope_I(double psi, const PerfSpec& spec);

/// Envelope that maps the removable singularity at psi = 1 to +infinity.
double envelope_or_inf(double psi, const PerfSpec& spec);

/// Throws SingularityError when |zeta| >= 1 - eps_guard.
double S_map(double zeta, double eps_guard = kZetaGuard);

double S_inv(double s);

EtaRho<double> eta_map(double e, const PerfSpec& spec);

/// Throws SingularityError when |zeta| >= 1 - eps_guard.
double mu_weight(double zeta, double eps_guard = kZetaGuard);

/// Returns [beta, beta', ..., beta^(order)].
///
/// Orders 0..2 are analytic in (t, delta, delta_dot, delta_ddot_est). Higher
/// orders are backward differences of `beta_ddot_history` (newest first,
/// uniform spacing `step`); missing history contributes zero.
std::vector<double> beta_derivatives(const FunnelState& fs, const PerfSpec& spec, int order,
                                     std::span<const double> beta_ddot_history = {},
                                     double step = 0.0);

}  // namespace ppc
