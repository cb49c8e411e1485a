#include "ppc/transforms.hpp"

#include "ppc/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ppc {

void PerfSpec::validate() const {
    std::vector<std::string> issues;
    if (!(psi_inf > 0.0 && psi_inf < 1.0)) issues.push_back("perf.psi_inf: must lie in (0, 1)");
    if (!(rho1 > 0.0)) issues.push_back("perf.rho1: must be > 0");
    if (!(rho2 > 0.0)) issues.push_back("perf.rho2: must be > 0");
    if (!(eps0 >= 0.0)) issues.push_back("perf.eps0: must be >= 0");
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

double eval_psi(const FunnelState& fs, const PerfSpec& spec) {
    return (1.0 - spec.psi_inf) * std::exp(-fs.delta * fs.t) + spec.psi_inf;
}

double envelope_I(double psi, const PerfSpec& spec) {
    if (!(std::abs(psi) < 1.0)) {
        throw DomainError("envelope_I: |psi| must be < 1, got " + std::to_string(psi));
    }
    return std::sqrt(1.0 - spec.psi_inf * spec.psi_inf) * psi / std::sqrt(1.0 - psi * psi);
}

double envelope_or_inf(double psi, const PerfSpec& spec) {
    if (psi >= 1.0) return std::numeric_limits<double>::infinity();
    return envelope_I(psi, spec);
}

double S_map(double zeta, double eps_guard) {
    if (std::abs(zeta) >= 1.0 - eps_guard) {
        throw SingularityError("S_map: |zeta| reached the funnel guard", zeta);
    }
    return s_kernel(zeta);
}

double S_inv(double s) {
    if (s == 0.0) return 0.0;
    return (std::sqrt(4.0 * s * s + 1.0) - 1.0) / (2.0 * s);
}

EtaRho<double> eta_map(double e, const PerfSpec& spec) {
    return eta_kernel(e, spec.psi_inf);
}

double mu_weight(double zeta, double eps_guard) {
    if (std::abs(zeta) >= 1.0 - eps_guard) {
        throw SingularityError("mu_weight: |zeta| reached the funnel guard", zeta);
    }
    return mu_kernel(zeta);
}

std::vector<double> beta_derivatives(const FunnelState& fs, const PerfSpec& spec, int order,
                                     std::span<const double> beta_ddot_history, double step) {
    const double a = 1.0 - spec.psi_inf;
    const double decay = std::exp(-fs.delta * fs.t);
    const double psi = a * decay + spec.psi_inf;

    // q = delta * t under the literal exponent reading.
    const double q_dot = fs.delta_dot * fs.t + fs.delta;
    const double q_ddot = fs.delta_ddot_est * fs.t + 2.0 * fs.delta_dot;
    const double psi_dot = -a * q_dot * decay;
    const double psi_ddot = a * (q_dot * q_dot - q_ddot) * decay;

    std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
    out[0] = 1.0 / psi;
    if (order >= 1) out[1] = -psi_dot / (psi * psi);
    if (order >= 2) out[2] = -psi_ddot / (psi * psi) + 2.0 * psi_dot * psi_dot / (psi * psi * psi);

    // k-th backward difference of beta'' for beta^(2+k).
    for (int k = 1; 2 + k <= order; ++k) {
        if (step <= 0.0 || static_cast<int>(beta_ddot_history.size()) < k + 1) break;
        double diff = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            diff += sign * binom * beta_ddot_history[static_cast<std::size_t>(j)];
            binom = binom * (k - j) / (j + 1);
        }
        out[static_cast<std::size_t>(2 + k)] = diff / std::pow(step, k);
    }
    return out;
}

}  // namespace ppc
