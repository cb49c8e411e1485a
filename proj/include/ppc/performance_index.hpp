#pragma once

#include "ppc/transforms.hpp"

#include <Eigen/Dense>
#include <span>

namespace ppc {

/// Bound on the transformed error fixed from initial data.
struct PifBaseline {
    double mu0 = 0.0;
    double s_inv_mu0 = 0.0;
};

/// mu0 = sqrt(sum z_k(0)^2 + lambda_max(Gamma^-1) (theta_M + |theta_hat(0)|)^2 + eps0).
///
/// Throws ConfigError if gamma is not symmetric positive definite or the
/// initial estimate lies outside the projection ball.
PifBaseline compute_mu0(std::span<const double> z0, const Eigen::MatrixXd& gamma, double theta_M,
                        const Eigen::VectorXd& theta_hat0, double eps0);

/// p(t) = I(Psi(t) S^-1(mu0)).
double eval_pif(const FunnelState& fs, const PerfSpec& spec, const PifBaseline& base);

}  // namespace ppc
