#include "ppc/performance_index.hpp"

#include "ppc/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ppc {

PifBaseline compute_mu0(std::span<const double> z0, const Eigen::MatrixXd& gamma, double theta_M,
                        const Eigen::VectorXd& theta_hat0, double eps0) {
    std::vector<std::string> issues;
    if (gamma.rows() != gamma.cols() || gamma.rows() == 0) {
        issues.push_back("controller.gamma: must be a non-empty square matrix");
    } else if (!gamma.isApprox(gamma.transpose(), 1e-12)) {
        issues.push_back("controller.gamma: must be symmetric");
    } else if (Eigen::LLT<Eigen::MatrixXd>(gamma).info() != Eigen::Success) {
        issues.push_back("controller.gamma: must be positive definite");
    }
    if (theta_hat0.norm() > theta_M) {
        issues.push_back("controller.theta_hat0: norm exceeds theta_max");
    }
    if (eps0 < 0.0) issues.push_back("perf.eps0: must be >= 0");
    if (!issues.empty()) throw ConfigError(std::move(issues));

    // lambda_max(Gamma^-1) = 1 / lambda_min(Gamma)
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma);
    const double lambda_max_inv = 1.0 / eig.eigenvalues().minCoeff();

    double sum = 0.0;
    for (double z : z0) sum += z * z;
    const double spread = theta_M + theta_hat0.norm();
    PifBaseline base;
    base.mu0 = std::sqrt(sum + lambda_max_inv * spread * spread + eps0);
    base.s_inv_mu0 = S_inv(base.mu0);
    return base;
}

double eval_pif(const FunnelState& fs, const PerfSpec& spec, const PifBaseline& base) {
    return envelope_I(eval_psi(fs, spec) * base.s_inv_mu0, spec);
}

}  // namespace ppc
