#include "ppc/controller.hpp"

#include <cmath>

namespace ppc {

std::string to_string(ControllerVariant v) {
    return v == ControllerVariant::TableI ? "table1" : "table2";
}

ControllerVariant controller_variant_from_string(const std::string& name) {
    if (name == "table1") return ControllerVariant::TableI;
    if (name == "table2") return ControllerVariant::TableII;
    throw ConfigError("controller.variant: unknown variant '" + name + "' (expected table1|table2)");
}

void ControllerConfig::validate(int n, int r) const {
    std::vector<std::string> issues;
    if (n > kMaxOrder) {
        issues.push_back("plant.order: at most " + std::to_string(kMaxOrder) + " is supported");
    }
    if (static_cast<int>(gains.size()) != n) {
        issues.push_back("controller.gains: expected " + std::to_string(n) + " entries");
    }
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (!(gains[i] > 0.0)) issues.push_back("controller.gains[" + std::to_string(i) + "]: must be > 0");
    }
    if (gamma.rows() != r || gamma.cols() != r) {
        issues.push_back("controller.gamma: expected a " + std::to_string(r) + "x" + std::to_string(r) +
                         " matrix");
    } else if (!gamma.isApprox(gamma.transpose(), 1e-12)) {
        issues.push_back("controller.gamma: must be symmetric");
    } else if (Eigen::LLT<Eigen::MatrixXd>(gamma).info() != Eigen::Success) {
        issues.push_back("controller.gamma: must be positive definite");
    }
    if (!(theta_max > 0.0)) issues.push_back("controller.theta_max: must be > 0");
    if (theta_hat0.size() != r) {
        issues.push_back("controller.theta_hat0: expected " + std::to_string(r) + " entries");
    } else if (theta_hat0.norm() > theta_max) {
        issues.push_back("controller.theta_hat0: norm exceeds theta_max");
    }
    if (variant == ControllerVariant::TableII) {
        if (!(lambda > 0.0)) issues.push_back("controller.lambda: must be > 0");
        if (n < 2) issues.push_back("controller.variant: table2 needs plant order >= 2");
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

TransformedError transformed_error(double e, const FunnelState& fs, const PerfSpec& spec,
                                   double eps_guard) {
    const auto beta = beta_derivatives(fs, spec, 1);
    const auto er = eta_map(e, spec);
    const double zeta = beta[0] * er.eta;
    TransformedError out{};
    out.z1 = S_map(zeta, eps_guard);
    out.zeta = zeta;
    out.mu = mu_kernel(zeta);
    out.mu1 = out.mu * beta[0] * er.rho;
    out.mu2 = out.mu * beta[1] * er.eta;
    return out;
}

TuningFunctions tuning_functions(const std::vector<Eigen::VectorXd>& phis, double mu1,
                                 std::span<const double> z,
                                 const std::vector<std::vector<double>>& dalpha_dx) {
    TuningFunctions out;
    const std::size_t n = phis.size();
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd omega;
        if (i == 0) {
            omega = mu1 * phis[0];
        } else {
            omega = phis[i];
            for (std::size_t k = 0; k < i; ++k) omega -= dalpha_dx[i - 1][k] * phis[k];
        }
        Eigen::VectorXd tau = omega * z[i];
        if (i > 0) tau += out.tau.back();
        out.omega.push_back(std::move(omega));
        out.tau.push_back(std::move(tau));
    }
    return out;
}

namespace {

detail::LawContext make_context(const ControlInputs& in, const ControllerConfig& cfg,
                                const std::vector<StageRegressor>& regressors,
                                const PerfSpec& spec, double eps_guard) {
    detail::LawContext ctx;
    ctx.cfg = &cfg;
    ctx.regressors = &regressors;
    ctx.psi_inf = spec.psi_inf;
    ctx.eps_guard = eps_guard;
    ctx.n = static_cast<int>(in.x.size());
    ctx.r = static_cast<int>(in.theta_hat.size());
    ctx.xi = in.xi;
    if (static_cast<int>(regressors.size()) != ctx.n || static_cast<int>(in.yd.size()) != ctx.n + 1 ||
        static_cast<int>(in.beta.size()) != ctx.n + 1 || static_cast<int>(cfg.gains.size()) != ctx.n) {
        throw ConfigError("controller: inputs do not match the plant order");
    }
    return ctx;
}

}  // namespace

ControlOutput virtual_controls(const ControlInputs& in, const ControllerConfig& cfg,
                               const std::vector<StageRegressor>& regressors, const PerfSpec& spec,
                               double eps_guard) {
    const auto ctx = make_context(in, cfg, regressors, spec, eps_guard);
    auto st = detail::evaluate_stages<kMaxOrder - 1, double>(ctx.n, detail::to_stage_inputs(in), ctx);

    ControlOutput out;
    out.v = st.alpha.back();
    out.z = st.z;
    out.alphas.assign(st.alpha.begin(), st.alpha.end() - 1);
    out.tau_n = Eigen::Map<const Eigen::VectorXd>(st.tau.data(), static_cast<Eigen::Index>(st.tau.size()));
    out.mu = st.mu;
    out.mu1 = st.mu1;
    out.mu2 = st.mu2;
    out.zeta = st.zeta;
    out.s = st.z.front();
    return out;
}

std::vector<double> stage_gradient(const ControlInputs& in, const ControllerConfig& cfg,
                                   const std::vector<StageRegressor>& regressors,
                                   const PerfSpec& spec, int stage, double eps_guard) {
    const auto ctx = make_context(in, cfg, regressors, spec, eps_guard);
    if (stage < 1 || stage > ctx.n) throw ConfigError("stage_gradient: stage out of range");
    const InputLayout L = ctx.layout();
    auto st = detail::evaluate_stages<kMaxOrder - 2, Dual<double>>(
        stage, detail::lift(detail::to_stage_inputs(in), L), ctx);
    const auto& a = st.alpha.back();
    std::vector<double> g(L.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = a.grad(i);
    return g;
}

double stage_value(const ControlInputs& in, const ControllerConfig& cfg,
                   const std::vector<StageRegressor>& regressors, const PerfSpec& spec, int stage,
                   double eps_guard) {
    const auto ctx = make_context(in, cfg, regressors, spec, eps_guard);
    if (stage < 1 || stage > ctx.n) throw ConfigError("stage_value: stage out of range");
    return detail::evaluate_stages<kMaxOrder - 1, double>(stage, detail::to_stage_inputs(in), ctx)
        .alpha.back();
}

Eigen::VectorXd projection_update(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& tau_n,
                                  const Eigen::MatrixXd& gamma, double theta_M) {
    Eigen::VectorXd g = gamma * tau_n;
    const double norm2 = theta_hat.squaredNorm();
    // Boundary test allows for the rounding left by clamp_to_ball.
    const bool on_boundary = std::sqrt(norm2) >= theta_M * (1.0 - 1e-12);
    if (!on_boundary || theta_hat.dot(g) <= 0.0) return g;
    return g - theta_hat * (theta_hat.dot(g) / norm2);
}

Eigen::VectorXd clamp_to_ball(const Eigen::VectorXd& theta, double theta_M) {
    const double norm = theta.norm();
    if (norm <= theta_M) return theta;
    return theta * (theta_M / norm);
}

double xi_derivative(double xi, double v, const SaturationModel& sat, double lambda) {
    return -lambda * xi + (smooth_part(v, sat) - v);
}

}  // namespace ppc
