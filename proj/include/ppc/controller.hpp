#pragma once

// Adaptive backstepping with tuning functions on the normalized error.
//
// Stage 1 acts on z_1 = S(beta eta(e)); stages i >= 2 on z_i = x_i - alpha_{i-1}.
// The stage laws need partials of the previous virtual control with respect
// to every signal it reads (states, estimate, y_d^(k), beta^(k)). Those come
// from evaluating the previous stages one dual level deeper, so a plant of
// order n nests n - 1 levels of Dual<>.
//
// Input layout for all gradients (0-based):
//   [x_1..x_n | theta_hat_1..theta_hat_r | y_d^(0)..y_d^(n) | beta^(0)..beta^(n)]

#include "ppc/dual.hpp"
#include "ppc/errors.hpp"
#include "ppc/plant.hpp"
#include "ppc/transforms.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace ppc {

/// Highest plant order the nested evaluator is instantiated for.
inline constexpr int kMaxOrder = 4;

enum class ControllerVariant { TableI, TableII };

std::string to_string(ControllerVariant v);
ControllerVariant controller_variant_from_string(const std::string& name);

struct ControllerConfig {
    ControllerVariant variant = ControllerVariant::TableII;
    std::vector<double> gains;  // c_1..c_n
    Eigen::MatrixXd gamma;      // r x r
    double theta_max = 1.0;
    double lambda = 1.0;  // filter gain, TableII only
    Eigen::VectorXd theta_hat0;

    void validate(int n, int r) const;
};

struct ControllerState {
    Eigen::VectorXd theta_hat;
    double xi = 0.0;
};

/// Everything the control law reads at one instant.
struct ControlInputs {
    std::vector<double> x;          // n
    std::vector<double> theta_hat;  // r
    std::vector<double> yd;         // y_d^(0..n)
    std::vector<double> beta;       // beta^(0..n)
    double xi = 0.0;
};

struct ControlOutput {
    double v = 0.0;               // commanded input (alpha_n for TableI)
    std::vector<double> z;        // z_1..z_n
    std::vector<double> alphas;   // alpha_1..alpha_{n-1}
    Eigen::VectorXd tau_n;
    double mu = 1.0, mu1 = 0.0, mu2 = 0.0, zeta = 0.0, s = 0.0;
};

struct TransformedError {
    double z1, zeta, mu, mu1, mu2;
};

struct InputLayout {
    int n = 1;
    int r = 1;

    std::size_t size() const { return static_cast<std::size_t>(n + r + 2 * (n + 1)); }
    std::size_t x(int k) const { return static_cast<std::size_t>(k); }
    std::size_t theta(int j) const { return static_cast<std::size_t>(n + j); }
    std::size_t yd(int k) const { return static_cast<std::size_t>(n + r + k); }
    std::size_t beta(int k) const { return static_cast<std::size_t>(2 * n + r + 1 + k); }
};

/// zeta = beta eta(e), z1 = S(zeta), mu1 = mu beta rho, mu2 = mu beta' eta.
/// Throws SingularityError at the guard.
TransformedError transformed_error(double e, const FunnelState& fs, const PerfSpec& spec,
                                   double eps_guard = kZetaGuard);

struct TuningFunctions {
    std::vector<Eigen::VectorXd> omega;  // omega_1..omega_n
    std::vector<Eigen::VectorXd> tau;    // tau_1..tau_n
};

/// omega_1 = mu1 phi_1, omega_i = phi_i - sum_{k<i} d alpha_{i-1}/d x_k phi_k,
/// tau_i = tau_{i-1} + omega_i z_i.
///
/// `phis[k]` is phi_{k+1} evaluated at the current state; `dalpha_dx[i-2][k]`
/// holds d alpha_{i-1} / d x_{k+1} for i >= 2.
TuningFunctions tuning_functions(const std::vector<Eigen::VectorXd>& phis, double mu1,
                                 std::span<const double> z,
                                 const std::vector<std::vector<double>>& dalpha_dx);

/// Full recursion for the configured variant.
ControlOutput virtual_controls(const ControlInputs& in, const ControllerConfig& cfg,
                               const std::vector<StageRegressor>& regressors, const PerfSpec& spec,
                               double eps_guard = kZetaGuard);

/// Gradient of alpha_stage (stage == n gives the final law) in InputLayout order.
std::vector<double> stage_gradient(const ControlInputs& in, const ControllerConfig& cfg,
                                   const std::vector<StageRegressor>& regressors,
                                   const PerfSpec& spec, int stage, double eps_guard = kZetaGuard);

/// alpha_stage alone (stage == n gives the final law).
double stage_value(const ControlInputs& in, const ControllerConfig& cfg,
                   const std::vector<StageRegressor>& regressors, const PerfSpec& spec, int stage,
                   double eps_guard = kZetaGuard);

/// Gamma tau inside the ball, tangential component on its boundary when pointing outward.
Eigen::VectorXd projection_update(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& tau_n,
                                  const Eigen::MatrixXd& gamma, double theta_M);

/// Radial projection onto |theta| <= theta_M.
Eigen::VectorXd clamp_to_ball(const Eigen::VectorXd& theta, double theta_M);

/// xi' = -lambda xi + (h(v) - v)
double xi_derivative(double xi, double v, const SaturationModel& sat, double lambda);

// ---------------------------------------------------------------------------

namespace detail {

struct LawContext {
    const ControllerConfig* cfg = nullptr;
    const std::vector<StageRegressor>* regressors = nullptr;
    double psi_inf = 0.05;
    double eps_guard = kZetaGuard;
    int n = 1;
    int r = 1;
    double xi = 0.0;

    InputLayout layout() const { return {n, r}; }
};

template <class T>
struct StageInputs {
    std::vector<T> x, theta_hat, yd, beta;
};

template <class T>
struct Stages {
    std::vector<T> z;      // z_1..z_m
    std::vector<T> alpha;  // alpha_1..alpha_m
    std::vector<T> tau;    // tau_m
    T zeta{}, mu{}, mu1{}, mu2{};
};

inline StageInputs<double> to_stage_inputs(const ControlInputs& in) {
    return {in.x, in.theta_hat, in.yd, in.beta};
}

template <class T>
StageInputs<Dual<T>> lift(const StageInputs<T>& in, const InputLayout& L) {
    const std::size_t N = L.size();
    StageInputs<Dual<T>> out;
    for (int k = 0; k < L.n; ++k) out.x.push_back(Dual<T>::variable(in.x[k], L.x(k), N));
    for (int j = 0; j < L.r; ++j)
        out.theta_hat.push_back(Dual<T>::variable(in.theta_hat[j], L.theta(j), N));
    for (int k = 0; k <= L.n; ++k) out.yd.push_back(Dual<T>::variable(in.yd[k], L.yd(k), N));
    for (int k = 0; k <= L.n; ++k) out.beta.push_back(Dual<T>::variable(in.beta[k], L.beta(k), N));
    return out;
}

template <class T>
Stages<T> strip(const Stages<Dual<T>>& in) {
    Stages<T> out;
    for (const auto& a : in.z) out.z.push_back(a.v);
    for (const auto& a : in.alpha) out.alpha.push_back(a.v);
    for (const auto& a : in.tau) out.tau.push_back(a.v);
    out.zeta = in.zeta.v;
    out.mu = in.mu.v;
    out.mu1 = in.mu1.v;
    out.mu2 = in.mu2.v;
    return out;
}

template <class T>
std::vector<T> phi_at(const LawContext& ctx, const StageInputs<T>& in, int stage) {
    const auto& reg = (*ctx.regressors)[static_cast<std::size_t>(stage - 1)];
    return eval_regressor<T>(reg, std::span<const T>(in.x.data(), static_cast<std::size_t>(stage)));
}

template <class T>
Stages<T> stage_one(const StageInputs<T>& in, const LawContext& ctx) {
    const ControllerConfig& cfg = *ctx.cfg;
    T e = in.x[0] - in.yd[0];
    EtaRho<T> er = eta_kernel(e, ctx.psi_inf);
    T zeta = in.beta[0] * er.eta;
    if (std::abs(value_of(zeta)) >= 1.0 - ctx.eps_guard) {
        throw SingularityError("normalized error reached the funnel guard", value_of(zeta));
    }
    Stages<T> out;
    out.zeta = zeta;
    out.mu = mu_kernel(zeta);
    out.mu1 = out.mu * in.beta[0] * er.rho;
    out.mu2 = out.mu * in.beta[1] * er.eta;
    T z1 = s_kernel(zeta);
    out.z.push_back(z1);

    std::vector<T> phi1 = phi_at(ctx, in, 1);
    T alpha = -(cfg.gains[0] * z1 + out.mu2) / out.mu1 + in.yd[1];
    for (int j = 0; j < ctx.r; ++j) {
        alpha = alpha - in.theta_hat[j] * phi1[j];
        out.tau.push_back(out.mu1 * phi1[j] * z1);
    }
    if (cfg.variant == ControllerVariant::TableII) alpha = alpha - out.mu1 * z1;
    out.alpha.push_back(alpha);
    return out;
}

// Adds stage i (1-based, i >= 2) to `out`, which already holds stages 1..i-1
// as values of `inner`.
template <class T>
void append_stage(Stages<T>& out, const Stages<Dual<T>>& inner, const StageInputs<T>& in,
                  const LawContext& ctx, int i) {
    const ControllerConfig& cfg = *ctx.cfg;
    const InputLayout L = ctx.layout();
    const bool final_stage = (i == ctx.n);
    const bool table2 = cfg.variant == ControllerVariant::TableII;
    const Dual<T>& prev = inner.alpha[static_cast<std::size_t>(i - 2)];

    std::vector<T> dx(static_cast<std::size_t>(i - 1));
    for (int k = 0; k < i - 1; ++k) dx[k] = prev.grad(L.x(k));

    std::vector<T> omega = phi_at(ctx, in, i);
    for (int k = 0; k < i - 1; ++k) {
        std::vector<T> phik = phi_at(ctx, in, k + 1);
        for (int j = 0; j < ctx.r; ++j) omega[j] = omega[j] - dx[k] * phik[j];
    }

    T zi = in.x[i - 1] - prev.v;
    if (final_stage && table2) zi = zi - ctx.xi;
    out.z.push_back(zi);
    for (int j = 0; j < ctx.r; ++j) out.tau[j] = out.tau[j] + omega[j] * zi;

    T law = -cfg.gains[i - 1] * zi;
    // z_1 enters z_1' through mu1, later stages with unit weight.
    law = law - ((i == 2) ? out.mu1 * out.z[0] : out.z[i - 2]);
    for (int j = 0; j < ctx.r; ++j) law = law - in.theta_hat[j] * omega[j];
    for (int k = 0; k < i - 1; ++k) law = law + dx[k] * in.x[k + 1];
    for (int j = 0; j < ctx.r; ++j) {
        const T g = prev.grad(L.theta(j));
        for (int l = 0; l < ctx.r; ++l) law = law + g * cfg.gamma(j, l) * out.tau[l];
    }
    for (int k = 0; k <= i - 1; ++k) {
        law = law + prev.grad(L.yd(k)) * in.yd[k + 1] + prev.grad(L.beta(k)) * in.beta[k + 1];
    }
    // sum_{k=2}^{i-1} (d alpha_{k-1} / d theta_hat) Gamma omega_i z_k
    for (int k = 2; k <= i - 1; ++k) {
        const Dual<T>& ak = inner.alpha[static_cast<std::size_t>(k - 2)];
        T acc(0.0);
        for (int j = 0; j < ctx.r; ++j) {
            const T g = ak.grad(L.theta(j));
            for (int l = 0; l < ctx.r; ++l) acc = acc + g * cfg.gamma(j, l) * omega[l];
        }
        law = law + acc * out.z[k - 1];
    }
    if (table2) {
        T damp(1.0);
        for (const auto& d : dx) damp = damp + d * d;
        law = law - damp * zi;
        if (final_stage) law = law - cfg.lambda * ctx.xi;
    }
    out.alpha.push_back(law);
}

template <int Depth, class T>
Stages<T> evaluate_stages(int m, const StageInputs<T>& in, const LawContext& ctx) {
    if (m == 1) return stage_one(in, ctx);
    if constexpr (Depth == 0) {
        throw ConfigError("controller: plant order exceeds the supported maximum of " +
                          std::to_string(kMaxOrder));
    } else {
        const InputLayout L = ctx.layout();
        Stages<Dual<T>> inner = evaluate_stages<Depth - 1, Dual<T>>(m - 1, lift(in, L), ctx);
        Stages<T> out = strip(inner);
        append_stage(out, inner, in, ctx, m);
        return out;
    }
}

}  // namespace detail
}  // namespace ppc
