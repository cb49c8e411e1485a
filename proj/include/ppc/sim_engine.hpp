#pragma once

#include "ppc/controller.hpp"
#include "ppc/decay_adapter.hpp"
#include "ppc/integrators.hpp"
#include "ppc/performance_index.hpp"
#include "ppc/plant.hpp"
#include "ppc/transforms.hpp"

#include <Eigen/Dense>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ppc {

struct SimConfig {
    double step = 1e-3;
    double duration = 10.0;
    double eps_guard = kZetaGuard;
    int record_stride = 1;
    Integrator integrator = Integrator::RK4;
    /// A step that hits the funnel guard is retried as two half steps, at most this deep.
    int max_halvings = 0;

    void validate() const;
};

/// One closed-loop run: plant, controller, envelope, decay law, reference and integration settings.
struct Scenario {
    std::string label = "run";
    PlantModel plant;
    Eigen::VectorXd x0;
    ControllerConfig controller;
    PerfSpec perf;
    DecayLawKind decay;
    Reference yd;
    SimConfig sim;

    /// Throws ConfigError with every violation found.
    void validate() const;
};

/// Packed integration state, order (x, theta_hat, delta, xi).
struct AugmentedLayout {
    int n = 1;
    int r = 1;

    Eigen::Index size() const { return n + r + 2; }
    Eigen::Index x() const { return 0; }
    Eigen::Index theta() const { return n; }
    Eigen::Index delta() const { return n + r; }
    Eigen::Index xi() const { return n + r + 1; }
};

enum class RunStatus { Completed, Singular, ConfigError };
std::string to_string(RunStatus s);

struct TraceRow {
    double t = 0.0;
    std::vector<double> x;
    double e = 0.0, P = 0.0, p = 0.0, psi = 1.0, zeta = 0.0;
    double delta = 0.0, delta_dot = 0.0;
    double v = 0.0, u = 0.0, xi = 0.0;
    std::vector<double> theta_hat;
    double V_n = 0.0;
    /// "ok", or the terminal status on the last row ("completed" / "singular").
    std::string status = "ok";
};

struct Trace {
    int n = 1;
    int r = 1;
    std::vector<TraceRow> rows;
    RunStatus status = RunStatus::Completed;
    double singular_time = std::numeric_limits<double>::quiet_NaN();
    std::string message;

    /// t,x1..xn,e,P,p,psi,zeta,delta,delta_dot,v,u,xi,theta_hat_1..theta_hat_r,V_n,status
    std::vector<std::string> header() const;
    void write_csv(std::ostream& os) const;
};

struct Metrics {
    double converge_time = std::numeric_limits<double>::quiet_NaN();
    double peak_v = 0.0;
    double peak_u = 0.0;
    double max_zeta = 0.0;
    bool violated = false;
    double steady_err = 0.0;
    double delta_max = 0.0;
};

struct RunResult {
    Trace trace;
    Metrics metrics;
    PifBaseline baseline;
    long steps = 0;
};

/// Integrates the closed loop from t = 0 to the horizon or to a funnel violation.
/// Throws ConfigError before integration; a violation is recorded, not thrown.
RunResult run(const Scenario& scenario);

struct Comparison {
    Metrics a;
    Metrics b;
    RunStatus status_a = RunStatus::Completed;
    RunStatus status_b = RunStatus::Completed;
    // b - a
    double d_converge_time = 0.0;
    double d_peak_v = 0.0;
    double d_peak_u = 0.0;
    double d_max_zeta = 0.0;
    double d_steady_err = 0.0;
    double d_delta_max = 0.0;
    // b / a
    double converge_time_ratio = 1.0;
    double peak_v_ratio = 1.0;
    double peak_u_ratio = 1.0;
};

/// Throws ConfigError when the two scenarios do not share plant and horizon.
void check_comparable(const Scenario& a, const Scenario& b);

Comparison compare(const RunResult& a, const RunResult& b);
Comparison compare(const Scenario& a, const Scenario& b);

/// 1/2 sum z_k^2 + 1/2 (theta - theta_hat)^T Gamma^-1 (theta - theta_hat).
double lyapunov_value(std::span<const double> z, const Eigen::VectorXd& theta_true,
                      const Eigen::VectorXd& theta_hat, const Eigen::MatrixXd& gamma);

}  // namespace ppc
