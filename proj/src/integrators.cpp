#include "ppc/integrators.hpp"

#include "ppc/errors.hpp"

#include <cmath>
#include <limits>

namespace ppc {

std::string to_string(Integrator m) {
    switch (m) {
        case Integrator::RK4: return "rk4";
        case Integrator::ROS2: return "ros2";
        case Integrator::IMEX: return "imex";
    }
    return "rk4";
}

Integrator integrator_from_string(const std::string& name) {
    if (name == "rk4") return Integrator::RK4;
    if (name == "ros2") return Integrator::ROS2;
    if (name == "imex") return Integrator::IMEX;
    throw ConfigError("sim.integrator: unknown method '" + name + "' (expected rk4|ros2|imex)");
}

Eigen::VectorXd rk4_step(const Eigen::VectorXd& y, double t, double h, const OdeSystem& f) {
    const Eigen::VectorXd k1 = f(t, y);
    const Eigen::VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

// Columns of the autonomized Jacobian: d f / d y_j for j < n, d f / d t last.
Eigen::MatrixXd finite_difference_jacobian(const Eigen::VectorXd& y, double t, const OdeSystem& f,
                                           const Eigen::VectorXd& f0) {
    const Eigen::Index n = y.size();
    const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    Eigen::MatrixXd J(n, n + 1);
    for (Eigen::Index j = 0; j <= n; ++j) {
        const double base = (j < n) ? y[j] : t;
        const double step = root_eps * std::max(1.0, std::abs(base));
        auto eval = [&](double s) {
            if (j < n) {
                Eigen::VectorXd yp = y;
                yp[j] += s;
                return f(t, yp);
            }
            return f(t + s, y);
        };
        try {
            J.col(j) = (eval(step) - f0) / step;
        } catch (const SingularityError&) {
            J.col(j) = (f0 - eval(-step)) / step;
        } catch (const DomainError&) {
            J.col(j) = (f0 - eval(-step)) / step;
        }
    }
    return J;
}

}  // namespace

Eigen::VectorXd ros2_step(const Eigen::VectorXd& y, double t, double h, const OdeSystem& f,
                          const Eigen::VectorXd* f0_in, const OdeSystem* jac) {
    const double gamma = 1.0 + 1.0 / std::sqrt(2.0);
    const Eigen::Index n = y.size();
    const Eigen::VectorXd f0 = f0_in ? *f0_in : f(t, y);
    const Eigen::MatrixXd J = finite_difference_jacobian(y, t, jac ? *jac : f, f0);

    // Autonomized system (y, t) with t' = 1: the t row of the Jacobian is zero,
    // so the t-component of each stage solve is explicit.
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - gamma * h * J.leftCols(n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd ft = J.col(n);

    // Stage 1: t-slope k1_t = 1.
    const double k1t = 1.0;
    const Eigen::VectorXd k1 = lu.solve(f0 + gamma * h * ft * k1t);
    // Stage 2 at (y + h k1, t + h): k2_t = 1 - 2 k1_t = -1.
    const double k2t = 1.0 - 2.0 * k1t;
    const Eigen::VectorXd f1 = f(t + h * k1t, y + h * k1);
    const Eigen::VectorXd k2 = lu.solve(f1 - 2.0 * k1 + gamma * h * ft * k2t);
    return y + 1.5 * h * k1 + 0.5 * h * k2;
}

Eigen::VectorXd integrator_step(Integrator method, const Eigen::VectorXd& y, double t, double h,
                                const OdeSystem& f, const Eigen::VectorXd* f0, const OdeSystem* jac) {
    if (method != Integrator::ROS2) return rk4_step(y, t, h, f);
    return ros2_step(y, t, h, f, f0, jac);
}

}  // namespace ppc
