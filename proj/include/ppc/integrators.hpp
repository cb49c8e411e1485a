#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace ppc {

using OdeSystem = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& y)>;

/// IMEX is resolved by the simulation engine: RK4 for every state except the
/// anti-windup filter, which takes a backward-Euler step at each stage. On a
/// plain OdeSystem it falls back to RK4.
enum class Integrator { RK4, ROS2, IMEX };

std::string to_string(Integrator m);
Integrator integrator_from_string(const std::string& name);

/// Classical fourth-order Runge-Kutta. Exceptions thrown by `f` propagate.
Eigen::VectorXd rk4_step(const Eigen::VectorXd& y, double t, double h, const OdeSystem& f);

/// Two-stage L-stable Rosenbrock method of order 2 (gamma = 1 + 1/sqrt(2)),
/// applied to the autonomized system (y, t). The Jacobian is a forward
/// difference, falling back to a backward difference where `f` throws.
/// `f0`, when given, must equal f(t, y). `jac`, when given, replaces `f` in the
/// Jacobian differences (for example a smooth local branch of a piecewise `f`).
Eigen::VectorXd ros2_step(const Eigen::VectorXd& y, double t, double h, const OdeSystem& f,
                          const Eigen::VectorXd* f0 = nullptr, const OdeSystem* jac = nullptr);

/// Dispatch on `method`.
Eigen::VectorXd integrator_step(Integrator method, const Eigen::VectorXd& y, double t, double h,
                                const OdeSystem& f, const Eigen::VectorXd* f0 = nullptr,
                                const OdeSystem* jac = nullptr);

}  // namespace ppc
