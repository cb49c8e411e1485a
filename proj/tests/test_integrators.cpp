#include "ppc/errors.hpp"
#include "ppc/integrators.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace ppc;

namespace {

const OdeSystem kDecay = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd { return -y; };

double global_error(Integrator m, int steps) {
    Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.0);
    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) y = integrator_step(m, y, i * h, h, kDecay);
    return std::abs(y[0] - std::exp(-1.0));
}

}  // namespace

TEST_CASE("rk4 single step") {
    const auto y = rk4_step(Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.1, kDecay);
    CHECK(std::abs(y[0] - std::exp(-0.1)) < 1e-7);
    CHECK(std::abs(y[0] - 0.90483742) < 1e-7);
}

TEST_CASE("zero field leaves the state unchanged") {
    const OdeSystem zero = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
        return Eigen::VectorXd::Zero(y.size());
    };
    const Eigen::Vector3d y0(1.0, -2.0, 3.5);
    CHECK(rk4_step(y0, 0.0, 0.1, zero) == y0);
    CHECK(ros2_step(y0, 0.0, 0.1, zero) == y0);
}

TEST_CASE("observed convergence orders") {
    const double rk4 = std::log2(global_error(Integrator::RK4, 20) / global_error(Integrator::RK4, 40));
    CHECK(rk4 >= 3.9);
    const double ros2 = std::log2(global_error(Integrator::ROS2, 40) / global_error(Integrator::ROS2, 80));
    CHECK(ros2 >= 1.9);
    CHECK(ros2 <= 2.2);
}

TEST_CASE("rosenbrock step is stable far beyond the explicit limit") {
    const OdeSystem stiff = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
        Eigen::VectorXd d(2);
        d << -1e6 * (y[0] - std::cos(y[1])), 1.0;
        return d;
    };
    Eigen::VectorXd y(2);
    y << 5.0, 0.0;
    for (int i = 0; i < 100; ++i) y = ros2_step(y, i * 0.01, 0.01, stiff);
    CHECK(std::abs(y[0] - std::cos(y[1])) < 1e-3);
}

TEST_CASE("time-dependent field") {
    // y' = cos t, y(0) = 0
    const OdeSystem f = [](double t, const Eigen::VectorXd&) -> Eigen::VectorXd {
        return Eigen::VectorXd::Constant(1, std::cos(t));
    };
    Eigen::VectorXd y = Eigen::VectorXd::Zero(1);
    for (int i = 0; i < 100; ++i) y = rk4_step(y, i * 0.01, 0.01, f);
    CHECK(std::abs(y[0] - std::sin(1.0)) < 1e-10);
}

TEST_CASE("exceptions from the field propagate") {
    const OdeSystem f = [](double t, const Eigen::VectorXd& y) -> Eigen::VectorXd {
        if (t > 0.04) throw SingularityError("guard", 1.0);
        return -y;
    };
    CHECK_THROWS_AS(rk4_step(Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.1, f), SingularityError);
}

TEST_CASE("names") {
    for (auto m : {Integrator::RK4, Integrator::ROS2, Integrator::IMEX}) {
        CHECK(integrator_from_string(to_string(m)) == m);
    }
    CHECK_THROWS_AS(integrator_from_string("euler"), ConfigError);
    // the partitioned scheme needs the closed-loop structure; a bare field gets rk4
    const auto a = integrator_step(Integrator::IMEX, Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.1, kDecay);
    const auto b = rk4_step(Eigen::VectorXd::Constant(1, 1.0), 0.0, 0.1, kDecay);
    CHECK(a == b);
}
