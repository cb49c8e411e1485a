#include "ppc/plant.hpp"

#include "ppc/errors.hpp"

#include <cmath>
#include <numbers>

namespace ppc {

double Disturbance::eval(double t) const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return value;
        case Kind::Sine: return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t + phase);
    }
    return 0.0;
}

double Disturbance::bound() const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return std::abs(value);
        case Kind::Sine: return std::abs(amplitude);
    }
    return 0.0;
}

std::vector<double> Reference::derivatives(double t, int order) const {
    std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
    if (kind == Kind::Constant) {
        out[0] = offset;
        return out;
    }
    const double w = 2.0 * std::numbers::pi * frequency;
    const double arg = w * t + phase;
    double wk = 1.0;
    for (int k = 0; k <= order; ++k) {
        out[static_cast<std::size_t>(k)] = amplitude * wk * std::cos(arg + k * std::numbers::pi / 2.0);
        wk *= w;
    }
    out[0] += offset;
    return out;
}

double saturate(double v, const SaturationModel& sat) {
    if (std::abs(v) <= sat.u_bar) return v;
    return v > 0.0 ? sat.u_bar : -sat.u_bar;
}

double smooth_part(double v, const SaturationModel& sat) {
    if (!sat.enabled()) return v;
    return sat.u_bar * std::tanh(v / sat.u_bar);
}

void PlantModel::validate() const {
    std::vector<std::string> issues;
    if (n < 1) issues.push_back("plant.order: must be >= 1");
    if (theta_true.size() < 1) issues.push_back("plant.theta: must have at least one entry");
    if (static_cast<int>(regressors.size()) != n) {
        issues.push_back("plant.regressors: expected one entry per stage");
    } else {
        for (std::size_t k = 0; k < regressors.size(); ++k) {
            if (static_cast<int>(regressors[k].size()) != r()) {
                issues.push_back("plant.regressors[" + std::to_string(k) +
                                 "]: expected one polynomial per theta entry");
            }
            for (const auto& comp : regressors[k]) {
                for (const auto& m : comp) {
                    if (m.powers.size() > k + 1) {
                        issues.push_back("plant.regressors[" + std::to_string(k) +
                                         "]: stage may depend only on x_1..x_" + std::to_string(k + 1));
                    }
                    for (int p : m.powers) {
                        if (p < 0) issues.push_back("plant.regressors: negative power");
                    }
                }
            }
        }
    }
    if (static_cast<int>(disturbances.size()) != n) {
        issues.push_back("plant.disturbances: expected one entry per stage");
    }
    if (!(saturation.u_bar > 0.0)) issues.push_back("plant.u_bar: must be > 0");
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

Eigen::VectorXd plant_derivative(const Eigen::VectorXd& x, double u, double t,
                                 const PlantModel& model) {
    if (x.size() != model.n) {
        throw ConfigError("plant_derivative: state has dimension " + std::to_string(x.size()) +
                          ", plant order is " + std::to_string(model.n));
    }
    Eigen::VectorXd dx(model.n);
    std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    for (int k = 0; k < model.n; ++k) {
        auto phi = eval_regressor<double>(model.regressors[static_cast<std::size_t>(k)],
                                          xs.first(static_cast<std::size_t>(k) + 1));
        double drift = 0.0;
        for (int j = 0; j < model.r(); ++j) drift += model.theta_true[j] * phi[static_cast<std::size_t>(j)];
        const double next = (k + 1 < model.n) ? x[k + 1] : u;
        dx[k] = next + drift + model.disturbances[static_cast<std::size_t>(k)].eval(t);
    }
    return dx;
}

Polynomial linear_term(int index, double coeff) {
    Monomial m;
    m.coeff = coeff;
    m.powers.assign(static_cast<std::size_t>(index) + 1, 0);
    m.powers[static_cast<std::size_t>(index)] = 1;
    return {m};
}

PlantModel benchmark(const std::string& name) {
    PlantModel m;
    m.name = name;
    if (name == "first_order") {
        // x1' = u + theta x1, theta = 1
        m.n = 1;
        m.theta_true = Eigen::VectorXd::Constant(1, 1.0);
        m.regressors = {{linear_term(0)}};
        m.disturbances = {Disturbance::zero()};
        m.theta_max = 2.0;
        m.reference = Reference::constant(0.0);
    } else if (name == "second_order") {
        // x1' = x2 + theta x1, x2' = u
        m.n = 2;
        m.theta_true = Eigen::VectorXd::Constant(1, 1.0);
        m.regressors = {{linear_term(0)}, {Polynomial{}}};
        m.disturbances = {Disturbance::zero(), Disturbance::zero()};
        m.saturation.u_bar = 20.0;
        m.theta_max = 2.0;
        m.reference = Reference::constant(0.0);
    } else if (name == "msd") {
        // Mass-spring-damper, theta = [-k/m, -c/m] with m = 1, c = 2, k = 8.
        constexpr double mass = 1.0, damping = 2.0, stiffness = 8.0;
        m.n = 2;
        m.theta_true = Eigen::Vector2d(-stiffness / mass, -damping / mass);
        m.regressors = {{Polynomial{}, Polynomial{}}, {linear_term(0), linear_term(1)}};
        m.disturbances = {Disturbance::zero(), Disturbance::sine(1.0, 2.0)};
        m.saturation.u_bar = 20.0;
        m.theta_max = 10.0;
        m.reference = Reference::cosine(-0.4, 1.0, -0.2);
    } else {
        throw ConfigError("plant.benchmark: unknown benchmark '" + name +
                          "' (expected first_order|second_order|msd)");
    }
    return m;
}

}  // namespace ppc
