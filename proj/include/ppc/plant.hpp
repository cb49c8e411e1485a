#pragma once

// Strict-feedback plant
//
//   x_k' = x_{k+1} + theta^T phi_k(x_1..x_k) + d_k(t),   k < n
//   x_n' = u       + theta^T phi_n(x_1..x_n) + d_n(t)
//
// with symmetric input clipping at u_bar.

#include "ppc/dual.hpp"

#include <Eigen/Dense>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ppc {

/// coeff * prod_j x_j^powers[j]
struct Monomial {
    double coeff = 1.0;
    std::vector<int> powers;

    bool operator==(const Monomial&) const = default;
};

/// One regressor component is a polynomial in the states.
using Polynomial = std::vector<Monomial>;
/// phi_k: r polynomial components.
using StageRegressor = std::vector<Polynomial>;

template <class T>
T eval_polynomial(const Polynomial& poly, std::span<const T> x) {
    T acc(0.0);
    for (const auto& m : poly) {
        T term(m.coeff);
        for (std::size_t j = 0; j < m.powers.size() && j < x.size(); ++j) {
            if (m.powers[j] != 0) term = term * ipow(x[j], m.powers[j]);
        }
        acc = acc + term;
    }
    return acc;
}

template <class T>
std::vector<T> eval_regressor(const StageRegressor& phi, std::span<const T> x) {
    std::vector<T> out;
    out.reserve(phi.size());
    for (const auto& comp : phi) out.push_back(eval_polynomial(comp, x));
    return out;
}

struct Disturbance {
    enum class Kind { Zero, Constant, Sine };
    Kind kind = Kind::Zero;
    double value = 0.0;      // Constant
    double amplitude = 0.0;  // Sine
    double frequency = 0.0;  // Sine, Hz
    double phase = 0.0;      // Sine, rad

    static Disturbance zero() { return {}; }
    static Disturbance constant(double c) { return {Kind::Constant, c, 0.0, 0.0, 0.0}; }
    static Disturbance sine(double amp, double hz, double phase_rad = 0.0) {
        return {Kind::Sine, 0.0, amp, hz, phase_rad};
    }

    double eval(double t) const;
    /// Known-to-the-test bound |d(t)| <= bound().
    double bound() const;

    bool operator==(const Disturbance&) const = default;
};

/// Reference trajectory y_d with analytic derivatives of any order.
struct Reference {
    enum class Kind { Constant, Cosine };
    Kind kind = Kind::Constant;
    double offset = 0.0;
    double amplitude = 0.0;
    double frequency = 0.0;  // Hz
    double phase = 0.0;

    static Reference constant(double value) { return {Kind::Constant, value, 0.0, 0.0, 0.0}; }
    static Reference cosine(double amp, double hz, double offset, double phase_rad = 0.0) {
        return {Kind::Cosine, offset, amp, hz, phase_rad};
    }

    /// [y_d, y_d', ..., y_d^(order)]
    std::vector<double> derivatives(double t, int order) const;

    bool operator==(const Reference&) const = default;
};

struct SaturationModel {
    double u_bar = std::numeric_limits<double>::infinity();

    bool enabled() const { return std::isfinite(u_bar); }
    /// Bound on the non-smooth remainder Sat(v) - h(v).
    double g_bar() const { return 0.24 * u_bar; }
};

double saturate(double v, const SaturationModel& sat);

/// h(v) = u_bar tanh(v / u_bar); identity when saturation is disabled.
double smooth_part(double v, const SaturationModel& sat);

struct PlantModel {
    std::string name;
    int n = 1;
    Eigen::VectorXd theta_true;
    std::vector<StageRegressor> regressors;  // size n, each of size r
    std::vector<Disturbance> disturbances;   // size n
    SaturationModel saturation;
    // Benchmark-suggested defaults for the controller side.
    double theta_max = 0.0;
    Reference reference;

    int r() const { return static_cast<int>(theta_true.size()); }

    /// Throws ConfigError on shape mismatches.
    void validate() const;
};

/// Throws ConfigError if dim(x) != n.
Eigen::VectorXd plant_derivative(const Eigen::VectorXd& x, double u, double t,
                                 const PlantModel& model);

/// first_order, second_order or msd. Throws ConfigError for anything else.
PlantModel benchmark(const std::string& name);

/// phi_k = coeff * x_index (0-based index) for a single-parameter-slot regressor.
Polynomial linear_term(int index, double coeff = 1.0);

}  // namespace ppc
