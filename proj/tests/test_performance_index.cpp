#include "ppc/errors.hpp"
#include "ppc/performance_index.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace ppc;
using doctest::Approx;

namespace {

Eigen::MatrixXd scalar(double g) { return Eigen::MatrixXd::Constant(1, 1, g); }

}  // namespace

TEST_CASE("compute_mu0 for the first-order parameter set") {
    const std::vector<double> z0{0.0};
    const auto base = compute_mu0(z0, scalar(1.0), 2.0, Eigen::VectorXd::Zero(1), 0.0);
    CHECK(base.mu0 == Approx(2.0).epsilon(1e-15));
    CHECK(base.s_inv_mu0 == Approx(0.780776406404415).epsilon(1e-13));
}

TEST_CASE("compute_mu0 with every error at zero reduces to theta_M") {
    const std::vector<double> z0{0.0, 0.0};
    const auto base = compute_mu0(z0, Eigen::MatrixXd::Identity(2, 2), 10.0, Eigen::VectorXd::Zero(2), 0.0);
    CHECK(base.mu0 == Approx(10.0).epsilon(1e-15));
}

TEST_CASE("compute_mu0 uses the smallest gain eigenvalue and the estimate norm") {
    const std::vector<double> z0{0.3, -0.4};
    Eigen::MatrixXd g(2, 2);
    g << 2.0, 0.0, 0.0, 0.5;
    Eigen::VectorXd th(2);
    th << 0.6, 0.8;
    const auto base = compute_mu0(z0, g, 3.0, th, 0.01);
    // lambda_max(G^-1) = 2, (theta_M + |th|)^2 = 16
    CHECK(base.mu0 == Approx(std::sqrt(0.25 + 2.0 * 16.0 + 0.01)).epsilon(1e-14));
}

TEST_CASE("compute_mu0 rejects bad inputs") {
    const std::vector<double> z0{0.0};
    CHECK_THROWS_AS(compute_mu0(z0, scalar(-1.0), 2.0, Eigen::VectorXd::Zero(1), 0.0), ConfigError);
    CHECK_THROWS_AS(compute_mu0(z0, scalar(1.0), 2.0, Eigen::VectorXd::Constant(1, 3.0), 0.0), ConfigError);
}

TEST_CASE("property: mu0 is at least sqrt(eps0)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> z0{u(rng), u(rng)};
        const double eps0 = std::abs(u(rng));
        const auto base = compute_mu0(z0, Eigen::MatrixXd::Identity(2, 2), 1.0, Eigen::VectorXd::Zero(2), eps0);
        CHECK(base.mu0 >= std::sqrt(eps0));
        CHECK(base.s_inv_mu0 > 0.0);
        CHECK(base.s_inv_mu0 < 1.0);
    }
}

TEST_CASE("eval_pif") {
    PerfSpec s;
    s.psi_inf = 0.05;
    const auto base = compute_mu0(std::vector<double>{0.0}, scalar(1.0), 2.0, Eigen::VectorXd::Zero(1), 0.0);

    SUBCASE("steady state width") {
        const double p = eval_pif(FunnelState{200.0, 1.0, 0.0, 0.0}, s, base);
        CHECK(p == Approx(0.0390197362093022).epsilon(1e-12));
    }
    SUBCASE("finite at t = 0") {
        const double p0 = eval_pif(FunnelState{0.0, 0.0, 0.0, 0.0}, s, base);
        CHECK(std::isfinite(p0));
        CHECK(p0 == Approx(envelope_I(base.s_inv_mu0, s)));
    }
    SUBCASE("large mu0 approaches P from below") {
        const auto big = compute_mu0(std::vector<double>{1e6}, scalar(1.0), 2.0, Eigen::VectorXd::Zero(1), 0.0);
        const FunnelState fs{1.0, 1.0, 0.0, 0.0};
        const double P = envelope_I(eval_psi(fs, s), s);
        const double p = eval_pif(fs, s, big);
        CHECK(p < P);
        CHECK(p == Approx(P).epsilon(1e-6));
    }
}

TEST_CASE("property: p < P on a time grid") {
    PerfSpec s;
    s.psi_inf = 0.05;
    for (double mu0 : {0.1, 1.0, 10.0, 1e3}) {
        const auto base = compute_mu0(std::vector<double>{mu0}, scalar(1e9), 1e-6, Eigen::VectorXd::Zero(1), 0.0);
        for (double delta : {0.01, 0.5, 3.0}) {
            for (double t = 0.01; t < 20.0; t *= 1.3) {
                const FunnelState fs{t, delta, 0.0, 0.0};
                CHECK(eval_pif(fs, s, base) < envelope_I(eval_psi(fs, s), s));
            }
        }
    }
}

TEST_CASE("property: p strictly decreasing under a frozen positive decay rate") {
    PerfSpec s;
    s.psi_inf = 0.05;
    const auto base = compute_mu0(std::vector<double>{0.5}, scalar(1.0), 2.0, Eigen::VectorXd::Zero(1), 0.0);
    double prev = eval_pif(FunnelState{0.0, 2.0, 0.0, 0.0}, s, base);
    for (double t = 0.05; t < 8.0; t += 0.05) {
        const double p = eval_pif(FunnelState{t, 2.0, 0.0, 0.0}, s, base);
        CHECK(p < prev);
        prev = p;
    }
}
