#include "ppc/sim_engine.hpp"

#include "ppc/errors.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <optional>
#include <ostream>
#include <string>

namespace ppc {

void SimConfig::validate() const {
    std::vector<std::string> issues;
    if (!(step > 0.0)) issues.push_back("sim.step: must be > 0");
    if (!(duration >= step)) issues.push_back("sim.duration: must be >= sim.step");
    if (!(eps_guard > 0.0 && eps_guard < 1.0)) issues.push_back("sim.eps_guard: must lie in (0, 1)");
    if (record_stride < 1) issues.push_back("sim.record_stride: must be >= 1");
    if (max_halvings < 0 || max_halvings > 30) issues.push_back("sim.max_halvings: must lie in [0, 30]");
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

void Scenario::validate() const {
    std::vector<std::string> issues;
    auto collect = [&](auto&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            issues.insert(issues.end(), e.issues().begin(), e.issues().end());
        }
    };
    collect([&] { plant.validate(); });
    collect([&] { perf.validate(); });
    collect([&] { decay.validate(); });
    collect([&] { sim.validate(); });
    collect([&] { controller.validate(plant.n, plant.r()); });
    if (x0.size() != plant.n) {
        issues.push_back("x0: expected " + std::to_string(plant.n) + " entries");
    }
    if (plant.theta_true.size() > 0 && plant.theta_true.norm() > controller.theta_max) {
        issues.push_back("plant.theta: norm exceeds controller.theta_max");
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::Singular: return "singular";
        case RunStatus::ConfigError: return "config_error";
    }
    return "unknown";
}

std::vector<std::string> Trace::header() const {
    std::vector<std::string> h{"t"};
    for (int k = 1; k <= n; ++k) h.push_back("x" + std::to_string(k));
    for (const char* c : {"e", "P", "p", "psi", "zeta", "delta", "delta_dot", "v", "u", "xi"}) h.emplace_back(c);
    for (int j = 1; j <= r; ++j) h.push_back("theta_hat_" + std::to_string(j));
    h.emplace_back("V_n");
    h.emplace_back("status");
    return h;
}

namespace {

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << ',';
}

}  // namespace

void Trace::write_csv(std::ostream& os) const {
    const auto h = header();
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << '\n';
    for (const auto& row : rows) {
        put(os, row.t);
        for (double x : row.x) put(os, x);
        for (double v : {row.e, row.P, row.p, row.psi, row.zeta, row.delta, row.delta_dot, row.v, row.u, row.xi})
            put(os, v);
        for (double th : row.theta_hat) put(os, th);
        put(os, row.V_n);
        os << row.status << '\n';
    }
}

double lyapunov_value(std::span<const double> z, const Eigen::VectorXd& theta_true,
                      const Eigen::VectorXd& theta_hat, const Eigen::MatrixXd& gamma) {
    double v = 0.0;
    for (double zk : z) v += 0.5 * zk * zk;
    const Eigen::VectorXd err = theta_true - theta_hat;
    v += 0.5 * err.dot(gamma.ldlt().solve(err));
    return v;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-step signals held constant across the stages of one step.
struct StepContext {
    double delta_ddot_est = 0.0;
    std::deque<double> beta_ddot_history;  // newest first
    double step = 0.0;
};

struct Evaluation {
    Eigen::VectorXd dy;
    TraceRow row;
    double beta_ddot = 0.0;
    double xi = 0.0;
    double xn = 0.0;
};

class ClosedLoop {
public:
    ClosedLoop(const Scenario& sc, const PifBaseline& base)
        : sc_(sc), base_(base), L_{sc.plant.n, sc.plant.r()} {}

    const AugmentedLayout& layout() const { return L_; }

    struct Envelope {
        double e, psi, P, p, zeta, delta;
    };

    // Envelope quantities without touching the controller. Throws
    // SingularityError when the normalized error reaches the guard.
    Envelope envelope(double t, const Eigen::VectorXd& y) const {
        Envelope env{};
        const auto yd = sc_.yd.derivatives(t, 0);
        env.delta = std::max(0.0, y[L_.delta()]);
        env.e = y[L_.x()] - yd[0];
        FunnelState fs{t, env.delta, 0.0, 0.0};
        env.psi = eval_psi(fs, sc_.perf);
        env.P = envelope_or_inf(env.psi, sc_.perf);
        env.p = envelope_I(env.psi * base_.s_inv_mu0, sc_.perf);
        env.zeta = eta_map(env.e, sc_.perf).eta / env.psi;
        return env;
    }

    double decay_rate(const Envelope& env) const {
        if (std::abs(env.zeta) >= 1.0 - sc_.sim.eps_guard) {
            throw SingularityError("tracking error reached the performance envelope", env.zeta);
        }
        try {
            return delta_dot(sc_.decay, env.e, env.p, env.P, env.delta, sc_.perf);
        } catch (const DomainError& err) {
            throw SingularityError(err.what(), env.zeta);
        }
    }

    // `sat_mode`, when set, pins the input clipping branch (-1, 0, +1) so that
    // Jacobian differences see one smooth piece.
    //
    // `channel_step`, when set (TableII only), takes a backward-Euler step of
    // that length for x_n and xi from their values in y (see solve_channel).
    // The row, xn and xi then hold the solved values and dy holds the step's
    // mean slopes for those two states.
    Evaluation evaluate(double t, const Eigen::VectorXd& y, const StepContext& ctx,
                        std::optional<int> sat_mode = std::nullopt,
                        std::optional<double> channel_step = std::nullopt) const {
        const int n = L_.n;
        const Envelope env = envelope(t, y);
        const double ddelta = decay_rate(env);

        FunnelState fs{t, env.delta, ddelta, ctx.delta_ddot_est};
        std::vector<double> hist(ctx.beta_ddot_history.begin(), ctx.beta_ddot_history.end());
        ControlInputs in;
        in.x.assign(y.data(), y.data() + n);
        const Eigen::VectorXd theta_hat = clamp_to_ball(y.segment(L_.theta(), L_.r), sc_.controller.theta_max);
        in.theta_hat.assign(theta_hat.data(), theta_hat.data() + L_.r);
        in.yd = sc_.yd.derivatives(t, n);
        in.beta = beta_derivatives(fs, sc_.perf, std::max(n, 2), hist, ctx.step);
        const double beta_ddot = in.beta[2];
        in.beta.resize(static_cast<std::size_t>(n) + 1);
        const bool table2 = sc_.controller.variant == ControllerVariant::TableII;
        in.xi = table2 ? y[L_.xi()] : 0.0;

        ControlOutput out =
            virtual_controls(in, sc_.controller, sc_.plant.regressors, sc_.perf, sc_.sim.eps_guard);
        Eigen::VectorXd x = y.segment(L_.x(), n);
        const bool solve = table2 && channel_step && *channel_step > 0.0;
        double xi = in.xi;
        double xn_slope = 0.0, xi_slope = 0.0;
        if (solve) {
            const double tau = *channel_step;
            const double r_n = plant_derivative(x, 0.0, t, sc_.plant)[n - 1];
            const ChannelSolution sol = solve_channel(in, out, tau, r_n);
            xn_slope = (sol.xn - x[n - 1]) / tau;
            xi_slope = (sol.xi - xi) / tau;
            x[n - 1] = sol.xn;
            in.x[n - 1] = sol.xn;
            xi = sol.xi;
        } else if (table2) {
            xi_slope = xi_derivative(xi, out.v, sc_.plant.saturation, sc_.controller.lambda);
        }

        double u = saturate(out.v, sc_.plant.saturation);
        if (sat_mode && sc_.plant.saturation.enabled()) {
            u = (*sat_mode == 0) ? out.v : *sat_mode * sc_.plant.saturation.u_bar;
        }

        Evaluation ev;
        ev.dy.resize(L_.size());
        ev.dy.segment(L_.x(), n) = plant_derivative(x, u, t, sc_.plant);
        if (solve) ev.dy[n - 1] = xn_slope;
        ev.dy.segment(L_.theta(), L_.r) =
            projection_update(theta_hat, out.tau_n, sc_.controller.gamma, sc_.controller.theta_max);
        ev.dy[L_.delta()] = ddelta;
        ev.dy[L_.xi()] = xi_slope;
        ev.beta_ddot = beta_ddot;
        ev.xi = xi;
        ev.xn = x[n - 1];

        TraceRow& row = ev.row;
        row.t = t;
        row.x = in.x;
        row.e = env.e;
        row.P = env.P;
        row.p = env.p;
        row.psi = env.psi;
        row.zeta = out.zeta;
        row.delta = env.delta;
        row.delta_dot = ddelta;
        row.v = out.v;
        row.u = u;
        row.xi = xi;
        row.theta_hat = in.theta_hat;
        row.V_n = lyapunov_value(out.z, sc_.plant.theta_true, theta_hat, sc_.controller.gamma);
        return ev;
    }

    // Row for a state that has left the funnel: envelope columns only.
    TraceRow violation_row(double t, const Eigen::VectorXd& y) const {
        TraceRow row;
        row.t = t;
        row.x.assign(y.data(), y.data() + L_.n);
        const auto yd = sc_.yd.derivatives(t, 0);
        row.e = y[L_.x()] - yd[0];
        row.delta = std::max(0.0, y[L_.delta()]);
        FunnelState fs{t, row.delta, 0.0, 0.0};
        row.psi = eval_psi(fs, sc_.perf);
        row.P = envelope_or_inf(row.psi, sc_.perf);
        row.p = envelope_I(row.psi * base_.s_inv_mu0, sc_.perf);
        row.zeta = eta_map(row.e, sc_.perf).eta / row.psi;
        row.delta_dot = kNaN;
        row.v = kNaN;
        row.u = kNaN;
        row.xi = y[L_.xi()];
        const Eigen::VectorXd th = y.segment(L_.theta(), L_.r);
        row.theta_hat.assign(th.data(), th.data() + L_.r);
        row.V_n = kNaN;
        row.status = "singular";
        return row;
    }

private:
    // Backward Euler over `tau` for the input channel (x_n, xi), the other
    // states held at their stage values:
    //   x_n = x_n0 + tau (Sat(v) + r_n),      r_n = theta^T phi_n + d_n at x_n0
    //   xi  = xi0  + tau (-lambda xi + h(v) - v)
    //   v   = A + B xi + C x_n
    // The final law is affine in xi, and locally in x_n. Eliminating the two
    // states leaves one scalar equation in v,
    //   v + (tau B / c) phi(v) - tau C Sat(v) = v0 - tau lambda B xi0 / c + tau C r_n,
    // with c = 1 + tau lambda and phi(v) = v - h(v). Solving for v rather than
    // evaluating A + B xi + C x_n avoids the cancellation between those terms
    // when the gains B, C are large.
    struct ChannelSolution {
        double v, xn, xi;
    };

    ChannelSolution solve_channel(ControlInputs in, ControlOutput& out, double tau, double r_n) const {
        const int n = L_.n;
        const double xi0 = in.xi;
        const double x0 = in.x[n - 1];
        const double lam = sc_.controller.lambda;
        const SaturationModel& sat = sc_.plant.saturation;
        auto control = [&](const ControlInputs& ci) {
            return virtual_controls(ci, sc_.controller, sc_.plant.regressors, sc_.perf, sc_.sim.eps_guard);
        };

        const double dxi = std::max(1.0, std::abs(xi0));
        in.xi = xi0 + dxi;
        const ControlOutput at_xi = control(in);
        in.xi = xi0;
        const double dx = 1e-6 * std::max(1.0, std::abs(x0));
        in.x[n - 1] = x0 + dx;
        const ControlOutput at_x = control(in);

        const double B = (at_xi.v - out.v) / dxi;
        const double C = (at_x.v - out.v) / dx;
        const double c = 1.0 + tau * lam;
        const double rhs = out.v - tau * lam * B * xi0 / c + tau * C * r_n;
        auto phi = [&](double v) { return v - smooth_part(v, sat); };
        auto F = [&](double v) { return v + (tau * B / c) * phi(v) - tau * C * saturate(v, sat) - rhs; };
        auto dF = [&](double v) {
            const double g = sat.enabled() ? std::tanh(v / sat.u_bar) : 0.0;
            const double ds = std::abs(v) <= sat.u_bar ? 1.0 : 0.0;
            return 1.0 + (tau * B / c) * g * g - tau * C * ds;
        };

        double v = out.v;
        const bool monotone = 1.0 + std::min(0.0, tau * B / c) + std::min(0.0, -tau * C) > 0.0;
        if (monotone) {
            // Expanding bracket around the linear guess, then safeguarded Newton.
            double lo = rhs, hi = rhs;
            double width = std::max(1.0, sat.enabled() ? sat.u_bar : 1.0);
            while (F(lo) > 0.0) { lo -= width; width *= 2.0; }
            width = std::max(1.0, sat.enabled() ? sat.u_bar : 1.0);
            while (F(hi) < 0.0) { hi += width; width *= 2.0; }
            v = 0.5 * (lo + hi);
            for (int it = 0; it < 200; ++it) {
                const double fv = F(v);
                if (fv == 0.0) break;
                (fv > 0.0 ? hi : lo) = v;
                double next = v - fv / dF(v);
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                if (next == v || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                 std::max(std::abs(lo), std::abs(hi))) {
                    break;
                }
                v = next;
            }
        }
        // Non-monotone case: the input loop is locally unstable; keep the
        // direct value and let the other states follow it.
        ChannelSolution sol{v, x0 + tau * (saturate(v, sat) + r_n), (xi0 - tau * phi(v)) / c};

        const double wx = (sol.xi - xi0) / dxi;
        const double wn = (sol.xn - x0) / dx;
        for (std::size_t k = 0; k < out.z.size(); ++k) {
            out.z[k] += wx * (at_xi.z[k] - out.z[k]) + wn * (at_x.z[k] - out.z[k]);
        }
        out.tau_n += wx * (at_xi.tau_n - out.tau_n) + wn * (at_x.tau_n - out.tau_n);
        out.v = v;
        return sol;
    }

    const Scenario& sc_;
    PifBaseline base_;
    AugmentedLayout L_;
};

// z(0) for the index-function baseline. beta' and beta'' at t = 0 are taken
// with delta_dot = 0; only orders >= 3 would feel that choice.
PifBaseline initial_baseline(const Scenario& sc) {
    const int n = sc.plant.n;
    FunnelState fs{0.0, sc.decay.initial_delta(), 0.0, 0.0};
    ControlInputs in;
    in.x.assign(sc.x0.data(), sc.x0.data() + n);
    in.theta_hat.assign(sc.controller.theta_hat0.data(), sc.controller.theta_hat0.data() + sc.plant.r());
    in.yd = sc.yd.derivatives(0.0, n);
    in.beta = beta_derivatives(fs, sc.perf, n);
    in.xi = 0.0;
    const ControlOutput out =
        virtual_controls(in, sc.controller, sc.plant.regressors, sc.perf, sc.sim.eps_guard);
    return compute_mu0(out.z, sc.controller.gamma, sc.controller.theta_max, sc.controller.theta_hat0,
                       sc.perf.eps0);
}

class MetricsAccumulator {
public:
    MetricsAccumulator(double threshold, double steady_from)
        : threshold_(threshold), steady_from_(steady_from) {}

    void add(const TraceRow& row) {
        const double ae = std::abs(row.e);
        m_.peak_v = std::max(m_.peak_v, std::abs(row.v));
        m_.peak_u = std::max(m_.peak_u, std::abs(row.u));
        m_.max_zeta = std::max(m_.max_zeta, std::abs(row.zeta));
        m_.delta_max = std::max(m_.delta_max, row.delta);
        if (row.t >= steady_from_) m_.steady_err = std::max(m_.steady_err, ae);

        const bool above = ae > threshold_;
        if (!have_prev_) {
            crossing_ = above ? kNaN : row.t;
        } else if (prev_above_ && !above) {
            // Linear interpolation of the last downward crossing.
            const double frac = (prev_e_ - threshold_) / (prev_e_ - ae);
            crossing_ = prev_t_ + frac * (row.t - prev_t_);
        } else if (above) {
            crossing_ = kNaN;
        }
        have_prev_ = true;
        prev_above_ = above;
        prev_e_ = ae;
        prev_t_ = row.t;
    }

    Metrics finish(bool violated) {
        m_.violated = violated;
        m_.converge_time = violated ? kNaN : crossing_;
        return m_;
    }

private:
    double threshold_;
    double steady_from_;
    Metrics m_;
    bool have_prev_ = false;
    bool prev_above_ = false;
    double prev_e_ = 0.0;
    double prev_t_ = 0.0;
    double crossing_ = kNaN;
};

}  // namespace

RunResult run(const Scenario& sc) {
    sc.validate();

    RunResult result;
    result.baseline = initial_baseline(sc);
    ClosedLoop loop(sc, result.baseline);
    const AugmentedLayout& L = loop.layout();

    Eigen::VectorXd y = Eigen::VectorXd::Zero(L.size());
    y.segment(L.x(), L.n) = sc.x0;
    y.segment(L.theta(), L.r) = sc.controller.theta_hat0;
    y[L.delta()] = sc.decay.initial_delta();
    y[L.xi()] = 0.0;

    Trace& trace = result.trace;
    trace.n = L.n;
    trace.r = L.r;
    MetricsAccumulator acc(1.05 * sc.perf.psi_inf, 0.9 * sc.sim.duration);

    const double h = sc.sim.step;
    const long n_steps = static_cast<long>(std::ceil(sc.sim.duration / h - 1e-9));
    auto time_at = [&](long j) { return j >= n_steps ? sc.sim.duration : static_cast<double>(j) * h; };

    StepContext ctx;
    ctx.step = h;
    double prev_delta_dot = 0.0;

    double fail_t = 0.0;
    Eigen::VectorXd fail_y;
    const OdeSystem system = [&](double t, const Eigen::VectorXd& state) -> Eigen::VectorXd {
        try {
            return loop.evaluate(t, state, ctx).dy;
        } catch (const SingularityError&) {
            fail_t = t;
            fail_y = state;
            throw;
        }
    };

    int sat_mode = 0;
    const OdeSystem frozen = [&](double t, const Eigen::VectorXd& state) -> Eigen::VectorXd {
        return loop.evaluate(t, state, ctx, sat_mode).dy;
    };
    auto mode_of = [&](double v) {
        const double ub = sc.plant.saturation.u_bar;
        return std::abs(v) <= ub ? 0 : (v > 0.0 ? 1 : -1);
    };

    auto finish_singular = [&](double t, const Eigen::VectorXd& state, const std::string& what) {
        if (!trace.rows.empty() && !(t > trace.rows.back().t)) {
            t = std::nextafter(trace.rows.back().t, std::numeric_limits<double>::infinity());
        }
        trace.rows.push_back(loop.violation_row(t, state));
        trace.status = RunStatus::Singular;
        trace.singular_time = t;
        trace.message = what;
    };

    auto settle = [&](Eigen::VectorXd& state) {
        state.segment(L.theta(), L.r) = clamp_to_ball(state.segment(L.theta(), L.r), sc.controller.theta_max);
        state[L.delta()] = std::max(0.0, state[L.delta()]);
    };

    // The split scheme only differs from RK4 when there is a filter state.
    const bool imex = sc.sim.integrator == Integrator::IMEX &&
                      sc.controller.variant == ControllerVariant::TableII;
    const Eigen::Index in_ = L.x() + L.n - 1;

    // One step of the split scheme: RK4 for everything but (x_n, xi), which
    // stay at their start values in `state` while each stage solves its own
    // backward-Euler step for them. The caller finishes the step by evaluating
    // the end state with channel_step = dt. `k1` must be the slope at (t, state).
    auto imex_step = [&](const Eigen::VectorXd& state, double t, double dt, const Eigen::VectorXd& k1) {
        const Eigen::Index ix = L.xi();
        auto stage = [&](const Eigen::VectorXd& k, double c) {
            Eigen::VectorXd ys = state + (c * dt) * k;
            ys[ix] = state[ix];
            ys[in_] = state[in_];
            try {
                return loop.evaluate(t + c * dt, ys, ctx, std::nullopt, c * dt).dy;
            } catch (const SingularityError&) {
                fail_t = t + c * dt;
                fail_y = ys;
                throw;
            }
        };
        const Eigen::VectorXd k2 = stage(k1, 0.5);
        const Eigen::VectorXd k3 = stage(k2, 0.5);
        const Eigen::VectorXd k4 = stage(k3, 1.0);
        Eigen::VectorXd next = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        next[ix] = state[ix];
        next[in_] = state[in_];
        return next;
    };

    // Evaluation at an accepted state; `pending` is the channel step still owed
    // by the split scheme (0 otherwise).
    auto evaluate_accepted = [&](double t, const Eigen::VectorXd& state, double pending) {
        try {
            return loop.evaluate(t, state, ctx, std::nullopt,
                                 imex ? std::optional<double>(pending) : std::nullopt);
        } catch (const SingularityError&) {
            fail_t = t;
            fail_y = state;
            throw;
        }
    };

    struct Advanced {
        Eigen::VectorXd y;
        double pending = 0.0;
    };

    // Advances [t, t + dt], splitting the interval when a stage hits the guard.
    // `ev0` is the evaluation at (t, state).
    std::function<Advanced(const Eigen::VectorXd&, double, double, int, const Evaluation&)> advance =
        [&](const Eigen::VectorXd& state, double t, double dt, int depth, const Evaluation& ev0) {
            try {
                Advanced out;
                if (imex) {
                    out.y = imex_step(state, t, dt, ev0.dy);
                    out.pending = dt;
                } else if (sc.sim.integrator == Integrator::ROS2) {
                    sat_mode = mode_of(ev0.row.v);
                    out.y = ros2_step(state, t, dt, system, &ev0.dy, &frozen);
                } else {
                    out.y = rk4_step(state, t, dt, system);
                }
                if (!out.y.allFinite()) throw SingularityError("non-finite state after integration step");
                settle(out.y);
                return out;
            } catch (const SingularityError&) {
                if (depth >= sc.sim.max_halvings) throw;
                Advanced mid = advance(state, t, 0.5 * dt, depth + 1, ev0);
                const Evaluation ev_mid = evaluate_accepted(t + 0.5 * dt, mid.y, mid.pending);
                if (imex) {
                    mid.y[L.xi()] = ev_mid.xi;
                    mid.y[in_] = ev_mid.xn;
                }
                return advance(mid.y, t + 0.5 * dt, 0.5 * dt, depth + 1, ev_mid);
            }
        };

    bool violated = false;
    double pending = 0.0;
    for (long j = 0;; ++j) {
        const double t = time_at(j);
        Evaluation ev;
        try {
            const double dd = loop.decay_rate(loop.envelope(t, y));
            if (j > 0) ctx.delta_ddot_est = (dd - prev_delta_dot) / (t - time_at(j - 1));
            prev_delta_dot = dd;
            ev = evaluate_accepted(t, y, pending);
        } catch (const SingularityError& err) {
            finish_singular(t, y, err.what());
            violated = true;
            break;
        }
        if (imex) {
            y[L.xi()] = ev.xi;
            y[in_] = ev.xn;
        }

        acc.add(ev.row);
        const bool last = (j >= n_steps);
        if (j % sc.sim.record_stride == 0 || last) {
            if (last) ev.row.status = "completed";
            trace.rows.push_back(ev.row);
        }
        if (last) break;

        try {
            const double dt = time_at(j + 1) - t;
            Advanced next = advance(y, t, dt, 0, ev);
            y = std::move(next.y);
            pending = next.pending;
        } catch (const SingularityError& err) {
            if (fail_y.size() == L.size()) {
                finish_singular(fail_t, fail_y, err.what());
            } else {
                finish_singular(time_at(j + 1), y, err.what());
            }
            violated = true;
            break;
        }
        ++result.steps;

        ctx.beta_ddot_history.push_front(ev.beta_ddot);
        while (static_cast<int>(ctx.beta_ddot_history.size()) > L.n) ctx.beta_ddot_history.pop_back();
    }

    if (!violated) trace.status = RunStatus::Completed;
    result.metrics = acc.finish(violated);
    return result;
}

void check_comparable(const Scenario& a, const Scenario& b) {
    std::vector<std::string> issues;
    const PlantModel& pa = a.plant;
    const PlantModel& pb = b.plant;
    if (pa.n != pb.n || pa.theta_true.size() != pb.theta_true.size() || pa.theta_true != pb.theta_true) {
        issues.push_back("plant: order or theta differ between scenarios");
    } else if (pa.regressors != pb.regressors) {
        issues.push_back("plant.regressors: differ between scenarios");
    }
    if (pa.disturbances != pb.disturbances) issues.push_back("plant.disturbances: differ between scenarios");
    if (pa.saturation.u_bar != pb.saturation.u_bar) issues.push_back("plant.u_bar: differs between scenarios");
    if (a.sim.duration != b.sim.duration) issues.push_back("sim.duration: differs between scenarios");
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

namespace {

double ratio(double b, double a) {
    if (a == b) return 1.0;
    return b / a;
}

}  // namespace

Comparison compare(const RunResult& ra, const RunResult& rb) {
    Comparison c;
    c.a = ra.metrics;
    c.b = rb.metrics;
    c.status_a = ra.trace.status;
    c.status_b = rb.trace.status;
    auto diff = [](double b, double a) { return (a == b) ? 0.0 : b - a; };
    c.d_converge_time = diff(c.b.converge_time, c.a.converge_time);
    c.d_peak_v = diff(c.b.peak_v, c.a.peak_v);
    c.d_peak_u = diff(c.b.peak_u, c.a.peak_u);
    c.d_max_zeta = diff(c.b.max_zeta, c.a.max_zeta);
    c.d_steady_err = diff(c.b.steady_err, c.a.steady_err);
    c.d_delta_max = diff(c.b.delta_max, c.a.delta_max);
    c.converge_time_ratio = ratio(c.b.converge_time, c.a.converge_time);
    c.peak_v_ratio = ratio(c.b.peak_v, c.a.peak_v);
    c.peak_u_ratio = ratio(c.b.peak_u, c.a.peak_u);
    if (std::isnan(c.a.converge_time) && std::isnan(c.b.converge_time)) {
        c.d_converge_time = 0.0;
        c.converge_time_ratio = 1.0;
    }
    return c;
}

Comparison compare(const Scenario& a, const Scenario& b) {
    check_comparable(a, b);
    return compare(run(a), run(b));
}

}  // namespace ppc
