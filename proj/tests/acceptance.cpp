// Acceptance checks 1-10. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria. Artifacts go to argv[1] (default ./acceptance_artifacts).

#include "fd.hpp"
#include "law_fixtures.hpp"
#include "oracle_table2.hpp"

#include "ppc/controller.hpp"
#include "ppc/errors.hpp"
#include "ppc/integrators.hpp"
#include "ppc/scenario_io.hpp"
#include "ppc/sim_engine.hpp"
#include "ppc/transforms.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ppc;
using namespace testkit;

namespace {

// ---- pinned tolerances ---------------------------------------------------------
constexpr double kC1MaxRuntime = 1.0;   // s per run
constexpr double kC2MaxRuntime = 2.0;   // s per run
constexpr double kC2SteadyBound = 1.05 * 0.01;
constexpr double kC5Tol = 1e-6;         // times max(1, V_n)
constexpr double kC6Tol = 1e-9;
constexpr double kC7MuTol = 1e-6;
constexpr double kC7BetaTol = 1e-5;
constexpr double kC7PartialTol = 1e-5;
constexpr double kC7MinOrder = 3.9;
constexpr double kC8Tol = 1e-10;        // times max(1, |value|)
constexpr double kC10MaxShift = 0.01;

fs::path g_artifacts = "acceptance_artifacts";

Scenario fixture(const std::string& name, const std::vector<std::string>& overrides = {}) {
    return load_scenario(fs::path(PPC_SCENARIO_DIR) / (name + ".cfg"), overrides);
}

struct Timed {
    RunResult result;
    double seconds = 0.0;
};

Timed timed_run(const Scenario& sc) {
    const auto t0 = std::chrono::steady_clock::now();
    Timed out{run(sc), 0.0};
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void save_trace(const Scenario& sc, const RunResult& res) {
    std::ofstream os(g_artifacts / (sc.label + "_trace.csv"));
    res.trace.write_csv(os);
}

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

int g_failures = 0;

void report(int id, const std::string& title, Verdict& v, const std::string& summary) {
    if (!v.pass) ++g_failures;
    std::cout << "C" << id << ' ' << (v.pass ? "PASS" : "FAIL") << "  " << title << "  [" << summary;
    if (!v.pass) std::cout << " | " << v.detail.str();
    std::cout << "]" << std::endl;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool completed(const RunResult& r) { return r.trace.status == RunStatus::Completed; }

// Runs from criteria 1-3 feed criteria 4 and 6.
std::vector<std::pair<Scenario, RunResult>> g_runs;

// ---- 1 -------------------------------------------------------------------------

void criterion1() {
    Verdict v;
    std::string summary;
    for (double e0 : {0.5, 5.0, 50.0}) {
        auto sc = fixture("fig1a", {"x0[0]=" + fmt(e0)});
        sc.label = "c1_e0_" + fmt(e0);
        const auto t = timed_run(sc);
        const auto& res = t.result;
        v.require(completed(res), sc.label + " not completed");
        std::size_t bad = 0;
        for (const auto& row : res.trace.rows) {
            if (!(std::abs(row.e) < row.p && row.p < row.P)) ++bad;
        }
        v.require(bad == 0, sc.label + ": " + std::to_string(bad) + " rows break |e|<p<P");
        v.require(t.seconds < kC1MaxRuntime, sc.label + " runtime " + fmt(t.seconds) + " s");
        summary += "e0=" + fmt(e0) + " rows=" + std::to_string(res.trace.rows.size()) + " t=" + fmt(t.seconds) + "s ";
        save_trace(sc, res);
        g_runs.emplace_back(sc, res);
    }
    report(1, "first-order ordering |e|<p<P at every step", v, summary);
}

// ---- 2 -------------------------------------------------------------------------

void criterion2() {
    Verdict v;
    std::string summary;
    for (const char* name : {"fig3a", "fig4a"}) {
        const auto sc = fixture(name);
        const auto t = timed_run(sc);
        const auto& res = t.result;
        v.require(completed(res), sc.label + " not completed");
        std::size_t bad = 0;
        for (const auto& row : res.trace.rows) {
            if (!(std::abs(row.e) < row.P)) ++bad;
        }
        v.require(bad == 0, sc.label + ": " + std::to_string(bad) + " rows with |e|>=P");
        v.require(res.metrics.steady_err <= kC2SteadyBound, sc.label + " steady_err " + fmt(res.metrics.steady_err));
        v.require(t.seconds < kC2MaxRuntime, sc.label + " runtime " + fmt(t.seconds) + " s");
        summary += sc.label + ": steady_err=" + fmt(res.metrics.steady_err) + " t=" + fmt(t.seconds) + "s ";
        save_trace(sc, res);
        g_runs.emplace_back(sc, res);
    }
    report(2, "mass-spring-damper x1(0)=+-0.6 stays in funnel, steady_err<=0.0105", v, summary);
}

// ---- 3 -------------------------------------------------------------------------

void criterion3() {
    Verdict v;
    const std::vector<double> grid{0.5, 1.0, 2.0, 3.0, 5.0};
    const std::vector<double> baseline_deltas{3.0, 5.0};
    std::ofstream os(g_artifacts / "second_order_dichotomy_sweep.csv");
    os << "x1_0,controller,delta,status,singular_time,converge_time,peak_v,max_zeta,delta_max\n";
    int witnesses = 0, self_ok = 0;
    auto record = [&](const Scenario& sc, const RunResult& res, double x1, const std::string& who, double delta) {
        os << fmt(x1) << ',' << who << ',' << (std::isnan(delta) ? std::string("adaptive") : fmt(delta)) << ','
           << to_string(res.trace.status) << ',' << fmt(res.trace.singular_time) << ','
           << fmt(res.metrics.converge_time) << ',' << fmt(res.metrics.peak_v) << ',' << fmt(res.metrics.max_zeta)
           << ',' << fmt(res.metrics.delta_max) << '\n';
        (void)sc;
    };
    for (double x1 : grid) {
        auto self = fixture("fig2a", {"x0[0]=" + fmt(x1)});
        self.label = "c3_self_x" + fmt(x1);
        const auto rs = run(self);
        record(self, rs, x1, "self_tuning", std::nan(""));
        v.require(completed(rs), self.label + " " + to_string(rs.trace.status));
        if (completed(rs)) {
            ++self_ok;
            g_runs.emplace_back(self, rs);
        }
        for (double d : baseline_deltas) {
            auto base = fixture("fig2a", {"x0[0]=" + fmt(x1), "decay={\"law\":\"fixed\",\"delta\":" + fmt(d) + "}"});
            base.label = "c3_fixed" + fmt(d) + "_x" + fmt(x1);
            const auto rb = run(base);
            record(base, rb, x1, "fixed", d);
            if (completed(rb)) {
                g_runs.emplace_back(base, rb);
            } else if (completed(rs)) {
                ++witnesses;
            }
        }
    }
    v.require(witnesses > 0, "no grid point with self-tuning completed and baseline singular");
    report(3, "second-order dichotomy: self-tuning completes where fixed delta>=3 is singular", v,
           "self-tuning completed " + std::to_string(self_ok) + "/" + std::to_string(grid.size()) +
               ", witnesses=" + std::to_string(witnesses) + ", artifact second_order_dichotomy_sweep.csv");
}

// ---- 4 -------------------------------------------------------------------------

bool row_finite(const TraceRow& r, bool first) {
    auto ok = [](double x) { return std::isfinite(x); };
    // The envelope starts at +infinity by construction (Psi(0) = 1).
    bool f = ok(r.t) && ok(r.e) && (first || ok(r.P)) && ok(r.p) && ok(r.psi) && ok(r.zeta) && ok(r.delta) &&
             ok(r.delta_dot) && ok(r.v) && ok(r.u) && ok(r.xi) && ok(r.V_n);
    for (double x : r.x) f = f && ok(x);
    for (double x : r.theta_hat) f = f && ok(x);
    return f;
}

void criterion4() {
    Verdict v;
    double max_delta = 0.0;
    std::size_t checked = 0;
    for (const auto& [sc, res] : g_runs) {
        if (!completed(res)) continue;
        ++checked;
        for (std::size_t i = 0; i < res.trace.rows.size(); ++i) {
            const auto& row = res.trace.rows[i];
            if (row.t > 0.0 && !(row.delta > 0.0)) {
                v.require(false, sc.label + ": delta<=0 at t=" + fmt(row.t));
                break;
            }
            if (!row_finite(row, i == 0)) {
                v.require(false, sc.label + ": non-finite value at t=" + fmt(row.t));
                break;
            }
            max_delta = std::max(max_delta, row.delta);
        }
    }
    report(4, "decay rate positive and bounded, traces finite", v,
           std::to_string(checked) + " completed runs, max delta=" + fmt(max_delta));
}

// ---- 5 -------------------------------------------------------------------------

void criterion5() {
    Verdict v;
    std::string summary;
    for (double e0 : {0.5, 5.0, 50.0}) {
        auto sc = fixture("fig1a", {"x0[0]=" + fmt(e0)});
        const auto res = run(sc);
        double worst = 0.0;
        std::size_t bad = 0;
        const auto& rows = res.trace.rows;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double rise = rows[i].V_n - rows[i - 1].V_n;
            const double tol = kC5Tol * std::max(1.0, rows[i - 1].V_n);
            worst = std::max(worst, rise / std::max(1.0, rows[i - 1].V_n));
            if (rise > tol) ++bad;
        }
        v.require(completed(res), "e0=" + fmt(e0) + " not completed");
        v.require(bad == 0, "e0=" + fmt(e0) + ": " + std::to_string(bad) + " increasing steps");
        summary += "e0=" + fmt(e0) + " worst rel rise=" + fmt(worst) + " ";
    }
    report(5, "Lyapunov function non-increasing, no saturation or disturbance", v, summary);
}

// ---- 6 -------------------------------------------------------------------------

void criterion6() {
    Verdict v;
    std::vector<std::pair<Scenario, RunResult>> all = g_runs;
    for (const char* name : {"fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b"}) {
        const auto sc = fixture(name);
        const auto res = run(sc);
        save_trace(sc, res);
        all.emplace_back(sc, res);
    }
    // Saturated runs that end singular still count.
    for (double x1 : {10.0, 20.0}) {
        auto sc = fixture("fig2a", {"x0[0]=" + fmt(x1)});
        sc.label = "c6_x" + fmt(x1);
        all.emplace_back(sc, run(sc));
    }
    double worst = 0.0;
    std::size_t rows = 0;
    for (const auto& [sc, res] : all) {
        for (const auto& row : res.trace.rows) {
            double n2 = 0.0;
            for (double x : row.theta_hat) n2 += x * x;
            const double excess = std::sqrt(n2) - sc.controller.theta_max;
            worst = std::max(worst, excess);
            ++rows;
        }
    }
    v.require(worst <= kC6Tol, "norm exceeds theta_max by " + fmt(worst));
    report(6, "estimate stays in the projection ball", v,
           std::to_string(all.size()) + " runs, " + std::to_string(rows) + " rows, max excess=" + fmt(worst));
}

// ---- 7 -------------------------------------------------------------------------

void criterion7() {
    Verdict v;
    // mu against a central difference of S
    double worst_mu = 0.0;
    for (double z = -0.95; z <= 0.95; z += 0.05) {
        const double h = 1e-6;
        const double fd = (S_map(z + h) - S_map(z - h)) / (2 * h);
        worst_mu = std::max(worst_mu, rel_err(mu_weight(z), fd, 0.0));
    }
    v.require(worst_mu <= kC7MuTol, "mu vs dS/dzeta rel " + fmt(worst_mu));

    // beta', beta'' against differences of beta along a smooth decay-rate path
    PerfSpec spec;
    spec.psi_inf = 0.05;
    double worst_beta = 0.0;
    for (double t : {0.05, 0.3, 1.0, 1.8, 2.5}) {
        const double d0 = 0.4, d1 = 0.7, d2 = -0.1;
        auto state = [&](double s) {
            return FunnelState{s, d0 + d1 * s + 0.5 * d2 * s * s, d1 + d2 * s, d2};
        };
        auto beta_at = [&](double s) { return beta_derivatives(state(s), spec, 0)[0]; };
        const auto b = beta_derivatives(state(t), spec, 2);
        const double fd1 = fd::ridders(beta_at, t, 1e-2);
        const double fd2 = fd::ridders2(beta_at, t, 1e-2);
        worst_beta = std::max({worst_beta, rel_err(b[1], fd1, 1e-3), rel_err(b[2], fd2, 1e-3)});
    }
    v.require(worst_beta <= kC7BetaTol, "beta derivatives rel " + fmt(worst_beta));

    // controller partials at random states
    std::mt19937_64 rng(20241014);
    double worst_partial = 0.0;
    for (int n : {1, 2}) worst_partial = std::max(worst_partial, worst_partial_error(rng, n, 100, spec));
    v.require(worst_partial <= kC7PartialTol, "controller partial rel " + fmt(worst_partial));

    // RK4 order on y' = -y over [0, 1]
    const OdeSystem decay = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd { return -y; };
    auto global_error = [&](int steps) {
        Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.0);
        const double h = 1.0 / steps;
        for (int i = 0; i < steps; ++i) y = rk4_step(y, i * h, h, decay);
        return std::abs(y[0] - std::exp(-1.0));
    };
    const double order = std::log2(global_error(20) / global_error(40));
    v.require(order >= kC7MinOrder, "RK4 observed order " + fmt(order));

    report(7, "derivatives against finite differences, RK4 order", v,
           "mu rel=" + fmt(worst_mu) + " beta rel=" + fmt(worst_beta) + " partial rel=" + fmt(worst_partial) +
               " rk4 order=" + fmt(order));
}

// ---- 8 -------------------------------------------------------------------------

void criterion8() {
    Verdict v;
    std::mt19937_64 rng(8);
    const int n = 2, r = 2;
    PerfSpec spec;
    spec.psi_inf = 0.05;
    const auto regs = test_regressors(n);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto cfg = random_controller(rng, n, r, ControllerVariant::TableII);
        const auto in = random_inputs(rng, n, r, spec.psi_inf);
        const auto out = virtual_controls(in, cfg, regs, spec);
        oracle::Input oi{in.x[0], in.x[1], {in.theta_hat[0], in.theta_hat[1]}, {in.yd[0], in.yd[1], in.yd[2]},
                         {in.beta[0], in.beta[1], in.beta[2]}, in.xi, cfg.gains[0], cfg.gains[1], cfg.lambda,
                         spec.psi_inf, {cfg.gamma(0, 0), cfg.gamma(0, 1), cfg.gamma(1, 0), cfg.gamma(1, 1)}};
        const auto ref = oracle::table2_n2(oi);
        for (auto [a, b] : {std::pair{out.v, ref.v}, std::pair{out.z[0], ref.z1}, std::pair{out.z[1], ref.z2},
                            std::pair{out.alphas[0], ref.alpha1}, std::pair{out.tau_n[0], ref.tau0},
                            std::pair{out.tau_n[1], ref.tau1}}) {
            worst = std::max(worst, rel_err(a, b));
        }
    }
    v.require(worst <= kC8Tol, "max rel deviation " + fmt(worst));
    report(8, "recursive evaluator matches hand-coded second-order law", v,
           "1000 tuples, max rel deviation=" + fmt(worst));
}

// ---- 9 -------------------------------------------------------------------------

void criterion9() {
    Verdict v;
    std::string summary;
    for (double e0 : {5.0, 50.0}) {
        const std::string x = "x0[0]=" + fmt(e0);
        const auto a = run(fixture("fig1a", {x}));
        const auto b = run(fixture("fig1b", {x}));
        v.require(completed(a) && completed(b), "e0=" + fmt(e0) + " run not completed");
        v.require(a.metrics.peak_v <= b.metrics.peak_v,
                  "e0=" + fmt(e0) + " peak_v " + fmt(a.metrics.peak_v) + " > " + fmt(b.metrics.peak_v));
        summary += "e0=" + fmt(e0) + " peak_v " + fmt(a.metrics.peak_v) + " vs " + fmt(b.metrics.peak_v) + "; ";
    }
    for (double e0 : {0.5}) {
        const std::string x = "x0[0]=" + fmt(e0);
        const auto a = run(fixture("fig1a", {x}));
        const auto b = run(fixture("fig1b", {x}));
        v.require(completed(a) && completed(b), "e0=" + fmt(e0) + " run not completed");
        v.require(a.metrics.converge_time <= b.metrics.converge_time,
                  "e0=" + fmt(e0) + " converge_time " + fmt(a.metrics.converge_time) + " > " +
                      fmt(b.metrics.converge_time));
        summary += "e0=" + fmt(e0) + " converge_time " + fmt(a.metrics.converge_time) + " vs " +
                   fmt(b.metrics.converge_time);
    }
    report(9, "self-tuning vs fixed 0.01: lower peak input, shorter convergence", v, summary);
}

// ---- 10 ------------------------------------------------------------------------

std::string csv_of(const RunResult& r) {
    std::ostringstream os;
    r.trace.write_csv(os);
    return os.str();
}

void criterion10() {
    Verdict v;
    std::string summary;
    for (const char* name : {"fig3a", "fig4a"}) {
        const auto sc = fixture(name);
        const auto r1 = run(sc);
        const auto r2 = run(sc);
        v.require(csv_of(r1) == csv_of(r2), std::string(name) + " repeated traces differ");
        const auto half = run(fixture(name, {"sim.step=5e-4"}));
        const double c1 = r1.metrics.converge_time, c2 = half.metrics.converge_time;
        const double shift = (c1 == c2) ? 0.0 : std::abs(c2 - c1) / std::max(std::abs(c1), 1e-12);
        v.require(std::isfinite(c1) && std::isfinite(c2), std::string(name) + " converge_time undefined");
        v.require(shift < kC10MaxShift, std::string(name) + " converge_time shift " + fmt(100 * shift) + "%");
        summary += std::string(name) + ": converge_time " + fmt(c1) + " -> " + fmt(c2) + " (" + fmt(100 * shift) +
                   "%) ";
    }
    report(10, "bit-identical repeats, converge_time stable when h halves", v, summary);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_artifacts = argv[1];
    fs::create_directories(g_artifacts);
    const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9, criterion10};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            ++g_failures;
            std::cout << "C" << (i + 1) << " FAIL  exception: " << e.what() << std::endl;
        }
    }
    std::cout << (g_failures == 0 ? "ALL PASS" : std::to_string(g_failures) + " criteria failed") << std::endl;
    return g_failures == 0 ? 0 : 1;
}
