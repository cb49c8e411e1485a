#include "ppc/errors.hpp"
#include "ppc/scenario_io.hpp"
#include "ppc/sim_engine.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSingular = 3;

struct Common {
    fs::path out = ".";
    std::optional<double> step;
    std::optional<double> duration;
    std::vector<std::string> sets;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out, "Output directory")->capture_default_str();
        cmd->add_option("--step", step, "Override sim.step");
        cmd->add_option("--duration", duration, "Override sim.duration");
        cmd->add_option("--set", sets, "Override a field, key=value with a dotted path (repeatable)");
    }

    /// --step and --duration are folded into the override list so the metadata echoes them.
    std::vector<std::string> overrides() const {
        auto all = sets;
        auto fmt = [](double v) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        if (step) all.push_back("sim.step=" + fmt(*step));
        if (duration) all.push_back("sim.duration=" + fmt(*duration));
        return all;
    }
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error(path.string() + ": cannot write");
    os << text;
}

void write_trace(const fs::path& path, const ppc::Trace& trace) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error(path.string() + ": cannot write");
    trace.write_csv(os);
}

/// Writes <label>_trace.csv, <label>_metrics.json and <label>_config.cfg.
void emit_run(const fs::path& dir, const ppc::Scenario& sc, const ppc::RunResult& res,
              const std::vector<std::string>& overrides) {
    write_trace(dir / (sc.label + "_trace.csv"), res.trace);
    write_text(dir / (sc.label + "_metrics.json"), ppc::run_summary(sc, res, overrides).dump(2) + "\n");
    write_text(dir / (sc.label + "_config.cfg"), ppc::scenario_to_json(sc).dump(2) + "\n");
}

void report(const ppc::Scenario& sc, const ppc::RunResult& res) {
    const auto& m = res.metrics;
    std::cout << sc.label << ": " << ppc::to_string(res.trace.status);
    if (res.trace.status == ppc::RunStatus::Singular) std::cout << " at t=" << res.trace.singular_time;
    std::cout << "  converge_time=" << m.converge_time << " peak_v=" << m.peak_v << " peak_u=" << m.peak_u
              << " max_zeta=" << m.max_zeta << " steady_err=" << m.steady_err << " delta_max=" << m.delta_max
              << '\n';
}

int cmd_run(const std::string& scenario, const Common& c) {
    const auto overrides = c.overrides();
    const auto sc = ppc::load_scenario(scenario, overrides);
    fs::create_directories(c.out);
    const auto res = ppc::run(sc);
    emit_run(c.out, sc, res, overrides);
    report(sc, res);
    if (res.trace.status == ppc::RunStatus::Singular) {
        std::cerr << "singular: " << res.trace.message << '\n';
        return kExitSingular;
    }
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& scenarios, const Common& c) {
    const auto overrides = c.overrides();
    auto a = ppc::load_scenario(scenarios[0], overrides);
    auto b = ppc::load_scenario(scenarios[1], overrides);
    if (a.label == b.label) {
        a.label += "_A";
        b.label += "_B";
    }
    ppc::check_comparable(a, b);
    fs::create_directories(c.out);
    const auto ra = ppc::run(a);
    const auto rb = ppc::run(b);
    emit_run(c.out, a, ra, overrides);
    emit_run(c.out, b, rb, overrides);
    auto summary = ppc::comparison_to_json(ppc::compare(ra, rb));
    summary["a"]["label"] = a.label;
    summary["b"]["label"] = b.label;
    summary["overrides"] = overrides;
    write_text(c.out / (a.label + "_vs_" + b.label + "_compare.json"), summary.dump(2) + "\n");
    report(a, ra);
    report(b, rb);
    const bool singular = ra.trace.status == ppc::RunStatus::Singular || rb.trace.status == ppc::RunStatus::Singular;
    return singular ? kExitSingular : kExitOk;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct PointResult {
    std::string label;
    std::string status = "config_error";
    double singular_time = std::nan("");
    ppc::Metrics metrics;
    std::string message;
};

int cmd_sweep(const std::string& scenario, const std::vector<std::string>& grid_specs, bool traces, int jobs,
              const Common& c) {
    const auto overrides = c.overrides();
    const auto base_doc = [&] {
        auto doc = ppc::read_json_file(scenario);
        for (const auto& o : overrides) ppc::apply_override(doc, o);
        return doc;
    }();
    const auto base = ppc::scenario_from_json(base_doc);
    const auto axes = ppc::parse_grid(grid_specs);
    const auto points = ppc::grid_points(axes);
    fs::create_directories(c.out);

    std::vector<PointResult> results(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            auto& pr = results[i];
            pr.label = base.label + "_p" + std::to_string(i);
            try {
                auto doc = base_doc;
                for (std::size_t k = 0; k < axes.size(); ++k) {
                    ppc::apply_override(doc, axes[k].key + "=" + points[i][k].dump());
                }
                doc["label"] = pr.label;
                const auto sc = ppc::scenario_from_json(doc);
                const auto res = ppc::run(sc);
                pr.status = ppc::to_string(res.trace.status);
                pr.singular_time = res.trace.singular_time;
                pr.metrics = res.metrics;
                pr.message = res.trace.message;
                if (traces) {
                    auto point_overrides = overrides;
                    for (std::size_t k = 0; k < axes.size(); ++k) {
                        point_overrides.push_back(axes[k].key + "=" + points[i][k].dump());
                    }
                    emit_run(c.out, sc, res, point_overrides);
                }
            } catch (const ppc::ConfigError& e) {
                pr.status = "config_error";
                pr.message = e.what();
            } catch (const std::exception& e) {
                pr.status = "error";
                pr.message = e.what();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(points.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ofstream os(c.out / (base.label + "_sweep.csv"));
    if (!os) throw std::runtime_error("cannot write sweep aggregate");
    os << "point,label";
    for (const auto& a : axes) os << ',' << csv_field(a.key);
    os << ",status,singular_time,converge_time,peak_v,peak_u,max_zeta,violated,steady_err,delta_max,message\n";
    int failures = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& pr = results[i];
        const auto& m = pr.metrics;
        const bool ran = pr.status == "completed" || pr.status == "singular";
        os << i << ',' << csv_field(pr.label);
        for (const auto& v : points[i]) os << ',' << csv_field(v.is_string() ? v.get<std::string>() : v.dump());
        os << ',' << pr.status << ',' << csv_number(pr.singular_time);
        for (double v : {m.converge_time, m.peak_v, m.peak_u, m.max_zeta}) os << ',' << (ran ? csv_number(v) : "nan");
        os << ',' << (ran ? (m.violated ? "true" : "false") : "nan");
        for (double v : {m.steady_err, m.delta_max}) os << ',' << (ran ? csv_number(v) : "nan");
        os << ',' << csv_field(pr.message) << '\n';
        if (pr.status != "completed") ++failures;
    }
    std::cout << base.label << ": " << points.size() << " points, " << failures << " not completed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prescribed-performance adaptive backstepping simulator"};
    app.require_subcommand(1);

    Common run_opts, cmp_opts, sweep_opts;
    std::string run_scenario, sweep_scenario;
    std::vector<std::string> cmp_scenarios, grid;
    bool traces = false;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    auto* run = app.add_subcommand("run", "Simulate one scenario");
    run->add_option("--scenario", run_scenario, "Scenario file")->required();
    run_opts.attach(run);

    auto* cmp = app.add_subcommand("compare", "Simulate two scenarios on the same plant side by side");
    cmp->add_option("--scenario", cmp_scenarios, "Scenario files A and B")->required()->expected(2);
    cmp_opts.attach(cmp);

    auto* sweep = app.add_subcommand("sweep", "Simulate every point of a parameter grid");
    sweep->add_option("--scenario", sweep_scenario, "Base scenario file")->required();
    sweep->add_option("--grid", grid, "Axis key=v1,v2,... (repeatable, cartesian product)");
    sweep->add_flag("--traces", traces, "Also write per-point traces and summaries");
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep_opts.attach(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_scenario, run_opts);
        if (*cmp) return cmd_compare(cmp_scenarios, cmp_opts);
        if (*sweep) return cmd_sweep(sweep_scenario, grid, traces, jobs, sweep_opts);
    } catch (const ppc::ConfigError& e) {
        for (const auto& issue : e.issues()) std::cerr << "config error: " << issue << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return kExitOther;
}
