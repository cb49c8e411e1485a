#include "ppc/scenario_io.hpp"

#include "ppc/errors.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace ppc {

namespace {

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

std::string index_path(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

/// Collects every problem instead of stopping at the first.
class Reader {
public:
    std::vector<std::string> issues;

    void fail(const std::string& path, const std::string& why) { issues.push_back(path + ": " + why); }

    bool object(const Json& j, const std::string& path) {
        if (j.is_object()) return true;
        fail(path, "expected an object");
        return false;
    }

    void allow(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
        const std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto& [k, _] : obj.items()) {
            if (!ok.contains(k)) fail(join_path(path, k), "unknown field");
        }
    }

    std::optional<double> number(const Json& j, const std::string& path) {
        if (j.is_number()) return j.get<double>();
        fail(path, "expected a number");
        return std::nullopt;
    }

    void number(const Json& obj, const char* key, const std::string& path, double& out) {
        if (!obj.contains(key)) return;
        if (auto v = number(obj[key], join_path(path, key))) out = *v;
    }

    void integer(const Json& obj, const char* key, const std::string& path, int& out) {
        if (!obj.contains(key)) return;
        const auto& j = obj[key];
        if (j.is_number_integer()) {
            out = j.get<int>();
        } else {
            fail(join_path(path, key), "expected an integer");
        }
    }

    std::optional<std::string> string(const Json& obj, const char* key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const auto& j = obj[key];
        if (j.is_string()) return j.get<std::string>();
        fail(join_path(path, key), "expected a string");
        return std::nullopt;
    }

    std::optional<std::vector<double>> vector(const Json& j, const std::string& path) {
        if (!j.is_array()) {
            fail(path, "expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        bool ok = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (auto v = number(j[i], index_path(path, i))) {
                out.push_back(*v);
            } else {
                ok = false;
            }
        }
        if (!ok) return std::nullopt;
        return out;
    }

    template <class Fn>
    void guarded(Fn&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            issues.insert(issues.end(), e.issues().begin(), e.issues().end());
        }
    }
};

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// ---- plant -------------------------------------------------------------------

Polynomial read_polynomial(Reader& rd, const Json& j, const std::string& path) {
    Polynomial poly;
    if (!j.is_array()) {
        rd.fail(path, "expected an array of monomials");
        return poly;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string mp = index_path(path, i);
        const auto& mj = j[i];
        if (!rd.object(mj, mp)) continue;
        rd.allow(mj, mp, {"coeff", "powers"});
        Monomial m;
        rd.number(mj, "coeff", mp, m.coeff);
        if (mj.contains("powers")) {
            const auto& pj = mj["powers"];
            if (!pj.is_array()) {
                rd.fail(join_path(mp, "powers"), "expected an array of integers");
            } else {
                for (std::size_t k = 0; k < pj.size(); ++k) {
                    if (pj[k].is_number_integer()) {
                        m.powers.push_back(pj[k].get<int>());
                    } else {
                        rd.fail(index_path(join_path(mp, "powers"), k), "expected an integer");
                    }
                }
            }
        }
        poly.push_back(std::move(m));
    }
    return poly;
}

std::vector<StageRegressor> read_regressors(Reader& rd, const Json& j, const std::string& path) {
    std::vector<StageRegressor> out;
    if (!j.is_array()) {
        rd.fail(path, "expected one array of components per stage");
        return out;
    }
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string sp = index_path(path, k);
        StageRegressor stage;
        if (!j[k].is_array()) {
            rd.fail(sp, "expected an array of components");
        } else {
            for (std::size_t c = 0; c < j[k].size(); ++c) {
                stage.push_back(read_polynomial(rd, j[k][c], index_path(sp, c)));
            }
        }
        out.push_back(std::move(stage));
    }
    return out;
}

Disturbance read_disturbance(Reader& rd, const Json& j, const std::string& path) {
    Disturbance d;
    if (!rd.object(j, path)) return d;
    const auto kind = rd.string(j, "kind", path).value_or("zero");
    if (kind == "zero") {
        rd.allow(j, path, {"kind"});
    } else if (kind == "constant") {
        rd.allow(j, path, {"kind", "value"});
        d.kind = Disturbance::Kind::Constant;
        rd.number(j, "value", path, d.value);
    } else if (kind == "sine") {
        rd.allow(j, path, {"kind", "amplitude", "frequency", "phase"});
        d.kind = Disturbance::Kind::Sine;
        rd.number(j, "amplitude", path, d.amplitude);
        rd.number(j, "frequency", path, d.frequency);
        rd.number(j, "phase", path, d.phase);
    } else {
        rd.fail(join_path(path, "kind"), "unknown kind '" + kind + "' (expected zero|constant|sine)");
    }
    return d;
}

PlantModel read_plant(Reader& rd, const Json& doc) {
    PlantModel m;
    if (!doc.contains("plant")) {
        rd.fail("plant", "required");
        return m;
    }
    Json j = doc["plant"];
    if (j.is_string()) j = Json{{"benchmark", j}};
    if (!rd.object(j, "plant")) return m;
    rd.allow(j, "plant",
             {"benchmark", "name", "order", "theta", "regressors", "disturbances", "u_bar", "theta_max"});

    if (auto name = rd.string(j, "benchmark", "plant")) {
        rd.guarded([&] { m = benchmark(*name); });
    } else {
        m.name = "custom";
        for (const char* key : {"order", "theta", "regressors"}) {
            if (!j.contains(key)) rd.fail(join_path("plant", key), "required without plant.benchmark");
        }
    }
    if (auto name = rd.string(j, "name", "plant")) m.name = *name;
    const int order_before = m.n;
    rd.integer(j, "order", "plant", m.n);
    if (j.contains("theta")) {
        if (auto v = rd.vector(j["theta"], "plant.theta")) m.theta_true = to_eigen(*v);
    }
    if (j.contains("regressors")) m.regressors = read_regressors(rd, j["regressors"], "plant.regressors");
    if (j.contains("disturbances")) {
        const auto& dj = j["disturbances"];
        if (!dj.is_array()) {
            rd.fail("plant.disturbances", "expected one entry per stage");
        } else {
            m.disturbances.clear();
            for (std::size_t k = 0; k < dj.size(); ++k) {
                m.disturbances.push_back(read_disturbance(rd, dj[k], index_path("plant.disturbances", k)));
            }
        }
    } else if (m.n != order_before || m.disturbances.empty()) {
        m.disturbances.assign(static_cast<std::size_t>(std::max(m.n, 0)), Disturbance::zero());
    }
    if (j.contains("u_bar")) {
        if (j["u_bar"].is_null()) {
            m.saturation.u_bar = std::numeric_limits<double>::infinity();
        } else if (auto v = rd.number(j["u_bar"], "plant.u_bar")) {
            m.saturation.u_bar = *v;
        }
    }
    rd.number(j, "theta_max", "plant", m.theta_max);
    return m;
}

Json polynomial_json(const Polynomial& p) {
    Json out = Json::array();
    for (const auto& m : p) out.push_back(Json{{"coeff", m.coeff}, {"powers", m.powers}});
    return out;
}

Json disturbance_json(const Disturbance& d) {
    switch (d.kind) {
        case Disturbance::Kind::Zero: return Json{{"kind", "zero"}};
        case Disturbance::Kind::Constant: return Json{{"kind", "constant"}, {"value", d.value}};
        case Disturbance::Kind::Sine:
            return Json{{"kind", "sine"}, {"amplitude", d.amplitude}, {"frequency", d.frequency}, {"phase", d.phase}};
    }
    return Json{{"kind", "zero"}};
}

Json plant_json(const PlantModel& m) {
    Json regs = Json::array();
    for (const auto& stage : m.regressors) {
        Json comps = Json::array();
        for (const auto& c : stage) comps.push_back(polynomial_json(c));
        regs.push_back(std::move(comps));
    }
    Json dist = Json::array();
    for (const auto& d : m.disturbances) dist.push_back(disturbance_json(d));
    Json out{{"name", m.name}, {"order", m.n}, {"theta", to_std(m.theta_true)}, {"regressors", regs},
             {"disturbances", dist}};
    out["u_bar"] = m.saturation.enabled() ? Json(m.saturation.u_bar) : Json(nullptr);
    out["theta_max"] = m.theta_max;
    return out;
}

// ---- controller ----------------------------------------------------------------

ControllerConfig read_controller(Reader& rd, const Json& doc, const PlantModel& plant) {
    ControllerConfig c;
    const int r = std::max(plant.r(), 0);
    c.variant = plant.saturation.enabled() ? ControllerVariant::TableII : ControllerVariant::TableI;
    c.gamma = Eigen::MatrixXd::Identity(r, r);
    c.theta_max = plant.theta_max;
    c.theta_hat0 = Eigen::VectorXd::Zero(r);
    if (!doc.contains("controller")) {
        rd.fail("controller", "required");
        return c;
    }
    const Json& j = doc["controller"];
    if (!rd.object(j, "controller")) return c;
    rd.allow(j, "controller", {"variant", "gains", "gamma", "theta_max", "lambda", "theta_hat0"});
    if (auto v = rd.string(j, "variant", "controller")) {
        rd.guarded([&] { c.variant = controller_variant_from_string(*v); });
    }
    if (!j.contains("gains")) {
        rd.fail("controller.gains", "required");
    } else if (auto g = rd.vector(j["gains"], "controller.gains")) {
        c.gains = *g;
    }
    if (j.contains("gamma")) {
        const auto& gj = j["gamma"];
        if (gj.is_number()) {
            c.gamma = gj.get<double>() * Eigen::MatrixXd::Identity(r, r);
        } else if (gj.is_array()) {
            const auto rows = static_cast<Eigen::Index>(gj.size());
            Eigen::MatrixXd g(rows, rows);
            bool ok = true;
            for (Eigen::Index i = 0; i < rows && ok; ++i) {
                const std::string rp = index_path("controller.gamma", static_cast<std::size_t>(i));
                auto row = rd.vector(gj[static_cast<std::size_t>(i)], rp);
                if (!row || static_cast<Eigen::Index>(row->size()) != rows) {
                    if (row) rd.fail(rp, "expected " + std::to_string(rows) + " entries");
                    ok = false;
                    break;
                }
                for (Eigen::Index k = 0; k < rows; ++k) g(i, k) = (*row)[static_cast<std::size_t>(k)];
            }
            if (ok) c.gamma = g;
        } else {
            rd.fail("controller.gamma", "expected a number or a square matrix");
        }
    }
    rd.number(j, "theta_max", "controller", c.theta_max);
    rd.number(j, "lambda", "controller", c.lambda);
    if (j.contains("theta_hat0")) {
        if (auto v = rd.vector(j["theta_hat0"], "controller.theta_hat0")) c.theta_hat0 = to_eigen(*v);
    }
    return c;
}

Json controller_json(const ControllerConfig& c) {
    Json gamma = Json::array();
    for (Eigen::Index i = 0; i < c.gamma.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < c.gamma.cols(); ++k) row.push_back(c.gamma(i, k));
        gamma.push_back(std::move(row));
    }
    return Json{{"variant", to_string(c.variant)}, {"gains", c.gains},        {"gamma", gamma},
                {"theta_max", c.theta_max},        {"lambda", c.lambda},      {"theta_hat0", to_std(c.theta_hat0)}};
}

// ---- remaining sections -----------------------------------------------------------

PerfSpec read_perf(Reader& rd, const Json& doc) {
    PerfSpec p;
    if (!doc.contains("perf")) return p;
    const Json& j = doc["perf"];
    if (!rd.object(j, "perf")) return p;
    rd.allow(j, "perf", {"psi_inf", "rho1", "rho2", "eps0"});
    rd.number(j, "psi_inf", "perf", p.psi_inf);
    rd.number(j, "rho1", "perf", p.rho1);
    rd.number(j, "rho2", "perf", p.rho2);
    rd.number(j, "eps0", "perf", p.eps0);
    return p;
}

DecayLawKind read_decay(Reader& rd, const Json& doc) {
    DecayLawKind d;
    if (!doc.contains("decay")) return d;
    const Json& j = doc["decay"];
    if (!rd.object(j, "decay")) return d;
    rd.allow(j, "decay", {"law", "delta"});
    if (auto law = rd.string(j, "law", "decay")) rd.guarded([&] { d.law = decay_law_from_string(*law); });
    if (d.law == DecayLaw::Fixed) {
        if (!j.contains("delta")) rd.fail("decay.delta", "required for law fixed");
        rd.number(j, "delta", "decay", d.fixed_delta);
    } else if (j.contains("delta")) {
        rd.fail("decay.delta", "only valid for law fixed");
    }
    return d;
}

Json decay_json(const DecayLawKind& d) {
    Json out{{"law", to_string(d.law)}};
    if (d.law == DecayLaw::Fixed) out["delta"] = d.fixed_delta;
    return out;
}

Reference read_reference(Reader& rd, const Json& doc, const PlantModel& plant) {
    Reference y = plant.reference;
    if (!doc.contains("yd")) return y;
    const Json& j = doc["yd"];
    if (!rd.object(j, "yd")) return y;
    const auto kind = rd.string(j, "kind", "yd").value_or("constant");
    if (kind == "constant") {
        rd.allow(j, "yd", {"kind", "value"});
        y = Reference::constant(0.0);
        rd.number(j, "value", "yd", y.offset);
    } else if (kind == "cosine") {
        rd.allow(j, "yd", {"kind", "amplitude", "frequency", "offset", "phase"});
        y = Reference::cosine(0.0, 0.0, 0.0);
        rd.number(j, "amplitude", "yd", y.amplitude);
        rd.number(j, "frequency", "yd", y.frequency);
        rd.number(j, "offset", "yd", y.offset);
        rd.number(j, "phase", "yd", y.phase);
    } else {
        rd.fail("yd.kind", "unknown kind '" + kind + "' (expected constant|cosine)");
    }
    return y;
}

Json reference_json(const Reference& y) {
    if (y.kind == Reference::Kind::Constant) return Json{{"kind", "constant"}, {"value", y.offset}};
    return Json{{"kind", "cosine"}, {"amplitude", y.amplitude}, {"frequency", y.frequency},
                {"offset", y.offset}, {"phase", y.phase}};
}

SimConfig read_sim(Reader& rd, const Json& doc, ControllerVariant variant) {
    SimConfig s;
    s.integrator = variant == ControllerVariant::TableII ? Integrator::IMEX : Integrator::RK4;
    if (!doc.contains("sim")) return s;
    const Json& j = doc["sim"];
    if (!rd.object(j, "sim")) return s;
    rd.allow(j, "sim", {"step", "duration", "eps_guard", "record_stride", "integrator", "max_halvings"});
    rd.number(j, "step", "sim", s.step);
    rd.number(j, "duration", "sim", s.duration);
    rd.number(j, "eps_guard", "sim", s.eps_guard);
    rd.integer(j, "record_stride", "sim", s.record_stride);
    rd.integer(j, "max_halvings", "sim", s.max_halvings);
    if (auto name = rd.string(j, "integrator", "sim")) {
        try {
            s.integrator = integrator_from_string(*name);
        } catch (const std::exception& e) {
            rd.fail("sim.integrator", e.what());
        }
    }
    return s;
}

Json sim_json(const SimConfig& s) {
    return Json{{"step", s.step},
                {"duration", s.duration},
                {"eps_guard", s.eps_guard},
                {"record_stride", s.record_stride},
                {"integrator", to_string(s.integrator)},
                {"max_halvings", s.max_halvings}};
}

// ---- override paths -----------------------------------------------------------------

struct PathToken {
    std::string key;  // empty for an index token
    std::size_t index = 0;
};

std::vector<PathToken> parse_path(const std::string& path) {
    std::vector<PathToken> out;
    std::size_t i = 0;
    auto bad = [&](const std::string& why) { return ConfigError("override '" + path + "': " + why); };
    while (i < path.size()) {
        if (path[i] == '.') {
            if (out.empty() || i + 1 >= path.size()) throw bad("empty path segment");
            ++i;
        }
        if (path[i] == '[') {
            const auto close = path.find(']', i);
            if (close == std::string::npos || close == i + 1) throw bad("malformed index");
            const std::string digits = path.substr(i + 1, close - i - 1);
            if (digits.find_first_not_of("0123456789") != std::string::npos) throw bad("index must be a non-negative integer");
            out.push_back({"", std::stoul(digits)});
            i = close + 1;
            continue;
        }
        const auto end = path.find_first_of(".[", i);
        const std::string key = path.substr(i, end == std::string::npos ? std::string::npos : end - i);
        if (key.empty()) throw bad("empty path segment");
        out.push_back({key, 0});
        i = end == std::string::npos ? path.size() : end;
    }
    if (out.empty()) throw bad("empty path");
    return out;
}

}  // namespace

Scenario scenario_from_json(const Json& doc) {
    Reader rd;
    Scenario sc;
    if (!doc.is_object()) throw ConfigError("scenario: expected a JSON object");
    rd.allow(doc, "", {"label", "plant", "x0", "controller", "perf", "decay", "yd", "sim"});
    if (auto label = rd.string(doc, "label", "")) sc.label = *label;
    sc.plant = read_plant(rd, doc);
    if (!doc.contains("x0")) {
        rd.fail("x0", "required");
    } else if (auto v = rd.vector(doc["x0"], "x0")) {
        sc.x0 = to_eigen(*v);
    }
    sc.controller = read_controller(rd, doc, sc.plant);
    sc.perf = read_perf(rd, doc);
    sc.decay = read_decay(rd, doc);
    sc.yd = read_reference(rd, doc, sc.plant);
    sc.sim = read_sim(rd, doc, sc.controller.variant);
    if (sc.label.empty() || sc.label.find_first_of("/\\") != std::string::npos) {
        rd.fail("label", "must be a non-empty file-name-safe string");
    }
    if (rd.issues.empty()) rd.guarded([&] { sc.validate(); });
    if (!rd.issues.empty()) throw ConfigError(std::move(rd.issues));
    return sc;
}

Json scenario_to_json(const Scenario& sc) {
    return Json{{"label", sc.label},
                {"plant", plant_json(sc.plant)},
                {"x0", to_std(sc.x0)},
                {"controller", controller_json(sc.controller)},
                {"perf", Json{{"psi_inf", sc.perf.psi_inf}, {"rho1", sc.perf.rho1}, {"rho2", sc.perf.rho2},
                              {"eps0", sc.perf.eps0}}},
                {"decay", decay_json(sc.decay)},
                {"yd", reference_json(sc.yd)},
                {"sim", sim_json(sc.sim)}};
}

void apply_override(Json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    Json value;
    try {
        value = Json::parse(text);
    } catch (const Json::parse_error&) {
        value = text;
    }
    const auto tokens = parse_path(path);
    if (tokens.front().key == "plant" && doc.contains("plant") && doc["plant"].is_string()) {
        doc["plant"] = Json{{"benchmark", doc["plant"]}};
    }
    Json* node = &doc;
    for (const auto& tok : tokens) {
        if (!tok.key.empty()) {
            if (node->is_null()) *node = Json::object();
            if (!node->is_object()) throw ConfigError("override '" + path + "': '" + tok.key + "' is not inside an object");
            node = &(*node)[tok.key];
        } else {
            if (!node->is_array()) throw ConfigError("override '" + path + "': indexed value is not an array");
            if (tok.index >= node->size()) throw ConfigError("override '" + path + "': index out of range");
            node = &(*node)[tok.index];
        }
    }
    *node = std::move(value);
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    try {
        return Json::parse(in, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    Json doc = read_json_file(path);
    for (const auto& o : overrides) apply_override(doc, o);
    return scenario_from_json(doc);
}

bool operator==(const PlantModel& a, const PlantModel& b) {
    return a.name == b.name && a.n == b.n && a.theta_true == b.theta_true && a.regressors == b.regressors &&
           a.disturbances == b.disturbances && a.saturation.u_bar == b.saturation.u_bar &&
           a.theta_max == b.theta_max;
}

bool operator==(const ControllerConfig& a, const ControllerConfig& b) {
    return a.variant == b.variant && a.gains == b.gains && a.gamma.rows() == b.gamma.rows() &&
           a.gamma.cols() == b.gamma.cols() && a.gamma == b.gamma && a.theta_max == b.theta_max &&
           a.lambda == b.lambda && a.theta_hat0 == b.theta_hat0;
}

bool operator==(const Scenario& a, const Scenario& b) {
    const auto same_sim = a.sim.step == b.sim.step && a.sim.duration == b.sim.duration &&
                          a.sim.eps_guard == b.sim.eps_guard && a.sim.record_stride == b.sim.record_stride &&
                          a.sim.integrator == b.sim.integrator && a.sim.max_halvings == b.sim.max_halvings;
    const auto same_perf = a.perf.psi_inf == b.perf.psi_inf && a.perf.rho1 == b.perf.rho1 &&
                           a.perf.rho2 == b.perf.rho2 && a.perf.eps0 == b.perf.eps0;
    const auto same_decay = a.decay.law == b.decay.law && a.decay.fixed_delta == b.decay.fixed_delta;
    return a.label == b.label && a.plant == b.plant && a.x0.size() == b.x0.size() && a.x0 == b.x0 &&
           a.controller == b.controller && same_perf && same_decay && a.yd == b.yd && same_sim;
}

std::vector<GridAxis> parse_grid(const std::vector<std::string>& specs) {
    if (specs.empty()) throw ConfigError("grid: at least one axis is required");
    std::vector<GridAxis> axes;
    std::vector<std::string> issues;
    for (const auto& spec : specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) {
            issues.push_back("grid '" + spec + "': expected key=v1,v2,...");
            continue;
        }
        GridAxis axis{spec.substr(0, eq), {}};
        std::stringstream ss(spec.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            try {
                axis.values.push_back(Json::parse(item));
            } catch (const Json::parse_error&) {
                axis.values.emplace_back(item);
            }
        }
        if (axis.values.empty()) {
            issues.push_back("grid '" + axis.key + "': no values");
            continue;
        }
        axes.push_back(std::move(axis));
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return axes;
}

std::vector<std::vector<Json>> grid_points(const std::vector<GridAxis>& axes) {
    std::vector<std::vector<Json>> points{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<Json>> next;
        for (const auto& p : points) {
            for (const auto& v : axis.values) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

Json metrics_to_json(const Metrics& m) {
    auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    return Json{{"converge_time", num(m.converge_time)},
                {"peak_v", num(m.peak_v)},
                {"peak_u", num(m.peak_u)},
                {"max_zeta", num(m.max_zeta)},
                {"violated", m.violated},
                {"steady_err", num(m.steady_err)},
                {"delta_max", num(m.delta_max)}};
}

Json run_summary(const Scenario& sc, const RunResult& res, const std::vector<std::string>& overrides) {
    Json out{{"label", sc.label}, {"status", to_string(res.trace.status)}};
    out["singular_time"] = std::isfinite(res.trace.singular_time) ? Json(res.trace.singular_time) : Json(nullptr);
    if (!res.trace.message.empty()) out["message"] = res.trace.message;
    out["steps"] = res.steps;
    out["mu0"] = res.baseline.mu0;
    out["metrics"] = metrics_to_json(res.metrics);
    out["overrides"] = overrides;
    out["scenario"] = scenario_to_json(sc);
    return out;
}

Json comparison_to_json(const Comparison& c) {
    auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    return Json{{"a", Json{{"status", to_string(c.status_a)}, {"metrics", metrics_to_json(c.a)}}},
                {"b", Json{{"status", to_string(c.status_b)}, {"metrics", metrics_to_json(c.b)}}},
                {"delta", Json{{"converge_time", num(c.d_converge_time)},
                               {"peak_v", num(c.d_peak_v)},
                               {"peak_u", num(c.d_peak_u)},
                               {"max_zeta", num(c.d_max_zeta)},
                               {"steady_err", num(c.d_steady_err)},
                               {"delta_max", num(c.d_delta_max)}}},
                {"ratio", Json{{"converge_time", num(c.converge_time_ratio)},
                               {"peak_v", num(c.peak_v_ratio)},
                               {"peak_u", num(c.peak_u_ratio)}}}};
}

}  // namespace ppc
