#include "sweep/config.hpp"

#include <cmath>

#include "sweep/csv_io.hpp"

namespace sweep {

namespace {

Vec vec_from_json(const ordered_json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + ": expected a nonempty array");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(std::string(what) + ": expected numbers");
        v[i] = j[i].get<double>();
        if (!std::isfinite(v[i])) throw ConfigError(std::string(what) + ": entries must be finite");
    }
    return v;
}

double num(const ordered_json& j, const char* key, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(std::string("missing numeric field '") + key + "'");
    }
    if (!j[key].is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) throw ConfigError(std::string("field '") + key + "' must be finite");
    return v;
}

std::function<double(double)> shift_from_json(const ordered_json& j) {
    const std::string kind = j.value("kind", "affine");
    if (kind == "affine") {
        const double rate = num(j, "rate");
        return [rate](double t) { return rate * t; };
    }
    if (kind == "triangle") {
        const double slope = num(j, "slope");
        const double period = num(j, "period");
        if (!(period > 0.0)) throw ConfigError("triangle shift: period must be positive");
        return [slope, period](double t) {
            const double u = std::fmod(t, period);
            return slope * (u < 0.5 * period ? u : period - u);
        };
    }
    throw ConfigError("unknown shift kind '" + kind + "'");
}

MovingSetOracle set_from_json(const ordered_json& j, std::size_t dim) {
    const std::string name = j.value("name", "");
    if (name == "free") return make_free_space(dim);
    if (name == "halfspace") {
        return make_halfspace(vec_from_json(j.at("normal"), "halfspace.normal"),
                              num(j, "offset0", 0.0), num(j, "offset_rate", 0.0));
    }
    if (name == "box") {
        Vec velocity = j.contains("velocity") ? vec_from_json(j["velocity"], "box.velocity")
                                              : Vec(dim, 0.0);
        return make_box(vec_from_json(j.at("lo"), "box.lo"), vec_from_json(j.at("hi"), "box.hi"),
                        velocity);
    }
    if (name == "interval") {
        const auto& shift = j.contains("shift") ? j["shift"] : ordered_json{{"kind", "affine"}, {"rate", 0.0}};
        double slope_bound = 0.0;
        if (shift.value("kind", "affine") == "affine") slope_bound = std::abs(num(shift, "rate", 0.0));
        else slope_bound = std::abs(num(shift, "slope"));
        return make_interval(num(j, "lo"), num(j, "hi"), shift_from_json(shift), slope_bound);
    }
    if (name == "ball" || name == "ball_complement") {
        Vec center = vec_from_json(j.at("center"), "ball.center");
        Vec velocity = j.contains("velocity") ? vec_from_json(j["velocity"], "ball.velocity")
                                              : Vec(center.size(), 0.0);
        const double radius = num(j, "radius");
        return name == "ball" ? make_ball(center, velocity, radius)
                              : make_ball_complement(center, velocity, radius);
    }
    if (name == "annulus") {
        return make_annulus(vec_from_json(j.at("center"), "annulus.center"), num(j, "r_inner"),
                            num(j, "r_outer"));
    }
    throw ConfigError("unknown set oracle '" + name + "'");
}

DriftField drift_from_json(const ordered_json& j) {
    const std::string name = j.value("name", "zero");
    if (name == "zero") return make_zero_drift();
    if (name == "constant") return make_constant_drift(vec_from_json(j.at("value"), "drift.value"));
    if (name == "linear") {
        const double gain = num(j, "gain");
        if (!j.contains("offset")) return make_linear_drift(gain, nullptr, nullptr);
        const auto& off = j["offset"];
        const std::string kind = off.value("kind", "constant");
        if (kind == "constant") {
            Vec value = vec_from_json(off.at("value"), "drift.offset.value");
            const double n = norm(value);
            return make_linear_drift(
                gain, [value](double) { return value; }, [n](double) { return n; });
        }
        if (kind == "square") {
            Vec amplitude = vec_from_json(off.at("amplitude"), "drift.offset.amplitude");
            const double period = num(off, "period");
            if (!(period > 0.0)) throw ConfigError("square offset: period must be positive");
            const double n = norm(amplitude);
            auto wave = [amplitude, period](double t) {
                const double u = std::fmod(t, period);
                return u < 0.5 * period ? amplitude : -1.0 * amplitude;
            };
            return make_linear_drift(gain, wave, [n](double) { return n; });
        }
        throw ConfigError("unknown drift offset kind '" + kind + "'");
    }
    throw ConfigError("unknown drift '" + name + "'");
}

VolterraKernel kernel_from_json(const ordered_json& j) {
    const std::string name = j.value("name", "none");
    if (name == "none") return make_zero_kernel();
    if (name == "memory") return make_memory_kernel();
    if (name == "separable") return make_separable_kernel(num(j, "a", 1.0), num(j, "b", 1.0));
    throw ConfigError("unknown kernel '" + name + "'");
}

PerturbationMap perturb_from_json(const ordered_json& j, std::size_t dim) {
    const std::string name = j.value("name", "none");
    const double gamma_override = j.contains("gamma") ? num(j, "gamma") : -1.0;
    if (name == "none") return make_zero_perturbation(dim);
    if (name == "singleton")
        return make_singleton_perturbation(vec_from_json(j.at("point"), "perturb.point"),
                                           gamma_override);
    if (name == "finite") {
        if (!j.contains("points") || !j["points"].is_array())
            throw ConfigError("finite perturbation: 'points' array required");
        std::vector<Vec> pts;
        for (const auto& p : j["points"]) pts.push_back(vec_from_json(p, "perturb.points[]"));
        return make_finite_perturbation(std::move(pts), gamma_override);
    }
    if (name == "ball")
        return make_ball_perturbation(vec_from_json(j.at("center"), "perturb.center"),
                                      num(j, "radius"), gamma_override);
    if (name == "two_point_lipschitz") return make_two_point_lipschitz_perturbation();
    throw ConfigError("unknown perturbation '" + name + "'");
}

}  // namespace

ProblemSpec build_problem(const ordered_json& problem) {
    if (!problem.is_object()) throw ConfigError("problem block must be an object");
    ProblemSpec spec;

    if (!problem.contains("dim")) throw ConfigError("problem: 'dim' required");
    const auto dim = problem["dim"].get<std::int64_t>();
    if (dim < 1 || dim > 16) throw ConfigError("problem: dim must lie in [1, 16]");
    const std::size_t d = static_cast<std::size_t>(dim);

    if (!problem.contains("interval") || !problem["interval"].is_array() ||
        problem["interval"].size() != 2)
        throw ConfigError("problem: 'interval' must be [t0, t_end]");
    spec.t0 = problem["interval"][0].get<double>();
    spec.t_end = problem["interval"][1].get<double>();
    if (!(std::isfinite(spec.t0) && std::isfinite(spec.t_end) && spec.t_end > spec.t0))
        throw ConfigError("problem: interval must be finite with t_end > t0");

    spec.x0 = vec_from_json(problem.at("x0"), "x0");
    if (spec.x0.size() != d) throw ConfigError("problem: x0 dimension disagrees with dim");
    spec.q0 = problem.contains("q0") ? vec_from_json(problem["q0"], "q0") : spec.x0;
    if (spec.q0.size() != d) throw ConfigError("problem: q0 dimension disagrees with dim");

    spec.set = set_from_json(problem.value("set", ordered_json{{"name", "free"}}), d);
    if (spec.set.dim != d) throw ConfigError("problem: set oracle dimension disagrees with dim");
    spec.drift = drift_from_json(problem.value("drift", ordered_json{{"name", "zero"}}));
    spec.kernel = kernel_from_json(problem.value("kernel", ordered_json{{"name", "none"}}));
    spec.perturb = perturb_from_json(problem.value("perturb", ordered_json{{"name", "none"}}), d);

    spec.r0 = problem.contains("r0") ? num(problem, "r0") : dist(spec.x0, spec.q0);
    if (spec.r0 < dist(spec.x0, spec.q0) - 1e-12)
        throw ConfigError("problem: r0 must be at least ||x0 - q0||");
    return spec;
}

RunConfig parse_config(const ordered_json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;

    ordered_json merged;
    if (doc.contains("scenario") && doc["scenario"].is_string()) {
        cfg.scenario = doc["scenario"].get<std::string>();
        const Scenario* sc = find_scenario(cfg.scenario);
        if (!sc) throw ConfigError("unknown scenario '" + cfg.scenario + "'");
        merged = sc->config;
    }
    if (doc.contains("problem")) merged["problem"] = doc["problem"];
    if (!merged.contains("problem")) throw ConfigError("config needs 'scenario' or 'problem'");
    cfg.problem = merged["problem"];

    ordered_json grid = merged.value("grid", ordered_json::object());
    if (doc.contains("grid")) grid = doc["grid"];
    if (grid.contains("steps")) {
        const auto n = grid["steps"].get<std::int64_t>();
        if (n < 1) throw ConfigError("grid.steps must be positive");
        cfg.steps = static_cast<std::size_t>(n);
        cfg.h = 0.0;
    } else if (grid.contains("h")) {
        cfg.h = grid["h"].get<double>();
        if (!(std::isfinite(cfg.h) && cfg.h > 0.0)) throw ConfigError("grid.h must be positive");
    } else {
        throw ConfigError("grid needs 'h' or 'steps'");
    }

    ordered_json iter = merged.value("iteration", ordered_json::object());
    if (doc.contains("iteration")) iter = doc["iteration"];
    cfg.tol = iter.value("tol", 1e-6);
    if (!(std::isfinite(cfg.tol) && cfg.tol > 0.0)) throw ConfigError("iteration.tol must be positive");
    {
        const auto mi = iter.value("max_iter", std::int64_t{50});
        if (mi < 1) throw ConfigError("iteration.max_iter must be positive");
        cfg.max_iter = static_cast<std::size_t>(mi);
    }

    if (doc.contains("z")) {
        const auto& z = doc["z"];
        cfg.selection.kind = z.value("kind", "zero");
        if (cfg.selection.kind == "constant")
            cfg.selection.constant = vec_from_json(z.at("value"), "z.value");
        else if (cfg.selection.kind == "file")
            cfg.selection.path = z.value("path", "");
        else if (cfg.selection.kind != "zero")
            throw ConfigError("z.kind must be zero, constant or file");
    }
    return cfg;
}

ordered_json dump_config(const RunConfig& cfg) {
    ordered_json doc;
    if (!cfg.scenario.empty()) doc["scenario"] = cfg.scenario;
    doc["problem"] = cfg.problem;
    if (cfg.steps > 0)
        doc["grid"] = {{"steps", cfg.steps}};
    else
        doc["grid"] = {{"h", cfg.h}};
    doc["iteration"] = {{"tol", cfg.tol}, {"max_iter", cfg.max_iter}};
    ordered_json z;
    z["kind"] = cfg.selection.kind;
    if (cfg.selection.kind == "constant") {
        z["value"] = ordered_json::array();
        for (double v : cfg.selection.constant) z["value"].push_back(v);
    } else if (cfg.selection.kind == "file") {
        z["path"] = cfg.selection.path;
    }
    doc["z"] = z;
    return doc;
}

TimeGrid build_grid(const RunConfig& cfg, const ProblemSpec& spec) {
    std::size_t steps = cfg.steps;
    if (steps == 0) {
        steps = static_cast<std::size_t>(std::llround((spec.t_end - spec.t0) / cfg.h));
        if (steps < 1) steps = 1;
    }
    return TimeGrid::uniform(spec.t0, spec.t_end, steps);
}

GridFunction build_selection(const SelectionSpec& sel, const TimeGrid& grid, std::size_t dim) {
    if (sel.kind == "zero") return GridFunction::zeros(grid, dim, SampleKind::Selection);
    if (sel.kind == "constant") {
        if (sel.constant.size() != dim) throw ConfigError("constant selection has wrong dimension");
        return GridFunction::constant(grid, sel.constant, SampleKind::Selection);
    }
    if (sel.kind == "file") return read_selection_csv(sel.path, grid, dim);
    throw ConfigError("unknown selection kind '" + sel.kind + "'");
}

}  // namespace sweep
