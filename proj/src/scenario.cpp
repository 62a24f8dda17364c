#include "sweep/scenario.hpp"

#include <cmath>
#include <mutex>

namespace sweep {

namespace {

using nlohmann::ordered_json;

ordered_json base_config(ordered_json problem, double h, double tol = 1e-6,
                         std::size_t max_iter = 50) {
    ordered_json cfg;
    cfg["problem"] = std::move(problem);
    cfg["grid"] = {{"h", h}};
    cfg["iteration"] = {{"tol", tol}, {"max_iter", max_iter}};
    return cfg;
}

Scenario moving_wall() {
    Scenario s;
    s.name = "moving-wall";
    s.description = "1D wall C(t) = [t, inf) sweeping a resting point; x(t) = t exactly";
    s.tags = {"1d", "convex", "closed-form"};
    s.dim = 1;
    ordered_json p;
    p["dim"] = 1;
    p["interval"] = {0.0, 1.0};
    p["x0"] = {0.0};
    p["set"] = {{"name", "halfspace"}, {"normal", {1.0}}, {"offset0", 0.0}, {"offset_rate", 1.0}};
    s.config = base_config(std::move(p), 1e-3);
    s.exact = [](double t) { return Vec{t}; };
    return s;
}

Scenario play_operator() {
    // Interval [-1, 1] translated by a triangle wave; the state ratchets up
    // with the lower wall and freezes when the walls recede.
    Scenario s;
    s.name = "play-operator";
    s.description = "1D play operator: interval [-1,1] shifted by a triangle wave";
    s.tags = {"1d", "convex", "hysteresis", "closed-form"};
    s.dim = 1;
    ordered_json p;
    p["dim"] = 1;
    p["interval"] = {0.0, 4.0};
    p["x0"] = {0.0};
    p["set"] = {{"name", "interval"},
                {"lo", -1.0},
                {"hi", 1.0},
                {"shift", {{"kind", "triangle"}, {"slope", 0.75}, {"period", 4.0}}}};
    s.config = base_config(std::move(p), 1e-2);
    s.exact = [](double t) {
        if (t <= 4.0 / 3.0) return Vec{0.0};
        if (t <= 2.0) return Vec{0.75 * t - 1.0};
        return Vec{0.5};
    };
    return s;
}

Scenario volterra_cosine() {
    Scenario s;
    s.name = "volterra-cosine";
    s.description = "free 1D dynamics with unit memory kernel; x(t) = cos t";
    s.tags = {"1d", "free", "volterra", "closed-form"};
    s.dim = 1;
    ordered_json p;
    p["dim"] = 1;
    p["interval"] = {0.0, 1.0};
    p["x0"] = {1.0};
    p["set"] = {{"name", "free"}};
    p["kernel"] = {{"name", "memory"}};
    s.config = base_config(std::move(p), 1e-3);
    s.exact = [](double t) { return Vec{std::cos(t)}; };
    return s;
}

Scenario ball_complement_obstacle() {
    // Constant drift pushes the state toward a circular obstacle; the state
    // reaches the boundary and slides around it.
    Scenario s;
    s.name = "ball-complement-obstacle";
    s.description = "2D point driven into the complement of the unit ball (R = 1)";
    s.tags = {"2d", "nonconvex", "obstacle", "closed-form"};
    s.dim = 2;
    ordered_json p;
    p["dim"] = 2;
    p["interval"] = {0.0, 1.0};
    p["x0"] = {1.5, 0.5};
    p["set"] = {{"name", "ball_complement"},
                {"center", {0.0, 0.0}},
                {"velocity", {0.0, 0.0}},
                {"radius", 1.0}};
    p["drift"] = {{"name", "constant"}, {"value", {1.0, 0.0}}};
    s.config = base_config(std::move(p), 5e-3);
    s.exact = [](double t) {
        const double tc = 1.5 - std::sqrt(0.75);  // first contact time
        if (t <= tc) return Vec{1.5 - t, 0.5};
        // Sliding on the circle: theta' = sin(theta) from theta(tc) = pi/6.
        const double theta = 2.0 * std::atan(std::tan(M_PI / 12.0) * std::exp(t - tc));
        return Vec{std::cos(theta), std::sin(theta)};
    };
    return s;
}

Scenario two_point_f() {
    Scenario s;
    s.name = "two-point-F";
    s.description = "free 1D dynamics with F = {-1, +1}; selection settles on -1";
    s.tags = {"1d", "free", "nonconvex-values", "closed-form"};
    s.dim = 1;
    ordered_json p;
    p["dim"] = 1;
    p["interval"] = {0.0, 1.0};
    p["x0"] = {0.0};
    p["set"] = {{"name", "free"}};
    p["perturb"] = {{"name", "finite"}, {"points", {{-1.0}, {1.0}}}};
    s.config = base_config(std::move(p), 1e-3);
    s.exact = [](double t) { return Vec{t}; };
    return s;
}

Scenario lipschitz_two_point_f() {
    Scenario s;
    s.name = "lipschitz-two-point-F";
    s.description = "free 1D dynamics with F(t,x) = {-1 - sin(x)/2, 1 + cos(x)/2}, k = 1/2";
    s.tags = {"1d", "free", "nonconvex-values", "lipschitz"};
    s.dim = 1;
    ordered_json p;
    p["dim"] = 1;
    p["interval"] = {0.0, 1.0};
    p["x0"] = {0.0};
    p["set"] = {{"name", "free"}};
    p["perturb"] = {{"name", "two_point_lipschitz"}};
    s.config = base_config(std::move(p), 1e-3);
    return s;
}

Scenario singleton_f() {
    Scenario s;
    s.name = "singleton-F";
    s.description = "1D half-line constraint with F = {0.3}; linear drain";
    s.tags = {"1d", "convex", "closed-form"};
    s.dim = 1;
    ordered_json p;
    p["dim"] = 1;
    p["interval"] = {0.0, 1.0};
    p["x0"] = {1.0};
    p["set"] = {{"name", "halfspace"}, {"normal", {1.0}}, {"offset0", 0.0}, {"offset_rate", 0.0}};
    p["perturb"] = {{"name", "singleton"}, {"point", {0.3}}};
    s.config = base_config(std::move(p), 1e-3);
    s.exact = [](double t) { return Vec{1.0 - 0.3 * t}; };
    return s;
}

Scenario ball_f() {
    Scenario s;
    s.name = "ball-F";
    s.description = "free 1D dynamics with ball-valued control F = B[0.8, 0.3]";
    s.tags = {"1d", "free", "convex-values", "closed-form"};
    s.dim = 1;
    ordered_json p;
    p["dim"] = 1;
    p["interval"] = {0.0, 1.0};
    p["x0"] = {0.0};
    p["set"] = {{"name", "free"}};
    p["perturb"] = {{"name", "ball"}, {"center", {0.8}}, {"radius", 0.3}};
    s.config = base_config(std::move(p), 1e-3);
    s.exact = [](double t) { return Vec{-0.5 * t}; };
    return s;
}

Scenario diode_clamp() {
    // Half-wave rectifier: RC dynamics x' = -x + u with a square-wave source,
    // clamped at zero by the diode constraint C = [0, inf).
    Scenario s;
    s.name = "diode-clamp";
    s.description = "1D circuit: C = [0, inf), drift -x + u(t) with square-wave u";
    s.tags = {"1d", "convex", "circuit", "closed-form"};
    s.dim = 1;
    ordered_json p;
    p["dim"] = 1;
    p["interval"] = {0.0, 2.0};
    p["x0"] = {0.0};
    p["set"] = {{"name", "halfspace"}, {"normal", {1.0}}, {"offset0", 0.0}, {"offset_rate", 0.0}};
    p["drift"] = {{"name", "linear"},
                  {"gain", 1.0},
                  {"offset", {{"kind", "square"}, {"amplitude", {-1.0}}, {"period", 1.0}}}};
    s.config = base_config(std::move(p), 1e-3);
    s.exact = [](double t) {
        const double u = t >= 1.0 ? t - 1.0 : t;  // periodic with period 1
        const double x_half = 1.0 - std::exp(-0.5);
        const double t_off = 0.5 + std::log(1.0 + x_half);
        if (u < 0.5) return Vec{1.0 - std::exp(-u)};
        if (u < t_off) return Vec{-1.0 + (1.0 + x_half) * std::exp(-(u - 0.5))};
        return Vec{0.0};
    };
    return s;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
    static const std::vector<Scenario> registry = [] {
        std::vector<Scenario> r;
        r.push_back(moving_wall());
        r.push_back(play_operator());
        r.push_back(volterra_cosine());
        r.push_back(ball_complement_obstacle());
        r.push_back(two_point_f());
        r.push_back(lipschitz_two_point_f());
        r.push_back(singleton_f());
        r.push_back(ball_f());
        r.push_back(diode_clamp());
        return r;
    }();
    return registry;
}

const Scenario* find_scenario(std::string_view name) {
    for (const Scenario& s : scenario_registry())
        if (s.name == name) return &s;
    return nullptr;
}

}  // namespace sweep
