// Command-line front end: scenario library, batch execution, report emission.
//
// Exit codes: 0 success, 2 configuration error, 3 solver error,
// 4 iteration budget exhausted, 5 verification failure.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "sweep/config.hpp"
#include "sweep/csv_io.hpp"
#include "sweep/filippov.hpp"
#include "sweep/scenario.hpp"
#include "sweep/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMaxIter = 4;
constexpr int kExitVerify = 5;

struct CommonOpts {
    std::string scenario;
    std::string config_path;
    std::optional<double> h;
    std::optional<double> tol;
    std::optional<std::int64_t> max_iter;
    std::string out;
    std::string report;
    bool dump_config = false;
    bool all = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--scenario", o.scenario, "registered scenario name");
    cmd->add_option("--config", o.config_path, "path to a JSON config document");
    cmd->add_option("--h", o.h, "uniform solver step override");
    cmd->add_option("--tol", o.tol, "iteration tolerance override");
    cmd->add_option("--max-iter", o.max_iter, "iteration budget override");
    cmd->add_option("--out", o.out, "output CSV path (or directory for verify --all)");
    cmd->add_option("--report", o.report, "output report JSON path");
    cmd->add_flag("--dump-config", o.dump_config, "print the resolved config and exit");
}

sweep::RunConfig load_config(const CommonOpts& o) {
    sweep::ordered_json doc;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw sweep::ConfigError("cannot open config file '" + o.config_path + "'");
        try {
            doc = sweep::ordered_json::parse(in);
        } catch (const std::exception& e) {
            throw sweep::ConfigError(std::string("config parse failure: ") + e.what());
        }
    } else if (!o.scenario.empty()) {
        doc["scenario"] = o.scenario;
    } else {
        throw sweep::ConfigError("either --scenario or --config is required");
    }
    sweep::RunConfig cfg = sweep::parse_config(doc);
    if (o.h) {
        if (!(*o.h > 0.0)) throw sweep::ConfigError("--h must be positive");
        cfg.h = *o.h;
        cfg.steps = 0;
    }
    if (o.tol) {
        if (!(*o.tol > 0.0)) throw sweep::ConfigError("--tol must be positive");
        cfg.tol = *o.tol;
    }
    if (o.max_iter) {
        if (*o.max_iter < 1) throw sweep::ConfigError("--max-iter must be positive");
        cfg.max_iter = static_cast<std::size_t>(*o.max_iter);
    }
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sweep::Error("cannot open '" + path + "' for writing");
    out << text;
}

void emit_csv(const CommonOpts& o, const sweep::Trajectory& traj) {
    if (o.out.empty())
        sweep::write_trajectory_csv(std::cout, traj);
    else
        sweep::write_trajectory_csv(o.out, traj);
}

void emit_report(const CommonOpts& o, const sweep::ordered_json& j) {
    const std::string text = j.dump(2) + "\n";
    if (o.report.empty())
        std::cout << text;
    else
        write_text(o.report, text);
}

/// Catching-up with the halving remedy: on RegionViolation the step count is
/// doubled (up to a cap) and the selection resampled onto the finer grid.
sweep::Trajectory solve_with_halving(const sweep::ProblemSpec& spec, sweep::TimeGrid& grid,
                                     sweep::GridFunction& z) {
    for (int attempt = 0;; ++attempt) {
        try {
            return sweep::solve_fixed_selection(spec, z, grid);
        } catch (const sweep::RegionViolation&) {
            if (attempt >= 6) throw;
            sweep::TimeGrid fine =
                sweep::TimeGrid::uniform(grid.front(), grid.back(), 2 * grid.step_count());
            sweep::GridFunction zf =
                sweep::GridFunction::zeros(fine, z.dim(), sweep::SampleKind::Selection);
            for (std::size_t k = 0; k < fine.node_count(); ++k)
                zf.values[k] = z.at(fine.nodes[k]);
            grid = std::move(fine);
            z = std::move(zf);
            std::cerr << "note: predictor left the uniqueness region; retrying with h/2\n";
        }
    }
}

int cmd_list() {
    for (const sweep::Scenario& s : sweep::scenario_registry()) {
        std::string tags;
        for (const std::string& t : s.tags) tags += " " + t;
        std::cout << s.name << " [dim=" << s.dim << "]" << tags << " -- " << s.description
                  << "\n";
    }
    return kExitOk;
}

int cmd_solve(const CommonOpts& o) {
    const sweep::RunConfig cfg = load_config(o);
    if (o.dump_config) {
        std::cout << sweep::dump_config(cfg).dump(2) << "\n";
        return kExitOk;
    }
    const sweep::ProblemSpec spec = sweep::build_problem(cfg.problem);
    const sweep::ValidationReport val = sweep::validate(spec, sweep::SamplingPlan{});
    if (!val.pass) throw sweep::ValidationFailure("hypothesis validation failed; run verify for details");
    sweep::TimeGrid grid = sweep::build_grid(cfg, spec);
    sweep::GridFunction z = sweep::build_selection(cfg.selection, grid, spec.dim());
    const sweep::Trajectory traj = solve_with_halving(spec, grid, z);
    emit_csv(o, traj);
    return kExitOk;
}

int cmd_iterate(const CommonOpts& o) {
    const sweep::RunConfig cfg = load_config(o);
    if (o.dump_config) {
        std::cout << sweep::dump_config(cfg).dump(2) << "\n";
        return kExitOk;
    }
    const sweep::ProblemSpec spec = sweep::build_problem(cfg.problem);
    const sweep::ValidationReport val = sweep::validate(spec, sweep::SamplingPlan{});
    if (!val.pass) throw sweep::ValidationFailure("hypothesis validation failed; run verify for details");
    const sweep::TimeGrid grid = sweep::build_grid(cfg, spec);

    sweep::IterateOptions opt;
    opt.tol = cfg.tol;
    opt.max_iter = cfg.max_iter;
    const sweep::IterateResult res = sweep::iterate(spec, grid, opt);
    if (res.report.tol_used > res.report.tol_requested)
        std::cerr << "note: tol clamped to the discretization floor " << res.report.tol_used
                  << "\n";

    emit_csv(o, res.traj);
    if (!o.report.empty())
        write_text(o.report,
                   sweep::iteration_report_to_json(res.report, res.cert).dump(2) + "\n");
    if (!res.report.converged) {
        std::cerr << "error: iteration budget exhausted without convergence\n";
        return kExitMaxIter;
    }
    return kExitOk;
}

int cmd_bounds(const CommonOpts& o) {
    const sweep::RunConfig cfg = load_config(o);
    if (o.dump_config) {
        std::cout << sweep::dump_config(cfg).dump(2) << "\n";
        return kExitOk;
    }
    const sweep::ProblemSpec spec = sweep::build_problem(cfg.problem);
    const sweep::TimeGrid grid = sweep::build_grid(cfg, spec);
    const sweep::BoundCertificate cert = sweep::compute_certificate(spec, spec.r0, grid);
    emit_report(o, sweep::certificate_to_json(cert));
    return kExitOk;
}

int verify_one(const sweep::RunConfig& cfg, const std::string& csv_dir,
               sweep::ordered_json& report_out) {
    const sweep::VerificationOutcome outcome = sweep::run_verification(cfg);
    report_out = sweep::verification_report_to_json(outcome.report);
    if (!csv_dir.empty() && !outcome.trajectory.x.values.empty()) {
        std::filesystem::create_directories(csv_dir);
        const std::string name = cfg.scenario.empty() ? "inline" : cfg.scenario;
        sweep::write_trajectory_csv((std::filesystem::path(csv_dir) / (name + ".csv")).string(),
                                    outcome.trajectory);
    }
    return outcome.report.pass ? kExitOk : kExitVerify;
}

int cmd_verify(const CommonOpts& o) {
    if (o.all) {
        const auto& registry = sweep::scenario_registry();
        std::vector<std::future<std::pair<int, sweep::ordered_json>>> futures;
        for (const sweep::Scenario& s : registry) {
            futures.push_back(std::async(std::launch::async, [&o, &s] {
                sweep::ordered_json rep;
                sweep::ordered_json doc;
                doc["scenario"] = s.name;
                const int rc = verify_one(sweep::parse_config(doc), o.out, rep);
                return std::pair{rc, std::move(rep)};
            }));
        }
        sweep::ordered_json merged = sweep::ordered_json::array();
        int rc = kExitOk;
        for (auto& f : futures) {
            auto [one_rc, rep] = f.get();
            if (one_rc != kExitOk) rc = kExitVerify;
            merged.push_back(std::move(rep));
        }
        emit_report(o, merged);
        for (const auto& rep : merged)
            std::cerr << (rep["pass"].get<bool>() ? "PASS " : "FAIL ")
                      << rep["scenario"].get<std::string>() << "\n";
        return rc;
    }

    const sweep::RunConfig cfg = load_config(o);
    if (o.dump_config) {
        std::cout << sweep::dump_config(cfg).dump(2) << "\n";
        return kExitOk;
    }
    sweep::ordered_json rep;
    const int rc = verify_one(cfg, o.out, rep);
    if (!o.report.empty())
        write_text(o.report, rep.dump(2) + "\n");
    else
        std::cout << rep.dump(2) << "\n";
    std::cerr << (rc == kExitOk ? "PASS" : "FAIL") << "\n";
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integro-differential sweeping process solver and verifier"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);

    CommonOpts solve_o, iter_o, bounds_o, verify_o;
    CLI::App* solve = app.add_subcommand("solve", "catching-up solve with a fixed selection");
    add_common(solve, solve_o);
    CLI::App* iter = app.add_subcommand("iterate", "successive selection refinement");
    add_common(iter, iter_o);
    CLI::App* bounds = app.add_subcommand("bounds", "compute the a priori bound certificate");
    add_common(bounds, bounds_o);
    CLI::App* verify = app.add_subcommand("verify", "full pipeline plus invariant suites");
    add_common(verify, verify_o);
    verify->add_flag("--all", verify_o.all, "run every registered scenario");
    CLI::App* list = app.add_subcommand("list-scenarios", "print the scenario registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (list->parsed()) return cmd_list();
        if (solve->parsed()) return cmd_solve(solve_o);
        if (iter->parsed()) return cmd_iterate(iter_o);
        if (bounds->parsed()) return cmd_bounds(bounds_o);
        if (verify->parsed()) return cmd_verify(verify_o);
    } catch (const sweep::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const sweep::Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitConfig;
}
