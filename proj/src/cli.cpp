#include "liouville/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "liouville/algebra.hpp"
#include "liouville/io.hpp"
#include "liouville/shooting.hpp"

namespace liouville::cli {

namespace {

const char* command_name(Command c) {
    switch (c) {
        case Command::thresholds: return "thresholds";
        case Command::solve: return "solve";
        case Command::sweep: return "sweep";
        case Command::limits: return "limits";
        case Command::verify: return "verify";
        case Command::normalize: return "normalize";
        case Command::curve: return "curve";
        case Command::help: break;
    }
    return "help";
}

void add_params(CLI::App* sub, RunConfig& cfg, bool tau_required) {
    auto* t = sub->add_option_function<double>(
        "--tau", [&cfg](double v) { cfg.tau = v; }, "coupling tau");
    if (tau_required) t->required();
    sub->add_option("--N", cfg.bigN, "vortex exponent N > 0")->required();
}

void add_integrator(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--rel-tol", cfg.integrator.rel_tol, "relative step tolerance");
    sub->add_option("--abs-tol", cfg.integrator.abs_tol, "absolute step tolerance");
    sub->add_option("--tail-tol", cfg.integrator.tail_tol, "tail bound at which integration stops");
    sub->add_option("--t-max", cfg.integrator.t_max, "largest log-radius");
}

void add_output(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out, "output file (default: standard output)");
    sub->add_option_function<std::string>(
           "--format",
           [&cfg](const std::string& v) {
               cfg.format = v == "csv" ? Format::csv : v == "json" ? Format::json : Format::text;
           },
           "csv, json or text")
        ->check(CLI::IsMember({"csv", "json", "text"}));
}

void check_config(const RunConfig& cfg) {
    auto fail = [](const std::string& msg) { throw UsageError(msg); };
    if (!(cfg.bigN > 0.0) || !std::isfinite(cfg.bigN)) fail("--N: condition N > 0 violated");
    if (cfg.tau) {
        const double tau = *cfg.tau;
        const bool oracle_mode = cfg.command == Command::solve || cfg.command == Command::sweep;
        if (!(tau >= 0.0 && tau < 1.0) || (tau == 0.0 && !oracle_mode)) {
            std::ostringstream msg;
            msg << "--tau " << tau << ": condition tau in (0,1) violated";
            if (oracle_mode) msg << " (tau = 0 allowed for decoupled runs)";
            fail(msg.str());
        }
    }
    const auto& ic = cfg.integrator;
    if (!(ic.rel_tol > 0.0)) fail("--rel-tol must be positive");
    if (!(ic.abs_tol > 0.0)) fail("--abs-tol must be positive");
    if (!(ic.tail_tol > 0.0)) fail("--tail-tol must be positive");
    if (!(ic.t_max > 0.0)) fail("--t-max must be positive");
    if (!(cfg.tol > 0.0)) fail("--tol must be positive");
    if (cfg.steps < 1) fail("--steps must be at least 1");
    if (cfg.command == Command::sweep && !(cfg.alpha_min <= cfg.alpha_max))
        fail("--alpha-min must not exceed --alpha-max");
    if (cfg.command == Command::solve && cfg.alpha.has_value() == cfg.target.has_value())
        fail("solve needs exactly one of --alpha or --target");
    if (cfg.command == Command::solve && cfg.target && !(cfg.bracket_lo < cfg.bracket_hi))
        fail("--bracket-lo must be below --bracket-hi");
    if (cfg.command == Command::limits && !(cfg.limit_alpha >= 10.0)) fail("--alpha-max must be at least 10");
    if (cfg.command == Command::curve && cfg.samples < 2) fail("--samples must be at least 2");
    if (cfg.command == Command::normalize && cfg.beta1.has_value() != cfg.beta2.has_value())
        fail("normalize needs both --beta1 and --beta2 or neither");
}

unsigned sweep_threads(unsigned requested) {
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    if (const char* env = std::getenv("LIOUVILLE_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

void write_json(std::ostream& os, const io::Json& j) { os << j.dump(2) << '\n'; }

void write_key_values(std::ostream& os, const io::Json& j, const std::string& prefix = "") {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            write_key_values(os, value, name);
        } else if (value.is_string()) {
            os << name << ": " << value.get<std::string>() << '\n';
        } else if (value.is_number_float()) {
            os << name << ": " << io::format_double(value.get<double>()) << '\n';
        } else {
            os << name << ": " << value.dump() << '\n';
        }
    }
}

void write_flat_csv(std::ostream& os, const io::Json& j) {
    os << "key,value\n";
    for (const auto& [key, value] : j.items())
        os << key << ',' << (value.is_number_float() ? io::format_double(value.get<double>()) : value.dump())
           << '\n';
}

int emit_trajectory(const RunConfig& cfg, const ode::Trajectory& tr, std::ostream& os,
                    std::ostream& err, const io::Json& extra) {
    if (cfg.format.value_or(Format::csv) == Format::csv) {
        io::write_trajectory_csv(os, tr);
    } else {
        io::Json j = io::trajectory_summary_json(tr);
        for (const auto& [k, v] : extra.items()) j[k] = v;
        if (cfg.format == Format::json)
            write_json(os, j);
        else
            write_key_values(os, j);
    }
    if (!tr.converged) {
        err << "warning: " << tr.status << '\n';
        return kExitNotConverged;
    }
    return kExitOk;
}

int run_thresholds(const RunConfig& cfg, std::ostream& os) {
    io::Json j;
    if (cfg.tau) {
        const SystemParams p{*cfg.tau, cfg.bigN};
        validate_competitive(p);
        j = io::thresholds_json(p);
    } else {
        j = io::coupling_thresholds_json(cfg.bigN);
    }
    const Format f = cfg.format.value_or(Format::json);
    if (f == Format::csv)
        write_flat_csv(os, j);
    else if (f == Format::text)
        write_key_values(os, j);
    else
        write_json(os, j);
    return kExitOk;
}

int run_solve(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const SystemParams p{*cfg.tau, cfg.bigN};
    io::Json extra = io::Json::object();
    double alpha = 0.0;
    if (cfg.alpha) {
        alpha = *cfg.alpha;
    } else {
        const auto sol = shooting::solve_for_target(p, *cfg.target, cfg.bracket_lo, cfg.bracket_hi,
                                                    cfg.integrator);
        alpha = sol.alpha;
        extra["target_beta1"] = *cfg.target;
        extra["evaluations"] = sol.evaluations;
    }
    const ode::Trajectory tr = ode::integrate(p, alpha, cfg.integrator);
    return emit_trajectory(cfg, tr, os, err, extra);
}

int run_sweep(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const SystemParams p{*cfg.tau, cfg.bigN};
    const auto grid = shooting::linear_grid(cfg.alpha_min, cfg.alpha_max, cfg.steps);
    const auto result = shooting::sweep(p, grid, cfg.integrator, sweep_threads(cfg.threads));
    if (cfg.format.value_or(Format::csv) == Format::csv)
        io::write_sweep_csv(os, result);
    else
        write_json(os, io::to_json(result));
    if (!result.all_converged()) {
        err << "warning: some sweep points did not converge\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

int run_limits(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const SystemParams p{*cfg.tau, cfg.bigN};
    const auto report = shooting::estimate_limits(p, cfg.limit_alpha, cfg.integrator,
                                                  sweep_threads(cfg.threads));
    const io::Json j = io::to_json(report);
    if (cfg.format.value_or(Format::json) == Format::text)
        write_key_values(os, j);
    else
        write_json(os, j);
    if (!report.plus.reliable || !report.minus.reliable) {
        err << "warning: limit ladder unreliable\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& os) {
    const SystemParams p{*cfg.tau, cfg.bigN};
    validate_competitive(p);
    const double b1 = *cfg.beta1;
    const double b2 = *cfg.beta2;
    const auto solv = algebra::solvable_radial(b1, b2, p, cfg.tol);
    const auto cond = algebra::necessary_conditions(b1, b2, p, cfg.tol);
    const auto bounds = algebra::flux_bounds_check(b1, b2, p, cfg.tol);
    const auto cls = algebra::classify_point(b1, b2, p, cfg.tol);
    io::Json j{{"tau", p.tau}, {"N", p.bigN}, {"beta1", b1}, {"beta2", b2}};
    const io::Json report = io::to_json(solv);
    for (const auto& [k, v] : report.items()) j[k] = v;
    j["branch"] = algebra::to_string(cls.branch);
    j["residual"] = cls.residual;
    j["conditions"] = io::to_json(cond);
    j["flux_bounds"] = io::to_json(bounds);
    if (cfg.format.value_or(Format::text) == Format::json)
        write_json(os, j);
    else
        write_key_values(os, j);
    return kExitOk;
}

int run_normalize(const RunConfig& cfg, std::ostream& os) {
    const auto& g = cfg.general;
    io::Json j{{"k11", g.k11}, {"k12", g.k12}, {"k21", g.k21}, {"k22", g.k22}, {"n1", g.n1},
               {"n2", g.n2}, {"det", verify::determinant(g)}};
    j["normalization"] = io::to_json(verify::normalize_general(g));
    if (cfg.beta1) {
        j["beta_infty"] = io::to_json(verify::beta_infty(g, *cfg.beta1, *cfg.beta2));
        if (g.k12 * g.k21 >= 0.0)
            j["pohozaev_residual"] = verify::general_pohozaev_residual(g, *cfg.beta1, *cfg.beta2);
    }
    if (cfg.format.value_or(Format::json) == Format::text)
        write_key_values(os, j);
    else
        write_json(os, j);
    return kExitOk;
}

int run_curve(const RunConfig& cfg, std::ostream& os) {
    const SystemParams p{*cfg.tau, cfg.bigN};
    if (cfg.format.value_or(Format::csv) == Format::csv) {
        io::write_curve_csv(os, p, cfg.samples);
        return kExitOk;
    }
    std::ostringstream buf;
    io::write_curve_csv(buf, p, cfg.samples);
    io::Json rows = io::Json::array();
    std::istringstream in(buf.str());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string a, b, c;
        std::getline(ls, a, ',');
        std::getline(ls, b, ',');
        std::getline(ls, c, ',');
        rows.push_back(io::Json{{"beta1", std::stod(a)}, {"beta2", std::stod(b)}, {"solvable", c == "1"}});
    }
    write_json(os, io::Json{{"tau", p.tau}, {"N", p.bigN}, {"curve", std::move(rows)}});
    return kExitOk;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"Radial competitive Liouville system solver", "liouville"};
    app.require_subcommand(1, 1);

    auto* th = app.add_subcommand("thresholds", "closed-form thresholds for (tau, N)");
    add_params(th, cfg, false);
    add_output(th, cfg);

    auto* solve = app.add_subcommand("solve", "integrate one shooting trajectory");
    add_params(solve, cfg, true);
    solve->add_option_function<double>("--alpha", [&cfg](double v) { cfg.alpha = v; }, "v1(0)");
    solve->add_option_function<double>("--target", [&cfg](double v) { cfg.target = v; },
                                       "solve for alpha with beta1(alpha) = target");
    solve->add_option("--bracket-lo", cfg.bracket_lo, "lower alpha of the bisection bracket");
    solve->add_option("--bracket-hi", cfg.bracket_hi, "upper alpha of the bisection bracket");
    add_integrator(solve, cfg);
    add_output(solve, cfg);

    auto* sw = app.add_subcommand("sweep", "flux pairs over an alpha grid");
    add_params(sw, cfg, true);
    sw->add_option("--alpha-min", cfg.alpha_min, "first grid value");
    sw->add_option("--alpha-max", cfg.alpha_max, "last grid value");
    sw->add_option("--steps", cfg.steps, "number of grid points");
    sw->add_option("--threads", cfg.threads, "worker threads (0: all cores)");
    add_integrator(sw, cfg);
    add_output(sw, cfg);

    auto* lim = app.add_subcommand("limits", "alpha -> +-infinity limits from a ladder");
    add_params(lim, cfg, true);
    lim->add_option("--alpha-max", cfg.limit_alpha, "largest |alpha| of the ladder");
    lim->add_option("--threads", cfg.threads, "worker threads (0: all cores)");
    add_integrator(lim, cfg);
    add_output(lim, cfg);

    auto* ver = app.add_subcommand("verify", "solvability report for a flux pair");
    add_params(ver, cfg, true);
    ver->add_option_function<double>("--beta1", [&cfg](double v) { cfg.beta1 = v; }, "flux beta1")
        ->required();
    ver->add_option_function<double>("--beta2", [&cfg](double v) { cfg.beta2 = v; }, "flux beta2")
        ->required();
    ver->add_option("--tol", cfg.tol, "relative tolerance for beta2 = phi1+(beta1)");
    add_output(ver, cfg);

    auto* norm = app.add_subcommand("normalize", "normalize a general coupling matrix");
    norm->add_option("--k11", cfg.general.k11)->required();
    norm->add_option("--k12", cfg.general.k12)->required();
    norm->add_option("--k21", cfg.general.k21)->required();
    norm->add_option("--k22", cfg.general.k22)->required();
    norm->add_option("--n1", cfg.general.n1, "vortex exponent N1");
    norm->add_option("--n2", cfg.general.n2, "vortex exponent N2");
    norm->add_option_function<double>("--beta1", [&cfg](double v) { cfg.beta1 = v; }, "flux beta1");
    norm->add_option_function<double>("--beta2", [&cfg](double v) { cfg.beta2 = v; }, "flux beta2");
    add_output(norm, cfg);

    auto* curve = app.add_subcommand("curve", "sample the arc beta2 = phi1+(beta1)");
    add_params(curve, cfg, true);
    curve->add_option("--samples", cfg.samples, "number of samples");
    add_output(curve, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success&) {
        cfg.command = Command::help;
        cfg.help_text = app.help();
        return cfg;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    const std::pair<CLI::App*, Command> table[] = {
        {th, Command::thresholds}, {solve, Command::solve}, {sw, Command::sweep},
        {lim, Command::limits},    {ver, Command::verify},  {norm, Command::normalize},
        {curve, Command::curve}};
    for (const auto& [sub, cmd] : table)
        if (sub->parsed()) cfg.command = cmd;
    check_config(cfg);
    return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.command == Command::help) {
        out << cfg.help_text;
        return kExitOk;
    }
    std::ofstream file;
    std::ostream* os = &out;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) {
            err << "error: cannot open " << cfg.out << " for writing\n";
            return kExitUsage;
        }
        os = &file;
    }
    int code = kExitOk;
    try {
        switch (cfg.command) {
            case Command::thresholds: code = run_thresholds(cfg, *os); break;
            case Command::solve: code = run_solve(cfg, *os, err); break;
            case Command::sweep: code = run_sweep(cfg, *os, err); break;
            case Command::limits: code = run_limits(cfg, *os, err); break;
            case Command::verify: code = run_verify(cfg, *os); break;
            case Command::normalize: code = run_normalize(cfg, *os); break;
            case Command::curve: code = run_curve(cfg, *os); break;
            case Command::help: break;
        }
    } catch (const ode::IntegrationError& e) {
        err << "error: " << command_name(cfg.command) << ": " << e.what() << '\n';
        return kExitNotConverged;
    } catch (const std::invalid_argument& e) {
        err << "error: " << command_name(cfg.command) << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << command_name(cfg.command) << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const shooting::BracketError& e) {
        err << "error: " << command_name(cfg.command) << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        err << "error: " << command_name(cfg.command) << ": " << e.what() << '\n';
        return kExitNotConverged;
    }
    os->flush();
    if (!*os) {
        err << "error: write failed\n";
        return kExitUsage;
    }
    return code;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for usage\n";
        return kExitUsage;
    }
    return run(cfg, out, err);
}

}  // namespace liouville::cli
