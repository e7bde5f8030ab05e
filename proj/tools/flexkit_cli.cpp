#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "flexkit/bench.hpp"
#include "flexkit/generators.hpp"
#include "flexkit/trace_io.hpp"
#include "flexkit/verify.hpp"

namespace {

std::uint64_t seed_or_env(std::uint64_t seed, bool seed_given) {
    if (seed_given) return seed;
    if (const char* env = std::getenv("FLEXKIT_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return seed;
}

int cmd_run(const std::string& problem, const std::string& method_name,
            flexkit::MethodSpec spec, long long budget, double tol,
            std::uint64_t seed, const std::string& out, bool timing) {
    auto method = flexkit::method_from_string(method_name);
    if (!method) {
        std::cerr << "unknown method '" << method_name << "'\n";
        return 2;
    }
    spec.method = *method;

    flexkit::ProblemInstance inst = flexkit::make_problem(problem, seed);
    inst.validate();
    spec.config.max_operator_evals = budget;
    spec.config.residual_tolerance = tol;

    const std::optional<double> f_star = flexkit::reference_objective(inst, budget);

    auto provider = flexkit::make_provider_for(spec);
    flexkit::IterationTrace trace = flexkit::run(inst, spec.config, spec.method,
                                                 provider.get(),
                                                 flexkit::default_start(inst));

    flexkit::TraceCsvOptions opts;
    opts.f_star = f_star;
    opts.include_timing = timing;
    flexkit::write_trace_csv(trace, out, opts);

    std::cout << "method=" << flexkit::to_string(spec.method)
              << " reason=" << flexkit::to_string(trace.reason)
              << " iterations=" << (trace.rows.empty() ? 0 : trace.rows.back().k + 1)
              << " f_evals=" << inst.counters.f_evals
              << " prox_evals=" << inst.counters.prox_evals;
    if (!trace.rows.empty()) {
        std::cout << " final_norm_R=" << flexkit::format_double(trace.rows.back().norm_R);
    }
    std::cout << " trace=" << out << "\n";
    if (trace.reason == flexkit::StopReason::failure) {
        std::cerr << "failure: " << trace.message << "\n";
        return 1;
    }
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_override,
              int jobs_override) {
    flexkit::BenchmarkConfig cfg = flexkit::parse_bench_config_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (jobs_override > 0) cfg.jobs = jobs_override;
    flexkit::BenchSummary summary = flexkit::run_benchmark(cfg);
    for (const auto& cell : summary.cells) {
        std::cout << cell.label << " rep=" << cell.repetition
                  << " reason=" << flexkit::to_string(cell.reason)
                  << " operator_evals=" << (cell.f_evals + cell.prox_evals)
                  << " final_norm_R=" << cell.final_norm_R;
        if (!cell.message.empty()) std::cout << " message=" << cell.message;
        std::cout << "\n";
    }
    std::cout << "summary: " << cfg.out_dir << "/summary.csv\n";
    return summary.all_ok ? 0 : 1;
}

int cmd_verify(const std::string& out) {
    auto b1 = flexkit::verify_tseng_counterexample();
    auto b2 = flexkit::verify_resolvent_counterexample();
    flexkit::print_report(b1, std::cout);
    flexkit::print_report(b2, std::cout);
    flexkit::write_verdict_file({b1, b2}, out);
    std::cout << "verdict file: " << out << "\n";
    return (b1.all_pass() && b2.all_pass()) ? 0 : 1;
}

int cmd_rates(int grid, const std::string& out) {
    if (grid < 1) {
        std::cerr << "--grid must be >= 1\n";
        return 2;
    }
    std::ofstream os(out);
    if (!os) {
        std::cerr << "cannot open " << out << "\n";
        return 1;
    }
    os << "x,q_vs_cai,q_vs_trandinh\n";
    bool all_below_one = true;
    for (int i = 1; i <= grid; ++i) {
        const double x = static_cast<double>(i) / (grid + 1);
        auto [q1, q2] = flexkit::rate_quotients(x);
        all_below_one = all_below_one && q1 < 1.0 && q2 < 1.0;
        os << flexkit::format_double(x) << ',' << flexkit::format_double(q1) << ','
           << flexkit::format_double(q2) << '\n';
    }
    std::cout << "rates: " << out << " (both quotients < 1: "
              << (all_below_one ? "yes" : "NO") << ")\n";
    return all_below_one ? 0 : 1;
}

int cmd_datagen(const std::string& problem, std::uint64_t seed, const std::string& out) {
    flexkit::ProblemInstance inst = flexkit::make_problem(problem, seed);
    inst.validate();
    std::ofstream os(out);
    if (!os) {
        std::cerr << "cannot open " << out << "\n";
        return 1;
    }
    os << "problem " << problem << "\n";
    os << "dimension " << inst.dimension << "\n";
    os << "lipschitz " << flexkit::format_double(inst.lipschitz) << "\n";
    if (inst.strong_monotonicity) {
        os << "strong_monotonicity " << flexkit::format_double(*inst.strong_monotonicity)
           << "\n";
    }
    if (inst.lower_lipschitz) {
        os << "lower_lipschitz " << flexkit::format_double(*inst.lower_lipschitz) << "\n";
    }
    if (inst.known_solution) {
        os << "known_solution";
        for (std::size_t i = 0; i < inst.known_solution->size(); ++i) {
            os << ' ' << flexkit::format_double((*inst.known_solution)[i]);
        }
        os << "\n";
    }
    if (inst.jacobian) {
        const flexkit::DenseMatrix J = (*inst.jacobian)(flexkit::Point(inst.dimension));
        os << "jacobian_at_origin " << J.rows() << " " << J.cols() << "\n";
        for (std::size_t i = 0; i < J.rows(); ++i) {
            for (std::size_t j = 0; j < J.cols(); ++j) {
                os << (j ? " " : "") << flexkit::format_double(J(i, j));
            }
            os << "\n";
        }
    }
    std::cout << "instance written to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flexkit: extragradient-type solvers with Lyapunov line searches"};
    app.require_subcommand(1);

    std::string problem = "quadmm:n=10,omega=0,seed=1";
    std::string method = "eg";
    std::string direction = "none";
    std::string out;
    std::string config_path;
    long long budget = 1000000;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    bool seed_given = false;
    int jobs = 0;
    int grid = 1000;
    bool timing = false;
    flexkit::MethodSpec spec;

    auto* runc = app.add_subcommand("run", "run one solver on one problem, write a trace CSV");
    runc->add_option("--problem", problem, "problem spec, e.g. quadmm:n=20,omega=0,seed=1");
    runc->add_option("--method", method, "eg|tseng|flex|iflex|proxflex");
    runc->add_option("--direction", direction, "none|aa1|aa2|newton")
        ->check(CLI::IsMember({"none", "aa1", "aa2", "newton"}));
    runc->add_option("--memory", spec.memory, "Anderson memory m");
    runc->add_option("--newton-c", spec.newton_c, "regularization scale for newton");
    runc->add_option("--gamma-frac", spec.config.gamma_fraction, "gamma = frac / L_F");
    runc->add_option("--rho", spec.config.rho, "contraction factor");
    runc->add_option("--sigma", spec.config.sigma, "descent fraction");
    runc->add_option("--beta", spec.config.beta, "backtracking factor");
    runc->add_option("--big-m", spec.config.big_m, "line-search grid size M");
    runc->add_option("--safeguard-d", [&spec](const std::vector<std::string>& v) {
        spec.config.safeguard_D = std::stod(v.front());
        return true;
    }, "direction safeguard bound D");
    runc->add_option("--max-iterations", spec.config.max_iterations, "iteration cap");
    runc->add_option("--budget", budget, "operator evaluation budget");
    runc->add_option("--tol", tol, "residual tolerance on ||R_gamma||");
    runc->add_option("--seed", seed, "RNG seed (FLEXKIT_SEED is the fallback)")
        ->trigger_on_parse()
        ->each([&seed_given](const std::string&) { seed_given = true; });
    runc->add_option("--out", out, "trace CSV path");
    runc->add_flag("--timing", timing, "fill the wall_ms column (not reproducible)");

    auto* benchc = app.add_subcommand("bench", "run a benchmark config file");
    benchc->add_option("--config", config_path, "benchmark config file")->required();
    benchc->add_option("--out", out, "output directory override");
    benchc->add_option("--jobs", jobs, "parallel cells");

    auto* verifyc = app.add_subcommand("verify", "exact-rational counterexample reports");
    verifyc->add_option("--out", out, "verdict file path");

    auto* ratesc = app.add_subcommand("rates", "rate-comparison quotient curves");
    ratesc->add_option("--grid", grid, "number of grid points in (0,1)");
    ratesc->add_option("--out", out, "CSV path");

    auto* datagenc = app.add_subcommand("datagen", "emit a generated instance for inspection");
    datagenc->add_option("--problem", problem, "problem spec");
    datagenc->add_option("--seed", seed, "RNG seed")
        ->trigger_on_parse()
        ->each([&seed_given](const std::string&) { seed_given = true; });
    datagenc->add_option("--out", out, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (runc->parsed()) {
            auto kind = direction == "aa1"      ? flexkit::DirectionKind::aa1
                        : direction == "aa2"    ? flexkit::DirectionKind::aa2
                        : direction == "newton" ? flexkit::DirectionKind::newton
                                                : flexkit::DirectionKind::none;
            spec.direction = kind;
            auto m = flexkit::method_from_string(method);
            if (m) {
                flexkit::SolverConfig defaults = flexkit::default_config(*m);
                // Re-apply table defaults only where the user did not override.
                if (runc->count("--beta") == 0) spec.config.beta = defaults.beta;
            }
            return cmd_run(problem, method, spec, budget, tol,
                           seed_or_env(seed, seed_given),
                           out.empty() ? "trace.csv" : out, timing);
        }
        if (benchc->parsed()) return cmd_bench(config_path, out, jobs);
        if (verifyc->parsed()) return cmd_verify(out.empty() ? "verdict.txt" : out);
        if (ratesc->parsed()) return cmd_rates(grid, out.empty() ? "rates.csv" : out);
        if (datagenc->parsed()) {
            return cmd_datagen(problem, seed_or_env(seed, seed_given),
                               out.empty() ? "instance.txt" : out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
