#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "flexkit/problem.hpp"
#include "flexkit/solvers.hpp"

namespace flexkit {

// Builds an instance from a one-line spec:
//   quadmm:n=20,omega=0,seed=1
//   bilinear:n=5,seed=2
//   cournot:n=5,seed=3
//   logistic:path=data.libsvm,lambda=0.01
// A missing seed falls back to default_seed.
ProblemInstance make_problem(const std::string& spec, std::uint64_t default_seed);

struct MethodSpec {
    Method method = Method::eg;
    SolverConfig config;
    DirectionKind direction = DirectionKind::none;
    std::size_t memory = 5;
    double newton_c = 1.0;
    std::string label;
};

struct BenchmarkConfig {
    std::string problem_spec;
    long long budget = 1000000;
    double tolerance = 1e-9;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int repetitions = 1;
    int jobs = 1;
    std::vector<MethodSpec> methods;
};

// Flat key-value text config with one [method] section per solver:
//   problem = quadmm:n=20,omega=0,seed=1
//   budget = 50000
//   tol = 1e-6
//   repetitions = 1
//   jobs = 1
//   [flex]
//   direction = aa2
//   memory = 20
BenchmarkConfig parse_bench_config(std::istream& in);
BenchmarkConfig parse_bench_config_file(const std::string& path);

struct CellResult {
    std::string problem;
    std::string label;
    int repetition = 0;
    StopReason reason = StopReason::failure;
    long long iterations = 0;
    long long f_evals = 0;
    long long prox_evals = 0;
    std::string final_norm_R;       // formatted exactly as in the trace file
    std::string evals_to_tolerance; // operator evals at first row under tol, or empty
    double wall_ms = 0.0;
    std::string message;
    std::string trace_path;
};

struct BenchSummary {
    std::vector<CellResult> cells;
    bool all_ok = true;
};

// Runs every (method, repetition) cell, writes one trace CSV per cell plus
// summary.csv under out_dir. Cells run on up to `jobs` threads; outputs do
// not depend on the parallelism degree.
BenchSummary run_benchmark(const BenchmarkConfig& config);

std::unique_ptr<DirectionProvider> make_provider_for(const MethodSpec& spec);

// Reference objective value for gap reporting: one tight solve per dataset
// (Prox-FLEX with AA-II to residual 1e-12). Empty when the instance exposes
// no objective.
std::optional<double> reference_objective(const ProblemInstance& prototype,
                                          long long budget);

}  // namespace flexkit
