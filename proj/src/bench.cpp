#include "flexkit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "flexkit/generators.hpp"
#include "flexkit/libsvm.hpp"
#include "flexkit/trace_io.hpp"

namespace flexkit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> parse_kv_list(const std::string& body) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("problem spec: expected key=value, got '" + item + "'");
        }
        out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
    return out;
}

}  // namespace

ProblemInstance make_problem(const std::string& spec, std::uint64_t default_seed) {
    const auto colon = spec.find(':');
    const std::string kind = trim(colon == std::string::npos ? spec : spec.substr(0, colon));
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);

    std::size_t n = 10;
    double omega = 0.0;
    double lambda = 0.0;
    std::uint64_t seed = default_seed;
    std::string path;
    for (const auto& [key, value] : parse_kv_list(body)) {
        if (key == "n") n = static_cast<std::size_t>(std::stoull(value));
        else if (key == "omega") omega = std::stod(value);
        else if (key == "lambda") lambda = std::stod(value);
        else if (key == "seed") seed = std::stoull(value);
        else if (key == "path") path = value;
        else throw std::invalid_argument("problem spec: unknown key '" + key + "'");
    }

    if (kind == "quadmm") return gen_quadratic_minimax(n, omega, seed);
    if (kind == "bilinear") return gen_bilinear_game(n, seed);
    if (kind == "cournot") return gen_cournot_nash(n, seed);
    if (kind == "logistic") {
        if (path.empty()) throw std::invalid_argument("logistic problem needs path=...");
        return load_logistic(path, lambda);
    }
    throw std::invalid_argument("unknown problem kind '" + kind + "'");
}

std::unique_ptr<DirectionProvider> make_provider_for(const MethodSpec& spec) {
    return make_direction_provider(spec.direction, spec.memory, spec.newton_c);
}

namespace {

std::optional<DirectionKind> direction_from_string(const std::string& s) {
    if (s == "none") return DirectionKind::none;
    if (s == "aa1") return DirectionKind::aa1;
    if (s == "aa2") return DirectionKind::aa2;
    if (s == "newton") return DirectionKind::newton;
    return std::nullopt;
}

void apply_method_option(MethodSpec& m, const std::string& key, const std::string& value) {
    if (key == "direction") {
        auto d = direction_from_string(value);
        if (!d) throw std::invalid_argument("unknown direction '" + value + "'");
        m.direction = *d;
    } else if (key == "memory") {
        m.memory = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "newton-c") {
        m.newton_c = std::stod(value);
    } else if (key == "gamma-frac") {
        m.config.gamma_fraction = std::stod(value);
    } else if (key == "rho") {
        m.config.rho = std::stod(value);
    } else if (key == "sigma") {
        m.config.sigma = std::stod(value);
    } else if (key == "beta") {
        m.config.beta = std::stod(value);
    } else if (key == "big-m") {
        m.config.big_m = std::stoi(value);
    } else if (key == "max-iterations") {
        m.config.max_iterations = std::stoll(value);
    } else if (key == "safeguard-d") {
        m.config.safeguard_D = std::stod(value);
    } else if (key == "strengthened") {
        m.config.strengthened_proxflex = (value == "true" || value == "1");
    } else if (key == "mu") {
        m.config.mu_strong = std::stod(value);
    } else if (key == "label") {
        m.label = value;
    } else {
        throw std::invalid_argument("unknown method option '" + key + "'");
    }
}

std::string default_label(const MethodSpec& m) {
    std::string label = to_string(m.method);
    switch (m.direction) {
        case DirectionKind::none: break;
        case DirectionKind::aa1: label += "-aa1"; break;
        case DirectionKind::aa2: label += "-aa2"; break;
        case DirectionKind::newton: label += "-newton"; break;
    }
    return label;
}

}  // namespace

BenchmarkConfig parse_bench_config(std::istream& in) {
    BenchmarkConfig cfg;
    MethodSpec* current = nullptr;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": unterminated section header");
            }
            const std::string name = trim(line.substr(1, line.size() - 2));
            auto method = method_from_string(name);
            if (!method) {
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": unknown method '" + name + "'");
            }
            cfg.methods.push_back(MethodSpec{});
            current = &cfg.methods.back();
            current->method = *method;
            current->config = default_config(*method);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (current) {
            apply_method_option(*current, key, value);
        } else if (key == "problem") {
            cfg.problem_spec = value;
        } else if (key == "budget") {
            cfg.budget = std::stoll(value);
        } else if (key == "tol") {
            cfg.tolerance = std::stod(value);
        } else if (key == "seed") {
            cfg.seed = std::stoull(value);
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "repetitions") {
            cfg.repetitions = std::stoi(value);
        } else if (key == "jobs") {
            cfg.jobs = std::stoi(value);
        } else {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        }
    }
    if (cfg.repetitions < 1) throw std::invalid_argument("config: repetitions must be >= 1");
    if (cfg.budget <= 0) throw std::invalid_argument("config: budget must be positive");
    for (auto& m : cfg.methods) {
        if (m.label.empty()) m.label = default_label(m);
    }
    return cfg;
}

BenchmarkConfig parse_bench_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_bench_config(in);
}

namespace {

std::string sanitize_csv(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

}  // namespace

// Reference objective value for gap reporting, computed by driving Prox-FLEX
// with AA-II to a tight residual.
std::optional<double> reference_objective(const ProblemInstance& prototype,
                                          long long budget) {
    if (!prototype.objective) return std::nullopt;
    ProblemInstance inst = prototype;
    SolverConfig cfg = default_config(Method::proxflex);
    cfg.residual_tolerance = 1e-12;
    cfg.max_operator_evals = std::max<long long>(budget * 4, 2000000);
    cfg.max_iterations = 1000000;
    AndersonDirection dir(AndersonType::type2, 5);
    IterationTrace trace = run(inst, cfg, Method::proxflex, &dir, default_start(inst));
    return (*prototype.objective)(trace.final_point);
}

BenchSummary run_benchmark(const BenchmarkConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);

    ProblemInstance prototype = make_problem(config.problem_spec, config.seed);
    prototype.validate();
    const std::optional<double> f_star = reference_objective(prototype, config.budget);

    struct Cell {
        MethodSpec spec;
        int repetition;
    };
    std::vector<Cell> cells;
    for (const MethodSpec& m : config.methods) {
        for (int rep = 0; rep < config.repetitions; ++rep) {
            MethodSpec spec = m;
            spec.config.max_operator_evals = m.config.max_operator_evals ==
                        SolverConfig{}.max_operator_evals
                    ? config.budget
                    : m.config.max_operator_evals;
            spec.config.residual_tolerance = config.tolerance;
            cells.push_back(Cell{std::move(spec), rep});
        }
    }

    BenchSummary summary;
    summary.cells.resize(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            CellResult& result = summary.cells[i];
            result.problem = config.problem_spec;
            result.label = cell.spec.label;
            result.repetition = cell.repetition;
            const std::string file = cell.spec.label + "_rep" +
                                     std::to_string(cell.repetition) + ".csv";
            result.trace_path = (fs::path(config.out_dir) / file).string();
            try {
                ProblemInstance inst = prototype;  // fresh counters per run
                inst.counters = EvalCounters{};
                auto provider = make_provider_for(cell.spec);
                const auto t0 = std::chrono::steady_clock::now();
                IterationTrace trace = run(inst, cell.spec.config, cell.spec.method,
                                           provider.get(), default_start(inst));
                result.wall_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
                TraceCsvOptions opts;
                opts.f_star = f_star;
                write_trace_csv(trace, result.trace_path, opts);
                result.reason = trace.reason;
                result.message = trace.message;
                result.iterations = trace.rows.empty() ? 0 : trace.rows.back().k + 1;
                if (!trace.rows.empty()) {
                    const TraceRow& last = trace.rows.back();
                    result.f_evals = last.f_evals;
                    result.prox_evals = last.prox_evals;
                    result.final_norm_R = format_double(last.norm_R);
                    for (const TraceRow& row : trace.rows) {
                        if (row.norm_R <= config.tolerance) {
                            result.evals_to_tolerance =
                                std::to_string(row.f_evals + row.prox_evals);
                            break;
                        }
                    }
                }
            } catch (const std::exception& e) {
                result.reason = StopReason::failure;
                result.message = e.what();
            }
        }
    };

    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const CellResult& c : summary.cells) {
        if (c.reason == StopReason::failure) summary.all_ok = false;
    }

    std::ofstream out(fs::path(config.out_dir) / "summary.csv");
    out << "problem,method,rep,reason,iterations,f_evals,prox_evals,operator_evals,"
           "final_norm_R,evals_to_tolerance,wall_ms,message\n";
    for (const CellResult& c : summary.cells) {
        out << sanitize_csv(c.problem) << ',' << c.label << ',' << c.repetition << ','
            << to_string(c.reason) << ',' << c.iterations << ',' << c.f_evals << ','
            << c.prox_evals << ',' << (c.f_evals + c.prox_evals) << ',' << c.final_norm_R
            << ',' << c.evals_to_tolerance << ',' << format_double(c.wall_ms) << ','
            << sanitize_csv(c.message) << '\n';
    }
    return summary;
}

}  // namespace flexkit
