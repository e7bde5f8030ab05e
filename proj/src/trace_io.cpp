#include "flexkit/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flexkit {

const char* const kTraceCsvHeader =
    "k,f_evals,prox_evals,operator_evals,V,norm_R,norm_F,natural_residual,"
    "tangent_residual,objective_gap,tau,branch,wall_ms";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(const IterationTrace& trace, const std::string& path,
                     const TraceCsvOptions& options) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);
    out << kTraceCsvHeader << "\n";
    for (const TraceRow& r : trace.rows) {
        out << r.k << ',' << r.f_evals << ',' << r.prox_evals << ','
            << (r.f_evals + r.prox_evals) << ',' << format_double(r.V) << ','
            << format_double(r.norm_R) << ',';
        if (r.norm_F) out << format_double(*r.norm_F);
        out << ',' << format_double(r.natural_residual) << ',';
        if (r.tangent_residual) out << format_double(*r.tangent_residual);
        out << ',';
        if (r.objective && options.f_star) out << format_double(*r.objective - *options.f_star);
        out << ',' << format_double(r.tau) << ',' << to_string(r.branch) << ',';
        if (options.include_timing) out << format_double(r.wall_ms);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failure on trace file: " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

}  // namespace flexkit
